// Payload shapes of the annotation service API. The UI renders these
// verbatim; it never recomputes features or statuses client-side.

export type PairStatus = 'unlabeled' | 'labeled' | 'disputed';
export type StatusFilter = PairStatus | 'all';

export interface PairSummary {
  pair_id: string;
  group_id: string;
  brand_id: string;
  group_size: number;
  support: number;
  status: PairStatus;
  labels: Record<string, number>;
  consensus_label: number | null;
}

export interface PairListResponse {
  pairs: PairSummary[];
  page: number;
  page_size: number;
  total: number;
  total_pages: number;
}

export interface ReviewCell {
  review_id: string;
  rating: number;
  date: string; // YYYY-MM-DD
  verified: boolean;
  helpful_votes: number;
  title: string;
  text: string;
}

export interface GridCell {
  product_id: string;
  reviews: ReviewCell[];
}

export interface GridRow {
  member: string;
  cells: GridCell[];
}

export interface ChecklistItem {
  criterion: string;
  focus: string;
  informational_only?: boolean;
}

export interface Evidence {
  pair_id: string;
  group_id: string;
  brand_id: string;
  members: string[];
  products: string[];
  grid: GridRow[];
  features: Record<string, number> | null;
  checklist: ChecklistItem[];
  labels: Record<string, number>;
}

export interface LabelResponse {
  pair_id: string;
  annotator_id: string;
  label: number;
  status: PairStatus;
}

export interface AgreementPair {
  annotator_a: string;
  annotator_b: string;
  n_overlap: number;
  kappa: number;
}

export interface AgreementReport {
  annotators: string[];
  pairwise: AgreementPair[];
  consensus_pairs: string[];
  disputed_pairs: string[];
}

export interface Stats {
  total_pairs: number;
  by_status: Record<PairStatus, number>;
  per_annotator: Record<string, number>;
  progress: number;
}

export const FEATURE_ORDER = [
  'avg_rating',
  'avg_upvotes',
  'avg_sentiment',
  'group_time_window',
  'review_count',
  'rating_deviation',
  'early_time_window',
  'verified_fraction',
] as const;

export type FeatureName = (typeof FEATURE_ORDER)[number];

// display ranges for the feature bars; review_count and avg_upvotes are
// unbounded above, so their bars saturate at a nominal scale
export const FEATURE_BAR_RANGE: Record<FeatureName, [number, number]> = {
  avg_rating: [1, 5],
  avg_upvotes: [0, 20],
  avg_sentiment: [-1, 1],
  group_time_window: [0, 1],
  review_count: [0, 50],
  rating_deviation: [0, 1],
  early_time_window: [0, 1],
  verified_fraction: [0, 1],
};
