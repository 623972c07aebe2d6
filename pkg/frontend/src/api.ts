import type {
  AgreementReport,
  Evidence,
  LabelResponse,
  PairListResponse,
  Stats,
  StatusFilter,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the annotation service endpoints. */
export class AnnotationApi {
  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === 'string') detail = body.detail;
      } catch {
        // non-JSON error body; keep statusText
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listPairs(status: StatusFilter, page: number, pageSize = 50): Promise<PairListResponse> {
    const params = new URLSearchParams({
      status,
      page: String(page),
      page_size: String(pageSize),
    });
    return this.request<PairListResponse>(`/api/pairs?${params}`);
  }

  getEvidence(pairId: string): Promise<Evidence> {
    return this.request<Evidence>(`/api/pairs/${encodeURIComponent(pairId)}/evidence`);
  }

  submitLabel(pairId: string, annotatorId: string, label: 0 | 1): Promise<LabelResponse> {
    return this.request<LabelResponse>(`/api/pairs/${encodeURIComponent(pairId)}/label`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ annotator_id: annotatorId, label }),
    });
  }

  getAgreement(): Promise<AgreementReport> {
    return this.request<AgreementReport>('/api/agreement');
  }

  getStats(): Promise<Stats> {
    return this.request<Stats>('/api/stats');
  }
}
