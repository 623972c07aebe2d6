import type { AgreementReport, Evidence, PairSummary, Stats } from './types.js';
import { FEATURE_BAR_RANGE, FEATURE_ORDER } from './types.js';

// Side panels: feature values with range bars, annotation checklist,
// progress bar, agreement dashboard, pair list. All numbers shown come
// straight from API payloads.

export function renderFeaturePanel(evidence: Evidence): HTMLElement {
  const panel = document.createElement('div');
  panel.className = 'feature-panel';
  if (!evidence.features) {
    panel.textContent = 'no feature vector for this pair';
    return panel;
  }
  for (const name of FEATURE_ORDER) {
    const value = evidence.features[name];
    const row = document.createElement('div');
    row.className = 'feature-row';
    row.dataset.feature = name;

    const label = document.createElement('span');
    label.className = 'feature-name';
    label.textContent = name;

    const bar = document.createElement('div');
    bar.className = 'feature-bar';
    const fill = document.createElement('div');
    fill.className = 'feature-bar-fill';
    const [lo, hi] = FEATURE_BAR_RANGE[name];
    const fraction = Math.max(0, Math.min(1, (value - lo) / (hi - lo)));
    fill.style.width = `${(fraction * 100).toFixed(1)}%`;
    bar.appendChild(fill);

    const num = document.createElement('span');
    num.className = 'feature-value';
    num.textContent = Number.isInteger(value) ? String(value) : value.toFixed(3);

    row.appendChild(label);
    row.appendChild(bar);
    row.appendChild(num);
    panel.appendChild(row);
  }
  return panel;
}

export function renderChecklist(evidence: Evidence): HTMLElement {
  const list = document.createElement('ul');
  list.className = 'checklist';
  for (const item of evidence.checklist) {
    const li = document.createElement('li');
    li.textContent = `${item.criterion} (${item.focus})`;
    if (item.informational_only) {
      li.classList.add('informational');
      li.title = 'informational only: not derivable from this corpus';
    }
    list.appendChild(li);
  }
  return list;
}

export function renderProgress(stats: Stats): HTMLElement {
  const wrap = document.createElement('div');
  wrap.className = 'progress';
  const bar = document.createElement('div');
  bar.className = 'progress-fill';
  bar.style.width = `${(stats.progress * 100).toFixed(1)}%`;
  wrap.appendChild(bar);
  const text = document.createElement('span');
  text.className = 'progress-text';
  const done = stats.by_status.labeled + stats.by_status.disputed;
  text.textContent = `${done} / ${stats.total_pairs} labeled`;
  wrap.appendChild(text);
  return wrap;
}

export function renderAgreement(report: AgreementReport): HTMLElement {
  const panel = document.createElement('div');
  panel.className = 'agreement';
  for (const pair of report.pairwise) {
    const row = document.createElement('div');
    row.className = 'agreement-row';
    row.textContent =
      `${pair.annotator_a} vs ${pair.annotator_b}: ` +
      `κ=${pair.kappa.toFixed(3)} over ${pair.n_overlap} pairs`;
    panel.appendChild(row);
  }
  const summary = document.createElement('div');
  summary.className = 'agreement-summary';
  summary.textContent =
    `${report.consensus_pairs.length} consensus, ${report.disputed_pairs.length} disputed`;
  panel.appendChild(summary);
  return panel;
}

const STATUS_GLYPH: Record<string, string> = {
  unlabeled: '·',
  labeled: '✓',
  disputed: '≠',
};

export function renderPairList(
  pairs: PairSummary[],
  selected: string | null,
  onSelect: (pairId: string) => void,
): HTMLElement {
  const list = document.createElement('ul');
  list.className = 'pair-list';
  for (const pair of pairs) {
    const li = document.createElement('li');
    li.dataset.pairId = pair.pair_id;
    li.dataset.status = pair.status;
    if (pair.pair_id === selected) li.classList.add('selected');
    const glyph = STATUS_GLYPH[pair.status] ?? '?';
    li.textContent =
      `${glyph} ${pair.brand_id} — ${pair.group_size} members, support ${pair.support}`;
    li.addEventListener('click', () => onSelect(pair.pair_id));
    list.appendChild(li);
  }
  return list;
}
