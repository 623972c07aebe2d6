import { AnnotationApi } from './api.js';
import { renderEvidenceGrid } from './grid.js';
import {
  renderAgreement,
  renderChecklist,
  renderFeaturePanel,
  renderPairList,
  renderProgress,
} from './panels.js';
import type { Evidence, PairSummary, StatusFilter } from './types.js';

export interface AppElements {
  list: HTMLElement;
  evidence: HTMLElement;
  status: HTMLElement;
  progress: HTMLElement;
  agreement: HTMLElement;
}

const PAGE_SIZE = 50;

/**
 * Annotation controller: keyboard-first labeling over the pair queue.
 *
 * Keys: 1 = extremist, 0 = moderate, s = skip to next unlabeled,
 * arrows = previous/next pair. Label submissions update the UI
 * optimistically and roll back if the POST fails.
 */
export class AnnotationApp {
  filter: StatusFilter = 'all';
  page = 1;
  totalPages = 1;
  pairs: PairSummary[] = [];
  currentPairId: string | null = null;
  currentEvidence: Evidence | null = null;
  annotatorId = 'anonymous';
  busy = false;

  constructor(
    private api: AnnotationApi,
    private el: AppElements,
  ) {}

  setAnnotator(id: string): void {
    if (id.trim()) this.annotatorId = id.trim();
  }

  async setFilter(filter: StatusFilter): Promise<void> {
    this.filter = filter;
    this.page = 1;
    await this.refreshList();
  }

  async nextPage(): Promise<void> {
    if (this.page < this.totalPages) {
      this.page += 1;
      await this.refreshList();
    }
  }

  async prevPage(): Promise<void> {
    if (this.page > 1) {
      this.page -= 1;
      await this.refreshList();
    }
  }

  async refreshList(): Promise<void> {
    try {
      const response = await this.api.listPairs(this.filter, this.page, PAGE_SIZE);
      this.pairs = response.pairs;
      this.totalPages = response.total_pages;
      this.renderList();
      this.clearError();
    } catch (error) {
      this.showError(`failed to load pairs: ${(error as Error).message}`);
    }
    try {
      const stats = await this.api.getStats();
      this.el.progress.replaceChildren(renderProgress(stats));
    } catch {
      // progress is best-effort; the list is the critical path
    }
  }

  async refreshAgreement(): Promise<void> {
    try {
      const report = await this.api.getAgreement();
      this.el.agreement.replaceChildren(renderAgreement(report));
    } catch (error) {
      this.el.agreement.textContent = `agreement unavailable: ${(error as Error).message}`;
    }
  }

  async openPair(pairId: string): Promise<void> {
    try {
      const evidence = await this.api.getEvidence(pairId);
      this.currentPairId = pairId;
      this.currentEvidence = evidence;
      this.renderEvidence(evidence);
      this.renderList();
      this.clearError();
    } catch (error) {
      this.showError(`failed to load evidence: ${(error as Error).message}`);
    }
  }

  /** Submit a label for the open pair; optimistic, rolled back on failure. */
  async submitLabel(label: 0 | 1): Promise<void> {
    if (!this.currentPairId || this.busy) return;
    const pairId = this.currentPairId;
    const row = this.pairs.find((p) => p.pair_id === pairId);
    const snapshot = row ? { ...row, labels: { ...row.labels } } : null;
    if (row) {
      row.labels[this.annotatorId] = label;
      row.status = new Set(Object.values(row.labels)).size > 1 ? 'disputed' : 'labeled';
      this.renderList();
    }
    this.busy = true;
    try {
      const response = await this.api.submitLabel(pairId, this.annotatorId, label);
      if (row) row.status = response.status;  // reconcile with the server
      this.renderList();
      this.clearError();
      await this.advanceToNextUnlabeled();
    } catch (error) {
      if (row && snapshot) Object.assign(row, snapshot);  // rollback
      this.renderList();
      this.showError(`label not saved: ${(error as Error).message}`);
    } finally {
      this.busy = false;
    }
  }

  /** Skip ahead without storing anything. */
  async advanceToNextUnlabeled(): Promise<void> {
    const start = this.currentPairId
      ? this.pairs.findIndex((p) => p.pair_id === this.currentPairId) + 1
      : 0;
    for (let i = start; i < this.pairs.length; i++) {
      if (this.pairs[i].status === 'unlabeled') {
        await this.openPair(this.pairs[i].pair_id);
        return;
      }
    }
    if (this.page < this.totalPages) {
      await this.nextPage();
      const next = this.pairs.find((p) => p.status === 'unlabeled');
      if (next) await this.openPair(next.pair_id);
    }
  }

  async moveSelection(delta: number): Promise<void> {
    if (this.pairs.length === 0) return;
    const index = this.currentPairId
      ? this.pairs.findIndex((p) => p.pair_id === this.currentPairId)
      : -1;
    const next = Math.min(Math.max(index + delta, 0), this.pairs.length - 1);
    await this.openPair(this.pairs[next].pair_id);
  }

  handleKey(key: string): void {
    if (key === '1') void this.submitLabel(1);
    else if (key === '0') void this.submitLabel(0);
    else if (key === 's') void this.advanceToNextUnlabeled();
    else if (key === 'ArrowRight') void this.moveSelection(1);
    else if (key === 'ArrowLeft') void this.moveSelection(-1);
  }

  attachKeyboard(target: EventTarget): void {
    target.addEventListener('keydown', (event) => {
      const keyboard = event as KeyboardEvent;
      const element = keyboard.target as HTMLElement | null;
      if (element && (element.tagName === 'INPUT' || element.tagName === 'TEXTAREA')) return;
      this.handleKey(keyboard.key);
    });
  }

  private renderList(): void {
    this.el.list.replaceChildren(
      renderPairList(this.pairs, this.currentPairId, (pairId) => void this.openPair(pairId)),
    );
  }

  private renderEvidence(evidence: Evidence): void {
    const header = document.createElement('h2');
    header.textContent = `${evidence.brand_id} × ${evidence.members.length} members`;
    const labels = document.createElement('div');
    labels.className = 'current-labels';
    const entries = Object.entries(evidence.labels);
    labels.textContent = entries.length
      ? entries.map(([annotator, label]) => `${annotator}: ${label}`).join(', ')
      : 'no labels yet';
    this.el.evidence.replaceChildren(
      header,
      labels,
      renderEvidenceGrid(evidence),
      renderFeaturePanel(evidence),
      renderChecklist(evidence),
    );
  }

  private showError(message: string): void {
    this.el.status.textContent = message;
    this.el.status.classList.add('error');
  }

  private clearError(): void {
    this.el.status.textContent = '';
    this.el.status.classList.remove('error');
  }
}
