// @vitest-environment jsdom
import { describe, expect, it } from 'vitest';

import { renderEvidenceGrid, sharedDates } from '../src/grid.js';
import { renderChecklist, renderFeaturePanel } from '../src/panels.js';
import { FEATURE_ORDER } from '../src/types.js';
import { burstPairFixture, plainPairFixture } from './mock_api.js';

describe('evidence grid', () => {
  it('renders one row per member for the burst fixture', () => {
    const evidence = { ...burstPairFixture().evidence, labels: {} };
    const table = renderEvidenceGrid(evidence);
    const memberCells = table.querySelectorAll('th.member');
    expect(memberCells).toHaveLength(4);
    expect([...memberCells].map((el) => el.textContent)).toEqual(['u1', 'u2', 'u3', 'u4']);
  });

  it('shows a verified badge on every verified review', () => {
    const evidence = { ...burstPairFixture().evidence, labels: {} };
    const table = renderEvidenceGrid(evidence);
    const reviews = table.querySelectorAll('.review');
    const badges = table.querySelectorAll('.verified-badge');
    expect(reviews).toHaveLength(8);
    expect(badges).toHaveLength(8); // all burst reviews are verified
  });

  it('highlights same-day clusters across members', () => {
    const evidence = { ...burstPairFixture().evidence, labels: {} };
    expect(sharedDates(evidence.grid)).toEqual(new Set(['2020-03-10']));
    const table = renderEvidenceGrid(evidence);
    expect(table.querySelectorAll('.review.same-day')).toHaveLength(8);
  });

  it('does not highlight dates used by a single member', () => {
    const evidence = { ...plainPairFixture('x:b', 'b').evidence, labels: {} };
    const table = renderEvidenceGrid(evidence);
    expect(table.querySelectorAll('.review.same-day')).toHaveLength(0);
    expect(table.querySelectorAll('.verified-badge')).toHaveLength(1);
  });

  it('every rendered cell is backed by a review in the payload', () => {
    const evidence = { ...burstPairFixture().evidence, labels: {} };
    const payloadIds = new Set(
      evidence.grid.flatMap((row) =>
        row.cells.flatMap((cell) => cell.reviews.map((r) => r.review_id)),
      ),
    );
    const table = renderEvidenceGrid(evidence);
    const renderedIds = [...table.querySelectorAll('.review')].map(
      (el) => (el as HTMLElement).dataset.reviewId,
    );
    expect(renderedIds).toHaveLength(payloadIds.size);
    for (const id of renderedIds) expect(payloadIds.has(id!)).toBe(true);
  });
});

describe('feature panel', () => {
  it('shows all eight features with their API values verbatim', () => {
    const evidence = { ...burstPairFixture().evidence, labels: {} };
    const panel = renderFeaturePanel(evidence);
    const rows = panel.querySelectorAll('.feature-row');
    expect(rows).toHaveLength(8);
    for (const row of rows) {
      const name = (row as HTMLElement).dataset.feature!;
      expect(FEATURE_ORDER).toContain(name);
      const shown = row.querySelector('.feature-value')!.textContent!;
      const raw = evidence.features![name];
      expect(Number(shown)).toBeCloseTo(raw, 3);
    }
  });

  it('marks informational-only checklist rows', () => {
    const evidence = { ...burstPairFixture().evidence, labels: {} };
    const list = renderChecklist(evidence);
    expect(list.querySelectorAll('li')).toHaveLength(2);
    expect(list.querySelectorAll('li.informational')).toHaveLength(1);
  });
});
