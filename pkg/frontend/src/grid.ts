import type { Evidence, GridRow, ReviewCell } from './types.js';

// Evidence grid: one row per group member, one column per product. Cells
// carry every in-scope review; cells whose review dates repeat across
// members get the same-day highlight.

function starString(rating: number): string {
  return '★'.repeat(rating) + '☆'.repeat(5 - rating);
}

/** Dates posted by two or more distinct members (burst suspicion). */
export function sharedDates(grid: GridRow[]): Set<string> {
  const byDate = new Map<string, Set<string>>();
  for (const row of grid) {
    for (const cell of row.cells) {
      for (const review of cell.reviews) {
        let members = byDate.get(review.date);
        if (!members) {
          members = new Set();
          byDate.set(review.date, members);
        }
        members.add(row.member);
      }
    }
  }
  const shared = new Set<string>();
  for (const [date, members] of byDate) {
    if (members.size >= 2) shared.add(date);
  }
  return shared;
}

function renderReview(review: ReviewCell, highlightDates: Set<string>): HTMLElement {
  const box = document.createElement('div');
  box.className = 'review';
  if (highlightDates.has(review.date)) box.classList.add('same-day');
  box.dataset.reviewId = review.review_id;

  const head = document.createElement('div');
  head.className = 'review-head';

  const stars = document.createElement('span');
  stars.className = 'stars';
  stars.textContent = starString(review.rating);
  head.appendChild(stars);

  if (review.verified) {
    const badge = document.createElement('span');
    badge.className = 'verified-badge';
    badge.textContent = 'verified';
    head.appendChild(badge);
  }

  const date = document.createElement('span');
  date.className = 'review-date';
  date.textContent = review.date;
  head.appendChild(date);

  const votes = document.createElement('span');
  votes.className = 'votes';
  votes.textContent = `▲ ${review.helpful_votes}`;
  head.appendChild(votes);

  const text = document.createElement('div');
  text.className = 'review-text';
  text.textContent = review.title ? `${review.title} — ${review.text}` : review.text;

  box.appendChild(head);
  box.appendChild(text);
  return box;
}

export function renderEvidenceGrid(evidence: Evidence): HTMLElement {
  const highlight = sharedDates(evidence.grid);
  const table = document.createElement('table');
  table.className = 'evidence-grid';

  const header = document.createElement('tr');
  header.appendChild(document.createElement('th'));
  for (const productId of evidence.products) {
    const th = document.createElement('th');
    th.textContent = productId;
    header.appendChild(th);
  }
  table.appendChild(header);

  for (const row of evidence.grid) {
    const tr = document.createElement('tr');
    const member = document.createElement('th');
    member.className = 'member';
    member.textContent = row.member;
    tr.appendChild(member);
    for (const cell of row.cells) {
      const td = document.createElement('td');
      td.dataset.member = row.member;
      td.dataset.productId = cell.product_id;
      for (const review of cell.reviews) {
        td.appendChild(renderReview(review, highlight));
      }
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  return table;
}
