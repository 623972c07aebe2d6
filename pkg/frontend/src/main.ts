import { AnnotationApi } from './api.js';
import { AnnotationApp } from './app.js';
import type { StatusFilter } from './types.js';

function requireElement(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing #${id}`);
  return element;
}

const app = new AnnotationApp(new AnnotationApi(''), {
  list: requireElement('pair-list'),
  evidence: requireElement('evidence'),
  status: requireElement('status'),
  progress: requireElement('progress'),
  agreement: requireElement('agreement'),
});

const annotatorInput = requireElement('annotator') as HTMLInputElement;
annotatorInput.value = window.sessionStorage.getItem('annotator_id') ?? '';
annotatorInput.addEventListener('change', () => {
  app.setAnnotator(annotatorInput.value);
  window.sessionStorage.setItem('annotator_id', annotatorInput.value);
});
if (annotatorInput.value) app.setAnnotator(annotatorInput.value);

for (const filter of ['all', 'unlabeled', 'labeled', 'disputed'] as StatusFilter[]) {
  requireElement(`filter-${filter}`).addEventListener('click', () => {
    void app.setFilter(filter);
  });
}
requireElement('page-prev').addEventListener('click', () => void app.prevPage());
requireElement('page-next').addEventListener('click', () => void app.nextPage());

app.attachKeyboard(document);
void app.refreshList();
void app.refreshAgreement();
window.setInterval(() => void app.refreshAgreement(), 30_000);
