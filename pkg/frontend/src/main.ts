/** Navigator bootstrap: wires the session store, service client, and
 * renderers to the page. */

import { ServiceClient } from './api.js';
import { SessionStore } from './state.js';
import { renderResultsBoard, renderTargetPicker, renderTranscript } from './render.js';
import type { Grade, Institution, ProgramDetail, ProgramSummary } from './types.js';

export interface AppElements {
  baseUrlInput: HTMLInputElement;
  connectButton: HTMLButtonElement;
  offlineBanner: HTMLElement;
  statusLine: HTMLElement;
  transcriptHost: HTMLElement;
  addForm: {
    institution: HTMLInputElement;
    course: HTMLInputElement;
    grade: HTMLSelectElement;
    hours: HTMLInputElement;
    submit: HTMLButtonElement;
  };
  targetHost: HTMLElement;
  resultsHost: HTMLElement;
}

export function collectElements(doc: Document): AppElements {
  const need = <T extends Element>(id: string): T => {
    const node = doc.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node as unknown as T;
  };
  return {
    baseUrlInput: need<HTMLInputElement>('base-url'),
    connectButton: need<HTMLButtonElement>('connect'),
    offlineBanner: need<HTMLElement>('offline-banner'),
    statusLine: need<HTMLElement>('status-line'),
    transcriptHost: need<HTMLElement>('transcript'),
    addForm: {
      institution: need<HTMLInputElement>('add-institution'),
      course: need<HTMLInputElement>('add-course'),
      grade: need<HTMLSelectElement>('add-grade'),
      hours: need<HTMLInputElement>('add-hours'),
      submit: need<HTMLButtonElement>('add-submit'),
    },
    targetHost: need<HTMLElement>('targets'),
    resultsHost: need<HTMLElement>('results'),
  };
}

export class NavigatorApp {
  private client: ServiceClient;
  private store: SessionStore;
  private institutions: Institution[] = [];
  private programs: ProgramSummary[] = [];
  private programDetails = new Map<string, ProgramDetail>();
  private catalogOffline = false;

  constructor(
    private readonly doc: Document,
    private readonly elements: AppElements,
    makeClient: (baseUrl: string) => ServiceClient,
  ) {
    this.client = makeClient(elements.baseUrlInput.value);
    this.store = new SessionStore((records, targets) =>
      this.client.whatif(records, targets.length > 0 ? targets : undefined),
    );
    this.store.subscribe(() => this.render());

    elements.connectButton.addEventListener('click', () => {
      this.client = makeClient(elements.baseUrlInput.value);
      void this.loadCatalog();
    });
    elements.addForm.submit.addEventListener('click', () => this.addRecordFromForm());
  }

  async loadCatalog(): Promise<void> {
    try {
      const [institutions, programs] = await Promise.all([
        this.client.institutions(),
        this.client.programs(),
      ]);
      this.institutions = institutions.institutions;
      this.programs = programs.programs;
      this.programDetails.clear();
      await Promise.all(
        this.programs
          .filter((p) => p.credential === 'bachelor')
          .map(async (p) => {
            const detail = await this.client.program(p.id);
            this.programDetails.set(p.id, detail.program);
          }),
      );
      this.catalogOffline = false;
    } catch {
      this.catalogOffline = true;
    }
    this.elements.offlineBanner.hidden = !this.catalogOffline;
    this.store.refresh();
  }

  private addRecordFromForm(): void {
    const form = this.elements.addForm;
    if (!form.course.value || !form.institution.value || !form.hours.value) return;
    this.store.addRecord({
      institutionId: form.institution.value,
      courseId: form.course.value,
      grade: form.grade.value as Grade,
      creditHours: form.hours.value,
    });
    form.course.value = '';
  }

  get session(): SessionStore {
    return this.store;
  }

  private render(): void {
    const state = this.store.snapshot();
    const doc = this.doc;

    this.elements.offlineBanner.hidden = !(state.offline || this.catalogOffline);
    this.elements.statusLine.textContent = state.pending
      ? 'recalculating route...'
      : state.analysis
        ? `up to date (snapshot v${state.analysis.snapshot_version})`
        : 'waiting for the first analysis';

    this.elements.transcriptHost.replaceChildren(
      renderTranscript(doc, state.records, (index) => this.store.removeRecord(index)),
    );

    this.elements.targetHost.replaceChildren(
      renderTargetPicker(
        doc,
        this.institutions,
        this.programs,
        new Set(state.selectedPrograms),
        (programId, checked) => {
          // Read the live store, not the snapshot this render closed over:
          // a toggle may come from a node detached by an interleaved render.
          const next = new Set(this.store.snapshot().selectedPrograms);
          if (checked) next.add(programId);
          else next.delete(programId);
          this.store.setSelectedPrograms([...next].sort());
        },
      ),
    );

    if (state.analysis && !state.pending) {
      this.elements.resultsHost.replaceChildren(
        renderResultsBoard(doc, state.analysis, {
          programs: new Map(this.programs.map((p) => [p.id, p])),
          details: this.programDetails,
        }),
      );
    }
  }
}

export function boot(doc: Document): NavigatorApp {
  const elements = collectElements(doc);
  if (!elements.baseUrlInput.value) {
    elements.baseUrlInput.value = doc.defaultView?.localStorage.getItem('transferpath-base-url')
      ?? 'http://127.0.0.1:8000';
  }
  const app = new NavigatorApp(doc, elements, (baseUrl) => {
    doc.defaultView?.localStorage.setItem('transferpath-base-url', baseUrl);
    return new ServiceClient(baseUrl.replace(/\/$/, ''));
  });
  void app.loadCatalog();
  return app;
}

if (typeof document !== 'undefined' && document.getElementById('base-url')) {
  boot(document);
}
