/** Session state and the recalculating loop.
 *
 * Every edit bumps a sequence number and schedules a debounced what-if
 * call; at most one request is in flight, and a response is applied only
 * if it still matches the current sequence, so the rendered analysis
 * always corresponds to the working transcript and superseded responses
 * are discarded, never shown.
 */

import type { TranscriptRecordWire, WhatIfResponse, WorkingRecord } from './types.js';

export interface SessionSnapshot {
  records: readonly WorkingRecord[];
  selectedPrograms: readonly string[];
  analysis: WhatIfResponse | null;
  analysisSequence: number;
  sequence: number;
  pending: boolean;
  offline: boolean;
}

type Listener = (state: SessionSnapshot) => void;
type Scheduler = (callback: () => void, ms: number) => unknown;
type Canceller = (handle: unknown) => void;

export const DEBOUNCE_MS = 300;

export class SessionStore {
  private records: WorkingRecord[] = [];
  private selectedPrograms: string[] = [];
  private analysis: WhatIfResponse | null = null;
  private analysisSequence = -1;
  private sequence = 0;
  private pending = false;
  private offline = false;
  private listeners: Listener[] = [];

  private timer: unknown = null;
  private inFlight = false;

  constructor(
    private readonly runWhatIf: (
      records: TranscriptRecordWire[],
      targets: string[],
    ) => Promise<WhatIfResponse>,
    private readonly schedule: Scheduler = (cb, ms) => setTimeout(cb, ms),
    private readonly cancel: Canceller = (h) => clearTimeout(h as number),
    private readonly debounceMs: number = DEBOUNCE_MS,
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  snapshot(): SessionSnapshot {
    return {
      records: [...this.records],
      selectedPrograms: [...this.selectedPrograms],
      analysis: this.analysis,
      analysisSequence: this.analysisSequence,
      sequence: this.sequence,
      pending: this.pending,
      offline: this.offline,
    };
  }

  private notify(): void {
    const state = this.snapshot();
    for (const listener of this.listeners) listener(state);
  }

  addRecord(record: WorkingRecord): void {
    this.records.push(record);
    this.edited();
  }

  removeRecord(index: number): void {
    if (index < 0 || index >= this.records.length) return;
    this.records.splice(index, 1);
    this.edited();
  }

  setSelectedPrograms(programIds: string[]): void {
    this.selectedPrograms = [...programIds];
    this.edited();
  }

  /** Force an immediate recomputation (used on first load). */
  refresh(): void {
    this.edited(0);
  }

  private edited(delay = this.debounceMs): void {
    this.sequence += 1;
    this.pending = true;
    if (this.timer !== null) this.cancel(this.timer);
    this.timer = this.schedule(() => {
      this.timer = null;
      void this.fire();
    }, delay);
    this.notify();
  }

  private wireRecords(): TranscriptRecordWire[] {
    return this.records.map((r) => ({
      institution_id: r.institutionId,
      course_id: r.courseId,
      grade: r.grade,
      credit_hours: numberish(r.creditHours),
    }));
  }

  private async fire(): Promise<void> {
    if (this.inFlight) return; // the in-flight completion re-fires
    this.inFlight = true;
    const requestSequence = this.sequence;
    try {
      const response = await this.runWhatIf(this.wireRecords(), [...this.selectedPrograms]);
      if (requestSequence === this.sequence) {
        this.analysis = response;
        this.analysisSequence = requestSequence;
        this.pending = false;
        this.offline = false;
        this.notify();
      }
    } catch {
      if (requestSequence === this.sequence) {
        this.offline = true;
        this.pending = false;
        this.notify();
      }
    } finally {
      this.inFlight = false;
      if (this.sequence !== requestSequence && this.timer === null) {
        // An edit landed mid-flight with its debounce already elapsed.
        void this.fire();
      }
    }
  }
}

function numberish(text: string): number | string {
  const value = Number(text);
  return Number.isFinite(value) && text.trim() !== '' ? value : text;
}
