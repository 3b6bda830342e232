/** End-to-end: the navigator drives a real service process through a
 * headless DOM. Covers the scripted scenario: enter the two-college
 * transfer transcript, pick targets, observe the zero-applied card with
 * two unevaluated callouts, then remove a course and watch the displayed
 * completion hours recompute without ever decreasing. */

import { spawn, type ChildProcess } from 'node:child_process';
import { resolve } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ServiceClient } from '../src/api.js';
import { NavigatorApp, collectElements } from '../src/main.js';
import type { WhatIfResponse } from '../src/types.js';

const repoRoot = resolve(process.cwd(), '..');
const port = 18000 + Math.floor(Math.random() * 10_000);
const baseUrl = `http://127.0.0.1:${port}`;
let service: ChildProcess;

async function until<T>(probe: () => T | null | undefined | false, timeoutMs = 20_000): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) return value;
    if (Date.now() > deadline) throw new Error('timed out waiting');
    await new Promise((resolve) => setTimeout(resolve, 40));
  }
}

beforeAll(async () => {
  service = spawn('python3', ['-m', 'transferpath', 'serve', '--port', String(port)], {
    cwd: repoRoot,
    env: { ...process.env, CATALOG_DIR: resolve(repoRoot, 'fixtures/catalog') },
    stdio: ['ignore', 'ignore', 'pipe'],
  });
  const stderr: string[] = [];
  service.stderr?.on('data', (chunk) => stderr.push(String(chunk)));
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const response = await fetch(`${baseUrl}/v1/institutions`);
      if (response.ok) break;
    } catch {
      if (service.exitCode !== null) {
        throw new Error(`service exited: ${stderr.join('')}`);
      }
    }
    if (Date.now() > deadline) throw new Error(`service never came up: ${stderr.join('')}`);
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
});

afterAll(() => {
  service?.kill();
});

function mountPage(): void {
  document.body.innerHTML = `
    <input id="base-url" value="${baseUrl}">
    <button id="connect"></button>
    <div id="offline-banner" hidden></div>
    <span id="status-line"></span>
    <div id="transcript"></div>
    <input id="add-institution">
    <input id="add-course">
    <select id="add-grade">
      <option>A</option><option>B</option><option>C</option><option>D</option><option>F</option>
    </select>
    <input id="add-hours">
    <button id="add-submit"></button>
    <div id="targets"></div>
    <div id="results"></div>
  `;
}

function addCourse(institution: string, course: string, grade: string, hours: string): void {
  (document.getElementById('add-institution') as HTMLInputElement).value = institution;
  (document.getElementById('add-course') as HTMLInputElement).value = course;
  (document.getElementById('add-grade') as HTMLSelectElement).value = grade;
  (document.getElementById('add-hours') as HTMLInputElement).value = hours;
  (document.getElementById('add-submit') as HTMLButtonElement).click();
}

function cardCompletionHours(): Map<string, number> {
  const out = new Map<string, number>();
  for (const card of document.querySelectorAll<HTMLElement>('#results .card')) {
    const remaining = card.querySelector('.remaining')?.textContent ?? '';
    const match = remaining.match(/^([\d./]+) h to finish/);
    if (match && card.dataset.programId) {
      out.set(card.dataset.programId, Number(match[1]));
    }
  }
  return out;
}

describe('navigator against a live service', () => {
  it('runs the two-college transfer scenario end to end', async () => {
    mountPage();
    const app = new NavigatorApp(
      document,
      collectElements(document),
      (url) => new ServiceClient(url, (input, init) => fetch(input, init)),
    );
    await app.loadCatalog();
    await until(() => app.session.snapshot().analysis !== null && !app.session.snapshot().pending);

    // Target picker is populated from the service catalog.
    const options = [...document.querySelectorAll<HTMLInputElement>('#targets input[type=checkbox]')];
    expect(options.map((o) => o.value)).toContain('ssu-bs-cs');
    expect(options.map((o) => o.value)).toContain('at-bs-cs');

    // Empty transcript: cards show the full-program completion plans.
    await until(() => document.querySelector('#results .card'));
    const emptyCs = document.querySelector<HTMLElement>('[data-program-id="ssu-bs-cs"]')!;
    expect(emptyCs.querySelector('.remaining')!.textContent).toContain('25 h to finish');

    // Select the two comparison targets explicitly.
    for (const option of options) {
      if (option.value === 'ssu-bs-cs' || option.value === 'at-bs-cs') {
        option.checked = true;
        option.dispatchEvent(new window.Event('change'));
      }
    }

    // Enter the four-course transfer history.
    addCourse('riverbend-cc', 'rb-cs101', 'A', '4');
    addCourse('riverbend-cc', 'rb-cs102', 'B', '4');
    addCourse('riverbend-cc', 'rb-math210', 'B', '3');
    addCourse('sagebrush-cc', 'sb-cs230', 'A', '3');
    const withTranscript = await until(() => {
      const snap = app.session.snapshot();
      return snap.records.length === 4 && !snap.pending && snap.analysis ? snap.analysis : null;
    });

    // The zero-applied card with two unevaluated callouts.
    const summit = document.querySelector<HTMLElement>('[data-program-id="ssu-bs-cs"]')!;
    expect(summit.querySelector('.applied')!.textContent).toBe('0 h applied');
    expect(summit.querySelector('.recognized')!.textContent).toBe('8 h recognized');
    expect(summit.querySelector('.unevaluated-callout')!.textContent).toContain(
      '2 course(s) not yet evaluated',
    );

    // Cards follow the service ranking, best match first.
    const cardOrder = [...document.querySelectorAll<HTMLElement>('#results .card')]
      .map((c) => c.dataset.programId);
    expect(cardOrder.slice(0, 2)).toEqual(['at-bs-cs', 'ssu-bs-cs']);

    // Every displayed figure traces back to the single what-if response.
    const traced: WhatIfResponse = withTranscript;
    for (const analysis of traced.ranked) {
      const card = document.querySelector<HTMLElement>(
        `[data-program-id="${analysis.target_program_id}"]`,
      )!;
      expect(card.querySelector('.applied')!.textContent).toBe(
        `${analysis.applied_hours} h applied`,
      );
      expect(card.querySelector('.remaining')!.textContent).toContain(
        `${analysis.completion_credit_hours} h to finish over ${analysis.estimated_terms} term(s)`,
      );
    }
    // The requirement outline is rendered from the service's program tree.
    expect(summit.querySelectorAll('.req-leaf').length).toBeGreaterThan(0);

    const before = cardCompletionHours();
    expect(before.get('at-bs-cs')).toBe(4);

    // Remove the first course; the route recalculates and no program's
    // displayed completion hours decrease.
    const sequenceBefore = app.session.snapshot().analysisSequence;
    (document.querySelector('#transcript .transcript-row .remove') as HTMLButtonElement).click();
    await until(() => {
      const snap = app.session.snapshot();
      return snap.analysisSequence > sequenceBefore && !snap.pending;
    });
    const after = cardCompletionHours();
    expect(after.size).toBe(before.size);
    for (const [programId, hours] of after) {
      expect(hours).toBeGreaterThanOrEqual(before.get(programId)!);
    }
    expect(after.get('at-bs-cs')).toBe(8);
  });

  it('shows the offline banner when the service is unreachable and recovers', async () => {
    mountPage();
    (document.getElementById('base-url') as HTMLInputElement).value = 'http://127.0.0.1:9';
    const app = new NavigatorApp(
      document,
      collectElements(document),
      (url) => new ServiceClient(url, (input, init) => fetch(input, init)),
    );
    await app.loadCatalog();
    expect((document.getElementById('offline-banner') as HTMLElement).hidden).toBe(false);
  });
});
