/** DOM rendering. Every figure shown comes verbatim from a service
 * response; this module formats, it never computes. */

import type {
  AnalysisWire,
  Institution,
  OutcomeWire,
  ProgramDetail,
  ProgramSummary,
  RequirementNodeWire,
  WhatIfResponse,
  WireNumber,
  WorkingRecord,
} from './types.js';

export function formatHours(value: WireNumber): string {
  return typeof value === 'number' ? String(value) : value;
}

export function formatCents(cents: number): string {
  const dollars = Math.trunc(cents / 100);
  const rest = Math.abs(cents % 100).toString().padStart(2, '0');
  return `$${dollars.toLocaleString('en-US')}.${rest}`;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderTranscript(
  doc: Document,
  records: readonly WorkingRecord[],
  onRemove: (index: number) => void,
): HTMLElement {
  const list = el(doc, 'ul', 'transcript-list');
  records.forEach((record, index) => {
    const item = el(doc, 'li', 'transcript-row');
    item.append(
      el(doc, 'span', 'course', record.courseId),
      el(doc, 'span', 'institution', record.institutionId),
      el(doc, 'span', 'grade', `grade ${record.grade}`),
      el(doc, 'span', 'hours', `${record.creditHours} h`),
    );
    const remove = el(doc, 'button', 'remove', 'remove');
    remove.type = 'button';
    remove.addEventListener('click', () => onRemove(index));
    item.append(remove);
    list.append(item);
  });
  if (records.length === 0) {
    list.append(el(doc, 'li', 'transcript-empty', 'No courses yet; add one below.'));
  }
  return list;
}

export function renderTargetPicker(
  doc: Document,
  institutions: readonly Institution[],
  programs: readonly ProgramSummary[],
  selected: ReadonlySet<string>,
  onToggle: (programId: string, checked: boolean) => void,
): HTMLElement {
  const wrap = el(doc, 'div', 'target-picker');
  const byInstitution = new Map<string, ProgramSummary[]>();
  for (const program of programs) {
    const bucket = byInstitution.get(program.institution_id) ?? [];
    bucket.push(program);
    byInstitution.set(program.institution_id, bucket);
  }
  for (const institution of institutions) {
    const bucket = byInstitution.get(institution.id);
    if (!bucket) continue;
    const group = el(doc, 'fieldset', 'institution-group');
    group.append(el(doc, 'legend', undefined, `${institution.name} (${institution.kind.replace('_', ' ')})`));
    for (const program of bucket) {
      const label = el(doc, 'label', 'program-option');
      const box = el(doc, 'input');
      box.type = 'checkbox';
      box.value = program.id;
      box.checked = selected.has(program.id);
      box.addEventListener('change', () => onToggle(program.id, box.checked));
      label.append(box, doc.createTextNode(` ${program.title} (${program.id})`));
      group.append(label);
    }
    wrap.append(group);
  }
  return wrap;
}

/** Collapsible requirement outline; two levels start expanded. Leaf
 * satisfaction comes from the analysis's unsatisfied leaf list. */
export function renderRequirementOutline(
  doc: Document,
  node: RequirementNodeWire,
  unsatisfiedLeaves: ReadonlySet<string>,
  depth = 0,
): HTMLElement {
  if (!node.children || node.children.length === 0) {
    const satisfied = !unsatisfiedLeaves.has(node.id);
    const leaf = el(
      doc,
      'div',
      `req-leaf ${satisfied ? 'satisfied' : 'unsatisfied'}`,
      `${satisfied ? '✓' : '✗'} ${node.label}`,
    );
    leaf.dataset.nodeId = node.id;
    return leaf;
  }
  const details = el(doc, 'details', 'req-group');
  details.open = depth < 2;
  const connective =
    node.kind === 'all' ? 'all of' : node.kind === 'any' ? 'any of' : `${node.choose_k ?? '?'} of`;
  details.append(el(doc, 'summary', undefined, `${node.label} (${connective})`));
  for (const child of node.children) {
    details.append(renderRequirementOutline(doc, child, unsatisfiedLeaves, depth + 1));
  }
  return details;
}

export interface CardContext {
  programs: ReadonlyMap<string, ProgramSummary>;
  details: ReadonlyMap<string, ProgramDetail>;
}

function renderAnalysisCard(doc: Document, analysis: AnalysisWire, context: CardContext): HTMLElement {
  const card = el(doc, 'article', 'card');
  card.dataset.programId = analysis.target_program_id;
  const summary = context.programs.get(analysis.target_program_id);
  card.append(el(doc, 'h3', undefined, summary ? `${summary.title} @ ${summary.institution_id}` : analysis.target_program_id));

  const hours = el(doc, 'p', 'hours-line');
  hours.append(
    el(doc, 'span', 'recognized', `${formatHours(analysis.recognized_hours)} h recognized`),
    doc.createTextNode(' / '),
    el(doc, 'span', 'applied', `${formatHours(analysis.applied_hours)} h applied`),
  );
  card.append(hours);

  if (analysis.unevaluated_count > 0) {
    card.append(el(
      doc,
      'p',
      'unevaluated-callout',
      `${analysis.unevaluated_count} course(s) not yet evaluated here - worth requesting a review`,
    ));
  }

  card.append(el(
    doc,
    'p',
    'remaining',
    `${formatHours(analysis.completion_credit_hours)} h to finish over ` +
      `${analysis.estimated_terms} term(s), about ${formatCents(analysis.estimated_cost_cents)}` +
      (analysis.exact ? '' : ' (approximate)'),
  ));

  if (analysis.plan.terms.length > 0) {
    const plan = el(doc, 'ol', 'plan');
    for (const term of analysis.plan.terms) {
      plan.append(el(doc, 'li', 'plan-term', term.join(', ')));
    }
    card.append(plan);
  }

  const detail = context.details.get(analysis.target_program_id);
  if (detail) {
    card.append(renderRequirementOutline(doc, detail.root, new Set(analysis.unsatisfied_leaves)));
  } else {
    card.append(el(doc, 'p', 'unsatisfied-count', `${analysis.unsatisfied_leaves.length} requirement(s) still open`));
  }
  return card;
}

function renderErrorCard(doc: Document, outcome: OutcomeWire): HTMLElement {
  const card = el(doc, 'article', 'card card-error');
  card.dataset.programId = outcome.target_program_id;
  card.append(el(doc, 'h3', undefined, outcome.target_program_id));
  card.append(el(
    doc,
    'p',
    'error-line',
    `${outcome.error?.code ?? 'error'}: ${outcome.error?.message ?? 'analysis failed'}`,
  ));
  return card;
}

/** The comparison board: cards in the service's ranked order, then any
 * per-target errors. */
export function renderResultsBoard(
  doc: Document,
  response: WhatIfResponse,
  context: CardContext,
): HTMLElement {
  const board = el(doc, 'section', 'results-board');
  for (const analysis of response.ranked) {
    board.append(renderAnalysisCard(doc, analysis, context));
  }
  for (const outcome of response.outcomes) {
    if (outcome.error) board.append(renderErrorCard(doc, outcome));
  }
  board.dataset.snapshotVersion = String(response.snapshot_version);
  return board;
}
