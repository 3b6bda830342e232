/** Wire types for the transferpath service API. */

/** Exact numbers arrive as ints, decimal floats, or "p/q" strings. */
export type WireNumber = number | string;

export interface Institution {
  id: string;
  name: string;
  kind: 'community_college' | 'university';
}

export interface ProgramSummary {
  id: string;
  institution_id: string;
  credential: 'associate' | 'bachelor';
  title: string;
  total_credit_hours: WireNumber;
}

export interface RequirementNodeWire {
  id: string;
  label: string;
  kind: 'all' | 'any' | 'choose' | 'course' | 'credits' | 'exam';
  children?: RequirementNodeWire[];
  choose_k?: number;
  course_id?: string;
  min_grade?: string;
  min_credit_hours?: WireNumber;
  course_pool?: string[];
  accepts_electives?: boolean;
  exam_id?: string;
  min_score?: WireNumber;
  shareable?: boolean;
}

export interface ProgramDetail extends Omit<ProgramSummary, 'total_credit_hours'> {
  total_credit_hours: WireNumber;
  root: RequirementNodeWire;
}

export type Grade = 'A' | 'B' | 'C' | 'D' | 'F';

export interface TranscriptRecordWire {
  institution_id: string;
  course_id?: string;
  grade?: Grade;
  credit_hours?: WireNumber;
  term_index?: number;
  exam_id?: string;
  score?: WireNumber;
}

export interface PlanWire {
  terms: string[][];
  total_credit_hours: WireNumber;
}

export interface AnalysisWire {
  target_program_id: string;
  recognized_hours: WireNumber;
  applied_hours: WireNumber;
  unevaluated_count: number;
  unsatisfied_leaves: string[];
  completion_courses: string[];
  completion_credit_hours: WireNumber;
  estimated_terms: number;
  estimated_cost_cents: number;
  plan: PlanWire;
  exact: boolean;
}

export interface OutcomeWire {
  target_program_id: string;
  analysis?: AnalysisWire;
  error?: { code: string; message: string };
}

export interface WhatIfResponse {
  snapshot_version: number;
  outcomes: OutcomeWire[];
  ranked: AnalysisWire[];
}

export interface InstitutionsResponse {
  snapshot_version: number;
  institutions: Institution[];
}

export interface ProgramsResponse {
  snapshot_version: number;
  programs: ProgramSummary[];
}

export interface ProgramDetailResponse {
  snapshot_version: number;
  program: ProgramDetail;
}

export interface ServiceErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}

/** One editable transcript row in the builder. */
export interface WorkingRecord {
  institutionId: string;
  courseId: string;
  grade: Grade;
  creditHours: string;
}
