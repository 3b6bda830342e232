/** Thin typed client for the transferpath service. All computation lives
 * on the server; this module only moves JSON. */

import type {
  InstitutionsResponse,
  ProgramDetailResponse,
  ProgramsResponse,
  ServiceErrorBody,
  TranscriptRecordWire,
  WhatIfResponse,
} from './types.js';

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body: unknown = await response.json();
    if (!response.ok) {
      const err = body as ServiceErrorBody;
      throw new ServiceError(response.status, err.code ?? 'error', err.message ?? 'request failed');
    }
    return body as T;
  }

  institutions(): Promise<InstitutionsResponse> {
    return this.request('/v1/institutions');
  }

  programs(institutionId?: string): Promise<ProgramsResponse> {
    const query = institutionId ? `?institution=${encodeURIComponent(institutionId)}` : '';
    return this.request(`/v1/programs${query}`);
  }

  program(programId: string): Promise<ProgramDetailResponse> {
    return this.request(`/v1/programs/${encodeURIComponent(programId)}`);
  }

  whatif(records: TranscriptRecordWire[], targetProgramIds?: string[]): Promise<WhatIfResponse> {
    const payload: Record<string, unknown> = { transcript: { records } };
    if (targetProgramIds && targetProgramIds.length > 0) {
      payload.target_program_ids = targetProgramIds;
    }
    return this.request('/v1/whatif', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
    });
  }
}
