// Thin fetch client for the workshop service.
//
// Every mutating call carries a per-form idempotency key: the key is
// minted when a form opens, reused verbatim on retry after a network
// failure, and only discarded once the server has answered (success or
// domain error). Combined with the in-flight guard in workflow.ts this
// prevents duplicate submissions without any client-side state mutation
// (the server is the source of truth; optimistic updates are forbidden).

import type {
  AllowedActionsResponse,
  ApiErrorBody,
  SolutionsResponse,
  StateResponse,
} from './types'

export class ApiError extends Error {
  code: string
  detail: Record<string, unknown>

  constructor(code: string, message: string, detail: Record<string, unknown>) {
    super(message)
    this.code = code
    this.detail = detail
  }
}

export class NetworkFailure extends Error {
  constructor(cause: unknown) {
    super(`network failure: ${String(cause)}`)
  }
}

export function mintIdempotencyKey(): string {
  if (typeof crypto !== 'undefined' && 'randomUUID' in crypto) {
    return crypto.randomUUID()
  }
  return `key-${Date.now()}-${Math.random().toString(36).slice(2)}`
}

export class WorkshopClient {
  constructor(readonly baseUrl: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown,
                           idempotencyKey?: string): Promise<T> {
    let response: Response
    try {
      response = await fetch(this.baseUrl + path, {
        method,
        headers: {
          'Content-Type': 'application/json',
          ...(idempotencyKey ? { 'X-Idempotency-Key': idempotencyKey } : {}),
        },
        body: body === undefined ? undefined : JSON.stringify(body),
      })
    } catch (cause) {
      throw new NetworkFailure(cause)
    }
    if (!response.ok) {
      let parsed: ApiErrorBody | null = null
      try {
        parsed = (await response.json()) as ApiErrorBody
      } catch {
        parsed = null
      }
      if (parsed && parsed.error) {
        throw new ApiError(parsed.error.code, parsed.error.message, parsed.error.detail ?? {})
      }
      throw new ApiError(`HTTP${response.status}`, response.statusText, {})
    }
    return (await response.json()) as T
  }

  getState(): Promise<StateResponse> {
    return this.request('GET', '/api/state')
  }

  getAllowedActions(teamId: string): Promise<AllowedActionsResponse> {
    return this.request('GET', `/api/teams/${teamId}/allowed-actions`)
  }

  getPossibleSolutions(problemId: string): Promise<SolutionsResponse> {
    return this.request('GET', `/api/problems/${problemId}/possible-solutions`)
  }

  getOntology(): Promise<string> {
    return fetch(this.baseUrl + '/api/ontology/export').then((r) => r.text())
  }

  inscribe(body: { name: string; last_name: string; institution: string },
           key: string): Promise<{ actor: string; team: string }> {
    return this.request('POST', '/api/actors', body, key)
  }

  selectActivity(teamId: string, activity: string, key: string): Promise<unknown> {
    return this.request('POST', `/api/teams/${teamId}/activity-selection`, { activity }, key)
  }

  addIdea(teamId: string, author: string, description: string,
          key: string): Promise<{ idea: string }> {
    return this.request('POST', `/api/teams/${teamId}/ideas`, { author, description }, key)
  }

  selectMethod(teamId: string, ccm: string, key: string): Promise<unknown> {
    return this.request('POST', `/api/teams/${teamId}/method-selection`, { ccm }, key)
  }

  createCard(teamId: string, card: Record<string, unknown>, key: string): Promise<{ card: string }> {
    return this.request('POST', `/api/teams/${teamId}/idea-cards`, card, key)
  }

  improveCard(teamId: string, cardId: string, updates: Record<string, unknown>,
              key: string): Promise<unknown> {
    return this.request('PUT', `/api/teams/${teamId}/idea-cards/${cardId}`, updates, key)
  }

  evaluate(evaluatorTeam: string, card: string, score: number, key: string): Promise<unknown> {
    return this.request('POST', '/api/evaluations',
                        { evaluator_team: evaluatorTeam, card, score }, key)
  }

  submit(teamId: string, key: string): Promise<unknown> {
    return this.request('POST', `/api/teams/${teamId}/submit`, undefined, key)
  }
}
