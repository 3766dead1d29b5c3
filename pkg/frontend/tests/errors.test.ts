// Error surfacing: recorded server rejections must appear inline with
// their named conditions, and network failures must offer a retry that
// reuses the same idempotency key without duplicating the submission.

import { readFileSync } from 'node:fs'
import { join } from 'node:path'
import { afterEach, describe, expect, it, vi } from 'vitest'

import { ApiError, WorkshopClient, mintIdempotencyKey } from '../src/api'
import { explainError, submitAction } from '../src/workflow'
import type { ApiErrorBody } from '../src/types'

const FIXTURES = join(__dirname, 'fixtures')
const recorded: Record<string, ApiErrorBody> = JSON.parse(
  readFileSync(join(FIXTURES, 'errors.json'), 'utf-8'),
)

function apiErrorFrom(body: ApiErrorBody): ApiError {
  return new ApiError(body.error.code, body.error.message, body.error.detail)
}

afterEach(() => {
  vi.unstubAllGlobals()
})

describe('recorded error bodies surface inline', () => {
  it('gate unsatisfied names the condition and requirement', () => {
    const body = recorded.gate_unsatisfied
    expect(body.error.code).toBe('GateUnsatisfied')
    const notice = explainError(apiErrorFrom(body))
    expect(notice.kind).toBe('error')
    expect(notice.text).toContain('Idea Cards per group')
    expect(notice.text).toContain('=2')
  })

  it('protocol violation names the expected actions', () => {
    const body = recorded.protocol_violation
    expect(body.error.code).toBe('ProtocolViolation')
    const notice = explainError(apiErrorFrom(body))
    expect(notice.text).toContain('expected one of')
    const expected = body.error.detail.expected as string[]
    for (const activity of expected) {
      expect(notice.text).toContain(activity)
    }
  })
})

function stubFetchOnce(status: number, body: unknown) {
  const fn = vi.fn().mockResolvedValue({
    ok: status < 400,
    status,
    statusText: String(status),
    json: async () => body,
  })
  vi.stubGlobal('fetch', fn)
  return fn
}

describe('submitAction against a stubbed transport', () => {
  it('server rejection becomes a notice, not an exception', async () => {
    stubFetchOnce(409, recorded.gate_unsatisfied)
    const client = new WorkshopClient('http://fixture')
    const outcome = await submitAction(mintIdempotencyKey(), () =>
      client.submit('team_0001', 'key-1'))
    expect(outcome.ok).toBe(false)
    expect(outcome.retryable).toBe(false)
    expect(outcome.notice!.text).toContain('Idea Cards per group')
  })

  it('network failure is retryable and the retry reuses the key', async () => {
    const seenKeys: (string | undefined)[] = []
    let calls = 0
    const fetchStub = vi.fn().mockImplementation(async (_url, init) => {
      const headers = (init?.headers ?? {}) as Record<string, string>
      seenKeys.push(headers['X-Idempotency-Key'])
      calls += 1
      if (calls === 1) {
        throw new TypeError('connection refused')
      }
      return { ok: true, status: 200, statusText: 'OK', json: async () => ({ ok: true }) }
    })
    vi.stubGlobal('fetch', fetchStub)

    const client = new WorkshopClient('http://fixture')
    const formKey = mintIdempotencyKey()
    const perform = () => client.submit('team_0001', formKey)

    const first = await submitAction(formKey, perform)
    expect(first.ok).toBe(false)
    expect(first.retryable).toBe(true)
    expect(first.notice!.text).toContain('Retry')

    const second = await submitAction(formKey, perform)
    expect(second.ok).toBe(true)
    expect(seenKeys).toEqual([formKey, formKey])
    expect(fetchStub).toHaveBeenCalledTimes(2)
  })

  it('a key already in flight is not submitted twice', async () => {
    let resolveFirst: (value: unknown) => void = () => {}
    const fetchStub = vi.fn().mockImplementation(
      () => new Promise((resolve) => { resolveFirst = resolve }),
    )
    vi.stubGlobal('fetch', fetchStub)

    const client = new WorkshopClient('http://fixture')
    const key = mintIdempotencyKey()
    const perform = () => client.submit('team_0001', key)

    const firstPromise = submitAction(key, perform)
    const blocked = await submitAction(key, perform)
    expect(blocked.ok).toBe(false)
    expect(blocked.notice).toBeNull()
    expect(fetchStub).toHaveBeenCalledTimes(1)

    resolveFirst({ ok: true, status: 200, statusText: 'OK', json: async () => ({}) })
    const first = await firstPromise
    expect(first.ok).toBe(true)
  })
})
