// Contract tests: the client renders exactly the allowed actions for the
// recorded role-phase sessions, and staff screens carry their dashboards.

import { readFileSync } from 'node:fs'
import { join } from 'node:path'
import { describe, expect, it } from 'vitest'

import { buildSession } from '../src/session'
import { renderWorkflow, actionsFor } from '../src/workflow'
import type { SessionView } from '../src/types'

const FIXTURES = join(__dirname, 'fixtures')

interface SessionFixture {
  name: string
  identity: { actorId: string; role: string; teamId: string | null }
  state: SessionView['state']
  allowed: SessionView['allowed']
  expected_actions: string[]
  expected_screen: string
}

function loadFixture(name: string): SessionFixture {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), 'utf-8'))
}

function sessionOf(fixture: SessionFixture): SessionView {
  return buildSession(
    {
      actorId: fixture.identity.actorId,
      role: fixture.identity.role as SessionView['role'],
      teamId: fixture.identity.teamId,
    },
    fixture.state,
    fixture.allowed,
  )
}

const SESSION_FIXTURES = [
  'solver-inscription',
  'solver-divergence',
  'solver-compare',
  'organizer-dashboard',
  'manager-results',
]

describe('recorded sessions render exactly the allowed actions', () => {
  for (const name of SESSION_FIXTURES) {
    it(name, () => {
      const fixture = loadFixture(name)
      const screen = renderWorkflow(sessionOf(fixture))
      const rendered = screen.actions.map((a) => a.activity)
      expect(rendered).toEqual(fixture.expected_actions)
      expect(screen.screen).toBe(fixture.expected_screen)
    })
  }

  it('never invents an action missing from allowed_actions', () => {
    for (const name of SESSION_FIXTURES) {
      const fixture = loadFixture(name)
      const session = sessionOf(fixture)
      const allowed = new Set(session.allowedActions)
      for (const action of renderWorkflow(session).actions) {
        expect(allowed.has(action.activity)).toBe(true)
      }
    }
  })
})

describe('fresh solver session', () => {
  it('shows only the registration step', () => {
    const fixture = loadFixture('solver-inscription')
    const screen = renderWorkflow(sessionOf(fixture))
    expect(screen.actions).toHaveLength(1)
    expect(screen.actions[0].activity).toBe('RequirementsInscription')
    expect(screen.actions[0].command).toBe('inscribe')
    expect(screen.dashboard).toBeNull()
  })
})

describe('organizer session', () => {
  it('sees the gate dashboard and zero action buttons', () => {
    const fixture = loadFixture('organizer-dashboard')
    const screen = renderWorkflow(sessionOf(fixture))
    expect(screen.actions).toEqual([])
    expect(screen.dashboard).not.toBeNull()
    expect(screen.dashboard!.length).toBe(6)
    const services = screen.dashboard!.map((g) => g.service)
    expect(services).toContain('Sending Possible Solutions')
  })
})

describe('manager session at awards', () => {
  it('shows the ranked possible-solutions board', () => {
    const fixture = loadFixture('manager-results')
    const screen = renderWorkflow(sessionOf(fixture))
    expect(screen.showSolutionsBoard).toBe(true)
    expect(screen.actions).toEqual([])
  })

  it('recorded board is ranked 1..k with descending scores', () => {
    const board = JSON.parse(
      readFileSync(join(FIXTURES, 'solutions-prob_1.json'), 'utf-8'),
    )
    expect(board.ranked).toBe(true)
    const ranks = board.solutions.map((s: { rank: number }) => s.rank)
    expect(ranks).toEqual([1, 2])
    const scores = board.solutions.map((s: { combined_score: number }) => s.combined_score)
    expect(scores[0]).toBeGreaterThanOrEqual(scores[1])
  })
})

describe('team board notices', () => {
  it('submitted team sees awaiting-ranking only until results exist', () => {
    const fixture = loadFixture('manager-results')
    // borrow the completed state but view it as the first team's solver
    const solverView = buildSession(
      { actorId: 'act_0001', role: 'SolverParticipant', teamId: 'team_0001' },
      fixture.state,
      { team: 'team_0001', phase: fixture.state.phase, actions: [], members: {}, commands: [] },
    )
    const screen = renderWorkflow(solverView)
    expect(screen.notices.map((n) => n.text)).not.toContain('Cards submitted - awaiting ranking.')
    expect(screen.showSolutionsBoard).toBe(true)
  })

  it('submitted team awaits ranking while no problem is ranked yet', () => {
    const fixture = loadFixture('manager-results')
    const state = structuredClone(fixture.state)
    state.problems = state.problems.map((p) => ({ ...p, ranked: false }))
    const solverView = buildSession(
      { actorId: 'act_0001', role: 'SolverParticipant', teamId: 'team_0001' },
      state,
      { team: 'team_0001', phase: state.phase, actions: [], members: {}, commands: [] },
    )
    const screen = renderWorkflow(solverView)
    expect(screen.notices.map((n) => n.text)).toContain('Cards submitted - awaiting ranking.')
    expect(screen.actions).toEqual([])
  })
})

describe('actionsFor preserves server order', () => {
  it('keeps the allowed-actions order verbatim', () => {
    const fixture = loadFixture('solver-compare')
    const session = sessionOf(fixture)
    expect(actionsFor(session).map((a) => a.activity)).toEqual(session.allowedActions)
  })
})
