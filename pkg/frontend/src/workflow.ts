// Screen computation: one screen per workshop phase, driven entirely by
// the server-reported session. Pure functions - the DOM layer in
// render.ts only paints what is computed here, so the UI-legality
// invariant (never render an action button absent from allowed_actions)
// holds by construction and is checked in the contract tests.

import { ApiError, NetworkFailure } from './api'
import type { GateRow, SessionView, TeamInfo } from './types'

export interface ActionButton {
  activity: string
  command: string
  label: string
}

export interface Notice {
  kind: 'error' | 'info'
  text: string
}

export interface ScreenState {
  screen: string
  title: string
  actions: ActionButton[]
  notices: Notice[]
  dashboard: GateRow[] | null
  team: TeamInfo | null
  showSolutionsBoard: boolean
}

// Activity -> client command + button label. Anything the server allows
// but this table does not know still gets a generic button.
const ACTION_TABLE: Record<string, { command: string; label: string }> = {
  RequirementsInscription: { command: 'inscribe', label: 'Register (name, last name, institution)' },
  GiveRequirements: { command: 'inscribe', label: 'Confirm registration details' },
  Assignment: { command: 'await-assignment', label: 'Receive assignment' },
  Provides: { command: 'await-assignment', label: 'Receive team and problem' },
  Offer_activity: { command: 'select-activity', label: 'Pick an offered activity' },
  SelectActivity: { command: 'select-activity', label: 'Select the activity' },
  WorkIdeas: { command: 'add-idea', label: 'Capture an idea' },
  Offer_method: { command: 'select-method', label: 'Pick an offered creative method' },
  SelectMethod: { command: 'select-method', label: 'Select the method' },
  WorkIdeaCards: { command: 'create-card', label: 'Compose an idea card' },
  Improve: { command: 'improve-card', label: 'Improve the latest card' },
  CompareIdeas: { command: 'evaluate', label: "Evaluate peers' idea cards" },
  SendingIdeaCards: { command: 'submit', label: 'Submit the two idea cards' },
  ReceivingPossibleSolutions: { command: 'view-solutions', label: 'Receive possible solutions' },
  WatchingPossibleSolutions: { command: 'view-solutions', label: 'Watch the possible solutions' },
  AwardsEnd: { command: 'view-solutions', label: 'Awards' },
}

const PHASE_TITLES: Record<string, string> = {
  SETUP: 'Workshop setup',
  INSCRIPTION: 'Inscription',
  ASSIGNMENT: 'Role and team assignment',
  DIVERGENCE: 'Divergence: individual ideas',
  CONVERGENCE: 'Convergence: idea cards',
  IMPROVE: 'Improving idea cards',
  COMPARE: 'Peer evaluation',
  SUBMISSION: 'Submission',
  RANKING: 'Semantic ranking',
  RESULTS: 'Possible solutions',
  AWARDS: 'Awards',
}

export function actionsFor(session: SessionView): ActionButton[] {
  // exactly the server-allowed activities, in the server's order
  return session.allowedActions.map((activity) => {
    const entry = ACTION_TABLE[activity]
    return {
      activity,
      command: entry ? entry.command : 'unknown',
      label: entry ? entry.label : activity,
    }
  })
}

export function teamOf(session: SessionView): TeamInfo | null {
  if (!session.teamId) return null
  return session.state.teams.find((t) => t.id === session.teamId) ?? null
}

export function renderWorkflow(session: SessionView): ScreenState {
  const notices: Notice[] = []
  const team = teamOf(session)
  const isOrganizer = session.role === 'Organizer'
  const isManager = session.role === 'IndustrialManager'
  const resultsReady = session.state.problems.some((p) => p.ranked)

  if (session.role === 'SolverParticipant' && team) {
    const submitted = team.submitted
    if (submitted && !resultsReady) {
      notices.push({ kind: 'info', text: 'Cards submitted - awaiting ranking.' })
    }
    if (team.cards.length === 2 && team.cards.every((c) => c.improved) &&
        session.phase === 'IMPROVE') {
      notices.push({ kind: 'info', text: 'Both cards improved - evaluation opens next.' })
    }
  }

  return {
    screen: session.phase.toLowerCase(),
    title: PHASE_TITLES[session.phase] ?? session.phase,
    actions: session.role === 'SolverParticipant' ? actionsFor(session) : [],
    notices,
    dashboard: isOrganizer ? session.state.gates : null,
    team,
    showSolutionsBoard: (isManager || resultsReady) &&
      ['RANKING', 'RESULTS', 'AWARDS'].includes(session.phase),
  }
}

export function explainError(error: unknown): Notice {
  if (error instanceof ApiError) {
    if (error.code === 'ProtocolViolation') {
      const expected = (error.detail.expected as string[] | undefined) ?? []
      return {
        kind: 'error',
        text: `Protocol violation: expected one of ${expected.join(', ') || '(nothing)'}.`,
      }
    }
    if (error.code === 'GateUnsatisfied') {
      const condition = String(error.detail.condition ?? '')
      const requirement = String(error.detail.requirement ?? '')
      const service = String(error.detail.service ?? '')
      return {
        kind: 'error',
        text: `Gate unsatisfied: ${condition} ${requirement} (${service}).`.replace('  ', ' '),
      }
    }
    return { kind: 'error', text: `${error.code}: ${error.message}` }
  }
  if (error instanceof NetworkFailure) {
    return { kind: 'error', text: 'Network failure - nothing was submitted. Retry?' }
  }
  return { kind: 'error', text: String(error) }
}

export interface SubmitOutcome {
  ok: boolean
  notice: Notice | null
  retryable: boolean
}

// One in-flight guard per form key: a second submit with the same key is
// ignored while the first is pending, and a retry after a network
// failure reuses the key.
const inFlight = new Set<string>()

export async function submitAction(
  key: string,
  perform: () => Promise<unknown>,
): Promise<SubmitOutcome> {
  if (inFlight.has(key)) {
    return { ok: false, notice: null, retryable: false }
  }
  inFlight.add(key)
  try {
    await perform()
    return { ok: true, notice: null, retryable: false }
  } catch (error) {
    const retryable = error instanceof NetworkFailure
    return { ok: false, notice: explainError(error), retryable }
  } finally {
    inFlight.delete(key)
  }
}
