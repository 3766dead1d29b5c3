// Session assembly: who am I, which team, what may we do next.
//
// The allowed-actions list mirrors GET /api/teams/{id}/allowed-actions
// exactly; staff roles (organizer, experts, industrial manager) have no
// team and therefore an empty action list - their screens are read-only
// dashboards.

import { WorkshopClient } from './api'
import type { RoleKind, SessionView, StateResponse } from './types'

export interface Identity {
  actorId: string
  role: RoleKind
  teamId: string | null
}

export function findTeamOfActor(state: StateResponse, actorId: string): string | null {
  for (const team of state.teams) {
    if (team.members.some((m) => m.id === actorId)) {
      return team.id
    }
  }
  return null
}

export async function fetchSession(client: WorkshopClient, identity: Identity): Promise<SessionView> {
  const state = await client.getState()
  const teamId = identity.teamId ?? findTeamOfActor(state, identity.actorId)
  let allowed = null
  if (identity.role === 'SolverParticipant' && teamId) {
    allowed = await client.getAllowedActions(teamId)
  }
  return buildSession(identity, state, allowed)
}

export function buildSession(
  identity: Identity,
  state: StateResponse,
  allowed: SessionView['allowed'],
): SessionView {
  return {
    actorId: identity.actorId,
    role: identity.role,
    teamId: identity.teamId ?? findTeamOfActor(state, identity.actorId),
    phase: state.phase,
    allowedActions: allowed ? [...allowed.actions] : [],
    state,
    allowed,
  }
}
