// Shapes of the workshop-service API bodies the client consumes.

export type RoleKind =
  | 'Organizer'
  | 'SolverParticipant'
  | 'CreativeExpert'
  | 'TechnicalExpert'
  | 'IndustrialManager'

export interface MemberInfo {
  id: string
  name: string
  last_name: string
}

export interface CardInfo {
  id: string
  title: string
  improved: boolean
}

export interface TeamInfo {
  id: string
  name: string
  problem: string
  members: MemberInfo[]
  cards: CardInfo[]
  submitted: boolean
}

export interface ProblemInfo {
  id: string
  statement: string
  ranked: boolean
}

export interface GateRow {
  service: string
  precondition: string
  postcondition: string
  satisfied: boolean
}

export interface StateResponse {
  configured: boolean
  phase: string
  completed: boolean
  event?: string
  counts: Record<string, number>
  gates: GateRow[]
  teams: TeamInfo[]
  problems: ProblemInfo[]
}

export interface AllowedActionsResponse {
  team: string
  phase: string
  actions: string[]
  members: Record<string, string[]>
  commands: string[]
}

export interface SolutionEntry {
  rank: number
  card: string
  combined_score: number
  title: string
  team: string
}

export interface SolutionsResponse {
  problem: string
  statement: string
  ranked: boolean
  solutions: SolutionEntry[]
}

export interface ApiErrorBody {
  error: {
    code: string
    message: string
    detail: Record<string, unknown>
  }
}

// The view a signed-in participant (or staff member) navigates by.
export interface SessionView {
  actorId: string
  role: RoleKind
  teamId: string | null
  phase: string
  allowedActions: string[]
  state: StateResponse
  allowed: AllowedActionsResponse | null
}
