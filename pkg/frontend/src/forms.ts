// Client-side form validation mirroring the engine's field rules.
// The server stays authoritative; these checks only gate the buttons.

export interface CardFormData {
  title: string
  description: string
  scenery: string
  priority_client: string
  advantage: string
  risk: string
  source_ideas: string[]
}

export function emptyCardForm(): CardFormData {
  return {
    title: '', description: '', scenery: '',
    priority_client: '', advantage: '', risk: '', source_ideas: [],
  }
}

// Submit stays disabled until title and description are non-empty and
// at least one source idea is picked; the other four fields may be blank.
export function cardFormReady(form: CardFormData): boolean {
  return form.title.trim().length > 0 &&
    form.description.trim().length > 0 &&
    form.source_ideas.length > 0
}

export function cardFormProblems(form: CardFormData): string[] {
  const problems: string[] = []
  if (!form.title.trim()) problems.push('title is required')
  if (!form.description.trim()) problems.push('description is required')
  if (form.source_ideas.length === 0) problems.push('pick at least one source idea')
  return problems
}

export interface InscriptionFormData {
  name: string
  last_name: string
  institution: string
}

export function inscriptionReady(form: InscriptionFormData): boolean {
  return [form.name, form.last_name, form.institution]
    .every((field) => field.trim().length > 0)
}

export function scoreValid(score: number): boolean {
  return Number.isInteger(score) && score >= 0 && score <= 10
}
