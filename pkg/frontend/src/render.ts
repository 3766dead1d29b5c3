// DOM layer: paints the ScreenState computed by workflow.ts. All state
// mutations go through the API client; after every successful action the
// session is re-fetched (no optimistic updates).

import { WorkshopClient, mintIdempotencyKey } from './api'
import { cardFormProblems, cardFormReady, scoreValid } from './forms'
import type { SessionView, SolutionsResponse } from './types'
import { renderWorkflow, submitAction, explainError, type ActionButton, type Notice } from './workflow'

type Refresh = () => void

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className = '', text = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag)
  if (className) node.className = className
  if (text) node.textContent = text
  return node
}

function noticeNode(notice: Notice): HTMLElement {
  return el('div', `notice notice-${notice.kind}`, notice.text)
}

export function renderSession(
  root: HTMLElement, client: WorkshopClient, session: SessionView, refresh: Refresh,
): void {
  root.innerHTML = ''
  const screen = renderWorkflow(session)

  const header = el('header', 'screen-header')
  header.appendChild(el('h2', '', screen.title))
  header.appendChild(el('span', 'phase-badge', session.phase))
  root.appendChild(header)

  const noticeBox = el('div', 'notices')
  for (const notice of screen.notices) noticeBox.appendChild(noticeNode(notice))
  root.appendChild(noticeBox)

  if (screen.dashboard) {
    root.appendChild(renderGateDashboard(screen.dashboard))
  }
  if (screen.team) {
    root.appendChild(renderTeamBoard(session))
  }
  if (screen.actions.length > 0) {
    root.appendChild(renderActions(screen.actions, root, client, session, refresh, noticeBox))
  }
  if (screen.showSolutionsBoard) {
    const board = el('section', 'solutions-board')
    board.appendChild(el('h3', '', 'Possible solutions'))
    root.appendChild(board)
    void fillSolutionsBoard(board, client, session)
  }
}

function renderGateDashboard(gates: import('./types').GateRow[]): HTMLElement {
  const section = el('section', 'gate-dashboard')
  section.appendChild(el('h3', '', 'Service gates'))
  const table = el('table')
  const head = el('tr')
  for (const label of ['service', 'post-condition', 'satisfied']) {
    head.appendChild(el('th', '', label))
  }
  table.appendChild(head)
  for (const row of gates) {
    const tr = el('tr', row.satisfied ? 'gate-ok' : 'gate-pending')
    tr.appendChild(el('td', '', row.service))
    tr.appendChild(el('td', '', row.postcondition))
    tr.appendChild(el('td', '', row.satisfied ? 'yes' : 'not yet'))
    table.appendChild(tr)
  }
  section.appendChild(table)
  return section
}

function renderTeamBoard(session: SessionView): HTMLElement {
  const team = session.state.teams.find((t) => t.id === session.teamId)!
  const section = el('section', 'team-board')
  section.appendChild(el('h3', '', `${team.name} (${team.id})`))
  const cards = el('div', 'card-list')
  for (const card of team.cards) {
    const node = el('div', card.improved ? 'card improved' : 'card')
    node.appendChild(el('strong', '', card.title))
    node.appendChild(el('small', '', card.improved ? ' improved' : ' awaiting improvement'))
    cards.appendChild(node)
  }
  if (team.cards.length === 0) cards.appendChild(el('em', '', 'no idea cards yet'))
  section.appendChild(cards)
  if (team.submitted) section.appendChild(el('p', 'submitted', 'cards submitted'))
  return section
}

async function fillSolutionsBoard(
  board: HTMLElement, client: WorkshopClient, session: SessionView,
): Promise<void> {
  for (const problem of session.state.problems) {
    let data: SolutionsResponse
    try {
      data = await client.getPossibleSolutions(problem.id)
    } catch (error) {
      board.appendChild(noticeNode(explainError(error)))
      continue
    }
    const block = el('div', 'problem-block')
    block.appendChild(el('h4', '', data.statement))
    if (!data.ranked) {
      block.appendChild(el('em', '', 'awaiting ranking'))
    }
    for (const solution of data.solutions) {
      block.appendChild(el(
        'div', 'solution-row',
        `#${solution.rank} ${solution.title} - team ${solution.team} ` +
        `(score ${solution.combined_score.toFixed(4)})`,
      ))
    }
    board.appendChild(block)
  }
}

function renderActions(
  actions: ActionButton[], root: HTMLElement, client: WorkshopClient,
  session: SessionView, refresh: Refresh, noticeBox: HTMLElement,
): HTMLElement {
  const section = el('section', 'actions')
  section.appendChild(el('h3', '', 'Available actions'))
  const seen = new Set<string>()
  for (const action of actions) {
    if (seen.has(action.command)) continue
    seen.add(action.command)
    const button = el('button', 'action-button', action.label)
    button.dataset.activity = action.activity
    button.onclick = () => openForm(action, section, client, session, refresh, noticeBox)
    section.appendChild(button)
  }
  return section
}

function openForm(
  action: ActionButton, host: HTMLElement, client: WorkshopClient,
  session: SessionView, refresh: Refresh, noticeBox: HTMLElement,
): void {
  const existing = host.querySelector('.action-form')
  if (existing) existing.remove()
  const form = el('div', 'action-form')
  const key = mintIdempotencyKey()
  const teamId = session.teamId ?? ''

  const run = (perform: () => Promise<unknown>) => {
    void submitAction(key, perform).then((outcome) => {
      if (outcome.ok) {
        refresh()
      } else if (outcome.notice) {
        noticeBox.appendChild(noticeNode(outcome.notice))
        if (outcome.retryable) {
          const retry = el('button', 'retry-button', 'Retry')
          retry.onclick = () => { retry.remove(); run(perform) }
          noticeBox.appendChild(retry)
        }
      }
    })
  }

  switch (action.command) {
    case 'select-activity':
    case 'select-method': {
      const input = el('input')
      input.placeholder = action.command === 'select-activity'
        ? 'activity name (e.g. Brainstorming)' : 'method name (e.g. Six hats of thinking)'
      const go = el('button', '', 'Select')
      go.onclick = () => run(() => action.command === 'select-activity'
        ? client.selectActivity(teamId, input.value, key)
        : client.selectMethod(teamId, input.value, key))
      form.append(input, go)
      break
    }
    case 'add-idea': {
      const input = el('textarea')
      input.placeholder = 'describe your idea'
      const go = el('button', '', 'Capture idea')
      go.onclick = () => run(() => client.addIdea(teamId, session.actorId, input.value, key))
      form.append(input, go)
      break
    }
    case 'create-card': {
      form.appendChild(renderCardForm(client, teamId, key, run))
      break
    }
    case 'improve-card': {
      const team = session.state.teams.find((t) => t.id === teamId)
      const pending = team?.cards.find((c) => !c.improved)
      const input = el('textarea')
      input.placeholder = 'improved description'
      const go = el('button', '', `Improve ${pending ? pending.title : 'latest card'}`)
      go.onclick = () => {
        if (!pending) return
        run(() => client.improveCard(teamId, pending.id, { description: input.value }, key))
      }
      form.append(input, go)
      break
    }
    case 'evaluate': {
      // only same-problem peer cards are offered; own cards are never listed
      const myProblem = session.state.teams.find((t) => t.id === teamId)?.problem
      const select = el('select')
      for (const team of session.state.teams) {
        if (team.id === teamId || team.problem !== myProblem) continue
        for (const card of team.cards) {
          const option = el('option', '', `${card.title} (${team.name})`)
          option.value = card.id
          select.appendChild(option)
        }
      }
      const scoreInput = el('input')
      scoreInput.type = 'number'
      scoreInput.min = '0'
      scoreInput.max = '10'
      const go = el('button', '', 'Score 0..10')
      go.onclick = () => {
        const score = Number(scoreInput.value)
        if (!scoreValid(score) || !select.value) return
        run(() => client.evaluate(teamId, select.value, score, key))
      }
      form.append(select, scoreInput, go)
      break
    }
    case 'submit': {
      const go = el('button', 'danger', 'Send both idea cards')
      go.onclick = () => run(() => client.submit(teamId, key))
      form.appendChild(go)
      break
    }
    default: {
      form.appendChild(el('em', '', 'This step completes automatically.'))
    }
  }
  host.appendChild(form)
}

function renderCardForm(
  client: WorkshopClient, teamId: string, key: string,
  run: (perform: () => Promise<unknown>) => void,
): HTMLElement {
  const wrap = el('div', 'card-form')
  const fields: Record<string, HTMLInputElement | HTMLTextAreaElement> = {}
  for (const [name, required] of [
    ['title', true], ['description', true], ['scenery', false],
    ['priority_client', false], ['advantage', false], ['risk', false],
  ] as [string, boolean][]) {
    const label = el('label', '', name.replace('_', ' ') + (required ? ' *' : ''))
    const input = name === 'description' ? el('textarea') : el('input')
    fields[name] = input
    label.appendChild(input)
    wrap.appendChild(label)
  }
  const ideasInput = el('input')
  ideasInput.placeholder = 'source idea ids, comma-separated *'
  wrap.appendChild(ideasInput)
  const problems = el('div', 'form-problems')
  wrap.appendChild(problems)
  const go = el('button', '', 'Create idea card')
  go.disabled = true
  const formData = () => ({
    title: fields.title.value, description: fields.description.value,
    scenery: fields.scenery.value, priority_client: fields.priority_client.value,
    advantage: fields.advantage.value, risk: fields.risk.value,
    source_ideas: ideasInput.value.split(',').map((s) => s.trim()).filter(Boolean),
  })
  const revalidate = () => {
    const data = formData()
    go.disabled = !cardFormReady(data)
    problems.textContent = cardFormProblems(data).join('; ')
  }
  wrap.addEventListener('input', revalidate)
  revalidate()
  go.onclick = () => run(() => client.createCard(teamId, formData(), key))
  wrap.appendChild(go)
  return wrap
}
