// Entry point: sign-in panel, then a polling loop that re-fetches
// /api/state (and allowed actions) every few seconds and repaints the
// phase screen. The server is the single source of truth.

import { ApiError, NetworkFailure, WorkshopClient, mintIdempotencyKey } from './api'
import { inscriptionReady } from './forms'
import { renderSession, } from './render'
import { fetchSession, type Identity } from './session'
import type { RoleKind } from './types'

const POLL_INTERVAL_MS = 3000

const root = document.getElementById('app')!
let client = new WorkshopClient(localStorage.getItem('ccideas.base') ?? '')
let identity: Identity | null = restoreIdentity()
let timer: number | undefined

function restoreIdentity(): Identity | null {
  const raw = localStorage.getItem('ccideas.identity')
  return raw ? (JSON.parse(raw) as Identity) : null
}

function storeIdentity(value: Identity): void {
  localStorage.setItem('ccideas.identity', JSON.stringify(value))
}

function signInPanel(): void {
  root.innerHTML = `
    <section class="sign-in">
      <h2>48H workshop</h2>
      <p>Server: <input id="base" placeholder="http://127.0.0.1:8000" /></p>
      <fieldset>
        <legend>Solver participant inscription</legend>
        <input id="name" placeholder="name" />
        <input id="last" placeholder="last name" />
        <input id="inst" placeholder="institution" />
        <button id="inscribe" disabled>Register</button>
      </fieldset>
      <fieldset>
        <legend>Staff sign-in (read-only dashboards)</legend>
        <select id="staff-role">
          <option value="Organizer">Organizer</option>
          <option value="IndustrialManager">Industrial manager</option>
          <option value="CreativeExpert">Creative expert</option>
        </select>
        <button id="staff-go">Open dashboard</button>
      </fieldset>
      <div id="sign-in-notice" class="notices"></div>
    </section>`

  const base = document.getElementById('base') as HTMLInputElement
  base.value = localStorage.getItem('ccideas.base') ?? ''
  base.onchange = () => {
    localStorage.setItem('ccideas.base', base.value)
    client = new WorkshopClient(base.value)
  }

  const name = document.getElementById('name') as HTMLInputElement
  const last = document.getElementById('last') as HTMLInputElement
  const inst = document.getElementById('inst') as HTMLInputElement
  const button = document.getElementById('inscribe') as HTMLButtonElement
  const notice = document.getElementById('sign-in-notice')!

  const revalidate = () => {
    button.disabled = !inscriptionReady({
      name: name.value, last_name: last.value, institution: inst.value,
    })
  }
  for (const input of [name, last, inst]) input.oninput = revalidate

  button.onclick = async () => {
    notice.textContent = ''
    try {
      const result = await client.inscribe(
        { name: name.value, last_name: last.value, institution: inst.value },
        mintIdempotencyKey(),
      )
      identity = { actorId: result.actor, role: 'SolverParticipant', teamId: result.team }
      storeIdentity(identity)
      startPolling()
    } catch (error) {
      if (error instanceof ApiError) {
        notice.textContent = `${error.code}: ${error.message}`
      } else if (error instanceof NetworkFailure) {
        notice.textContent = 'Network failure - is the workshop service running?'
      } else {
        notice.textContent = String(error)
      }
    }
  }

  const staffRole = document.getElementById('staff-role') as HTMLSelectElement
  const staffGo = document.getElementById('staff-go') as HTMLButtonElement
  staffGo.onclick = () => {
    identity = { actorId: 'staff', role: staffRole.value as RoleKind, teamId: null }
    storeIdentity(identity)
    startPolling()
  }
}

async function refresh(): Promise<void> {
  if (!identity) return
  try {
    const session = await fetchSession(client, identity)
    renderSession(root, client, session, () => void refresh())
  } catch (error) {
    const banner = document.createElement('div')
    banner.className = 'notice notice-error'
    banner.textContent = error instanceof NetworkFailure
      ? 'Lost contact with the workshop service - retrying...'
      : String(error)
    root.prepend(banner)
  }
}

function startPolling(): void {
  if (timer !== undefined) window.clearInterval(timer)
  void refresh()
  timer = window.setInterval(() => void refresh(), POLL_INTERVAL_MS)
}

if (identity) {
  startPolling()
} else {
  signInPanel()
}
