/** DOM + canvas rendering for the adversary console. */

import type { LayoutGraph } from './layout.js';
import type { UISessionView } from './state.js';

// role palette matching the toolkit's DOT export
export const ROLE_COLORS: Record<string, string> = {
  'group-element': '#9ecae1',
  'edge-gadget-internal': '#d9d9d9',
  'gadget-path': '#fff7bc',
  'reveal-x': '#fb6a4a',
  'reveal-y': '#74c476',
  anchor: '#fdae6b',
  'gadget-blob': '#bcbddc',
  plain: '#f0f0f0',
};

export function drawLayout(
  canvas: HTMLCanvasElement,
  layout: LayoutGraph,
  highlight: Set<string> = new Set(),
): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  const w = canvas.width;
  const h = canvas.height;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = 'rgba(60,60,80,0.25)';
  const byId = new Map(layout.nodes.map((n) => [n.id, n]));
  for (const e of layout.edges) {
    const a = byId.get(e.source);
    const b = byId.get(e.target);
    if (!a || !b) continue;
    ctx.lineWidth = Math.min(3, 0.5 + Math.log2(1 + e.weight) * 0.5);
    ctx.beginPath();
    ctx.moveTo(a.x * w, a.y * h);
    ctx.lineTo(b.x * w, b.y * h);
    ctx.stroke();
  }
  for (const n of layout.nodes) {
    const r = Math.min(14, 2.5 + Math.sqrt(n.weight));
    ctx.beginPath();
    ctx.arc(n.x * w, n.y * h, r, 0, 2 * Math.PI);
    ctx.fillStyle = ROLE_COLORS[n.role] ?? ROLE_COLORS.plain;
    ctx.fill();
    ctx.lineWidth = highlight.has(n.id) ? 3 : 1;
    ctx.strokeStyle = highlight.has(n.id) ? '#e31a1c' : 'rgba(40,40,60,0.7)';
    ctx.stroke();
  }
}

/** Header panel: session, round counter, current Aut order. */
export function renderStatusPanel(el: HTMLElement, view: UISessionView): void {
  const verified = view.aut.verified ? ' &#10003;' : view.aut.order === null ? '' : ' (unverified)';
  const order = view.aut.order === null ? '?' : String(view.aut.order);
  const label = view.roundsPlayed === 0 ? 'Aut(G<sub>0</sub>)' : `Aut(G<sub>${view.roundsPlayed}</sub>)`;
  el.innerHTML = `
    <span class="session">session ${view.sessionId.slice(0, 8)}</span>
    <span class="round">round ${view.roundsPlayed}/${view.rounds}</span>
    <span class="aut">${label}: order ${order}${verified}</span>
    <span class="status status-${view.status}">${view.status}</span>
  `;
}

/** Challenge buttons: one per challenge group, disabled while unusable. */
export function renderChallengeButtons(
  el: HTMLElement,
  view: UISessionView,
  enabled: boolean,
  onChallenge: (index: number) => void,
): void {
  el.textContent = '';
  view.challengeGroups.forEach((label, i) => {
    const button = document.createElement('button');
    button.className = 'challenge';
    button.textContent = `Γ${i + 1} = ${label}`;
    button.disabled = !enabled;
    button.addEventListener('click', () => onChallenge(i + 1));
    el.appendChild(button);
  });
}

/** Per-round log; one line per server-confirmed round. */
export function renderLog(el: HTMLElement, view: UISessionView): void {
  el.textContent = '';
  for (const entry of view.log) {
    const li = document.createElement('li');
    const badge = entry.verified ? '✓ verified' : entry.partial ? 'order-only' : 'unverified';
    li.textContent =
      `round ${entry.round}: challenged ${entry.groupLabel}, ` +
      `deleted vertex ${entry.deletedVertex}, Aut order ${entry.autOrder ?? '?'} [${badge}]`;
    li.className = entry.verified ? 'log-ok' : 'log-warn';
    el.appendChild(li);
  }
}

export function renderConnectionBanner(
  el: HTMLElement,
  view: UISessionView,
  onRetry: () => void,
): void {
  el.textContent = '';
  if (!view.connectionLost) {
    el.hidden = true;
    return;
  }
  el.hidden = false;
  const span = document.createElement('span');
  span.textContent = 'connection lost - transcript is read-only';
  const retry = document.createElement('button');
  retry.textContent = 'retry';
  retry.addEventListener('click', onRetry);
  el.append(span, retry);
}
