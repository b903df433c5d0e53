/** Entry point: config form, session lifecycle, animation loop. */

import { HttpApiClient } from './api.js';
import { buildLayoutGraph, stepLayout, type LayoutGraph } from './layout.js';
import {
  drawLayout,
  renderChallengeButtons,
  renderConnectionBanner,
  renderLog,
  renderStatusPanel,
} from './render.js';
import { SessionController } from './state.js';

const GROUP_CHIPS = ['trivial', 'C2', 'C3', 'C4', 'C2xC2', 'C5', 'C6', 'S3', 'D4', 'D5'];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setupConfigForm(onCreate: (groups: string[], rounds: number) => void): void {
  const chipBox = el<HTMLDivElement>('group-chips');
  const selected = el<HTMLInputElement>('group-list');
  for (const spec of GROUP_CHIPS) {
    const chip = document.createElement('button');
    chip.type = 'button';
    chip.className = 'chip';
    chip.textContent = spec;
    chip.addEventListener('click', () => {
      selected.value = selected.value ? `${selected.value},${spec}` : spec;
    });
    chipBox.appendChild(chip);
  }
  el<HTMLFormElement>('config-form').addEventListener('submit', (event) => {
    event.preventDefault();
    const groups = selected.value.split(',').map((s) => s.trim()).filter(Boolean);
    const rounds = Number(el<HTMLInputElement>('rounds').value);
    onCreate(groups, rounds);
  });
}

function main(): void {
  const api = new HttpApiClient(
    (document.body.dataset.apiBase ?? 'http://127.0.0.1:8571').replace(/\/$/, ''),
  );
  const controller = new SessionController(api);
  const canvas = el<HTMLCanvasElement>('graph-canvas');
  let layout: LayoutGraph | null = null;
  let highlight = new Set<string>();
  let settling = 0;

  const redraw = () => {
    const view = controller.current();
    renderStatusPanel(el('status-panel'), view);
    renderChallengeButtons(el('challenge-buttons'), view, controller.canChallenge(), challenge);
    renderLog(el('round-log'), view);
    renderConnectionBanner(el('connection-banner'), view, retry);
    el('collapsed-note').hidden = !(layout && layout.collapsed);
  };

  const rebuildLayout = () => {
    layout = buildLayoutGraph(controller.current().graph);
    settling = 300;
  };

  const tick = () => {
    if (layout && settling > 0) {
      stepLayout(layout);
      settling -= 1;
      drawLayout(canvas, layout, highlight);
    }
    requestAnimationFrame(tick);
  };

  async function challenge(index: number): Promise<void> {
    redraw(); // disable buttons while the request is pending
    try {
      const view = await controller.challenge(index);
      const deleted = view.log[view.log.length - 1].deletedVertex;
      // flash the doomed node on the still-current layout, then relayout
      // without it (inside a collapsed blob the flash has nothing to hit)
      highlight = new Set([String(deleted)]);
      settling = Math.max(settling, 40);
      setTimeout(() => {
        highlight = new Set();
        rebuildLayout();
      }, 600);
    } finally {
      redraw();
    }
  }

  async function retry(): Promise<void> {
    await controller.refresh();
    rebuildLayout();
    redraw();
  }

  setupConfigForm(async (groups, rounds) => {
    el('config-error').textContent = '';
    try {
      await controller.create(groups, rounds);
      el('setup').hidden = true;
      el('game').hidden = false;
      rebuildLayout();
      redraw();
    } catch (error) {
      el('config-error').textContent = error instanceof Error ? error.message : String(error);
    }
  });
  requestAnimationFrame(tick);
}

main();
