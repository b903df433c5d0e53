// @vitest-environment jsdom
/** DOM rendering: buttons disabled on finished/pending, log lines, banner. */

import { describe, expect, it } from 'vitest';
import {
  renderChallengeButtons,
  renderConnectionBanner,
  renderLog,
  renderStatusPanel,
} from '../src/render.js';
import type { UISessionView } from '../src/state.js';

function view(over: Partial<UISessionView> = {}): UISessionView {
  return {
    sessionId: 'deadbeef12345678',
    status: 'awaiting-challenge',
    rounds: 2,
    roundsPlayed: 1,
    challengeGroups: ['C3', 'C2xC2'],
    aut: { order: 3, verified: true },
    log: [
      {
        round: 1,
        groupIndex: 1,
        groupLabel: 'C3',
        deletedVertex: 168,
        autOrder: 3,
        verified: true,
        partial: false,
      },
    ],
    graph: { vertices: [], edges: [] },
    pending: false,
    connectionLost: false,
    ...over,
  };
}

describe('render', () => {
  it('disables every challenge button on a finished session', () => {
    const host = document.createElement('div');
    renderChallengeButtons(host, view({ status: 'finished' }), false, () => {});
    const buttons = [...host.querySelectorAll('button')];
    expect(buttons).toHaveLength(2);
    expect(buttons.every((b) => b.disabled)).toBe(true);
  });

  it('enables buttons only when the controller allows a challenge', () => {
    const host = document.createElement('div');
    const clicked: number[] = [];
    renderChallengeButtons(host, view(), true, (i) => clicked.push(i));
    const buttons = [...host.querySelectorAll('button')];
    expect(buttons.every((b) => !b.disabled)).toBe(true);
    buttons[1].click();
    expect(clicked).toEqual([2]);
  });

  it('renders one log line per round with the echoed order', () => {
    const host = document.createElement('ol');
    const v = view();
    renderLog(host, v);
    expect(host.children).toHaveLength(v.log.length);
    expect(host.children[0].textContent).toContain('Aut order 3');
    expect(host.children[0].textContent).toContain('deleted vertex 168');
    expect(host.children[0].textContent).toContain('verified');
  });

  it('shows the aut panel from the view values only', () => {
    const host = document.createElement('div');
    renderStatusPanel(host, view({ aut: { order: 41, verified: false } }));
    expect(host.textContent).toContain('order 41');
    expect(host.textContent).toContain('round 1/2');
  });

  it('shows the retry banner only after connection loss', () => {
    const host = document.createElement('div');
    renderConnectionBanner(host, view(), () => {});
    expect(host.hidden).toBe(true);
    let retried = 0;
    renderConnectionBanner(host, view({ connectionLost: true }), () => {
      retried += 1;
    });
    expect(host.hidden).toBe(false);
    host.querySelector('button')!.click();
    expect(retried).toBe(1);
  });
});
