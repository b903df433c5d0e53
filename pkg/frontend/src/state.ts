/**
 * Session view state, derived exclusively from service responses.
 *
 * The client never computes group theory: every order, verified flag,
 * and deleted vertex shown in the UI is echoed from the last response.
 * At most one challenge request is in flight per session.
 */

import type { ApiClient } from './api.js';
import type {
  AutInfo,
  GraphJson,
  SessionStatus,
  TranscriptResponse,
} from './types.js';

export interface RoundLogEntry {
  round: number;
  groupIndex: number;
  groupLabel: string;
  deletedVertex: number;
  autOrder: number | null;
  verified: boolean;
  partial: boolean;
}

export interface UISessionView {
  sessionId: string;
  status: SessionStatus;
  rounds: number;
  roundsPlayed: number;
  challengeGroups: string[];
  aut: AutInfo;
  log: RoundLogEntry[];
  graph: GraphJson;
  pending: boolean;
  connectionLost: boolean;
}

export class SessionController {
  private view: UISessionView | null = null;
  private transcript: TranscriptResponse | null = null;

  constructor(private readonly api: ApiClient) {}

  current(): UISessionView {
    if (!this.view) throw new Error('no session created yet');
    return this.view;
  }

  /** The last transcript fetched from the service, verbatim. */
  lastTranscript(): TranscriptResponse | null {
    return this.transcript;
  }

  async create(groups: string[], rounds: number): Promise<UISessionView> {
    const created = await this.api.createGame(groups, rounds);
    this.view = {
      sessionId: created.session,
      status: created.status,
      rounds: created.rounds,
      roundsPlayed: 0,
      challengeGroups: created.challenge_groups,
      aut: created.aut,
      log: [],
      graph: created.graph,
      pending: false,
      connectionLost: false,
    };
    return this.view;
  }

  /** True when the service will accept a challenge right now. */
  canChallenge(): boolean {
    return (
      this.view !== null &&
      this.view.status === 'awaiting-challenge' &&
      !this.view.pending &&
      !this.view.connectionLost
    );
  }

  async challenge(groupIndex: number): Promise<UISessionView> {
    const view = this.current();
    if (!this.canChallenge()) {
      throw new Error(`cannot challenge: status=${view.status} pending=${view.pending}`);
    }
    view.pending = true;
    try {
      const answer = await this.api.challenge(view.sessionId, groupIndex);
      view.roundsPlayed = answer.round;
      view.status = answer.status;
      view.aut = answer.aut;
      view.log.push({
        round: answer.round,
        groupIndex,
        groupLabel: view.challengeGroups[groupIndex - 1] ?? `#${groupIndex}`,
        deletedVertex: answer.deleted_vertex,
        autOrder: answer.aut.order,
        verified: answer.aut.verified,
        partial: answer.aut.partial ?? false,
      });
      this.removeVertex(answer.deleted_vertex);
      return view;
    } catch (error) {
      if (isConnectionError(error)) {
        view.connectionLost = true;
      }
      throw error;
    } finally {
      view.pending = false;
    }
  }

  /** Re-sync from the server transcript (used by the retry banner). */
  async refresh(): Promise<UISessionView> {
    const view = this.current();
    const transcript = await this.api.getTranscript(view.sessionId);
    const graph = await this.api.getGraph(view.sessionId);
    this.transcript = transcript;
    view.status = transcript.status;
    view.roundsPlayed = transcript.history.length;
    view.graph = graph;
    view.log = transcript.history.map((entry) => ({
      round: entry.round,
      groupIndex: entry.challenge,
      groupLabel: view.challengeGroups[entry.challenge - 1] ?? `#${entry.challenge}`,
      deletedVertex: entry.deleted_vertex,
      autOrder: entry.aut_order,
      verified: entry.verified === true,
      partial: entry.partial,
    }));
    view.connectionLost = false;
    return view;
  }

  private removeVertex(id: number): void {
    const view = this.current();
    view.graph = {
      vertices: view.graph.vertices.filter((v) => v.id !== id),
      edges: view.graph.edges.filter(([a, b]) => a !== id && b !== id),
    };
  }
}

function isConnectionError(error: unknown): boolean {
  // fetch() rejects with TypeError on network failure; HTTP errors carry
  // a status and are application-level, not connection loss
  return error instanceof TypeError || !(error instanceof Error && 'status' in error);
}
