/** Thin typed client for the game service; no game logic lives here. */

import type {
  ChallengeResponse,
  CreateGameResponse,
  GraphJson,
  TranscriptResponse,
} from './types.js';

export class ApiRequestError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export interface ApiClient {
  createGame(groups: string[], rounds: number): Promise<CreateGameResponse>;
  challenge(session: string, groupIndex: number): Promise<ChallengeResponse>;
  getTranscript(session: string): Promise<TranscriptResponse>;
  getGraph(session: string): Promise<GraphJson>;
}

export class HttpApiClient implements ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      headers: { 'Content-Type': 'application/json' },
      ...init,
    });
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const message =
        typeof body === 'object' && body !== null && 'error' in body
          ? String((body as { error: unknown }).error)
          : `request failed with status ${response.status}`;
      throw new ApiRequestError(response.status, message);
    }
    return body as T;
  }

  createGame(groups: string[], rounds: number): Promise<CreateGameResponse> {
    return this.request('/games', {
      method: 'POST',
      body: JSON.stringify({ groups, rounds }),
    });
  }

  challenge(session: string, groupIndex: number): Promise<ChallengeResponse> {
    return this.request(`/games/${session}/challenge`, {
      method: 'POST',
      body: JSON.stringify({ group_index: groupIndex }),
    });
  }

  getTranscript(session: string): Promise<TranscriptResponse> {
    return this.request(`/games/${session}`);
  }

  getGraph(session: string): Promise<GraphJson> {
    return this.request(`/games/${session}/graph?format=json`);
  }
}
