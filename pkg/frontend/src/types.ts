/** Wire types mirroring the game service's JSON responses. */

export type SessionStatus = 'awaiting-challenge' | 'finished' | 'failed';

export interface VertexTagJson {
  role: string;
  path_index?: number;
  layer?: number;
  gadget_id?: string;
}

export interface GraphJson {
  vertices: { id: number; tag: VertexTagJson }[];
  edges: [number, number][];
}

export interface AutInfo {
  order: number | null;
  verified: boolean;
  partial?: boolean;
  expected_order?: number;
}

export interface CreateGameResponse {
  session: string;
  status: SessionStatus;
  rounds: number;
  challenge_groups: string[];
  graph: GraphJson;
  aut: AutInfo;
}

export interface ChallengeResponse {
  session: string;
  round: number;
  deleted_vertex: number;
  aut: AutInfo;
  remaining_rounds: number;
  status: SessionStatus;
}

export interface TranscriptRound {
  round: number;
  challenge: number;
  deleted_vertex: number;
  aut_order: number | null;
  verified: boolean | null;
  partial: boolean;
}

export interface TranscriptResponse {
  format: string;
  session: string;
  status: SessionStatus;
  config: { groups: { spec?: string; table?: number[][] }[]; rounds: number };
  g0_sha256: string;
  initial_aut_order: number | null;
  initial_verified: boolean;
  history: TranscriptRound[];
}
