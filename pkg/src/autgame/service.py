"""Embedded HTTP/JSON service exposing game sessions.

Single-process research service: sessions live in memory (optionally
snapshotted to a state directory as replayable transcripts), each
session's requests are serialized by a per-session lock, and CORS is
open so the browser console can talk to it from another origin.

Endpoints:
  POST /games                     {"groups": [spec..], "rounds": n}
  POST /games/{id}/challenge      {"group_index": i}   (?verify=false)
  GET  /games/{id}                full transcript
  GET  /games/{id}/graph          ?format=json|dot
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .errors import (AutgameError, GameError, GroupSpecError, SizeLimitError,
                     VerificationError)
from .game import (DEFAULT_MAX_GAME_VERTICES, GameConfig, GameState,
                   build_game, player_move, replay_transcript,
                   state_transcript, verify_round)
from .graphs import canonical_json


@dataclass
class SessionRecord:
    session_id: str
    state: GameState
    created: float

    @property
    def status(self) -> str:
        if any(r.verified is False for r in self.state.history):
            return "failed"
        if self.state.finished:
            return "finished"
        return "awaiting-challenge"


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class GameService:
    """Session store + request handlers, independent of the HTTP plumbing."""

    def __init__(self, max_vertices: int = DEFAULT_MAX_GAME_VERTICES,
                 state_dir: str | None = None):
        self.max_vertices = max_vertices
        self.state_dir = Path(state_dir) if state_dir else None
        self._sessions: dict[str, SessionRecord] = {}
        self._session_locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if self.state_dir:
            self.state_dir.mkdir(parents=True, exist_ok=True)
            self._restore_sessions()

    # -- handlers --------------------------------------------------------

    def create_game(self, payload: dict) -> dict:
        specs = payload.get("groups")
        rounds = payload.get("rounds")
        if not isinstance(specs, list) or not all(isinstance(s, str) for s in specs):
            raise ApiError(400, "body must carry groups: [spec, ...]")
        if not isinstance(rounds, int):
            raise ApiError(400, "body must carry rounds: int")
        try:
            config = GameConfig.from_specs(specs, rounds)
            state = build_game(config, max_vertices=self.max_vertices)
        except (GroupSpecError, GameError) as exc:
            raise ApiError(400, str(exc)) from exc
        except SizeLimitError as exc:
            raise ApiError(422, str(exc)) from exc
        session_id = uuid.uuid4().hex
        record = SessionRecord(session_id=session_id, state=state, created=time.time())
        with self._registry_lock:
            self._sessions[session_id] = record
            self._session_locks[session_id] = threading.Lock()
        self._snapshot(record)
        return {
            "session": session_id,
            "status": record.status,
            "rounds": rounds,
            "challenge_groups": [g.name or f"order-{g.order}" for g in state.config.groups[1:]],
            "graph": state.graph.to_json_obj(),
            "aut": {"order": state.initial_aut_order, "verified": state.initial_verified},
        }

    def challenge(self, session_id: str, payload: dict, verify: bool = True) -> dict:
        record = self._get(session_id)
        with self._lock_for(session_id):
            if record.status != "awaiting-challenge":
                raise ApiError(409, f"session is {record.status}")
            index = payload.get("group_index")
            if not isinstance(index, int):
                raise ApiError(400, "body must carry group_index: int")
            try:
                deleted, state = player_move(record.state, index)
            except GameError as exc:
                raise ApiError(400, str(exc)) from exc
            entry = state.history[-1]
            if verify:
                verify_round(state)
            response = {
                "session": session_id,
                "round": state.round,
                "deleted_vertex": deleted,
                "aut": {
                    "order": entry.aut_order,
                    "verified": bool(entry.verified),
                    "partial": entry.partial,
                    "expected_order": state.unique_groups[entry.dedup_challenge - 1].order,
                },
                "remaining_rounds": state.config.rounds - state.round,
                "status": record.status,
            }
            self._snapshot(record)
            return response

    def get_transcript(self, session_id: str) -> dict:
        record = self._get(session_id)
        with self._lock_for(session_id):
            obj = state_transcript(record.state)
            obj["session"] = session_id
            obj["status"] = record.status
            return obj

    def get_graph(self, session_id: str, fmt: str) -> tuple[str, str]:
        record = self._get(session_id)
        with self._lock_for(session_id):
            if fmt == "json":
                return record.state.graph.to_json(), "application/json"
            if fmt == "dot":
                return record.state.graph.to_dot(), "text/vnd.graphviz"
            raise ApiError(400, f"unknown graph format {fmt!r} (json|dot)")

    # -- plumbing ----------------------------------------------------------

    def _get(self, session_id: str) -> SessionRecord:
        with self._registry_lock:
            record = self._sessions.get(session_id)
        if record is None:
            raise ApiError(404, f"unknown session {session_id!r}")
        return record

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._session_locks[session_id]

    def _snapshot(self, record: SessionRecord) -> None:
        if not self.state_dir:
            return
        path = self.state_dir / f"{record.session_id}.json"
        path.write_text(canonical_json(state_transcript(record.state)))

    def _restore_sessions(self) -> None:
        for path in sorted(self.state_dir.glob("*.json")):
            try:
                obj = json.loads(path.read_text())
                state = replay_transcript(obj, max_vertices=self.max_vertices, verify=False)
                state.initial_aut_order = obj.get("initial_aut_order")
                state.initial_verified = bool(obj.get("initial_verified"))
                for entry, rec in zip(obj["history"], state.history):
                    rec.aut_order = entry.get("aut_order")
                    rec.verified = entry.get("verified")
                    rec.partial = bool(entry.get("partial"))
                session_id = path.stem
                self._sessions[session_id] = SessionRecord(
                    session_id=session_id, state=state, created=path.stat().st_mtime)
                self._session_locks[session_id] = threading.Lock()
            except (AutgameError, ValueError, KeyError) as exc:
                print(f"warning: could not restore session {path.name}: {exc}")


def make_handler(service: GameService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            pass  # research service; keep stdout for the CLI

        def _send(self, status: int, body: str, content_type: str = "application/json"):
            data = body.encode()
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()
            self.wfile.write(data)

        def _send_json(self, status: int, obj: dict):
            self._send(status, canonical_json(obj))

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                obj = json.loads(raw or b"{}")
            except ValueError:
                raise ApiError(400, "request body is not valid JSON") from None
            if not isinstance(obj, dict):
                raise ApiError(400, "request body must be a JSON object")
            return obj

        def do_OPTIONS(self):
            self._send(204, "")

        def do_POST(self):
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            try:
                if parts == ["games"]:
                    self._send_json(200, service.create_game(self._read_body()))
                elif len(parts) == 3 and parts[0] == "games" and parts[2] == "challenge":
                    query = parse_qs(url.query)
                    verify = query.get("verify", ["true"])[0].lower() != "false"
                    self._send_json(200, service.challenge(parts[1], self._read_body(),
                                                           verify=verify))
                else:
                    self._send_json(404, {"error": f"no such endpoint {url.path}"})
            except ApiError as exc:
                self._send_json(exc.status, {"error": exc.message})
            except VerificationError as exc:
                self._send_json(500, {"error": f"verification failure: {exc}"})

        def do_GET(self):
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            try:
                if len(parts) == 2 and parts[0] == "games":
                    self._send_json(200, service.get_transcript(parts[1]))
                elif len(parts) == 3 and parts[0] == "games" and parts[2] == "graph":
                    fmt = parse_qs(url.query).get("format", ["json"])[0]
                    body, ctype = service.get_graph(parts[1], fmt)
                    self._send(200, body, ctype)
                else:
                    self._send_json(404, {"error": f"no such endpoint {url.path}"})
            except ApiError as exc:
                self._send_json(exc.status, {"error": exc.message})

    return Handler


def serve(host: str = "127.0.0.1", port: int = 8571,
          max_vertices: int = DEFAULT_MAX_GAME_VERTICES,
          state_dir: str | None = None) -> None:
    """Run the service until interrupted."""
    service = GameService(max_vertices=max_vertices, state_dir=state_dir)
    server = ThreadingHTTPServer((host, port), make_handler(service))
    print(f"autgame service on http://{host}:{port} "
          f"(max game vertices {max_vertices}"
          f"{', state dir ' + str(state_dir) if state_dir else ''})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
