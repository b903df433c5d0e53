"""Command-line interface.

Exit status is 0 only when every verification the command requested
passed; parse errors, size-guardrail violations, and verification
failures all exit nonzero with a diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .constructions import build_reveal_gadget, frucht_with_trivial_stabilizer
from .errors import AutgameError, SizeLimitError, VerificationError
from .game import (DEFAULT_MAX_GAME_VERTICES, DEFAULT_SEQUENCE_BUDGET,
                   GAME_FILE_FORMAT, GameConfig, build_game, config_from_json,
                   player_move, state_transcript, verify_exhaustive,
                   verify_round)
from .graphs import Graph, canonical_json
from .groups import build_group
from .service import serve

GADGET_FILE_FORMAT = "autgame-gadget-v1"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"environment variable {name}={raw!r} is not an integer")


def _parse_groups(raw: str) -> list[str]:
    specs = [s.strip() for s in raw.split(",") if s.strip()]
    if not specs:
        raise SystemExit("no group specs given")
    return specs


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        print(text)


def cmd_build_gadget(args) -> int:
    group = build_group(args.group)
    gadget = build_reveal_gadget(group, verify=not args.skip_verify)
    layout = gadget.layout
    obj = {
        "format": GADGET_FILE_FORMAT,
        "group": args.group,
        "verified": not args.skip_verify,
        "x": gadget.x,
        "y": gadget.y,
        "orbit": sorted(gadget.orbit),
        "layout": {
            "n": layout.n,
            "t": layout.t,
            "path_length": layout.path_length,
            "base_vertices": list(layout.base_vertices),
        },
        "graph": gadget.graph.to_json_obj(),
    }
    _write_output(canonical_json(obj), args.output)
    if not args.json:
        status = "verified (5/5 invariants)" if not args.skip_verify else "UNVERIFIED"
        print(f"gadget for {args.group}: |V|={gadget.graph.vertex_count} "
              f"n={layout.n} t={layout.t} {status}", file=sys.stderr)
    return 0


def cmd_build_game(args) -> int:
    config = GameConfig.from_specs(_parse_groups(args.groups), args.rounds)
    state = build_game(config, max_vertices=args.max_vertices,
                       verify=not args.skip_verify)
    obj = {
        "format": GAME_FILE_FORMAT,
        "config": {"groups": [{"spec": s} for s in config.specs], "rounds": config.rounds},
        "g0_sha256": state.initial_graph.sha256(),
        "initial_aut_order": state.initial_aut_order,
        "verified": state.initial_verified,
        "graph": state.graph.to_json_obj(),
    }
    _write_output(canonical_json(obj), args.output)
    if not args.json:
        print(f"game graph: |V|={state.graph.vertex_count} |E|={state.graph.edge_count} "
              f"Aut(G_0) order {state.initial_aut_order} "
              f"({'verified' if state.initial_verified else 'UNVERIFIED'})", file=sys.stderr)
    return 0


def _load_game_state(path: str, max_vertices: int):
    obj = json.loads(Path(path).read_text())
    if obj.get("format") != GAME_FILE_FORMAT:
        raise SystemExit(f"{path} is not a game file")
    config = config_from_json(obj["config"])
    state = build_game(config, max_vertices=max_vertices, verify=False)
    rebuilt = state.initial_graph.sha256()
    if rebuilt != obj["g0_sha256"]:
        raise VerificationError(
            "replay-hash", f"rebuilt G_0 hash {rebuilt[:12]}.. does not match game file")
    state.initial_aut_order = obj.get("initial_aut_order")
    state.initial_verified = bool(obj.get("verified"))
    return state


def cmd_play(args) -> int:
    state = _load_game_state(args.game, args.max_vertices)
    if args.challenges:
        challenges = [int(c) for c in args.challenges.split(",")]
        if len(challenges) > state.config.rounds:
            raise SystemExit(
                f"{len(challenges)} challenges given but the game has "
                f"{state.config.rounds} rounds")
    else:
        challenges = None  # interactive: read one index per line
    rows = []
    all_ok = True
    rounds_played = 0
    while rounds_played < state.config.rounds:
        if challenges is not None:
            if rounds_played >= len(challenges):
                break
            challenge = challenges[rounds_played]
        else:
            prompt = f"round {state.round + 1}/{state.config.rounds} challenge index> "
            line = input(prompt) if sys.stdin.isatty() else sys.stdin.readline()
            if not line:
                break
            challenge = int(line.strip())
        deleted, state = player_move(state, challenge)
        if args.no_verify:
            record = state.history[-1]
        else:
            record = verify_round(state)
            all_ok = all_ok and bool(record.verified)
        rows.append(record)
        if not args.json:
            print(f"round {record.round}: challenge {challenge} -> deleted vertex "
                  f"{deleted}, Aut order {record.aut_order}, verified={record.verified}")
        rounds_played += 1
    transcript = state_transcript(state)
    if args.output:
        Path(args.output).write_text(canonical_json(transcript))
    if args.json:
        print(canonical_json(transcript))
    return 0 if all_ok else 1


def cmd_verify_exhaustive(args) -> int:
    config = GameConfig.from_specs(_parse_groups(args.groups), args.rounds)
    report = verify_exhaustive(config, max_vertices=args.max_vertices,
                               sequence_budget=args.budget)
    if args.json:
        print(canonical_json(report.to_json_obj()))
    else:
        for seq in report.sequences:
            orders = ", ".join(str(r.aut_order) for r in seq.records)
            flag = "pass" if seq.passed else "FAIL"
            print(f"sequence {list(seq.challenges)}: Aut orders [{orders}] {flag}")
        print(f"{len(report.sequences)} sequences, all_passed={report.all_passed}")
    return 0 if report.all_passed else 1


def cmd_export_dot(args) -> int:
    obj = json.loads(Path(args.graph).read_text())
    if "vertices" in obj:
        graph = Graph.from_json_obj(obj)
    elif "graph" in obj:
        graph = Graph.from_json_obj(obj["graph"])
    else:
        raise SystemExit(f"{args.graph} does not contain a graph object")
    _write_output(graph.to_dot(), args.output)
    return 0


def cmd_serve(args) -> int:
    serve(host=args.host, port=args.port, max_vertices=args.max_vertices,
          state_dir=args.state_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    max_vertices_default = _env_int("AUTGAME_MAX_GAME_VERTICES", DEFAULT_MAX_GAME_VERTICES)
    budget_default = _env_int("AUTGAME_SEQUENCE_BUDGET", DEFAULT_SEQUENCE_BUDGET)

    parser = argparse.ArgumentParser(
        prog="autgame",
        description="Constructions and the vertex deletion game over graph automorphism groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-gadget", help="build + verify a reveal gadget")
    p.add_argument("--group", required=True, help="group spec, e.g. C3 or C2xC2")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.add_argument("--json", action="store_true", help="JSON only on stdout")
    p.add_argument("--skip-verify", action="store_true",
                   help="skip engine verification; marks the output unverified")
    p.set_defaults(func=cmd_build_gadget)

    p = sub.add_parser("build-game", help="build + verify a game graph G_0")
    p.add_argument("--groups", required=True, help="comma list: Gamma_0,Gamma_1,..,Gamma_k")
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--skip-verify", action="store_true")
    p.add_argument("--max-vertices", type=int, default=max_vertices_default)
    p.set_defaults(func=cmd_build_game)

    p = sub.add_parser("play", help="play challenges against a built game")
    p.add_argument("--game", required=True, help="game file from build-game")
    p.add_argument("--challenges", help="comma list of 1-based group indices (else interactive)")
    p.add_argument("--no-verify", action="store_true", help="skip per-round verification")
    p.add_argument("--json", action="store_true", help="print the transcript as JSON")
    p.add_argument("-o", "--output", help="write the transcript to a file")
    p.add_argument("--max-vertices", type=int, default=max_vertices_default)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("verify-exhaustive",
                       help="replay the strategy against every adversary sequence")
    p.add_argument("--groups", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--budget", type=int, default=budget_default,
                   help="max number of adversary sequences")
    p.add_argument("--max-vertices", type=int, default=max_vertices_default)
    p.set_defaults(func=cmd_verify_exhaustive)

    p = sub.add_parser("export-dot", help="convert a graph/gadget/game JSON file to DOT")
    p.add_argument("--graph", required=True, help="JSON file with a graph")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("serve", help="run the HTTP/JSON game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--state-dir", help="snapshot sessions to this directory")
    p.add_argument("--max-vertices", type=int, default=max_vertices_default)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AutgameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
