"""The vertex deletion game: layered game graph, strategy, verification.

Round 0 builds G_0 from reveal gadgets: F_0 is the base gadget minus its
x vertex; each later layer hangs a fresh copy of every challenge gadget
under every orbit vertex of the previous layer; an anchor path pins the
layers setwise.  Each round the player deletes the x-copy of the gadget
matching the adversary's challenge under the current u vertex, which
simultaneously removes the previous symmetry and reveals the requested
one.  Every round can be machine-verified against the challenged group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .aut import aut_as_abstract_group, automorphisms
from .constructions import RevealGadget, build_reveal_gadget
from .errors import GameError, SizeLimitError, VerificationError
from .graphs import Graph, VertexTag
from .groups import FiniteGroup, are_isomorphic, build_group, minimal_generating_set

DEFAULT_MAX_GAME_VERTICES = 20000
DEFAULT_SEQUENCE_BUDGET = 256
TRANSCRIPT_FORMAT = "autgame-transcript-v1"
GAME_FILE_FORMAT = "autgame-game-v1"


@dataclass(frozen=True)
class GameConfig:
    """Adversary's Round-0 selection: groups G_0..G_k and the round count."""

    groups: tuple[FiniteGroup, ...]
    rounds: int
    specs: tuple[str, ...] = ()

    @staticmethod
    def from_specs(specs, rounds: int) -> "GameConfig":
        specs = tuple(specs)
        return GameConfig(groups=tuple(build_group(s) for s in specs),
                          rounds=rounds, specs=specs)

    def validate(self) -> None:
        if len(self.groups) < 2:
            raise GameError("need at least two groups (the base group and one challenge)")
        if self.rounds < 1:
            raise GameError("rounds must be >= 1")


@dataclass(frozen=True)
class GadgetHandle:
    """A placed copy of a reveal gadget inside the game graph."""

    layer: int
    parent: int
    group_index: int  # 1-based, post-dedup
    vertex_set: frozenset[int]
    x_copy: int
    y_copy: int
    orbit_copy: frozenset[int]

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.layer, self.parent, self.group_index)


@dataclass
class RoundRecord:
    """One history entry: the challenge, the move, and its verification."""

    round: int
    challenge: int            # adversary's original 1-based index
    dedup_challenge: int      # representative index after dedup
    deleted_vertex: int
    aut_order: int | None = None
    verified: bool | None = None
    partial: bool = False

    def to_json_obj(self) -> dict:
        return {
            "round": self.round,
            "challenge": self.challenge,
            "deleted_vertex": self.deleted_vertex,
            "aut_order": self.aut_order,
            "verified": self.verified,
            "partial": self.partial,
        }


@dataclass
class GameState:
    """Full state of one game session."""

    config: GameConfig
    unique_groups: tuple[FiniteGroup, ...]   # deduped challenge groups
    index_remap: dict[int, int]              # original index -> dedup index
    graph: Graph                             # current G_round
    initial_graph: Graph                     # G_0
    round: int
    layers: list[frozenset[int]]             # U_0..U_rounds
    flayer_vertices: list[frozenset[int]]    # V(F_0)..V(F_rounds), cumulative
    anchors: tuple[int, ...]                 # a_0..a_rounds
    handles: dict[tuple[int, int, int], GadgetHandle]
    current_u: int
    u_history: list[int]
    history: list[RoundRecord] = field(default_factory=list)
    initial_aut_order: int | None = None
    initial_verified: bool = False

    @property
    def finished(self) -> bool:
        return self.round >= self.config.rounds

    @property
    def k(self) -> int:
        """Number of distinct challenge groups (post-dedup)."""
        return len(self.unique_groups)

    def clone(self) -> "GameState":
        return GameState(
            config=self.config,
            unique_groups=self.unique_groups,
            index_remap=dict(self.index_remap),
            graph=self.graph.copy(),
            initial_graph=self.initial_graph,
            round=self.round,
            layers=list(self.layers),
            flayer_vertices=list(self.flayer_vertices),
            anchors=self.anchors,
            handles=self.handles,
            current_u=self.current_u,
            u_history=list(self.u_history),
            history=[RoundRecord(**vars(r)) for r in self.history],
            initial_aut_order=self.initial_aut_order,
            initial_verified=self.initial_verified,
        )


def dedup_challenge_groups(groups) -> tuple[tuple[FiniteGroup, ...], dict[int, int]]:
    """Collapse isomorphic challenge groups; adversary indices stay usable."""
    unique: list[FiniteGroup] = []
    remap: dict[int, int] = {}
    for orig, g in enumerate(groups, start=1):
        for pos, rep in enumerate(unique, start=1):
            if are_isomorphic(g, rep):
                remap[orig] = pos
                break
        else:
            unique.append(g)
            remap[orig] = len(unique)
    return tuple(unique), remap


def _frucht_size(group: FiniteGroup) -> int:
    if group.order == 1:
        return 7
    k = len(minimal_generating_set(group))
    return group.order * (1 + k + 2 * k * (k + 1))


def _gadget_size(group: FiniteGroup) -> int:
    n = _frucht_size(group)
    return n * (n.bit_length() + 1) + 1


def projected_game_size(config: GameConfig) -> int:
    """|V(G_0)| from the size recurrence, before any graph is built.

    Assumes no gadget needed remediation padding (the common case); the
    per-gadget sizes are exact closed forms, orbit sizes equal group
    orders by the regular action.
    """
    config.validate()
    unique, _ = dedup_challenge_groups(config.groups[1:])
    total = _gadget_size(config.groups[0]) - 1
    u_size = config.groups[0].order
    copies_per_u = sum(_gadget_size(g) for g in unique)
    orbit_per_u = sum(g.order for g in unique)
    for _ in range(config.rounds):
        total += u_size * copies_per_u
        u_size *= orbit_per_u
    return total + config.rounds + 1


def build_game(config: GameConfig, *,
               max_vertices: int = DEFAULT_MAX_GAME_VERTICES,
               verify: bool = True) -> GameState:
    """Build G_0 for the config and (by default) verify Aut(G_0).

    The projected size is checked against `max_vertices` before anything
    is built; geometric layer growth makes this guardrail load-bearing.
    """
    config.validate()
    projected = projected_game_size(config)
    if projected > max_vertices:
        raise SizeLimitError(
            f"projected game graph size {projected} exceeds bound {max_vertices}")

    unique, remap = dedup_challenge_groups(config.groups[1:])
    base_gadget = build_reveal_gadget(config.groups[0])
    challenge_gadgets = [build_reveal_gadget(g) for g in unique]

    graph = Graph()
    minus_x = base_gadget.graph.delete_vertex(base_gadget.x)

    def base_tag(old: int, tag: VertexTag) -> VertexTag:
        return tag.with_updates(layer=0)

    idmap = graph._disjoint_copy(minus_x, base_tag)
    u0 = idmap[base_gadget.y]
    layers = [frozenset(idmap[v] for v in base_gadget.orbit)]
    flayers = [frozenset(idmap.values())]

    handles: dict[tuple[int, int, int], GadgetHandle] = {}
    for layer in range(1, config.rounds + 1):
        new_vertices: set[int] = set()
        new_orbit_union: set[int] = set()
        for parent in sorted(layers[layer - 1]):
            for gi, gadget in enumerate(challenge_gadgets, start=1):
                handle = _place_gadget(graph, gadget, layer, parent, gi)
                handles[handle.key] = handle
                new_vertices |= handle.vertex_set
                new_orbit_union |= handle.orbit_copy
        layers.append(frozenset(new_orbit_union))
        flayers.append(flayers[-1] | new_vertices)

    anchors = []
    prev_anchor = None
    for j in range(config.rounds + 1):
        a = graph._add_vertex(VertexTag(role="anchor", layer=j))
        layer_vertices = flayers[j] if j == 0 else flayers[j] - flayers[j - 1]
        for v in sorted(layer_vertices):
            graph._add_edge(a, v)
        if prev_anchor is not None:
            graph._add_edge(prev_anchor, a)
        anchors.append(a)
        prev_anchor = a

    state = GameState(
        config=config,
        unique_groups=unique,
        index_remap=remap,
        graph=graph,
        initial_graph=graph.copy(),
        round=0,
        layers=layers,
        flayer_vertices=flayers,
        anchors=tuple(anchors),
        handles=handles,
        current_u=u0,
        u_history=[u0],
    )
    if verify:
        aut = automorphisms(graph, max_vertices=max(graph.vertex_count, 1))
        state.initial_aut_order = aut.order
        ok = (aut.order == config.groups[0].order
              and aut.elements is not None
              and are_isomorphic(aut_as_abstract_group(aut), config.groups[0]))
        if not ok:
            raise VerificationError(
                "game-initial",
                f"Aut(G_0) has order {aut.order}, expected group of order "
                f"{config.groups[0].order}")
        state.initial_verified = True
    return state


def _place_gadget(graph: Graph, gadget: RevealGadget, layer: int,
                  parent: int, group_index: int) -> GadgetHandle:
    gid = f"{layer}:{parent}:{group_index}"

    def remap_tag(old: int, tag: VertexTag) -> VertexTag:
        return tag.with_updates(layer=layer, gadget_id=gid)

    idmap = graph._disjoint_copy(gadget.graph, remap_tag)
    for w in idmap.values():
        graph._add_edge(parent, w)
    return GadgetHandle(
        layer=layer,
        parent=parent,
        group_index=group_index,
        vertex_set=frozenset(idmap.values()),
        x_copy=idmap[gadget.x],
        y_copy=idmap[gadget.y],
        orbit_copy=frozenset(idmap[v] for v in gadget.orbit),
    )


def player_move(state: GameState, challenge: int) -> tuple[int, GameState]:
    """Play one round: delete the x-copy revealing the challenged group.

    `challenge` is the adversary's original 1-based index into the
    config's challenge list; isomorphic duplicates map to the same
    gadget.  Returns the deleted vertex and the updated state.
    """
    if state.finished:
        raise GameError(f"game finished after {state.config.rounds} rounds")
    if challenge not in state.index_remap:
        raise GameError(
            f"bad challenge index {challenge}: valid range is 1..{len(state.config.groups) - 1}")
    dedup = state.index_remap[challenge]
    handle = state.handles[(state.round + 1, state.current_u, dedup)]
    v = handle.x_copy
    state.graph = state.graph.delete_vertex(v)
    state.current_u = handle.y_copy
    state.round += 1
    state.u_history.append(handle.y_copy)
    state.history.append(RoundRecord(
        round=state.round, challenge=challenge, dedup_challenge=dedup,
        deleted_vertex=v))
    return v, state


def verify_round(state: GameState) -> RoundRecord:
    """Check Aut(G_round) against the challenged group; updates history."""
    if state.round < 1:
        raise GameError("no round to verify yet (round 0 is checked at build time)")
    record = state.history[-1]
    expected = state.unique_groups[record.dedup_challenge - 1]
    aut = automorphisms(state.graph, max_vertices=max(state.graph.vertex_count, 1))
    record.aut_order = aut.order
    if aut.order != expected.order:
        record.verified = False
    elif aut.elements is None:
        record.partial = True
        record.verified = True  # order-only comparison
    else:
        record.verified = are_isomorphic(aut_as_abstract_group(aut), expected)
    return record


@dataclass
class SequenceResult:
    challenges: tuple[int, ...]
    records: list[RoundRecord]

    @property
    def passed(self) -> bool:
        return all(r.verified for r in self.records)


@dataclass
class ExhaustiveReport:
    """Replay of the strategy against every adversary sequence."""

    rounds: int
    k: int
    g0_sha256: str
    initial_aut_order: int | None
    sequences: list[SequenceResult]

    @property
    def all_passed(self) -> bool:
        return all(s.passed for s in self.sequences)

    def to_json_obj(self) -> dict:
        return {
            "rounds": self.rounds,
            "distinct_challenge_groups": self.k,
            "g0_sha256": self.g0_sha256,
            "initial_aut_order": self.initial_aut_order,
            "all_passed": self.all_passed,
            "sequences": [
                {
                    "challenges": list(s.challenges),
                    "passed": s.passed,
                    "rounds": [r.to_json_obj() for r in s.records],
                }
                for s in self.sequences
            ],
        }


def verify_exhaustive(config: GameConfig, *,
                      max_vertices: int = DEFAULT_MAX_GAME_VERTICES,
                      sequence_budget: int = DEFAULT_SEQUENCE_BUDGET,
                      verify_initial: bool = True) -> ExhaustiveReport:
    """Replay every adversary sequence (post-dedup index space) and verify.

    Builds G_0 once; each sequence replays from a fresh copy.
    """
    base = build_game(config, max_vertices=max_vertices, verify=verify_initial)
    k = base.k
    total = k ** config.rounds
    if total > sequence_budget:
        raise SizeLimitError(
            f"{total} adversary sequences exceed the budget {sequence_budget}")
    results = []
    for seq in itertools.product(range(1, k + 1), repeat=config.rounds):
        state = base.clone()
        records = []
        for challenge in seq:
            # dedup indices are a subset of the original index space
            player_move(state, challenge)
            records.append(verify_round(state))
        results.append(SequenceResult(challenges=seq, records=records))
    return ExhaustiveReport(
        rounds=config.rounds,
        k=k,
        g0_sha256=base.initial_graph.sha256(),
        initial_aut_order=base.initial_aut_order,
        sequences=results,
    )


def check_layer_restriction(state: GameState, j: int, deleted: set[int]) -> bool:
    """Check Aut(G_0 - X) = Aut(F_j - X) via the restriction map.

    Requires X inside V(F_j).  Confirms (a) equal orders and (b) that
    restricting each automorphism of G_0 - X to V(F_j - X) lands in
    Aut(F_j - X) injectively - the checkable form of the bijection in
    the layering argument.
    """
    if not 0 <= j <= state.config.rounds:
        raise GameError(f"layer {j} out of range 0..{state.config.rounds}")
    fj_vertices = state.flayer_vertices[j]
    deleted = set(deleted)
    if not deleted <= fj_vertices:
        raise GameError("X must be a subset of V(F_j)")

    g0_minus = state.initial_graph.delete_vertices(deleted)
    fj_minus = state.initial_graph.induced_subgraph(fj_vertices).delete_vertices(deleted)

    aut_g = automorphisms(g0_minus, max_vertices=max(g0_minus.vertex_count, 1))
    aut_f = automorphisms(fj_minus, max_vertices=max(fj_minus.vertex_count, 1))
    if aut_g.order != aut_f.order:
        return False
    if aut_g.elements is None:
        raise SizeLimitError(
            f"Aut(G_0 - X) has order {aut_g.order}; restriction check needs enumeration")

    fj_remaining = sorted(fj_vertices - deleted)
    fj_set = set(fj_remaining)
    restrictions = set()
    for sigma in aut_g.elements:
        mapping = sigma.as_mapping()
        restricted = tuple(mapping[v] for v in fj_remaining)
        if set(restricted) != fj_set:
            return False  # V(F_j - X) not setwise stabilized
        for u in fj_remaining:
            for w in fj_minus.neighbors(u):
                if not fj_minus.has_edge(mapping[u], mapping[w]):
                    return False
        restrictions.add(restricted)
    return len(restrictions) == aut_g.order


# -- transcripts ------------------------------------------------------------


def state_transcript(state: GameState) -> dict:
    """Replayable record of the session (config, G_0 hash, move history)."""
    return {
        "format": TRANSCRIPT_FORMAT,
        "config": _config_json(state.config),
        "g0_sha256": state.initial_graph.sha256(),
        "initial_aut_order": state.initial_aut_order,
        "initial_verified": state.initial_verified,
        "history": [r.to_json_obj() for r in state.history],
    }


def _config_json(config: GameConfig) -> dict:
    groups = []
    for i, g in enumerate(config.groups):
        spec = config.specs[i] if i < len(config.specs) else g.name
        if spec:
            groups.append({"spec": spec})
        else:
            groups.append({"table": [list(row) for row in g.table]})
    return {"groups": groups, "rounds": config.rounds}


def config_from_json(obj: dict) -> GameConfig:
    groups = []
    specs = []
    for entry in obj["groups"]:
        if "spec" in entry:
            specs.append(entry["spec"])
            groups.append(build_group(entry["spec"]))
        else:
            table = tuple(tuple(row) for row in entry["table"])
            specs.append("")
            groups.append(FiniteGroup(order=len(table), table=table))
    return GameConfig(groups=tuple(groups), rounds=obj["rounds"], specs=tuple(specs))


def replay_transcript(obj: dict, *,
                      max_vertices: int = DEFAULT_MAX_GAME_VERTICES,
                      verify: bool = True) -> GameState:
    """Rebuild the game and re-apply a transcript's challenges.

    The rebuilt G_0 must hash identically and the strategy must delete
    the same vertices; round verification is re-run when `verify`.
    """
    if obj.get("format") != TRANSCRIPT_FORMAT:
        raise GameError(f"not a transcript file (format {obj.get('format')!r})")
    config = config_from_json(obj["config"])
    state = build_game(config, max_vertices=max_vertices, verify=verify)
    got = state.initial_graph.sha256()
    if got != obj["g0_sha256"]:
        raise VerificationError(
            "replay-hash", f"rebuilt G_0 hash {got[:12]}.. != transcript {obj['g0_sha256'][:12]}..")
    for entry in obj["history"]:
        v, _ = player_move(state, entry["challenge"])
        if v != entry["deleted_vertex"]:
            raise VerificationError(
                "replay-move",
                f"round {state.round}: strategy deleted {v}, transcript says "
                f"{entry['deleted_vertex']}")
        if verify:
            record = verify_round(state)
            if entry.get("aut_order") is not None and record.aut_order != entry["aut_order"]:
                raise VerificationError(
                    "replay-order",
                    f"round {state.round}: Aut order {record.aut_order} != "
                    f"transcript {entry['aut_order']}")
    return state
