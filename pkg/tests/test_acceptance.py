"""Acceptance suite: property-based machine verification at desk scale.

One test per criterion; each prints a PASS/FAIL line and enforces its
runtime budget.  Run with `pytest tests/test_acceptance.py -v -s`.
"""

from __future__ import annotations

import itertools
import random
import time

import pytest

from autgame.aut import (aut_as_abstract_group, automorphisms,
                         brute_force_automorphisms)
from autgame.constructions import (build_reveal_gadget,
                                   frucht_with_trivial_stabilizer)
from autgame.game import (GameConfig, build_game, check_layer_restriction, player_move,
                          replay_transcript, state_transcript,
                          verify_exhaustive, verify_round)
from autgame.graphs import graph_from_edges
from autgame.groups import are_isomorphic, build_group
from helpers import all_labeled_graphs, perm_images_set

REALIZATION_GROUPS = ("trivial", "C2", "C3", "C4", "C2xC2", "C5", "S3", "D4")
GADGET_GROUPS = ("trivial", "C2", "C3", "C2xC2", "S3")


def _report(name: str, started: float, budget: float) -> None:
    elapsed = time.time() - started
    print(f"ACCEPTANCE PASS: {name} ({elapsed:.1f}s, budget {budget:.0f}s)")
    assert elapsed < budget, f"{name} exceeded its {budget:.0f}s budget ({elapsed:.1f}s)"


@pytest.fixture(scope="module")
def realization_results():
    return {spec: frucht_with_trivial_stabilizer(build_group(spec))
            for spec in REALIZATION_GROUPS}


@pytest.fixture(scope="module")
def gadget_results():
    return {spec: build_reveal_gadget(build_group(spec)) for spec in GADGET_GROUPS}


@pytest.fixture(scope="module")
def single_round_played():
    state = build_game(GameConfig.from_specs(["C2", "C3"], rounds=1))
    deleted, state = player_move(state, 1)
    record = verify_round(state)
    return state, deleted, record


def test_criterion_1_oracle_equivalence():
    started = time.time()
    checked = 0
    for n in range(7):
        for g in all_labeled_graphs(n):
            eng = automorphisms(g, enumeration_cap=50000)
            assert perm_images_set(eng) == perm_images_set(
                brute_force_automorphisms(g)), f"mismatch on {g.to_json()}"
            checked += 1
    rng = random.Random(20250808)
    for _ in range(200):
        n = rng.choice([7, 8])
        p = rng.choice([0.2, 0.35, 0.5, 0.65, 0.8])
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        g = graph_from_edges(edges, n_vertices=n)
        eng = automorphisms(g, enumeration_cap=50000)
        assert perm_images_set(eng) == perm_images_set(
            brute_force_automorphisms(g)), f"mismatch on {g.to_json()}"
        checked += 1
    print(f"  [{checked} graphs compared element-for-element]")
    _report("aut-engine oracle equivalence", started, 300)


def test_criterion_2_stabilized_realization_suite(realization_results):
    started = time.time()
    for spec, stab in realization_results.items():
        group = build_group(spec)
        assert stab.graph.is_connected(), spec
        aut = automorphisms(stab.graph, max_vertices=stab.graph.vertex_count)
        assert aut.order == group.order, spec
        assert are_isomorphic(aut_as_abstract_group(aut), group), spec
        assert aut.stabilizer_order(stab.anchor) == 1, spec
    _report("stabilized-realization suite (8 groups)", started, 120)


def test_criterion_3_reveal_gadget_suite(gadget_results):
    started = time.time()
    for spec, gadget in gadget_results.items():
        group = build_group(spec)
        layout = gadget.layout
        assert layout.path_length == layout.t, spec  # no remediation needed
        assert gadget.graph.vertex_count == layout.n * (layout.t + 1) + 1, spec
        aut_h = automorphisms(gadget.graph, max_vertices=gadget.graph.vertex_count)
        assert aut_h.order == 1, spec
        minus_x = gadget.graph.delete_vertex(gadget.x)
        assert minus_x.is_connected(), spec
        aut = automorphisms(minus_x, max_vertices=minus_x.vertex_count)
        assert aut.order == group.order, spec
        assert are_isomorphic(aut_as_abstract_group(aut), group), spec
        assert aut.stabilizer_order(gadget.y) == 1, spec
    _report("reveal-gadget suite (5 groups, 5 invariants each)", started, 300)


def test_criterion_4_single_round_instance(single_round_played):
    started = time.time()
    state, deleted, record = single_round_played
    assert state.initial_aut_order == 2
    assert state.initial_verified  # exact isomorphism check at build time
    assert record.aut_order == 3
    assert record.verified is True and not record.partial
    aut = automorphisms(state.graph, max_vertices=state.graph.vertex_count)
    assert are_isomorphic(aut_as_abstract_group(aut), build_group("C3"))
    _report("single-round game instance (k = rounds = 1)", started, 120)


def test_criterion_5_exhaustive_adversary_suite():
    started = time.time()
    config = GameConfig.from_specs(["C2", "C3", "C2xC2"], rounds=2)
    report = verify_exhaustive(config)
    assert report.k == 2
    assert len(report.sequences) == 4
    assert report.all_passed
    for seq in report.sequences:
        for challenge, record in zip(seq.challenges, seq.records):
            assert record.verified is True and not record.partial
            assert record.aut_order == (3 if challenge == 1 else 4)

    # negative control: delete the y-copy instead of the x-copy
    state = build_game(config, verify=False)
    handle = state.handles[(1, state.current_u, 1)]
    sabotaged = state.graph.delete_vertex(handle.y_copy)
    aut = automorphisms(sabotaged, max_vertices=sabotaged.vertex_count)
    expected = build_group("C3")
    control_fails = aut.order != expected.order or not are_isomorphic(
        aut_as_abstract_group(aut), expected)
    assert control_fails
    _report("exhaustive adversary suite + negative control", started, 1200)


def test_criterion_6_layer_restriction_suite(single_round_played):
    started = time.time()
    state, deleted, _ = single_round_played
    assert check_layer_restriction(state, 0, set())
    assert check_layer_restriction(state, 1, {deleted})
    _report("layer-restriction suite (restriction-map bijectivity)", started, 120)


def test_criterion_7_invariant_suite(realization_results, gadget_results, single_round_played):
    started = time.time()
    # orbit-stabilizer identity on every construction's tagged vertices
    for spec, stab in realization_results.items():
        aut = automorphisms(stab.graph, max_vertices=stab.graph.vertex_count)
        assert len(aut.orbit(stab.anchor)) * aut.stabilizer_order(stab.anchor) == aut.order
    for spec, gadget in gadget_results.items():
        aut_h = automorphisms(gadget.graph, max_vertices=gadget.graph.vertex_count)
        assert len(aut_h.orbit(gadget.x)) * aut_h.stabilizer_order(gadget.x) == aut_h.order
        minus_x = gadget.graph.delete_vertex(gadget.x)
        aut = automorphisms(minus_x, max_vertices=minus_x.vertex_count)
        assert len(aut.orbit(gadget.y)) * aut.stabilizer_order(gadget.y) == aut.order
        assert len(gadget.orbit) == aut.order  # trivial stabilizer of y

    # replay determinism: transcript reproduces the graph hash byte-for-byte
    state, deleted, record = single_round_played
    transcript = state_transcript(state)
    replayed = replay_transcript(transcript)
    assert replayed.graph.sha256() == state.graph.sha256()
    assert [r.aut_order for r in replayed.history] == [record.aut_order]

    # anchors are fixed by every generator of Aut(G_0)
    fresh = build_game(GameConfig.from_specs(["C2", "C3"], rounds=1), verify=False)
    aut0 = automorphisms(fresh.graph, max_vertices=fresh.graph.vertex_count)
    for sigma in aut0.generators:
        for a in fresh.anchors:
            assert sigma.apply(a) == a
    _report("invariant suite (orbit-stabilizer, replay, anchors)", started, 600)
