"""Game engine: strategy soundness, round verification, layer restriction, replay."""

from __future__ import annotations

import pytest

from autgame.aut import aut_as_abstract_group, automorphisms
from autgame.errors import GameError, SizeLimitError, VerificationError
from autgame.game import (GameConfig, build_game, check_layer_restriction,
                          dedup_challenge_groups, player_move,
                          projected_game_size, replay_transcript,
                          state_transcript, verify_exhaustive, verify_round)
from autgame.groups import are_isomorphic, build_group


def single_round_state():
    return build_game(GameConfig.from_specs(["C2", "C3"], rounds=1))


def test_projected_size_matches_built_size():
    for specs, rounds in ((["C2", "C3"], 1), (["C2", "C3", "C2xC2"], 1),
                          (["trivial", "C2"], 2)):
        config = GameConfig.from_specs(specs, rounds)
        state = build_game(config, verify=False)
        assert projected_game_size(config) == state.graph.vertex_count


def test_size_guardrail_fires_before_building():
    config = GameConfig.from_specs(["C2", "S4"], rounds=3)
    with pytest.raises(SizeLimitError):
        build_game(config, max_vertices=20000)


def test_config_validation():
    with pytest.raises(GameError):
        build_game(GameConfig.from_specs(["C2"], rounds=1))
    with pytest.raises(GameError):
        build_game(GameConfig.from_specs(["C2", "C3"], rounds=0))


def test_dedup_of_isomorphic_challenges():
    unique, remap = dedup_challenge_groups(
        [build_group("C3"), build_group("C2"), build_group("D3"), build_group("S3")])
    # D3 and S3 collapse onto one representative
    assert [g.order for g in unique] == [3, 2, 6]
    assert remap == {1: 1, 2: 2, 3: 3, 4: 3}


def test_single_round_instance_round_zero():
    state = single_round_state()
    assert state.initial_verified
    assert state.initial_aut_order == 2
    assert state.round == 0 and not state.finished
    # |U_0| = |C2|
    assert len(state.layers[0]) == 2
    # |U_1| = |U_0| * sum of challenge-group orders (regular action)
    assert len(state.layers[1]) == 2 * 3


def test_first_move_is_adjacent_to_u0_and_tagged_reveal_x():
    state = single_round_state()
    u0 = state.current_u
    v, state = player_move(state, 1)
    assert v in state.initial_graph.neighbors(u0)
    tag = state.initial_graph.tag(v)
    assert tag.role == "reveal-x"
    assert tag.layer == state.round == 1


def test_single_round_instance_verified():
    state = single_round_state()
    _, state = player_move(state, 1)
    record = verify_round(state)
    assert record.aut_order == 3
    assert record.verified is True
    aut = automorphisms(state.graph, max_vertices=state.graph.vertex_count)
    assert are_isomorphic(aut_as_abstract_group(aut), build_group("C3"))
    assert state.finished


def test_move_bounds():
    state = single_round_state()
    with pytest.raises(GameError):
        player_move(state, 9)
    with pytest.raises(GameError):
        player_move(state, 0)
    _, state = player_move(state, 1)
    with pytest.raises(GameError):
        player_move(state, 1)  # rounds exhausted
    with pytest.raises(GameError):
        verify_round(single_round_state())  # nothing to verify at round 0


def test_duplicate_challenge_group_goes_to_same_gadget():
    config = GameConfig.from_specs(["C2", "C3", "D3", "S3"], rounds=1)
    a = build_game(config, verify=False)
    b = build_game(config, verify=False)
    va, _ = player_move(a, 2)  # D3
    vb, _ = player_move(b, 3)  # S3, isomorphic duplicate
    assert va == vb


def test_anchors_fixed_by_all_generators():
    state = single_round_state()
    aut = automorphisms(state.graph, max_vertices=state.graph.vertex_count)
    for sigma in aut.generators:
        for a in state.anchors:
            assert sigma.apply(a) == a


def test_layer_discipline_and_u_stabilization():
    config = GameConfig.from_specs(["C2", "C3", "C2xC2"], rounds=2)
    state = build_game(config, verify=False)
    _, state = player_move(state, 1)
    _, state = player_move(state, 2)
    for record in state.history:
        j = record.round
        in_layer = state.flayer_vertices[j] - state.flayer_vertices[j - 1]
        assert record.deleted_vertex in in_layer
    # every generator of Aut(G_j) fixes u_{j'} for all j' < round
    aut = automorphisms(state.graph, max_vertices=state.graph.vertex_count)
    for sigma in aut.generators:
        for u in state.u_history[:-1]:
            assert sigma.apply(u) == u


def test_exhaustive_small_instance():
    # duplicate challenge group: k collapses to 2, so 4 sequences at 2 rounds
    config = GameConfig.from_specs(["C2", "C3", "C2"], rounds=2)
    report = verify_exhaustive(config)
    assert report.k == 2
    assert len(report.sequences) == 4
    assert report.all_passed
    for seq in report.sequences:
        for challenge, record in zip(seq.challenges, seq.records):
            expected = (3 if challenge == 1 else 2)
            assert record.aut_order == expected


def test_exhaustive_single_round_reduces_to_k_checks():
    config = GameConfig.from_specs(["C2", "C3", "C2xC2"], rounds=1)
    report = verify_exhaustive(config)
    assert len(report.sequences) == report.k == 2
    assert report.all_passed


def test_exhaustive_three_rounds_small_gadgets():
    # deeper than the default acceptance instances: 2^3 = 8 sequences
    config = GameConfig.from_specs(["trivial", "C2", "C3"], rounds=3)
    report = verify_exhaustive(config)
    assert report.k == 2 and len(report.sequences) == 8
    assert report.all_passed
    assert report.initial_aut_order == 1


def test_challenge_group_may_equal_base_group():
    state = build_game(GameConfig.from_specs(["C2", "C2"], rounds=1))
    assert state.initial_aut_order == 2
    _, state = player_move(state, 1)
    record = verify_round(state)
    assert record.aut_order == 2 and record.verified is True


def test_exhaustive_budget():
    config = GameConfig.from_specs(["C2", "C3", "C2"], rounds=2)
    with pytest.raises(SizeLimitError):
        verify_exhaustive(config, sequence_budget=3)


def test_corrupted_strategy_fails_verification():
    state = single_round_state()
    handle = state.handles[(1, state.current_u, 1)]
    # sabotage: delete the y-copy instead of the x-copy
    sabotaged = state.graph.delete_vertex(handle.y_copy)
    aut = automorphisms(sabotaged, max_vertices=sabotaged.vertex_count)
    expected = build_group("C3")
    wrong = (aut.order != expected.order
             or not are_isomorphic(aut_as_abstract_group(aut), expected))
    assert wrong


def test_trivial_group_as_challenge_removes_all_symmetry():
    state = build_game(GameConfig.from_specs(["C2", "trivial"], rounds=1))
    assert state.initial_aut_order == 2
    _, state = player_move(state, 1)
    record = verify_round(state)
    assert record.aut_order == 1 and record.verified is True


def test_trivial_group_as_base():
    state = build_game(GameConfig.from_specs(["trivial", "C3"], rounds=1))
    assert state.initial_aut_order == 1
    _, state = player_move(state, 1)
    record = verify_round(state)
    assert record.aut_order == 3 and record.verified is True


def test_layer_restriction_empty_deletion_layer_zero():
    state = single_round_state()
    assert check_layer_restriction(state, 0, set())


def test_layer_restriction_after_first_strategy_move():
    state = single_round_state()
    v, state = player_move(state, 1)
    assert check_layer_restriction(state, 1, {v})


def test_layer_restriction_precondition():
    state = single_round_state()
    outside = state.anchors[0]  # anchors are never inside V(F_j)
    with pytest.raises(GameError):
        check_layer_restriction(state, 0, {outside})
    with pytest.raises(GameError):
        check_layer_restriction(state, 7, set())


def test_replay_determinism_via_transcript():
    state = single_round_state()
    v, state = player_move(state, 1)
    verify_round(state)
    transcript = state_transcript(state)
    replayed = replay_transcript(transcript)
    assert replayed.graph.sha256() == state.graph.sha256()
    assert [r.aut_order for r in replayed.history] == [r.aut_order for r in state.history]
    assert [r.verified for r in replayed.history] == [True]


def test_replay_rejects_tampered_transcript():
    state = single_round_state()
    _, state = player_move(state, 1)
    verify_round(state)
    transcript = state_transcript(state)
    transcript["g0_sha256"] = "0" * 64
    with pytest.raises(VerificationError):
        replay_transcript(transcript)


def test_clone_isolates_state():
    base = single_round_state()
    clone = base.clone()
    v, clone = player_move(clone, 1)
    assert base.round == 0
    assert base.graph.has_vertex(v)
    assert not clone.graph.has_vertex(v)


def test_build_is_deterministic():
    a = single_round_state()
    b = single_round_state()
    assert a.initial_graph.sha256() == b.initial_graph.sha256()
    assert a.anchors == b.anchors
    assert a.current_u == b.current_u
