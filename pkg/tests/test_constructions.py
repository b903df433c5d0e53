"""Stabilized realizations and reveal gadgets: machine-checked invariants."""

from __future__ import annotations

import pytest

from autgame.aut import (aut_as_abstract_group, automorphisms,
                         brute_force_automorphisms, graph_isomorphic)
from autgame.constructions import (build_reveal_gadget,
                                   frucht_with_trivial_stabilizer)
from autgame.errors import SizeLimitError
from autgame.groups import are_isomorphic, build_group, catalog

CATALOG = catalog()
SMALL = {spec: g for spec, g in CATALOG.items() if g.order <= 12}


def test_trivial_group_gets_the_rigid_spider():
    stab = frucht_with_trivial_stabilizer(build_group("trivial"))
    assert stab.graph.vertex_count == 7
    # oracle: all 7! permutations
    assert brute_force_automorphisms(stab.graph).order == 1
    assert stab.graph.is_connected()


def test_c3_realization():
    stab = frucht_with_trivial_stabilizer(build_group("C3"))
    aut = automorphisms(stab.graph)
    assert aut.order == 3
    assert are_isomorphic(aut_as_abstract_group(aut), build_group("C3"))
    assert aut.stabilizer_order(stab.anchor) == 1


def test_anchor_orbit_is_whole_group_regular_action():
    for spec in ("C2", "C3", "C2xC2", "S3"):
        stab = frucht_with_trivial_stabilizer(build_group(spec))
        aut = automorphisms(stab.graph)
        orbit = aut.orbit(stab.anchor)
        assert len(orbit) == stab.group.order
        # the orbit is exactly the element vertices
        roles = {stab.graph.tag(v).role for v in orbit}
        assert roles == {"group-element"}


@pytest.mark.parametrize("spec", sorted(SMALL))
def test_stabilized_graph_invariants_over_catalog(spec):
    group = SMALL[spec]
    stab = frucht_with_trivial_stabilizer(group)
    assert stab.graph.is_connected()
    aut = automorphisms(stab.graph)
    assert aut.order == group.order
    assert are_isomorphic(aut_as_abstract_group(aut), group)
    assert aut.stabilizer_order(stab.anchor) == 1


def test_gadget_size_formula_trivial_group():
    gadget = build_reveal_gadget(build_group("trivial"))
    assert gadget.layout.n == 7 and gadget.layout.t == 3
    assert gadget.graph.vertex_count == 7 * (3 + 1) + 1 == 29


def test_gadget_c2_reveal_properties():
    gadget = build_reveal_gadget(build_group("C2"))
    assert automorphisms(gadget.graph).order == 1
    minus_x = gadget.graph.delete_vertex(gadget.x)
    assert minus_x.is_connected()
    aut = automorphisms(minus_x)
    assert aut.order == 2
    assert are_isomorphic(aut_as_abstract_group(aut), build_group("C2"))
    assert aut.stabilizer_order(gadget.y) == 1


@pytest.mark.parametrize("spec", sorted(SMALL))
def test_reveal_gadget_invariants_over_catalog(spec):
    group = SMALL[spec]
    gadget = build_reveal_gadget(group)
    layout = gadget.layout
    # size formula (path_length == t whenever no remediation was needed)
    assert gadget.graph.vertex_count == layout.n * (layout.path_length + 1) + 1
    assert layout.path_length == layout.t
    aut_h = automorphisms(gadget.graph)
    assert aut_h.order == 1
    minus_x = gadget.graph.delete_vertex(gadget.x)
    assert minus_x.is_connected()
    aut = automorphisms(minus_x)
    assert aut.order == group.order
    assert are_isomorphic(aut_as_abstract_group(aut), group)
    assert aut.stabilizer_order(gadget.y) == 1
    assert len(gadget.orbit) == group.order


@pytest.mark.parametrize("spec", ("trivial", "C2", "C3", "C2xC2", "S3"))
def test_base_vertices_setwise_stabilized_in_gadget_minus_x(spec):
    gadget = build_reveal_gadget(build_group(spec))
    base = set(gadget.layout.base_vertices)
    minus_x = gadget.graph.delete_vertex(gadget.x)
    aut = automorphisms(minus_x)
    for sigma in aut.elements:
        mapping = sigma.as_mapping()
        assert {mapping[v] for v in base} == base


def test_orbit_field_matches_engine_orbit():
    gadget = build_reveal_gadget(build_group("C3"))
    minus_x = gadget.graph.delete_vertex(gadget.x)
    assert gadget.orbit == frozenset(automorphisms(minus_x).orbit(gadget.y))


def test_construction_determinism():
    for spec in ("trivial", "C2xC2", "S3"):
        a = frucht_with_trivial_stabilizer(build_group(spec))
        b = frucht_with_trivial_stabilizer(build_group(spec))
        assert a.graph.to_json() == b.graph.to_json()
        assert a.anchor == b.anchor
        ga = build_reveal_gadget(build_group(spec))
        gb = build_reveal_gadget(build_group(spec))
        assert ga.graph.to_json() == gb.graph.to_json()
        assert (ga.x, ga.y, ga.orbit) == (gb.x, gb.y, gb.orbit)


def test_gadget_minus_x_pairs_not_isomorphic():
    g2 = build_reveal_gadget(build_group("C2"))
    g3 = build_reveal_gadget(build_group("C3"))
    assert not graph_isomorphic(g2.graph.delete_vertex(g2.x),
                                g3.graph.delete_vertex(g3.x))


def test_order_bound_respected():
    with pytest.raises(SizeLimitError):
        frucht_with_trivial_stabilizer(build_group("C8xC8"), max_order=32)


def test_skip_verify_builds_same_graph():
    verified = build_reveal_gadget(build_group("C3"))
    unverified = build_reveal_gadget(build_group("C3"), verify=False)
    assert verified.graph.to_json() == unverified.graph.to_json()
    assert verified.orbit == unverified.orbit


def test_x_is_tagged_and_joined_to_all_base_vertices():
    gadget = build_reveal_gadget(build_group("C2"))
    assert gadget.graph.tag(gadget.x).role == "reveal-x"
    assert gadget.graph.tag(gadget.y).role == "reveal-y"
    nbrs = gadget.graph.neighbors(gadget.x)
    assert set(gadget.layout.base_vertices) <= nbrs
    # bit-pattern adjacency: vertex v_j's path meets x on the 1-bits of j
    for j, path in enumerate(gadget.layout.paths, start=1):
        for i, u in enumerate(path, start=1):
            expected = i <= gadget.layout.t and bool((j >> (i - 1)) & 1)
            assert gadget.graph.has_edge(gadget.x, u) == expected
