"""The two building blocks: stabilized realizations and reveal gadgets.

A stabilized realization is a connected graph whose automorphism group
is a prescribed finite group and which carries an anchor vertex with
trivial stabilizer.  The reveal gadget wraps such a graph so that the
whole gadget is rigid, deleting its x vertex reveals the group, and the
anchor (now y) keeps a trivial stabilizer.  Every construction is
machine-verified by the automorphism engine before it is returned;
verification failure is a hard error, never a silent result.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aut import (AutGroup, aut_as_abstract_group, automorphisms,
                  graph_isomorphic)
from .errors import SizeLimitError, VerificationError
from .graphs import Graph, VertexTag
from .groups import DEFAULT_MAX_ORDER, FiniteGroup, are_isomorphic, minimal_generating_set

# Cayley-arc gadgets encode direction and generator identity with tail
# lengths (2q-1 at the arc tail hub, 2q at the head hub).  On the rare
# verification failure all tails are lengthened by the previous maximum
# and the build retries.
_MAX_BUILD_ATTEMPTS = 4


@dataclass(frozen=True)
class StabilizedGraph:
    """Connected graph realizing `group` with a trivially stabilized anchor."""

    graph: Graph
    anchor: int
    group: FiniteGroup


@dataclass(frozen=True)
class GadgetLayout:
    """Bookkeeping for a reveal gadget.

    `t` is the bit width of the base-graph order n; `path_length` is the
    pendant-path length actually used (t plus any remediation padding).
    `paths[j]` lists the pendant path of base vertex v_{j+1} in order
    u_1..u_path_length.
    """

    n: int
    t: int
    path_length: int
    base_vertices: tuple[int, ...]
    paths: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RevealGadget:
    """The 'reveal/remove' gadget H with distinguished x and y.

    Invariants (machine-checked at construction): Aut(H) is trivial,
    H - x is connected, Aut(H - x) is the prescribed group, the
    stabilizer of y in H - x is trivial, and |V(H)| = n(t+1)+1 when no
    remediation padding was needed.
    """

    graph: Graph
    x: int
    y: int
    orbit: frozenset[int]
    group: FiniteGroup
    layout: GadgetLayout


def _spider_graph() -> tuple[Graph, int]:
    """Rigid connected 7-vertex tree: legs of lengths 1, 2, 3 off a center."""
    g = Graph()
    center = g._add_vertex(VertexTag(role="group-element"))
    for leg in (1, 2, 3):
        g._attach_pendant_path(center, leg)
    return g, center


def _internal_tag(i: int) -> VertexTag:
    return VertexTag(role="edge-gadget-internal")


def _build_frucht_attempt(group: FiniteGroup, gens: list[int], extra: int) -> tuple[Graph, int]:
    """Cayley digraph with undirected edge gadgets; anchor = identity vertex."""
    g = Graph()
    element_vertex = [g._add_vertex(VertexTag(role="group-element")) for _ in range(group.order)]
    for a in range(group.order):
        for q, s in enumerate(gens, start=1):
            b = group.table[a][s]
            hub_tail = g._add_vertex(VertexTag(role="edge-gadget-internal"))
            hub_head = g._add_vertex(VertexTag(role="edge-gadget-internal"))
            g._add_edge(element_vertex[a], hub_tail)
            g._add_edge(hub_tail, hub_head)
            g._add_edge(hub_head, element_vertex[b])
            g._attach_pendant_path(hub_tail, 2 * q - 1 + extra, _internal_tag)
            g._attach_pendant_path(hub_head, 2 * q + extra, _internal_tag)
    return g, element_vertex[0]


def frucht_with_trivial_stabilizer(group: FiniteGroup,
                                   max_order: int = DEFAULT_MAX_ORDER,
                                   verify: bool = True) -> StabilizedGraph:
    """Connected graph G with Aut(G) = `group` and a trivially stabilized anchor.

    The automorphism group acts regularly on the element vertices, so
    the anchor (the identity element's vertex) gets a trivial stabilizer
    for free.  The trivial group gets a fixed 7-vertex spider instead of
    the empty Cayley construction, which keeps downstream gadgets out of
    the degenerate small-n regime.  `verify=False` skips the engine
    checks (size experiments only; callers must mark the result
    unverified).
    """
    if group.order > max_order:
        raise SizeLimitError(f"group order {group.order} exceeds bound {max_order}")
    if group.order == 1:
        graph, anchor = _spider_graph()
        if verify:
            _verify_stabilized(graph, anchor, group)
        return StabilizedGraph(graph=graph, anchor=anchor, group=group)

    gens = minimal_generating_set(group)
    extra = 0
    failure: VerificationError | None = None
    for _ in range(_MAX_BUILD_ATTEMPTS):
        graph, anchor = _build_frucht_attempt(group, gens, extra)
        if not verify:
            return StabilizedGraph(graph=graph, anchor=anchor, group=group)
        try:
            _verify_stabilized(graph, anchor, group)
            return StabilizedGraph(graph=graph, anchor=anchor, group=group)
        except VerificationError as exc:
            failure = exc
            extra += 2 * len(gens)  # previous maximum tail length
    raise VerificationError(
        failure.invariant,
        f"realization of {group.name or 'group'} failed after "
        f"{_MAX_BUILD_ATTEMPTS} tail-lengthening attempts: {failure}")


def _verify_stabilized(graph: Graph, anchor: int, group: FiniteGroup) -> None:
    if not graph.is_connected():
        raise VerificationError("connected", "realization is not connected")
    aut = automorphisms(graph, max_vertices=max(graph.vertex_count, 1))
    if aut.order != group.order:
        raise VerificationError(
            "aut-isomorphic",
            f"|Aut| = {aut.order}, expected {group.order}")
    if not are_isomorphic(aut_as_abstract_group(aut), group):
        raise VerificationError(
            "aut-isomorphic",
            f"Aut has the right order {aut.order} but is not isomorphic to the target")
    if aut.stabilizer_order(anchor) != 1:
        raise VerificationError(
            "anchor-stabilizer", f"anchor {anchor} has non-trivial stabilizer")


def build_reveal_gadget(group: FiniteGroup,
                        max_order: int = DEFAULT_MAX_ORDER,
                        verify: bool = True) -> RevealGadget:
    """Build and verify the reveal gadget H for `group`.

    Base graph G = stabilized realization; every base vertex v_j grows a
    pendant path u_1..u_t, and a fresh vertex x is joined to every v_j
    and to u_i^(v_j) exactly when bit i of j (1 = least significant) is
    set.  t = bit_length(n) so each j in 1..n has a distinct nonzero
    pattern.  If verification fails (tiny-n degeneracies), all paths are
    lengthened by n and the build retries; the bit patterns stay on the
    first t positions.

    `verify=False` skips all engine checks; the orbit field is then
    computed but unverified, and callers must mark the output as such.
    """
    stab = frucht_with_trivial_stabilizer(group, max_order=max_order, verify=verify)
    n = stab.graph.vertex_count
    t = n.bit_length()
    failure: VerificationError | None = None
    for attempt in range(_MAX_BUILD_ATTEMPTS):
        graph, x, y, layout = _assemble_gadget(stab, n, t, t + attempt * n)
        if not verify:
            minus_x = graph.delete_vertex(x)
            aut_minus = automorphisms(minus_x, max_vertices=max(minus_x.vertex_count, 1))
            return RevealGadget(graph=graph, x=x, y=y,
                                orbit=frozenset(aut_minus.orbit(y)),
                                group=stab.group, layout=layout)
        try:
            orbit = _verify_gadget(graph, x, y, stab.group, layout)
            return RevealGadget(graph=graph, x=x, y=y, orbit=orbit,
                                group=stab.group, layout=layout)
        except VerificationError as exc:
            failure = exc
    raise VerificationError(
        failure.invariant,
        f"reveal gadget for {group.name or 'group'} failed after "
        f"{_MAX_BUILD_ATTEMPTS} path-lengthening attempts: {failure}")


def _assemble_gadget(stab: StabilizedGraph, n: int, t: int,
                     path_length: int) -> tuple[Graph, int, int, GadgetLayout]:
    graph = stab.graph.copy()
    base_vertices = tuple(graph.vertices())  # construction order = sorted IDs
    paths = []
    for v in base_vertices:
        path = graph._attach_pendant_path(v, path_length, _path_tag)
        paths.append(tuple(path))
    x = graph._add_vertex(VertexTag(role="reveal-x"))
    for j, v in enumerate(base_vertices, start=1):
        graph._add_edge(x, v)
        for i in range(1, t + 1):
            if (j >> (i - 1)) & 1:
                graph._add_edge(x, paths[j - 1][i - 1])
    y = stab.anchor
    graph._set_tag(y, graph.tag(y).with_updates(role="reveal-y"))
    layout = GadgetLayout(n=n, t=t, path_length=path_length,
                          base_vertices=base_vertices, paths=tuple(paths))
    return graph, x, y, layout


def _path_tag(i: int) -> VertexTag:
    return VertexTag(role="gadget-path", path_index=i)


def _verify_gadget(graph: Graph, x: int, y: int, group: FiniteGroup,
                   layout: GadgetLayout) -> frozenset[int]:
    """Check all five gadget invariants; returns the orbit of y in H - x."""
    expected_size = layout.n * (layout.path_length + 1) + 1
    if graph.vertex_count != expected_size:
        raise VerificationError(
            "size-formula",
            f"|V(H)| = {graph.vertex_count}, expected n(t+1)+1 = {expected_size}")
    aut_h = automorphisms(graph, max_vertices=max(graph.vertex_count, 1))
    if aut_h.order != 1:
        raise VerificationError("rigid", f"Aut(H) has order {aut_h.order}, expected 1")
    minus_x = graph.delete_vertex(x)
    if not minus_x.is_connected():
        raise VerificationError("connected-minus-x", "H - x is not connected")
    aut_minus = automorphisms(minus_x, max_vertices=max(minus_x.vertex_count, 1))
    if aut_minus.order != group.order:
        raise VerificationError(
            "reveal", f"|Aut(H - x)| = {aut_minus.order}, expected {group.order}")
    if not are_isomorphic(aut_as_abstract_group(aut_minus), group):
        raise VerificationError(
            "reveal", "Aut(H - x) has the right order but is not isomorphic to the target")
    if aut_minus.stabilizer_order(y) != 1:
        raise VerificationError(
            "y-stabilizer", f"stabilizer of y = {y} in H - x is non-trivial")
    return frozenset(aut_minus.orbit(y))


__all__ = [
    "StabilizedGraph",
    "RevealGadget",
    "GadgetLayout",
    "frucht_with_trivial_stabilizer",
    "build_reveal_gadget",
    "graph_isomorphic",
]
