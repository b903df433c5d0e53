"""Exact graph automorphism groups: refinement + pruned backtracking.

The engine computes Aut(G) for unlabeled simple graphs by iterated
neighborhood color refinement to an equitable partition, then a
depth-first individualization search.  The first root-to-leaf path is
the reference labeling; every other leaf that reproduces the reference
adjacency yields an automorphism.  Known automorphisms prune sibling
branches (orbit pruning), and partition invariants prune branches that
cannot map onto the reference path.  Vertex tags are never consulted
unless a caller explicitly passes them as a hint partition.

Group order is exact in all cases: element enumeration (BFS closure of
the generators) below the enumeration cap, a stabilizer chain above it.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field

from .errors import SizeLimitError, UnknownVertexError
from .graphs import Graph, canonical_json
from .groups import FiniteGroup

DEFAULT_MAX_VERTICES = 5000
DEFAULT_ENUMERATION_CAP = 10000
DEFAULT_TABLE_CAP = 2048

# memory guards: permutation storage is bounded by (count * domain size)
_ELEMENT_INT_BUDGET = 30_000_000
_CHAIN_INT_BUDGET = 30_000_000


# -- permutations over positions 0..n-1 ---------------------------------


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Apply p, then q."""
    return tuple(q[x] for x in p)


def _inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


@dataclass(frozen=True)
class Permutation:
    """A bijection of a fixed vertex-ID set onto itself.

    `domain` is the sorted vertex-ID tuple; `images[i]` is the image of
    `domain[i]`.
    """

    domain: tuple[int, ...]
    images: tuple[int, ...]

    def apply(self, v: int) -> int:
        i = _bisect_index(self.domain, v)
        return self.images[i]

    def fixes(self, v: int) -> bool:
        return self.apply(v) == v

    def is_identity(self) -> bool:
        return self.domain == self.images

    def as_mapping(self) -> dict[int, int]:
        return dict(zip(self.domain, self.images))

    def compose(self, other: "Permutation") -> "Permutation":
        """Apply self, then other."""
        if self.domain != other.domain:
            raise ValueError("permutations act on different vertex sets")
        other_map = other.as_mapping()
        return Permutation(self.domain, tuple(other_map[x] for x in self.images))

    def inverse(self) -> "Permutation":
        mapping = {img: v for v, img in zip(self.domain, self.images)}
        return Permutation(self.domain, tuple(mapping[v] for v in self.domain))


def _bisect_index(domain: tuple[int, ...], v: int) -> int:
    i = bisect.bisect_left(domain, v)
    if i == len(domain) or domain[i] != v:
        raise UnknownVertexError(f"vertex {v} not in permutation domain")
    return i


@dataclass
class AutGroup:
    """A computed automorphism group.

    `elements` is the full explicit list when the order is at most the
    enumeration cap, else None (generators + exact order still exact).
    Permutations are in deterministic sorted order, identity first.
    """

    vertex_ids: tuple[int, ...]
    order: int
    generators: list[Permutation]
    elements: list[Permutation] | None
    _pos_generators: list[tuple[int, ...]] = field(repr=False, default_factory=list)
    _pos_elements: list[tuple[int, ...]] | None = field(repr=False, default=None)

    def orbit(self, v: int) -> set[int]:
        """{ sigma(v) : sigma in Aut } computed from the generators."""
        i = _bisect_index(self.vertex_ids, v)
        seen = {i}
        frontier = [i]
        while frontier:
            x = frontier.pop()
            for g in self._pos_generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return {self.vertex_ids[i] for i in seen}

    def stabilizer_order(self, v: int) -> int:
        """|{ sigma : sigma(v) = v }|; counted directly when enumerated."""
        i = _bisect_index(self.vertex_ids, v)
        if self._pos_elements is not None:
            return sum(1 for p in self._pos_elements if p[i] == i)
        chain = _StabChain(len(self.vertex_ids), base_prefix=(i,))
        for g in self._pos_generators:
            chain.enter(g)
        return chain.order() // chain.first_orbit_size()

    def to_json_obj(self) -> dict:
        obj: dict = {
            "order": self.order,
            "vertex_ids": list(self.vertex_ids),
            "generators": [list(g.images) for g in self.generators],
        }
        if self.elements is not None and self.order <= 64:
            obj["cayley_table"] = [list(row) for row in _cayley_table(self._pos_elements)]
        return obj

    def to_json(self) -> str:
        return canonical_json(self.to_json_obj())


# -- refinement ----------------------------------------------------------


def _refine(n: int, adj: list[list[int]], colors: list[int]) -> list[int]:
    """Iterate neighborhood refinement to the coarsest stable partition.

    Color IDs are reassigned canonically (sorted signature order) on
    every pass, so isomorphic colored graphs always end with identical
    color histograms. Splits only ever refine the partition.
    """
    ncolors = len(set(colors))
    while True:
        sigs = []
        for v in range(n):
            nb = sorted(colors[u] for u in adj[v])
            sigs.append((colors[v], tuple(nb)))
        palette = sorted(set(sigs))
        remap = {s: i for i, s in enumerate(palette)}
        colors = [remap[s] for s in sigs]
        if len(palette) == ncolors:
            return colors
        ncolors = len(palette)


def _normalize_colors(n: int, raw: list[int]) -> list[int]:
    palette = sorted(set(raw))
    remap = {c: i for i, c in enumerate(palette)}
    return [remap[c] for c in raw]


def _partition_invariant(n: int, adj: list[list[int]], colors: list[int]) -> tuple:
    """Isomorphism-invariant node certificate used for branch pruning."""
    counts: dict[int, int] = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    edge_profile: dict[tuple[int, int], int] = {}
    for v in range(n):
        cv = colors[v]
        for u in adj[v]:
            if u > v:
                key = (cv, colors[u]) if cv <= colors[u] else (colors[u], cv)
                edge_profile[key] = edge_profile.get(key, 0) + 1
    return (tuple(sorted(counts.items())), tuple(sorted(edge_profile.items())))


def _target_cell(n: int, colors: list[int]) -> list[int] | None:
    """Vertices of the smallest non-singleton cell (ties by color ID)."""
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    best = None
    for c in sorted(cells):
        members = cells[c]
        if len(members) > 1 and (best is None or len(members) < len(best)):
            best = members
    return sorted(best) if best is not None else None


# -- the search ----------------------------------------------------------


class _Node:
    __slots__ = ("colors", "depth", "candidates", "idx", "explored", "on_ref", "found")

    def __init__(self, colors: list[int], depth: int, candidates: list[int], on_ref: bool):
        self.colors = colors
        self.depth = depth
        self.candidates = candidates
        self.idx = 0
        self.explored: list[int] = []
        self.on_ref = on_ref
        self.found = False


def _search_generators(n: int, adj: list[list[int]], adj_sets: list[set[int]],
                       root_colors: list[int]) -> list[tuple[int, ...]]:
    """Individualization-refinement search for a generating set of Aut."""
    generators: list[tuple[int, ...]] = []
    ref_leaf: list[int] | None = None          # position by color rank
    ref_inv: dict[int, tuple] = {}             # depth -> invariant of ref node
    base_prefix: list[int] = []                # ref-path individualized vertices

    def leaf_labeling(colors: list[int]) -> list[int]:
        lab = [0] * n
        for v, c in enumerate(colors):
            lab[c] = v
        return lab

    def try_leaf(colors: list[int]) -> bool:
        """Non-reference leaf: extract sigma and keep it if it's an automorphism."""
        lab = leaf_labeling(colors)
        sigma = [0] * n
        for c in range(n):
            sigma[ref_leaf[c]] = lab[c]
        for v in range(n):
            sv = sigma[v]
            nbrs = adj[v]
            target = adj_sets[sv]
            if len(nbrs) != len(target):
                return False
            for u in nbrs:
                if sigma[u] not in target:
                    return False
        generators.append(tuple(sigma))
        return True

    def in_known_orbit(v: int, explored: list[int], depth: int) -> bool:
        fixing = [g for g in generators if all(g[b] == b for b in base_prefix[:depth])]
        if not fixing:
            return False
        seen = {v}
        frontier = [v]
        explored_set = set(explored)
        while frontier:
            x = frontier.pop()
            if x in explored_set:
                return True
            for g in fixing:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return False

    if len(set(root_colors)) == n:
        return []  # rigid

    root = _Node(root_colors, 0, _target_cell(n, root_colors), True)
    stack = [root]

    while stack:
        node = stack[-1]
        if node.found and not node.on_ref:
            stack.pop()
            if stack and not stack[-1].on_ref:
                stack[-1].found = True
            continue
        if node.idx >= len(node.candidates):
            stack.pop()
            continue
        v = node.candidates[node.idx]
        node.idx += 1
        is_ref_child = node.on_ref and not node.explored
        if node.on_ref and not is_ref_child and in_known_orbit(v, node.explored, node.depth):
            continue

        child_colors = list(node.colors)
        child_colors[v] = len(set(node.colors))
        child_colors = _refine(n, adj, _normalize_colors(n, child_colors))
        child_depth = node.depth + 1
        inv = _partition_invariant(n, adj, child_colors)

        if is_ref_child:
            base_prefix.append(v)
            ref_inv[child_depth] = inv
            node.explored.append(v)
            if len(set(child_colors)) == n:
                ref_leaf = leaf_labeling(child_colors)
                continue
            stack.append(_Node(child_colors, child_depth, _target_cell(n, child_colors), True))
            continue

        if node.on_ref:
            node.explored.append(v)
        if ref_inv.get(child_depth) != inv:
            continue
        if len(set(child_colors)) == n:
            if try_leaf(child_colors) and not node.on_ref:
                node.found = True
            continue
        stack.append(_Node(child_colors, child_depth, _target_cell(n, child_colors), False))

    return generators


# -- stabilizer chain (order beyond the enumeration cap) ------------------


class _StabChain:
    """Coset-representative chain with sift-and-enter closure.

    Base points are appended on demand (smallest moved point of the
    first residue that fixes all current base points).  `base_prefix`
    forces the leading base points, which is how vertex stabilizer
    orders are computed without full enumeration.
    """

    def __init__(self, n: int, base_prefix: tuple[int, ...] = ()):
        self.n = n
        self.identity = tuple(range(n))
        self.base: list[int] = []
        self.reps: list[dict[int, tuple[int, ...]]] = []
        for b in base_prefix:
            self._append_level(b)
        self._rep_count = 0

    def _append_level(self, b: int) -> None:
        self.base.append(b)
        self.reps.append({})

    def enter(self, g: tuple[int, ...]) -> None:
        if g == self.identity:
            return
        queue = [g]
        while queue:
            h = queue.pop()
            level, h = self._sift(h)
            if h == self.identity:
                continue
            if level == len(self.base):
                self._append_level(min(i for i in range(self.n) if h[i] != i))
            self.reps[level][h[self.base[level]]] = h
            self._rep_count += 1
            if self._rep_count * self.n > _CHAIN_INT_BUDGET:
                raise SizeLimitError(
                    "automorphism group too large for the stabilizer chain at this size")
            for lvl in self.reps:
                for f in list(lvl.values()):
                    queue.append(_compose(h, f))
                    queue.append(_compose(f, h))

    def _sift(self, g: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
        for i, b in enumerate(self.base):
            x = g[b]
            if x == b:
                continue
            u = self.reps[i].get(x)
            if u is None:
                return i, g
            g = _compose(g, _inverse(u))
        return len(self.base), g

    def order(self) -> int:
        total = 1
        for lvl in self.reps:
            total *= len(lvl) + 1
        return total

    def first_orbit_size(self) -> int:
        return len(self.reps[0]) + 1 if self.reps else 1

    def enumerate(self) -> list[tuple[int, ...]]:
        elements = [self.identity]
        for lvl in reversed(self.reps):
            if not lvl:
                continue
            extended = list(elements)
            for u in lvl.values():
                extended.extend(_compose(e, u) for e in elements)
            elements = extended
        return elements


def _closure_elements(n: int, generators: list[tuple[int, ...]],
                      limit: int) -> list[tuple[int, ...]] | None:
    """All products of the generators, or None once `limit` is exceeded."""
    identity = tuple(range(n))
    elements = {identity}
    frontier = [identity]
    while frontier:
        p = frontier.pop()
        for g in generators:
            q = _compose(p, g)
            if q not in elements:
                if len(elements) >= limit:
                    return None
                elements.add(q)
                frontier.append(q)
    return sorted(elements)


# -- public operations ----------------------------------------------------


def automorphisms(g: Graph, *, max_vertices: int = DEFAULT_MAX_VERTICES,
                  enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                  initial_colors: dict[int, int] | None = None,
                  self_check: bool = False) -> AutGroup:
    """Exact automorphism group of an unlabeled simple graph.

    `initial_colors` is an internal speed hint: a partition the caller
    guarantees to be automorphism-invariant (tags are NOT consulted by
    default, matching unlabeled-graph semantics).  Deterministic output
    regardless of dict ordering.
    """
    vids = g.vertices()
    n = len(vids)
    if n > max_vertices:
        raise SizeLimitError(f"graph has {n} vertices, engine bound is {max_vertices}")
    pos = {v: i for i, v in enumerate(vids)}
    adj = [sorted(pos[u] for u in g.neighbors(v)) for v in vids]
    adj_sets = [set(a) for a in adj]

    if initial_colors is None:
        start = [0] * n
    else:
        start = _normalize_colors(n, [initial_colors[v] for v in vids])
    root_colors = _refine(n, adj, start) if n else []

    pos_gens = _search_generators(n, adj, adj_sets, root_colors) if n else []
    pos_gens.sort()

    pos_elements = _closure_elements(
        n, pos_gens, min(enumeration_cap, max(_ELEMENT_INT_BUDGET // max(n, 1), 1)))
    if pos_elements is not None:
        order = len(pos_elements)
    else:
        chain = _StabChain(n)
        for p in pos_gens:
            chain.enter(p)
        order = chain.order()

    if self_check and pos_elements is not None:
        for p in pos_elements:
            _assert_automorphism(n, adj, adj_sets, p)

    return _package(vids, order, pos_gens, pos_elements)


def brute_force_automorphisms(g: Graph) -> AutGroup:
    """Ground-truth oracle: test every permutation of V(g).  |V| <= 9."""
    vids = g.vertices()
    n = len(vids)
    if n > 9:
        raise SizeLimitError(f"brute force oracle limited to 9 vertices, got {n}")
    pos = {v: i for i, v in enumerate(vids)}
    adj_sets = [set(pos[u] for u in g.neighbors(v)) for v in vids]
    edges = [(u, v) for u in range(n) for v in adj_sets[u] if u < v]
    elements = []
    for perm in itertools.permutations(range(n)):
        if all(perm[v] in adj_sets[perm[u]] for u, v in edges):
            elements.append(perm)
    elements.sort()
    gens = [p for p in elements if p != tuple(range(n))]
    return _package(tuple(vids), len(elements), gens, elements)


def _assert_automorphism(n, adj, adj_sets, p) -> None:
    for v in range(n):
        for u in adj[v]:
            if p[u] not in adj_sets[p[v]]:
                raise AssertionError("engine produced a non-automorphism")


def _package(vids, order: int, pos_gens, pos_elements) -> AutGroup:
    vids = tuple(vids)
    gens = [Permutation(vids, tuple(vids[p[i]] for i in range(len(vids)))) for p in pos_gens]
    elements = None
    if pos_elements is not None:
        elements = [Permutation(vids, tuple(vids[p[i]] for i in range(len(vids))))
                    for p in pos_elements]
    return AutGroup(vertex_ids=vids, order=order, generators=gens, elements=elements,
                    _pos_generators=list(pos_gens), _pos_elements=pos_elements)


def orbit_of(g: Graph, v: int, **engine_kwargs) -> set[int]:
    """{ sigma(v) : sigma in Aut(g) }."""
    if not g.has_vertex(v):
        raise UnknownVertexError(f"vertex {v} not in graph")
    return automorphisms(g, **engine_kwargs).orbit(v)


def stabilizer_order(g: Graph, v: int, **engine_kwargs) -> int:
    """Order of the stabilizer of v in Aut(g)."""
    if not g.has_vertex(v):
        raise UnknownVertexError(f"vertex {v} not in graph")
    return automorphisms(g, **engine_kwargs).stabilizer_order(v)


def _cayley_table(pos_elements: list[tuple[int, ...]]) -> list[list[int]]:
    index = {p: i for i, p in enumerate(pos_elements)}
    return [[index[_compose(p, q)] for q in pos_elements] for p in pos_elements]


def aut_as_abstract_group(a: AutGroup, max_order: int = DEFAULT_TABLE_CAP) -> FiniteGroup:
    """The abstract group of an enumerated AutGroup, identity at index 0.

    Element numbering is deterministic: identity first, then sorted by
    image tuple (sorting puts the identity first on its own).
    """
    if a.elements is None or a._pos_elements is None:
        raise SizeLimitError(
            f"automorphism group of order {a.order} is not enumerated; compare orders instead")
    if a.order > max_order:
        raise SizeLimitError(
            f"automorphism group of order {a.order} exceeds the Cayley-table cap {max_order}")
    table = _cayley_table(a._pos_elements)
    return FiniteGroup(order=a.order, table=tuple(tuple(r) for r in table), name=f"Aut({a.order})")


# -- pairwise isomorphism --------------------------------------------------


def graph_isomorphic(a: Graph, b: Graph, *, max_vertices: int = DEFAULT_MAX_VERTICES) -> bool:
    """Exact isomorphism test reusing the refinement machinery.

    Refines the disjoint union (shared color space), rejects on any
    color-histogram mismatch, then backtracks over color-respecting
    vertex images with full adjacency consistency.
    """
    na, nb = a.vertex_count, b.vertex_count
    if na != nb or a.edge_count != b.edge_count:
        return False
    if na > max_vertices:
        raise SizeLimitError(f"graphs have {na} vertices, engine bound is {max_vertices}")
    if na == 0:
        return True

    vids_a, vids_b = a.vertices(), b.vertices()
    pos_a = {v: i for i, v in enumerate(vids_a)}
    pos_b = {v: i + na for i, v in enumerate(vids_b)}
    n = 2 * na
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in a.edges():
        adj[pos_a[u]].append(pos_a[v])
        adj[pos_a[v]].append(pos_a[u])
    for u, v in b.edges():
        adj[pos_b[u]].append(pos_b[v])
        adj[pos_b[v]].append(pos_b[u])
    colors = _refine(n, adj, [0] * n)

    cells_a: dict[int, list[int]] = {}
    cells_b: dict[int, list[int]] = {}
    for i in range(na):
        cells_a.setdefault(colors[i], []).append(i)
    for i in range(na, n):
        cells_b.setdefault(colors[i], []).append(i)
    if set(cells_a) != set(cells_b):
        return False
    for c, members in cells_a.items():
        if len(members) != len(cells_b[c]):
            return False

    adj_sets = [set(x) for x in adj]
    # most-constrained-first static order: small cells before large ones
    order = sorted(range(na), key=lambda i: (len(cells_a[colors[i]]), colors[i], i))
    mapping: list[int | None] = [None] * na
    used: set[int] = set()

    # iterative backtracking (gadget graphs are deeper than the default
    # recursion limit)
    cand_stack: list[list[int]] = []
    idx_stack: list[int] = []

    def candidates_for(i: int) -> list[int]:
        v = order[i]
        mapped_nbrs = [u for u in adj[v] if u < na and mapping[u] is not None]
        want = {mapping[u] for u in mapped_nbrs}
        out = []
        for w in cells_b[colors[v]]:
            if w in used:
                continue
            if want <= adj_sets[w] and len(adj_sets[w] & used) == len(want):
                out.append(w)
        return out

    depth = 0
    cand_stack.append(candidates_for(0))
    idx_stack.append(0)
    while True:
        if idx_stack[depth] < len(cand_stack[depth]):
            w = cand_stack[depth][idx_stack[depth]]
            idx_stack[depth] += 1
            mapping[order[depth]] = w
            used.add(w)
            if depth + 1 == na:
                return True
            depth += 1
            if depth == len(cand_stack):
                cand_stack.append([])
                idx_stack.append(0)
            cand_stack[depth] = candidates_for(depth)
            idx_stack[depth] = 0
        else:
            if depth == 0:
                return False
            depth -= 1
            w = mapping[order[depth]]
            mapping[order[depth]] = None
            used.discard(w)
