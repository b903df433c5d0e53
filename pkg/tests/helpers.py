"""Shared graph builders and independent oracles for the test suite."""

from __future__ import annotations

import itertools

from autgame.graphs import Graph, graph_from_edges


def path_graph(n: int) -> Graph:
    return graph_from_edges([(i, i + 1) for i in range(n - 1)], n_vertices=n)


def cycle_graph(n: int) -> Graph:
    return graph_from_edges([(i, (i + 1) % n) for i in range(n)], n_vertices=n)


def complete_graph(n: int) -> Graph:
    return graph_from_edges(list(itertools.combinations(range(n), 2)), n_vertices=n)


def star_graph(leaves: int) -> Graph:
    return graph_from_edges([(0, i) for i in range(1, leaves + 1)], n_vertices=leaves + 1)


def spider_123() -> Graph:
    """Rigid 7-vertex tree: legs of lengths 1, 2, 3 from vertex 0."""
    return graph_from_edges([(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)])


def all_labeled_graphs(n: int):
    """Every labeled simple graph on vertices 0..n-1."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
        yield graph_from_edges(edges, n_vertices=n)


def brute_force_group_isomorphic(a, b) -> bool:
    """All-bijections oracle for group isomorphism (orders <= 8).

    Any isomorphism maps identity to identity, so bijections fixing 0
    suffice.  Independent of the shipped generator-image backtracking.
    """
    if a.order != b.order:
        return False
    m = a.order
    for images in itertools.permutations(range(1, m)):
        phi = (0,) + images
        if all(phi[a.table[x][y]] == b.table[phi[x]][phi[y]]
               for x in range(m) for y in range(m)):
            return True
    return False


def perm_images_set(aut_group) -> set[tuple[int, ...]]:
    return {p.images for p in aut_group.elements}
