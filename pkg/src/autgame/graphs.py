"""Simple undirected graphs with stable vertex IDs and provenance tags.

Vertex IDs are never reused after deletion within one construction
lineage, so a transcript line like "delete vertex 417" stays replayable
byte-for-byte.  Public mutation operations return new graphs; the
underscore-prefixed in-place variants exist for builders that own their
graph exclusively.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import UnknownVertexError

ROLES = (
    "group-element",
    "edge-gadget-internal",
    "gadget-path",
    "reveal-x",
    "reveal-y",
    "anchor",
    "plain",
)

# DOT styling per role; documented in the README.
_DOT_STYLE = {
    "group-element": 'shape=circle, style=filled, fillcolor="#9ecae1"',
    "edge-gadget-internal": 'shape=circle, style=filled, fillcolor="#d9d9d9", width=0.15',
    "gadget-path": 'shape=box, style=filled, fillcolor="#fff7bc", width=0.2',
    "reveal-x": 'shape=diamond, style=filled, fillcolor="#fb6a4a"',
    "reveal-y": 'shape=diamond, style=filled, fillcolor="#74c476"',
    "anchor": 'shape=hexagon, style=filled, fillcolor="#fdae6b"',
    "plain": "shape=ellipse",
}


@dataclass(frozen=True)
class VertexTag:
    """Construction provenance of a vertex.

    `path_index` is the 1-based position i for gadget-path vertices;
    `layer` is the game layer j (also the anchor's j); `gadget_id`
    points back at the gadget copy that created the vertex.
    """

    role: str = "plain"
    path_index: int | None = None
    layer: int | None = None
    gadget_id: str | None = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown vertex role {self.role!r}")

    def to_json(self) -> dict:
        obj: dict = {"role": self.role}
        if self.path_index is not None:
            obj["path_index"] = self.path_index
        if self.layer is not None:
            obj["layer"] = self.layer
        if self.gadget_id is not None:
            obj["gadget_id"] = self.gadget_id
        return obj

    @staticmethod
    def from_json(obj: dict) -> "VertexTag":
        return VertexTag(
            role=obj.get("role", "plain"),
            path_index=obj.get("path_index"),
            layer=obj.get("layer"),
            gadget_id=obj.get("gadget_id"),
        )

    def with_updates(self, **kwargs) -> "VertexTag":
        fields = {
            "role": self.role,
            "path_index": self.path_index,
            "layer": self.layer,
            "gadget_id": self.gadget_id,
        }
        fields.update(kwargs)
        return VertexTag(**fields)


class Graph:
    """Undirected simple graph over stable integer vertex IDs."""

    __slots__ = ("_adj", "_tags", "_next_id")

    def __init__(self):
        self._adj: dict[int, set[int]] = {}
        self._tags: dict[int, VertexTag] = {}
        self._next_id: int = 0

    # -- inspection ------------------------------------------------------

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def tag(self, v: int) -> VertexTag:
        self._require(v)
        return self._tags[v]

    def neighbors(self, v: int) -> set[int]:
        self._require(v)
        return set(self._adj[v])

    def degree(self, v: int) -> int:
        self._require(v)
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        """Edges with smaller ID first, sorted lexicographically."""
        out = []
        for u in self._adj:
            for v in self._adj[u]:
                if u < v:
                    out.append((u, v))
        out.sort()
        return out

    @property
    def vertex_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def _require(self, v: int) -> None:
        if v not in self._adj:
            raise UnknownVertexError(f"vertex {v} not in graph")

    # -- in-place construction (exclusive access only) -------------------

    def _add_vertex(self, tag: VertexTag = VertexTag()) -> int:
        v = self._next_id
        self._next_id += 1
        self._adj[v] = set()
        self._tags[v] = tag
        return v

    def _add_edge(self, u: int, v: int) -> None:
        self._require(u)
        self._require(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def _delete_vertex(self, v: int) -> None:
        self._require(v)
        for u in self._adj[v]:
            self._adj[u].discard(v)
        del self._adj[v]
        del self._tags[v]

    def _set_tag(self, v: int, tag: VertexTag) -> None:
        self._require(v)
        self._tags[v] = tag

    def copy(self) -> "Graph":
        g = Graph()
        g._adj = {v: set(nbrs) for v, nbrs in self._adj.items()}
        g._tags = dict(self._tags)
        g._next_id = self._next_id
        return g

    # -- value-style operations ------------------------------------------

    def delete_vertex(self, v: int) -> "Graph":
        """g - v: the vertex and its incident edges removed, IDs stable."""
        g = self.copy()
        g._delete_vertex(v)
        return g

    def delete_vertices(self, vs) -> "Graph":
        g = self.copy()
        for v in vs:
            g._delete_vertex(v)
        return g

    def induced_subgraph(self, keep) -> "Graph":
        """Induced subgraph on `keep`, preserving IDs and the ID counter."""
        keep = set(keep)
        for v in keep:
            self._require(v)
        g = Graph()
        g._adj = {v: self._adj[v] & keep for v in keep}
        g._tags = {v: self._tags[v] for v in keep}
        g._next_id = self._next_id
        return g

    def attach_pendant_path(self, v: int, length: int,
                            tagger=None) -> tuple["Graph", list[int]]:
        """Attach a fresh path u_1..u_length hanging from v.

        `tagger` maps the 1-based path position to a VertexTag.
        Returns the new graph and the fresh IDs in path order.
        """
        self._require(v)
        if length < 1:
            raise ValueError(f"path length must be >= 1, got {length}")
        g = self.copy()
        ids = g._attach_pendant_path(v, length, tagger)
        return g, ids

    def _attach_pendant_path(self, v: int, length: int, tagger=None) -> list[int]:
        ids = []
        prev = v
        for i in range(1, length + 1):
            tag = tagger(i) if tagger is not None else VertexTag()
            u = self._add_vertex(tag)
            self._add_edge(prev, u)
            ids.append(u)
            prev = u
        return ids

    def join_vertex_to_set(self, v: int, targets) -> "Graph":
        """Add the edge {v, w} for every w in targets (idempotent)."""
        targets = set(targets)
        if v in targets:
            raise ValueError(f"cannot join vertex {v} to itself")
        self._require(v)
        for w in targets:
            self._require(w)
        g = self.copy()
        for w in targets:
            g._add_edge(v, w)
        return g

    def disjoint_copy(self, source: "Graph",
                      tag_remap=None) -> tuple["Graph", dict[int, int]]:
        """Embed `source` with fresh IDs; returns (new graph, old->new map)."""
        g = self.copy()
        idmap = g._disjoint_copy(source, tag_remap)
        return g, idmap

    def _disjoint_copy(self, source: "Graph", tag_remap=None) -> dict[int, int]:
        idmap: dict[int, int] = {}
        for old in source.vertices():
            tag = source._tags[old]
            if tag_remap is not None:
                tag = tag_remap(old, tag)
            idmap[old] = self._add_vertex(tag)
        for u, v in source.edges():
            self._add_edge(idmap[u], idmap[v])
        return idmap

    # -- algorithms --------------------------------------------------------

    def is_connected(self) -> bool:
        """Standard traversal; the empty graph counts as connected."""
        if not self._adj:
            return True
        start = next(iter(self._adj))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in self._adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self._adj)

    def check_integrity(self) -> None:
        """Assert adjacency symmetry and loop-freeness (pre-serialization)."""
        for v, nbrs in self._adj.items():
            if v in nbrs:
                raise AssertionError(f"self-loop at {v}")
            for u in nbrs:
                if u not in self._adj or v not in self._adj[u]:
                    raise AssertionError(f"asymmetric edge ({v},{u})")

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        self.check_integrity()
        return {
            "vertices": [{"id": v, "tag": self._tags[v].to_json()} for v in self.vertices()],
            "edges": [[u, v] for u, v in self.edges()],
        }

    def to_json(self) -> str:
        """Canonical JSON: sorted keys, no whitespace, stable ordering."""
        return canonical_json(self.to_json_obj())

    def sha256(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    @staticmethod
    def from_json_obj(obj: dict) -> "Graph":
        g = Graph()
        for entry in obj["vertices"]:
            vid = entry["id"]
            g._adj[vid] = set()
            g._tags[vid] = VertexTag.from_json(entry.get("tag", {}))
        for u, v in obj["edges"]:
            g._add_edge(u, v)
        g._next_id = max(g._adj, default=-1) + 1
        return g

    @staticmethod
    def from_json(text: str) -> "Graph":
        return Graph.from_json_obj(json.loads(text))

    def to_dot(self, name: str = "G") -> str:
        self.check_integrity()
        lines = [f"graph {name} {{", "  node [fontsize=10];"]
        for v in self.vertices():
            style = _DOT_STYLE.get(self._tags[v].role, _DOT_STYLE["plain"])
            lines.append(f'  {v} [label="{v}", {style}];')
        for u, v in self.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def canonical_json(obj) -> str:
    """The one serializer both the CLI and the API go through."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def graph_from_edges(edges, n_vertices: int | None = None) -> Graph:
    """Convenience builder for tests and demos: vertices 0..n-1, plain tags."""
    g = Graph()
    n = n_vertices
    if n is None:
        n = max((max(u, v) for u, v in edges), default=-1) + 1
    for _ in range(n):
        g._add_vertex()
    for u, v in edges:
        g._add_edge(u, v)
    return g
