"""Core graph type, generators, Cartesian products, and Tutte moves.

Graphs are simple, undirected, and immutable.  Vertex labels are opaque
strings; operations never invent semantics for them.  Products carry
per-edge classification metadata (which fiber copy an edge lives in, or
which pair of layers a connector edge joins) because the face-counting
provers consume it constantly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

Edge = tuple[str, str]


def edge_key(u: str, v: str) -> Edge:
    """Canonical unordered representation of an edge."""
    if u == v:
        raise ValueError(f"loop edge at {u!r}")
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class EdgeClass:
    """Classification of a product edge.

    kind="fiber": the edge lies inside copy ``index`` of the first factor
    (one copy per vertex of the second factor, indexed by its position).
    kind="connector": the edge lies inside a second-factor fiber; for a
    path second factor, ``index`` is the layer j joined to layer j+1.
    """

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("fiber", "connector"):
            raise ValueError(f"unknown edge class kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("edge class index must be nonnegative")

    @property
    def is_fiber(self) -> bool:
        return self.kind == "fiber"

    @property
    def is_connector(self) -> bool:
        return self.kind == "connector"

    def to_json(self) -> dict:
        return {"kind": self.kind, "index": self.index}

    @classmethod
    def from_json(cls, obj: dict) -> "EdgeClass":
        return cls(str(obj["kind"]), int(obj["index"]))


@dataclass(frozen=True)
class ProductLabel:
    """A product vertex, remembering its two projections."""

    g_part: str
    h_part: str

    def __str__(self) -> str:
        return f"({self.g_part},{self.h_part})"


class Graph:
    """Immutable simple undirected graph.

    ``vertices`` is an ordered tuple (order is significant for I/O and
    deterministic iteration); ``edges`` is a frozenset of canonical pairs.
    Connectivity is not an invariant; operations that need it check it.
    """

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str]],
        edge_classes: Mapping[Edge, EdgeClass] | None = None,
        vertex_parts: Mapping[str, tuple[str, str]] | None = None,
    ):
        vs = tuple(str(v) for v in vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertex labels")
        vset = set(vs)
        es = set()
        for u, v in edges:
            u, v = str(u), str(v)
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u!r},{v!r}) mentions unknown vertex")
            es.add(edge_key(u, v))
        self.vertices: tuple[str, ...] = vs
        self.edges: frozenset[Edge] = frozenset(es)
        if edge_classes is not None:
            edge_classes = MappingProxyType(
                {edge_key(*e): c for e, c in edge_classes.items()}
            )
            if set(edge_classes) != self.edges:
                raise ValueError("edge_classes must classify exactly the edge set")
        self.edge_classes = edge_classes
        if vertex_parts is not None:
            vertex_parts = MappingProxyType(dict(vertex_parts))
        self.vertex_parts = vertex_parts

    # equality and hashing ignore metadata: two graphs are the same object
    # of study whenever vertex order and edge set agree
    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        """Neighbors of each vertex, ordered by vertex position."""
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        idx = self._index
        return {v: tuple(sorted(nbrs, key=idx.__getitem__)) for v, nbrs in adj.items()}

    def index(self, v: str) -> int:
        return self._index[v]

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self.adjacency[v]

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self.edges

    def min_degree(self) -> int:
        return min((self.degree(v) for v in self.vertices), default=0)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            u = stack.pop()
            for w in self.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def subgraph(self, keep: Iterable[str]) -> "Graph":
        keep_set = set(keep)
        return Graph(
            [v for v in self.vertices if v in keep_set],
            [e for e in self.edges if e[0] in keep_set and e[1] in keep_set],
        )

    def relabeled(self, mapping: Mapping[str, str]) -> "Graph":
        return Graph(
            [mapping[v] for v in self.vertices],
            [(mapping[u], mapping[v]) for u, v in self.edges],
        )

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


# ---------------------------------------------------------------------------
# generators


def path_graph(n: int) -> Graph:
    """Path on n vertices labeled 0..n-1 in path order."""
    if n < 1:
        raise ValueError("path needs at least one vertex")
    labels = [str(i) for i in range(n)]
    return Graph(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least three vertices")
    labels = [f"v{i + 1}" for i in range(n)]
    return Graph(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs at least one vertex")
    labels = [str(i + 1) for i in range(n)]
    return Graph(labels, itertools.combinations(labels, 2))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    left = [f"a{i + 1}" for i in range(a)]
    right = [f"b{i + 1}" for i in range(b)]
    return Graph(left + right, itertools.product(left, right))


def wheel(n: int) -> Graph:
    """Wheel with hub c joined to an n-cycle rim b0..b{n-1}."""
    if n < 3:
        raise ValueError("wheel order must be at least 3")
    rim = [f"b{i}" for i in range(n)]
    edges = [("c", b) for b in rim]
    edges += [(rim[i], rim[(i + 1) % n]) for i in range(n)]
    return Graph(["c"] + rim, edges)


def squared_cycle(n: int) -> Graph:
    """Cycle v1..vn plus a chord between every pair at distance two.

    For n = 4 the distance-two chords coincide pairwise, so the result
    collapses to K4.
    """
    if n < 4:
        raise ValueError("squared cycle needs at least four vertices")
    labels = [f"v{i + 1}" for i in range(n)]
    edges = set()
    for i in range(n):
        edges.add(edge_key(labels[i], labels[(i + 1) % n]))
        edges.add(edge_key(labels[i], labels[(i + 2) % n]))
    return Graph(labels, edges)


# ---------------------------------------------------------------------------
# Cartesian product


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Cartesian product with labeled fibers.

    Vertices are rendered "(u,v)".  Edges varying in the first coordinate
    are classed fiber(i) where i indexes the second-factor vertex; edges
    varying in the second coordinate are classed connector(j) where j is
    the smaller position of the two second-factor endpoints.
    """
    labels: dict[tuple[str, str], str] = {}
    parts: dict[str, tuple[str, str]] = {}
    order: list[str] = []
    for a in g.vertices:
        for b in h.vertices:
            lab = str(ProductLabel(a, b))
            labels[(a, b)] = lab
            parts[lab] = (a, b)
            order.append(lab)
    edges: dict[Edge, EdgeClass] = {}
    for j, b in enumerate(h.vertices):
        for u, v in g.edges:
            edges[edge_key(labels[(u, b)], labels[(v, b)])] = EdgeClass("fiber", j)
    for u, v in h.edges:
        j = min(h.index(u), h.index(v))
        for a in g.vertices:
            edges[edge_key(labels[(a, u)], labels[(a, v)])] = EdgeClass(
                "connector", j
            )
    return Graph(order, edges.keys(), edge_classes=edges, vertex_parts=parts)


def fiber_layers(gp: Graph) -> dict[int, frozenset[Edge]]:
    """Group fiber edges of a product by copy index."""
    if gp.edge_classes is None:
        raise ValueError("graph carries no product edge classes")
    out: dict[int, set[Edge]] = {}
    for e, c in gp.edge_classes.items():
        if c.is_fiber:
            out.setdefault(c.index, set()).add(e)
    return {i: frozenset(es) for i, es in out.items()}


def connector_layers(gp: Graph) -> dict[int, frozenset[Edge]]:
    """Group connector edges of a product by layer pair index."""
    if gp.edge_classes is None:
        raise ValueError("graph carries no product edge classes")
    out: dict[int, set[Edge]] = {}
    for e, c in gp.edge_classes.items():
        if c.is_connector:
            out.setdefault(c.index, set()).add(e)
    return {i: frozenset(es) for i, es in out.items()}


# ---------------------------------------------------------------------------
# Tutte moves


def vertex_split(
    g: Graph,
    v: str,
    side_a: Iterable[str],
    side_b: Iterable[str],
    new_labels: tuple[str, str] | None = None,
) -> Graph:
    """Split v into two adjacent vertices carrying the declared neighbor sets.

    A valid move partitions N(v) into two disjoint sides and leaves both new
    vertices with degree at least three, so vertex and edge counts each grow
    by exactly one.
    """
    side_a = set(side_a)
    side_b = set(side_b)
    nbrs = set(g.neighbors(v))
    if side_a | side_b != nbrs or side_a & side_b:
        raise ValueError("sides must partition the neighborhood of the split vertex")
    if len(side_a) + 1 < 3 or len(side_b) + 1 < 3:
        raise ValueError("split would create a vertex of degree below three")
    if new_labels is None:
        new_labels = (f"{v}.1", f"{v}.2")
    va, vb = new_labels
    if va in g.vertices or vb in g.vertices or va == vb:
        raise ValueError("replacement labels collide with existing vertices")
    vertices = [va if u == v else u for u in g.vertices] + [vb]
    edges = [e for e in g.edges if v not in e]
    edges += [(va, u) for u in side_a]
    edges += [(vb, u) for u in side_b]
    edges.append((va, vb))
    return Graph(vertices, edges)


def add_edge(g: Graph, u: str, v: str) -> Graph:
    if u == v:
        raise ValueError("cannot add a loop")
    if u not in g.vertices or v not in g.vertices:
        raise ValueError("endpoints must already be vertices")
    if g.has_edge(u, v):
        raise ValueError(f"edge ({u},{v}) already present")
    return Graph(g.vertices, list(g.edges) + [(u, v)])


def construct_hn(n: int) -> Graph:
    """Planar 3-connected non-outer-cylindrical graph built from a wheel.

    Three Tutte moves on the order-n wheel: split the hub c into c1
    (adjacent to c2, b0, b1) and c2 (adjacent to c1 and b2..b{n-1}); add
    the edge c2-b1; split c2 into c3 (adjacent to b1, c1, b{n-1}, c4) and
    c4 (adjacent to c3 and b2..b{n-2}).  Index arithmetic is mod n.
    """
    if n < 5:
        raise ValueError("construction needs wheel order at least 5")
    g = wheel(n)
    rim = [f"b{i}" for i in range(n)]
    g = vertex_split(
        g,
        "c",
        side_a={rim[0], rim[1]},
        side_b=set(rim[2:]),
        new_labels=("c1", "c2"),
    )
    g = add_edge(g, "c2", rim[1])
    g = vertex_split(
        g,
        "c2",
        side_a={rim[1], "c1", rim[n - 1]},
        side_b=set(rim[2 : n - 1]),
        new_labels=("c3", "c4"),
    )
    return g


# ---------------------------------------------------------------------------
# girth


def girth(g: Graph) -> int | None:
    """Length of a shortest cycle, or None for forests."""
    best: int | None = None
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if best is not None and dist[u] * 2 >= best:
                break
            for w in g.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w and parent[w] != u:
                    cand = dist[u] + dist[w] + 1
                    if best is None or cand < best:
                        best = cand
    return best


# ---------------------------------------------------------------------------
# isomorphism (exact backtracking, intended for small graphs)


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(g1.degree(v) for v in g1.vertices) != sorted(
        g2.degree(v) for v in g2.vertices
    ):
        return False

    def signature(g: Graph, v: str) -> tuple:
        return (g.degree(v), tuple(sorted(g.degree(w) for w in g.neighbors(v))))

    sig1 = {v: signature(g1, v) for v in g1.vertices}
    sig2 = {v: signature(g2, v) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return False
    # most-constrained-first assignment order
    order = sorted(g1.vertices, key=lambda v: (-g1.degree(v), v))
    candidates = {v: [w for w in g2.vertices if sig2[w] == sig1[v]] for v in order}

    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used:
                continue
            ok = True
            for u in g1.neighbors(v):
                if u in mapping and not g2.has_edge(mapping[u], w):
                    ok = False
                    break
            if ok:
                for u in mapping:
                    if not g1.has_edge(u, v) and g2.has_edge(mapping[u], w):
                        ok = False
                        break
            if not ok:
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.remove(w)
        return False

    return extend(0)
