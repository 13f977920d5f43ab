"""Vertex connectivity, minor search with witnesses, and product witnesses.

A minor witness maps each vertex of the minor to a branch set in the
host: a nonempty connected vertex subset, pairwise disjoint across the
map, with every minor edge realized by some host edge between the two
branch sets.  Witnesses are re-verifiable from scratch, so a positive
answer never has to be trusted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import SearchBudgetExceeded
from .graphs import Edge, Graph, cartesian_product, complete_graph, edge_key


# ---------------------------------------------------------------------------
# vertex connectivity


def _max_vertex_disjoint_paths(g: Graph, s: str, t: str) -> int:
    """Number of internally vertex-disjoint s-t paths (s,t non-adjacent).

    Unit-capacity flow on the split digraph: each vertex other than s,t
    becomes in->out with capacity one; every edge gives arcs out->in in
    both directions.
    """
    # residual graph as adjacency dict: node -> set of nodes with capacity 1
    def node_in(v):
        return ("i", v)

    def node_out(v):
        return ("o", v)

    res: dict = {}

    def add_arc(a, b):
        res.setdefault(a, set()).add(b)
        res.setdefault(b, set())

    for v in g.vertices:
        if v in (s, t):
            continue
        add_arc(node_in(v), node_out(v))
    source, sink = node_out(s), node_in(t)
    res.setdefault(source, set())
    res.setdefault(sink, set())
    for u, v in g.edges:
        # arcs u->v and v->u; endpoints s,t use their single node
        for a, b in ((u, v), (v, u)):
            if a == t or b == s:
                continue
            start = source if a == s else node_out(a)
            end = sink if b == t else node_in(b)
            add_arc(start, end)
    flow = 0
    while True:
        # BFS for an augmenting path
        prev = {source: None}
        queue = [source]
        head = 0
        while head < len(queue) and sink not in prev:
            a = queue[head]
            head += 1
            for b in res[a]:
                if b not in prev:
                    prev[b] = a
                    queue.append(b)
        if sink not in prev:
            return flow
        node = sink
        while node is not source:
            p = prev[node]
            res[p].remove(node)
            res.setdefault(node, set()).add(p)
            node = p
        flow += 1


def vertex_connectivity(g: Graph) -> int:
    """Exact vertex connectivity; complete graphs yield n-1 by convention."""
    if g.n == 0 or not g.is_connected():
        return 0
    if g.is_complete():
        return g.n - 1
    best = g.n - 1
    for s, t in itertools.combinations(g.vertices, 2):
        if g.has_edge(s, t):
            continue
        best = min(best, _max_vertex_disjoint_paths(g, s, t))
        if best == 0:
            break
    return best


# ---------------------------------------------------------------------------
# minor witnesses


@dataclass(frozen=True)
class MinorWitness:
    branch_sets: Mapping[str, frozenset[str]]
    edge_map: Mapping[Edge, Edge]

    def to_json(self) -> dict:
        return {
            "branch_sets": {v: sorted(s) for v, s in self.branch_sets.items()},
            "edge_map": {
                f"{u}|{v}": list(self.edge_map[(u, v)])
                for u, v in sorted(self.edge_map)
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MinorWitness":
        branch = {
            str(v): frozenset(str(x) for x in s)
            for v, s in obj["branch_sets"].items()
        }
        emap = {}
        for key, pair in obj["edge_map"].items():
            u, _, v = key.partition("|")
            emap[edge_key(u, v)] = edge_key(str(pair[0]), str(pair[1]))
        return cls(branch, emap)


def verify_witness(w: MinorWitness, minor: Graph, host: Graph) -> bool:
    """Recheck every witness invariant from scratch."""
    if set(w.branch_sets) != set(minor.vertices):
        return False
    seen: set[str] = set()
    for v, branch in w.branch_sets.items():
        if not branch or not branch <= set(host.vertices):
            return False
        if branch & seen:
            return False
        seen |= branch
        if not host.subgraph(branch).is_connected():
            return False
    for e in minor.edges:
        if e not in w.edge_map:
            return False
        a, b = w.edge_map[e]
        if edge_key(a, b) not in host.edges:
            return False
        u, v = e
        in_u = a in w.branch_sets[u] and b in w.branch_sets[v]
        in_v = a in w.branch_sets[v] and b in w.branch_sets[u]
        if not (in_u or in_v):
            return False
    return True


# ---------------------------------------------------------------------------
# minor search


def _connected_subsets(g: Graph, allowed: frozenset[str], max_size: int):
    """Yield nonempty connected subsets of ``allowed``, each exactly once.

    Subsets are grouped by their minimum-position vertex (the seed); within
    a group, extension vertices skipped at a branch point stay excluded in
    the whole remaining subtree, which is what rules out duplicates.
    """
    pos = {v: i for i, v in enumerate(g.vertices)}

    def rec(seed_pos, current, ext, forbidden):
        yield current
        if len(current) >= max_size:
            return
        banned = set(forbidden)
        for j, w in enumerate(ext):
            nxt = current | {w}
            fresh = tuple(
                x
                for x in g.neighbors(w)
                if x in allowed
                and pos[x] > seed_pos
                and x not in nxt
                and x not in ext
                and x not in banned
            )
            yield from rec(seed_pos, nxt, ext[j + 1 :] + fresh, banned)
            banned.add(w)

    for seed in g.vertices:
        if seed not in allowed:
            continue
        ext0 = tuple(
            w for w in g.neighbors(seed) if w in allowed and pos[w] > pos[seed]
        )
        yield from rec(pos[seed], frozenset([seed]), ext0, set())


def is_minor(
    minor: Graph, host: Graph, *, node_budget: int | None = None
) -> MinorWitness | None:
    """Search for a minor witness; None is a definitive negative.

    Exact backtracking intended for hosts of about twenty vertices or
    fewer.  Exceeding ``node_budget`` raises SearchBudgetExceeded, which
    is deliberately distinct from the negative answer.
    """
    if minor.n > host.n or minor.m > host.m:
        return None
    order = sorted(minor.vertices, key=lambda v: (-minor.degree(v), v))
    assignment: dict[str, frozenset[str]] = {}
    used: set[str] = set()
    nodes = 0

    def place(i: int) -> MinorWitness | None:
        nonlocal nodes
        if i == len(order):
            emap = {}
            for u, v in minor.edges:
                link = min(
                    e
                    for e in host.edges
                    if (e[0] in assignment[u] and e[1] in assignment[v])
                    or (e[0] in assignment[v] and e[1] in assignment[u])
                )
                emap[(u, v)] = link
            return MinorWitness(dict(assignment), emap)
        v = order[i]
        remaining_after = len(order) - i - 1
        max_size = host.n - len(used) - remaining_after
        if max_size < 1:
            return None
        allowed = frozenset(host.vertices) - used
        for branch in _connected_subsets(host, allowed, max_size):
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise SearchBudgetExceeded(
                    f"minor search exceeded {node_budget} nodes"
                )
            boundary = {x for b in branch for x in host.neighbors(b)} - branch
            if len(boundary) < minor.degree(v):
                continue
            ok = True
            for u in minor.neighbors(v):
                if u not in assignment:
                    continue
                if not any(
                    host.has_edge(a, b)
                    for a in branch
                    for b in assignment[u]
                ):
                    ok = False
                    break
            if not ok:
                continue
            assignment[v] = branch
            used.update(branch)
            found = place(i + 1)
            if found is not None:
                return found
            del assignment[v]
            used.difference_update(branch)
        return None

    return place(0)


def find_k4_minor(g: Graph, *, node_budget: int | None = None) -> MinorWitness:
    """K4 witness in a 3-connected graph (every such graph has one)."""
    if vertex_connectivity(g) < 3:
        raise ValueError("input must be 3-connected")
    w = is_minor(complete_graph(4), g, node_budget=node_budget)
    if w is None:
        raise AssertionError("3-connected graph without K4 witness")
    return w


# ---------------------------------------------------------------------------
# product witnesses


def product_minor_witness(
    w_g: MinorWitness,
    minor_g: Graph,
    host_g: Graph,
    w_h: MinorWitness,
    minor_h: Graph,
    host_h: Graph,
) -> MinorWitness:
    """Witness for (minor_g x minor_h) inside (host_g x host_h).

    Contracting every within-branch edge in each fiber copy, and deleting
    the unused copies, collapses the product onto branch sets that are
    exactly the products of the factor branch sets; the witness below is
    that closed form.  Vertex labels match ``cartesian_product`` output.
    """
    if not verify_witness(w_g, minor_g, host_g):
        raise ValueError("first factor witness does not verify")
    if not verify_witness(w_h, minor_h, host_h):
        raise ValueError("second factor witness does not verify")
    mp = cartesian_product(minor_g, minor_h)
    hp = cartesian_product(host_g, host_h)
    host_label = {
        parts: lab for lab, parts in (hp.vertex_parts or {}).items()
    }
    branch: dict[str, frozenset[str]] = {}
    for lab, (a, b) in (mp.vertex_parts or {}).items():
        branch[lab] = frozenset(
            host_label[(x, y)]
            for x in w_g.branch_sets[a]
            for y in w_h.branch_sets[b]
        )
    emap: dict[Edge, Edge] = {}
    for e in mp.edges:
        u, v = e
        (a1, b1) = mp.vertex_parts[u]
        (a2, b2) = mp.vertex_parts[v]
        if b1 == b2:
            # first-factor direction: route through one shared host copy
            x1, x2 = w_g.edge_map[edge_key(a1, a2)]
            y = min(w_h.branch_sets[b1])
            emap[e] = edge_key(host_label[(x1, y)], host_label[(x2, y)])
        else:
            y1, y2 = w_h.edge_map[edge_key(b1, b2)]
            x = min(w_g.branch_sets[a1])
            emap[e] = edge_key(host_label[(x, y1)], host_label[(x, y2)])
    return MinorWitness(branch, emap)


def identity_witness(g: Graph) -> MinorWitness:
    return MinorWitness(
        {v: frozenset([v]) for v in g.vertices}, {e: e for e in g.edges}
    )
