"""Euler lower bound and exact bounded-genus decision.

The decision procedure backtracks over rotation systems, assigning the
full cyclic order at one vertex per level.  Faces are traced
incrementally on the decided darts, and a branch is abandoned as soon as
the faces it can still close cannot reach the count the Euler relation
demands for the target genus.  Two refinements keep the bound honest and
sharp:

* every face of a simple graph with minimum degree two is a closed
  non-backtracking walk, hence at least ``girth`` darts long;
* a face containing a dart of a triangle-free edge is at least four
  darts long (a 3-dart face is necessarily a 3-cycle).

The second rule is what makes path-fiber products tractable: connector
edges never lie on triangles, so the many short faces an optimistic
bound would otherwise imagine are impossible.  Both rules only ever
discard branches that cannot reach the target, so disabling them changes
node counts, never verdicts.

Symmetry: the rotation at one maximum-degree root vertex is enumerated
up to its dihedral symmetries (anchored cyclic representatives, mirror
pair halved), because reversing every rotation of an embedding preserves
its genus.  Fixing the root rotation outright would be unsound: a graph
whose other vertices all have degree two admits no compensation
elsewhere.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .embeddings import EmbeddingCertificate, RotationSystem, embed, is_planar, planar_embedding
from .errors import SearchBudgetExceeded
from .graphs import Graph, girth


# ---------------------------------------------------------------------------
# closed-form lower bound


def euler_lower_bound(g: Graph) -> int:
    """Genus lower bound from the Euler relation and the girth.

    With girth a, every face of a 2-cell embedding uses at least a edge
    slots, so F <= 2E/a and g >= 1 + E(a-2)/(2a) - V/2.
    """
    if not g.is_connected():
        raise ValueError("lower bound requires a connected graph")
    a = girth(g)
    if a is None:
        raise ValueError("lower bound is undefined for trees")
    bound = 1 + Fraction(g.m * (a - 2), 2 * a) - Fraction(g.n, 2)
    return max(0, math.ceil(bound))


def triangular_embedding_possible(g: Graph) -> bool:
    """Necessary condition only: False rules a triangular embedding out.

    In a triangular embedding every edge borders two triangles, so an
    edge lying on no 3-cycle is fatal.  True means merely "not refuted
    by this test".
    """
    if girth(g) != 3:
        raise ValueError("test applies to graphs of girth three")
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    return all(adj[u] & adj[v] for u, v in g.edges)


# ---------------------------------------------------------------------------
# outcomes


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: dict = field(default_factory=dict)
    wall_ms: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        for k, v in other.prunes.items():
            self.prunes[k] = self.prunes.get(k, 0) + v
        self.wall_ms = max(self.wall_ms, other.wall_ms)


@dataclass
class SearchOutcome:
    verdict: str  # "embeddable" | "refuted" | "budget_exhausted"
    certificate: EmbeddingCertificate | None
    stats: SearchStats
    frontier: list[dict] | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "nodes": self.stats.nodes,
            "prunes": dict(self.stats.prunes),
            "wall_ms": round(self.stats.wall_ms, 3),
            "frontier": self.frontier,
        }


class _Stop(Exception):
    pass


# ---------------------------------------------------------------------------
# the search proper


class _Searcher:
    def __init__(self, g: Graph, target: int, euler_prune: bool, connector_prune: bool):
        self.g = g
        self.target = target
        self.euler_prune = euler_prune
        order = sorted(g.vertices, key=lambda v: (-g.degree(v), v))
        self.order = order
        vid = {v: i for i, v in enumerate(order)}
        edges = g.sorted_edges()
        self.edges = edges
        m = len(edges)
        self.m = m
        # dart 2e / 2e+1; reversal is xor 1
        tail = [0] * (2 * m)
        head = [0] * (2 * m)
        for e, (u, v) in enumerate(edges):
            tail[2 * e], head[2 * e] = vid[u], vid[v]
            tail[2 * e + 1], head[2 * e + 1] = vid[v], vid[u]
        self.tail, self.head = tail, head
        at_vertex: list[list[int]] = [[] for _ in order]
        for d in range(2 * m):
            at_vertex[tail[d]].append(d)
        self.at_vertex = [tuple(ds) for ds in at_vertex]
        # triangle-free edges support the stronger 4-dart face bound
        adj = {v: set(g.neighbors(v)) for v in g.vertices}
        tri_free = [0] * (2 * m)
        self.tf_total = 0
        if connector_prune:
            for e, (u, v) in enumerate(edges):
                if not (adj[u] & adj[v]):
                    tri_free[2 * e] = tri_free[2 * e + 1] = 1
                    self.tf_total += 2
        self.tri_free = tri_free
        if g.min_degree() >= 2:
            self.base = girth(g) or 2
        else:
            self.base = 2
        self.cb = max(4, self.base)
        self.f_needed = m - g.n + 2 - 2 * target
        self.choices = [self._vertex_choices(i) for i in range(len(order))]

    def _vertex_choices(self, i: int) -> list[tuple[int, ...]]:
        darts = self.at_vertex[i]
        k = len(darts)
        if k <= 2:
            return [darts]
        anchor, rest = darts[0], darts[1:]
        out = []
        for perm in permutations(rest):
            if i == 0 and k >= 3 and perm[0] > perm[-1]:
                continue  # dihedral representative at the root
            out.append((anchor,) + perm)
        return out

    def rotation_from(self, assignment: Sequence[tuple[int, ...]]) -> RotationSystem:
        rots = {}
        for i, rot in enumerate(assignment):
            v = self.order[i]
            rots[v] = tuple(self.order[self.head[d]] for d in rot)
        return RotationSystem(rots).canonical()

    def run(
        self,
        root_indices: Sequence[int] | None,
        node_budget: int | None,
        deadline: float | None,
        resume_choices: Sequence[int] | None = None,
        roots_remaining: Sequence[int] | None = None,
    ) -> SearchOutcome:
        g = self.g
        n = len(self.order)
        m2 = 2 * self.m
        succ = [-1] * m2
        closed = bytearray(m2)
        tri_free = self.tri_free
        base, cb = self.base, self.cb
        f_needed = self.f_needed
        euler_prune = self.euler_prune
        stats = SearchStats()
        prunes = stats.prunes
        t0 = time.perf_counter()

        state = {
            "f_done": 0,
            "darts_closed": 0,
            "tf_left": self.tf_total,
            "assigned": 0,
        }
        path: list[int] = []

        all_roots = list(range(len(self.choices[0])))
        if root_indices is None:
            root_indices = all_roots
        root_indices = list(root_indices)

        def face_budget() -> int:
            """Upper bound on faces the unclosed region can still provide."""
            r = m2 - state["darts_closed"]
            u = m2 - state["assigned"]
            c = state["tf_left"]
            if c == 0:
                cap = r // base
            else:
                cap = -1
                k = 1
                while cb * k <= r:
                    used = cb * k
                    if used < c:
                        used = c
                    if used > r:
                        break
                    cand = k + (r - used) // base
                    if cand > cap:
                        cap = cand
                    k += 1
                if cap < 0:
                    return -1
            return min(cap, u)

        def apply(vi: int, rot: tuple[int, ...]) -> list:
            undo: list = []
            k = len(rot)
            for idx in range(k):
                a = rot[idx]
                succ[a ^ 1] = rot[(idx + 1) % k]
            state["assigned"] += k
            newly = []
            for a in rot:
                x = a ^ 1
                if closed[x]:
                    continue
                chain = [x]
                cur = succ[x]
                while cur != -1 and cur != x:
                    chain.append(cur)
                    cur = succ[cur]
                if cur == x:
                    tf_hits = 0
                    for d in chain:
                        closed[d] = 1
                        tf_hits += tri_free[d]
                    state["f_done"] += 1
                    state["darts_closed"] += len(chain)
                    state["tf_left"] -= tf_hits
                    newly.append((chain, tf_hits))
            undo.append((rot, newly))
            return undo

        def unapply(vi: int, undo: list) -> None:
            rot, newly = undo[0]
            for chain, tf_hits in newly:
                for d in chain:
                    closed[d] = 0
                state["f_done"] -= 1
                state["darts_closed"] -= len(chain)
                state["tf_left"] += tf_hits
            for a in rot:
                succ[a ^ 1] = -1
            state["assigned"] -= len(rot)

        found: list[tuple[int, ...]] | None = None

        def snapshot() -> dict:
            if path:
                later = [r for r in root_indices if r > path[0]]
            else:
                later = list(root_indices)
            if roots_remaining:
                later = sorted(set(later) | set(roots_remaining))
            return {
                "order": list(self.order),
                "target": self.target,
                "choices": list(path),
                "roots_remaining": later,
            }

        def dfs(depth: int, assignment: list, on_path: bool) -> bool:
            nonlocal found
            stats.nodes += 1
            if node_budget is not None and stats.nodes > node_budget:
                raise _Stop("node")
            if deadline is not None and stats.nodes % 256 == 0:
                if time.perf_counter() > deadline:
                    raise _Stop("wall")
            vi = depth
            if depth == 0:
                iterate = [(ri, self.choices[0][ri]) for ri in root_indices]
            else:
                iterate = list(enumerate(self.choices[vi]))
            start_idx = 0
            if on_path and resume_choices is not None and depth < len(resume_choices):
                start_idx = resume_choices[depth]
            for idx, rot in iterate:
                if idx < start_idx:
                    continue
                child_on_path = (
                    on_path
                    and resume_choices is not None
                    and depth < len(resume_choices)
                    and idx == resume_choices[depth]
                )
                path.append(idx)
                undo = apply(vi, rot)
                assignment.append(rot)
                ok = True
                if depth + 1 == n:
                    if state["f_done"] >= f_needed:
                        found = list(assignment)
                        return True
                    ok = False
                elif euler_prune:
                    cap = face_budget()
                    if cap < 0:
                        prunes["connector_packing"] = (
                            prunes.get("connector_packing", 0) + 1
                        )
                        ok = False
                    elif state["f_done"] + cap < f_needed:
                        prunes["face_bound"] = prunes.get("face_bound", 0) + 1
                        ok = False
                if ok and depth + 1 < n:
                    if dfs(depth + 1, assignment, child_on_path):
                        return True
                assignment.pop()
                unapply(vi, undo)
                path.pop()
            return False

        # a root-level bound can refute without assigning anything
        if euler_prune:
            cap = face_budget()
            if cap < f_needed:
                stats.wall_ms = (time.perf_counter() - t0) * 1000
                prunes["face_bound"] = prunes.get("face_bound", 0) + 1
                return SearchOutcome("refuted", None, stats)
        try:
            hit = dfs(0, [], True)
        except _Stop:
            stats.wall_ms = (time.perf_counter() - t0) * 1000
            return SearchOutcome(
                "budget_exhausted", None, stats, frontier=[snapshot()]
            )
        stats.wall_ms = (time.perf_counter() - t0) * 1000
        if hit and found is not None:
            rs = self.rotation_from(found)
            return SearchOutcome("embeddable", embed(g, rs), stats)
        return SearchOutcome("refuted", None, stats)


def _run_chunk(payload: dict) -> dict:
    """Worker entry point for parallel subtree searches."""
    g = Graph(payload["vertices"], payload["edges"])
    searcher = _Searcher(
        g, payload["target"], payload["euler_prune"], payload["connector_prune"]
    )
    deadline = (
        time.perf_counter() + payload["wall_budget_s"]
        if payload["wall_budget_s"] is not None
        else None
    )
    outcome = searcher.run(
        payload["root_indices"], payload["node_budget"], deadline
    )
    return {
        "verdict": outcome.verdict,
        "rotation": outcome.certificate.rotation.to_json()
        if outcome.certificate
        else None,
        "nodes": outcome.stats.nodes,
        "prunes": outcome.stats.prunes,
        "wall_ms": outcome.stats.wall_ms,
        "frontier": outcome.frontier,
    }


def decide_genus_le(
    g: Graph,
    target: int,
    *,
    node_budget: int | None = None,
    wall_budget_s: float | None = None,
    jobs: int = 1,
    euler_prune: bool = True,
    connector_prune: bool = True,
    planar_shortcut: bool = True,
    resume: list[dict] | dict | None = None,
) -> SearchOutcome:
    """Sound and complete bounded-genus decision, within budget.

    "embeddable" always carries a self-verifying certificate; "refuted"
    is only reported after the (symmetry-reduced, prune-sound) search
    tree has been traversed exhaustively; running out of budget yields
    an explicit budget_exhausted outcome with a resumable frontier.
    """
    if target < 0:
        raise ValueError("target genus must be nonnegative")
    if not g.is_connected():
        raise ValueError("genus decision requires a connected graph")
    if g.m == 0:
        raise ValueError("genus decision requires at least one edge")
    if planar_shortcut and is_planar(g):
        rs = planar_embedding(g)
        return SearchOutcome("embeddable", embed(g, rs), SearchStats())
    if euler_lower_bound(g) > target:
        return SearchOutcome("refuted", None, SearchStats())

    searcher = _Searcher(g, target, euler_prune, connector_prune)
    deadline = time.perf_counter() + wall_budget_s if wall_budget_s else None

    if resume is not None:
        snaps = resume if isinstance(resume, list) else [resume]
        merged = SearchStats()
        certs = []
        frontier: list[dict] = []
        for snap in snaps:
            if list(snap["order"]) != list(searcher.order) or snap["target"] != target:
                raise ValueError("frontier snapshot does not match this search")
            choices = list(snap["choices"])
            roots = [choices[0]] if choices else []
            outcome = searcher.run(
                roots,
                node_budget,
                deadline,
                resume_choices=choices,
                roots_remaining=snap.get("roots_remaining", []),
            )
            merged.merge(outcome.stats)
            if outcome.verdict == "embeddable":
                certs.append(outcome.certificate)
            elif outcome.verdict == "budget_exhausted":
                frontier.extend(outcome.frontier or [])
            if outcome.verdict == "refuted" and snap.get("roots_remaining"):
                rest = searcher.run(
                    snap["roots_remaining"], node_budget, deadline
                )
                merged.merge(rest.stats)
                if rest.verdict == "embeddable":
                    certs.append(rest.certificate)
                elif rest.verdict == "budget_exhausted":
                    frontier.extend(rest.frontier or [])
        if certs:
            best = min(certs, key=lambda c: c.rotation.sort_key())
            return SearchOutcome("embeddable", best, merged)
        if frontier:
            return SearchOutcome("budget_exhausted", None, merged, frontier)
        return SearchOutcome("refuted", None, merged)

    n_roots = len(searcher.choices[0])
    if jobs <= 1 or n_roots <= 1:
        return searcher.run(None, node_budget, deadline)

    import concurrent.futures

    chunks = [list(range(n_roots))[i::jobs] for i in range(jobs)]
    chunks = [c for c in chunks if c]
    payload_base = {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.sorted_edges()],
        "target": target,
        "euler_prune": euler_prune,
        "connector_prune": connector_prune,
        "node_budget": node_budget // len(chunks) if node_budget else None,
        "wall_budget_s": wall_budget_s,
    }
    results = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [
            pool.submit(_run_chunk, dict(payload_base, root_indices=c))
            for c in chunks
        ]
        for f in futures:
            results.append(f.result())
    stats = SearchStats()
    certs = []
    frontier = []
    for r in results:
        stats.nodes += r["nodes"]
        for k, v in r["prunes"].items():
            stats.prunes[k] = stats.prunes.get(k, 0) + v
        stats.wall_ms = max(stats.wall_ms, r["wall_ms"])
        if r["verdict"] == "embeddable":
            certs.append(RotationSystem.from_json(r["rotation"]))
        elif r["verdict"] == "budget_exhausted":
            frontier.extend(r["frontier"] or [])
    if certs:
        best = min(certs, key=lambda rs: rs.sort_key())
        return SearchOutcome("embeddable", embed(g, best), stats)
    if frontier:
        return SearchOutcome("budget_exhausted", None, stats, frontier)
    return SearchOutcome("refuted", None, stats)


def genus(
    g: Graph,
    *,
    node_budget: int | None = None,
    wall_budget_s: float | None = None,
    jobs: int = 1,
) -> int:
    """Exact genus: first target at or above the Euler bound that embeds."""
    if not g.is_connected():
        raise ValueError("genus requires a connected graph")
    if g.m == 0 or girth(g) is None:
        return 0
    t = euler_lower_bound(g)
    while True:
        outcome = decide_genus_le(
            g,
            t,
            node_budget=node_budget,
            wall_budget_s=wall_budget_s,
            jobs=jobs,
        )
        if outcome.verdict == "embeddable":
            return outcome.certificate.genus
        if outcome.verdict == "budget_exhausted":
            raise SearchBudgetExceeded(
                f"genus undecided at target {t}", frontier=outcome.frontier
            )
        t += 1


def is_toroidal(
    g: Graph,
    *,
    node_budget: int | None = None,
    wall_budget_s: float | None = None,
    jobs: int = 1,
    resume: list[dict] | dict | None = None,
) -> SearchOutcome:
    return decide_genus_le(
        g,
        1,
        node_budget=node_budget,
        wall_budget_s=wall_budget_s,
        jobs=jobs,
        resume=resume,
    )
