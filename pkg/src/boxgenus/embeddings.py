"""Rotation systems, face tracing, certificates, planarity, and
outer-cylindrical recognition.

An orientable combinatorial embedding is a cyclic order of neighbors at
every vertex.  Faces are traced with the usual successor rule: after
crossing the dart (u, v), the walk leaves v along the neighbor that
follows u in v's rotation.  The Euler relation |V| - |E| + |F| = 2 - 2g
then recovers the genus of the carrier surface, and a certificate is
nothing more than data that lets anyone redo that computation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import networkx as nx

from .errors import SearchBudgetExceeded
from .graphs import Graph

Dart = tuple[str, str]


def reverse(d: Dart) -> Dart:
    return (d[1], d[0])


@dataclass(frozen=True)
class RotationSystem:
    """Cyclic neighbor order at every vertex."""

    rotations: Mapping[str, tuple[str, ...]]

    def canonical(self) -> "RotationSystem":
        """Rotate each cyclic order to start at the smallest neighbor."""
        rots = {}
        for v, nbrs in self.rotations.items():
            if nbrs:
                k = nbrs.index(min(nbrs))
                nbrs = nbrs[k:] + nbrs[:k]
            rots[v] = nbrs
        return RotationSystem(rots)

    def mirrored(self) -> "RotationSystem":
        return RotationSystem(
            {v: tuple(reversed(nbrs)) for v, nbrs in self.rotations.items()}
        ).canonical()

    def sort_key(self) -> tuple:
        return tuple(sorted((v, r) for v, r in self.canonical().rotations.items()))

    def to_json(self) -> dict:
        return {v: list(r) for v, r in sorted(self.rotations.items())}

    @classmethod
    def from_json(cls, obj: dict) -> "RotationSystem":
        return cls({str(v): tuple(str(x) for x in r) for v, r in obj.items()})


def validate_rotation(g: Graph, rs: RotationSystem) -> None:
    if set(rs.rotations) != set(g.vertices):
        raise ValueError("rotation system must cover exactly the vertex set")
    for v in g.vertices:
        r = rs.rotations[v]
        if len(r) != len(set(r)) or set(r) != set(g.neighbors(v)):
            raise ValueError(f"rotation at {v!r} is not an order of its neighbors")


def _canonical_face(walk: list[Dart]) -> tuple[Dart, ...]:
    k = walk.index(min(walk))
    return tuple(walk[k:] + walk[:k])


def trace_faces(g: Graph, rs: RotationSystem) -> list[tuple[Dart, ...]]:
    """Orbits of the face-successor map; every dart appears exactly once."""
    validate_rotation(g, rs)
    succ_pos = {
        v: {u: r[(i + 1) % len(r)] for i, u in enumerate(r)}
        for v, r in rs.rotations.items()
    }
    darts: set[Dart] = set()
    for u, v in g.edges:
        darts.add((u, v))
        darts.add((v, u))
    faces = []
    remaining = set(darts)
    while remaining:
        start = min(remaining)
        walk = []
        d = start
        while True:
            walk.append(d)
            remaining.discard(d)
            u, v = d
            d = (v, succ_pos[v][u])
            if d == start:
                break
        faces.append(_canonical_face(walk))
    faces.sort()
    return faces


def genus_of(g: Graph, rs: RotationSystem) -> int:
    """Genus of the closed orientable surface carrying this embedding."""
    if not g.is_connected():
        raise ValueError("genus is defined here for connected graphs only")
    faces = trace_faces(g, rs)
    euler = g.n - g.m + len(faces)
    if euler % 2 or euler > 2:
        raise AssertionError("impossible Euler characteristic")
    return (2 - euler) // 2


def face_vertices(face: Iterable[Dart]) -> frozenset[str]:
    return frozenset(u for u, _ in face)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class EmbeddingCertificate:
    graph: Graph
    rotation: RotationSystem
    faces: tuple[tuple[Dart, ...], ...]
    genus: int

    def face_sizes(self) -> dict[int, int]:
        sizes: dict[int, int] = {}
        for f in self.faces:
            sizes[len(f)] = sizes.get(len(f), 0) + 1
        return sizes

    def to_json(self) -> dict:
        from .graph6 import graph_to_json

        return {
            "graph": graph_to_json(self.graph),
            "rotation": self.rotation.to_json(),
            "faces": [[list(d) for d in face] for face in self.faces],
            "genus": self.genus,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EmbeddingCertificate":
        from .graph6 import graph_from_json

        return cls(
            graph=graph_from_json(obj["graph"]),
            rotation=RotationSystem.from_json(obj["rotation"]),
            faces=tuple(
                tuple((str(a), str(b)) for a, b in face) for face in obj["faces"]
            ),
            genus=int(obj["genus"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def embed(g: Graph, rs: RotationSystem) -> EmbeddingCertificate:
    faces = trace_faces(g, rs)
    return EmbeddingCertificate(g, rs, tuple(faces), genus_of(g, rs))


@dataclass(frozen=True)
class OcCertificate:
    """A sphere embedding with two faces whose boundaries hit every vertex."""

    certificate: EmbeddingCertificate
    face_a: int
    face_b: int

    def faces(self) -> tuple[tuple[Dart, ...], tuple[Dart, ...]]:
        return (
            self.certificate.faces[self.face_a],
            self.certificate.faces[self.face_b],
        )

    def to_json(self) -> dict:
        obj = self.certificate.to_json()
        obj["distinguished_faces"] = [self.face_a, self.face_b]
        return obj


def verify_certificate(cert: EmbeddingCertificate | OcCertificate) -> bool:
    """Recheck all certificate invariants from scratch."""
    if isinstance(cert, OcCertificate):
        inner = cert.certificate
        if not verify_certificate(inner):
            return False
        if inner.genus != 0:
            return False
        if cert.face_a == cert.face_b:
            return False
        if not (
            0 <= cert.face_a < len(inner.faces) and 0 <= cert.face_b < len(inner.faces)
        ):
            return False
        covered = face_vertices(inner.faces[cert.face_a]) | face_vertices(
            inner.faces[cert.face_b]
        )
        return covered == frozenset(inner.graph.vertices)
    try:
        traced = trace_faces(cert.graph, cert.rotation)
    except ValueError:
        return False
    if sorted(cert.faces) != traced:
        return False
    # every edge borders exactly two face slots
    slots: dict = {}
    for face in cert.faces:
        for u, v in face:
            key = (u, v) if u <= v else (v, u)
            slots[key] = slots.get(key, 0) + 1
    if any(c != 2 for c in slots.values()) or set(slots) != set(cert.graph.edges):
        return False
    euler = cert.graph.n - cert.graph.m + len(cert.faces)
    return euler == 2 - 2 * cert.genus


# ---------------------------------------------------------------------------
# planarity (embedding-producing; delegated to networkx's LR planarity)


def _to_nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    return G


def is_planar(g: Graph) -> bool:
    if g.n == 0:
        return True
    ok, _ = nx.check_planarity(_to_nx(g), counterexample=False)
    return ok


def planar_embedding(g: Graph) -> RotationSystem:
    """A genus-0 rotation system for a connected planar graph."""
    if not g.is_connected():
        raise ValueError("planar embedding requires a connected graph")
    ok, emb = nx.check_planarity(_to_nx(g), counterexample=False)
    if not ok:
        raise ValueError("graph is not planar")
    rots = {}
    for v in g.vertices:
        rots[v] = tuple(emb.neighbors_cw_order(v))
    rs = RotationSystem(rots).canonical()
    if g.m and genus_of(g, rs) != 0:
        raise AssertionError("planarity backend returned a non-planar rotation")
    return rs


def all_rotation_systems(g: Graph) -> Iterator[RotationSystem]:
    """Every rotation system of g, in deterministic lexicographic order.

    The count is the product of (deg(v) - 1)! over all vertices; callers
    are expected to budget accordingly.
    """
    verts = list(g.vertices)
    choices = []
    for v in verts:
        nbrs = g.neighbors(v)
        if len(nbrs) <= 1:
            choices.append([tuple(nbrs)])
        else:
            first, rest = nbrs[0], nbrs[1:]
            choices.append(
                [(first,) + perm for perm in itertools.permutations(rest)]
            )
    for combo in itertools.product(*choices):
        yield RotationSystem(dict(zip(verts, combo)))


def rotation_space_size(g: Graph) -> int:
    import math

    size = 1
    for v in g.vertices:
        size *= math.factorial(max(g.degree(v) - 1, 1))
    return size


def enumerate_planar_embeddings(
    g: Graph, budget: int | None = 250_000
) -> list[RotationSystem]:
    """All genus-0 rotation systems, collected in sorted order.

    Three-connected planar graphs have exactly one embedding up to
    reflection, so they yield a chiral pair without enumeration.  Other
    graphs are enumerated exhaustively; ``budget`` caps the number of
    rotation systems examined and exhaustion raises, which keeps "no
    embedding found" distinct from "gave up".
    """
    from .minors import vertex_connectivity

    if not g.is_connected():
        raise ValueError("embedding enumeration requires a connected graph")
    if not is_planar(g):
        return []
    if g.n >= 4 and vertex_connectivity(g) >= 3:
        rs = planar_embedding(g)
        pair = {rs.sort_key(): rs, rs.mirrored().sort_key(): rs.mirrored()}
        return [pair[k] for k in sorted(pair)]
    found = {}
    examined = 0
    for rs in all_rotation_systems(g):
        examined += 1
        if budget is not None and examined > budget:
            raise SearchBudgetExceeded(
                f"embedding enumeration exceeded budget of {budget}"
            )
        if genus_of(g, rs) == 0:
            canon = rs.canonical()
            found[canon.sort_key()] = canon
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# outer-cylindrical recognition


def is_outer_cylindrical(
    g: Graph, budget: int | None = 250_000
) -> OcCertificate | None:
    """Certificate with two faces jointly covering every vertex, or None.

    None is a definitive negative for inputs within enumeration reach;
    running out of budget raises instead of answering.
    """
    if not is_planar(g):
        return None
    for rs in enumerate_planar_embeddings(g, budget=budget):
        cert = embed(g, rs)
        covers = [face_vertices(f) for f in cert.faces]
        everything = frozenset(g.vertices)
        for i in range(len(covers)):
            for j in range(i + 1, len(covers)):
                if covers[i] | covers[j] == everything:
                    return OcCertificate(cert, i, j)
    return None
