"""graph6 text format and the JSON adjacency-list schema."""

from __future__ import annotations

import json

from .graphs import EdgeClass, Graph, edge_key

_HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the offending byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


def _read_n(data: str) -> tuple[int, int]:
    """Decode the leading vertex-count field, returning (n, bytes used)."""
    if not data:
        raise Graph6Error("empty graph6 string", 0)
    c = ord(data[0])
    if c == 126:
        if len(data) >= 2 and ord(data[1]) == 126:
            if len(data) < 8:
                raise Graph6Error("truncated 8-byte vertex count", len(data))
            vals = [ord(x) - 63 for x in data[2:8]]
            if any(v < 0 or v > 63 for v in vals):
                raise Graph6Error("vertex-count byte out of range", 2)
            n = 0
            for v in vals:
                n = (n << 6) | v
            return n, 8
        if len(data) < 4:
            raise Graph6Error("truncated 4-byte vertex count", len(data))
        vals = [ord(x) - 63 for x in data[1:4]]
        if any(v < 0 or v > 63 for v in vals):
            raise Graph6Error("vertex-count byte out of range", 1)
        return (vals[0] << 12) | (vals[1] << 6) | vals[2], 4
    if c < 63 or c > 125:
        raise Graph6Error(f"invalid leading byte {c}", 0)
    return c - 63, 1


def parse_graph6(text: str) -> Graph:
    """Parse one graph6 line into a Graph with vertices labeled 0..n-1."""
    s = text.strip()
    if s.startswith(_HEADER):
        s = s[len(_HEADER) :]
    n, pos = _read_n(s)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(s) - pos != nbytes:
        raise Graph6Error(
            f"expected {nbytes} adjacency bytes for {n} vertices, got {len(s) - pos}",
            pos,
        )
    bits: list[int] = []
    for k in range(nbytes):
        c = ord(s[pos + k])
        if c < 63 or c > 126:
            raise Graph6Error(f"invalid adjacency byte {c}", pos + k)
        v = c - 63
        bits.extend((v >> shift) & 1 for shift in range(5, -1, -1))
    if any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits", pos + nbytes - 1)
    labels = [str(i) for i in range(n)]
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((labels[i], labels[j]))
            k += 1
    return Graph(labels, edges)


def serialize_graph6(g: Graph) -> str:
    """Encode a graph in graph6, using the stored vertex order."""
    n = g.n
    if n >= 2**36:
        raise ValueError("graph too large for graph6")
    if n <= 62:
        head = chr(n + 63)
    elif n <= 258047:
        head = "~" + "".join(
            chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0)
        )
    else:
        head = "~~" + "".join(
            chr(((n >> shift) & 63) + 63) for shift in (30, 24, 18, 12, 6, 0)
        )
    idx = {v: i for i, v in enumerate(g.vertices)}
    adj = [[False] * n for _ in range(n)]
    for u, v in g.edges:
        i, j = idx[u], idx[v]
        adj[i][j] = adj[j][i] = True
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if adj[i][j] else 0)
    while len(bits) % 6:
        bits.append(0)
    body = []
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k : k + 6]:
            v = (v << 1) | b
        body.append(chr(v + 63))
    return head + "".join(body)


# ---------------------------------------------------------------------------
# JSON adjacency-list schema


def graph_to_json(g: Graph) -> dict:
    obj: dict = {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.sorted_edges()],
    }
    if g.edge_classes is not None:
        obj["edge_classes"] = {
            f"{u}|{v}": g.edge_classes[(u, v)].to_json() for u, v in g.sorted_edges()
        }
    return obj


def graph_from_json(obj: dict) -> Graph:
    vertices = [str(v) for v in obj["vertices"]]
    edges = [(str(u), str(v)) for u, v in obj["edges"]]
    classes = None
    if "edge_classes" in obj and obj["edge_classes"] is not None:
        classes = {}
        for key, val in obj["edge_classes"].items():
            u, _, v = key.partition("|")
            classes[edge_key(u, v)] = EdgeClass.from_json(val)
    return Graph(vertices, edges, edge_classes=classes)


def dumps_graph(g: Graph) -> str:
    return json.dumps(graph_to_json(g), sort_keys=True)


def loads_graph(text: str) -> Graph:
    return graph_from_json(json.loads(text))
