"""Simple n-valent graphs with darts, graph6 I/O and canonical labelling."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional, Sequence

Dart = tuple[int, int]


class GraphError(ValueError):
    """Malformed graph input."""


@dataclass(frozen=True)
class DartGraph:
    """Simple graph on vertices ``0..n-1``.

    ``edges`` lists every undirected edge once as ``(u, v)`` with ``u < v``
    in lexicographic order; this doubles as the default orientation and
    edge ordering.  Each edge yields the two darts ``(u, v)`` and ``(v, u)``.
    """

    n: int
    edges: tuple[Dart, ...]
    _adj: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"vertex out of range in edge ({u}, {v})")
            e = (min(u, v), max(u, v))
            if e in norm:
                raise GraphError(f"repeated edge {e}")
            norm.add(e)
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "DartGraph":
        return cls(n, tuple((int(u), int(v)) for u, v in edges))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @cached_property
    def darts(self) -> tuple[Dart, ...]:
        return tuple(d for u, v in self.edges for d in ((u, v), (v, u)))

    @staticmethod
    def involution(dart: Dart) -> Dart:
        return (dart[1], dart[0])

    def out_darts(self, v: int) -> tuple[Dart, ...]:
        return tuple((v, w) for w in self._adj[v])

    @cached_property
    def valency(self) -> Optional[int]:
        """Common degree, or None if the graph is not regular."""
        degs = {len(a) for a in self._adj}
        return degs.pop() if len(degs) == 1 else None

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def relabel(self, perm: Sequence[int]) -> "DartGraph":
        """Graph with vertex v renamed to perm[v]."""
        return DartGraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def to_json(self) -> dict:
        return {"vertices": self.n, "edges": [list(e) for e in self.edges]}


def is_cubic_connected(g: DartGraph) -> bool:
    return g.valency == 3 and g.is_connected()


# graph6 ---------------------------------------------------------------------


def _g6_size(data: bytes) -> tuple[int, int]:
    if not data:
        raise GraphError("malformed graph6: empty record")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise GraphError("malformed graph6: truncated header")
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        return n, 8
    if len(data) < 4:
        raise GraphError("malformed graph6: truncated header")
    n = 0
    for b in data[1:4]:
        n = (n << 6) | (b - 63)
    return n, 4


def parse_graph6(line: str | bytes) -> DartGraph:
    """Decode one graph6 record."""
    data = line.encode("ascii") if isinstance(line, str) else bytes(line)
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data:
        raise GraphError("malformed graph6: empty record")
    for b in data:
        if not 63 <= b <= 126:
            raise GraphError(f"malformed graph6: byte {b} out of range")
    n, off = _g6_size(data)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[off:]
    if len(body) < nbytes:
        raise GraphError("malformed graph6: truncated body")
    if len(body) > nbytes:
        raise GraphError("malformed graph6: trailing garbage")
    bits = []
    for b in body:
        x = b - 63
        bits.extend((x >> s) & 1 for s in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphError("malformed graph6: nonzero padding")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return DartGraph.from_edges(n, edges)


def to_graph6(g: DartGraph) -> str:
    n = g.n
    if n < 63:
        head = [n + 63]
    elif n < 258048:
        head = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        head = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    es = set(g.edges)
    bits = [int((i, j) in es) for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = [sum(b << (5 - s) for s, b in enumerate(bits[k:k + 6])) + 63 for k in range(0, len(bits), 6)]
    return bytes(head + body).decode("ascii")


def read_graph6_file(path) -> list[DartGraph]:
    out = []
    with open(path, "rb") as fh:
        for raw in fh:
            line = raw.strip()
            if line:
                out.append(parse_graph6(line))
    return out


def graph_from_json(obj) -> DartGraph:
    """Accept ``{"vertices": N, "edges": [[u, v], ...]}`` or a graph6 string."""
    if isinstance(obj, str):
        return parse_graph6(obj)
    try:
        n = int(obj["vertices"])
        edges = [(int(u), int(v)) for u, v in obj["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc
    return DartGraph.from_edges(n, edges)


def load_graph(path) -> DartGraph:
    """Load a graph from a .g6 file (first record) or a JSON file."""
    text = open(path, "rb").read()
    stripped = text.lstrip()
    if stripped.startswith(b"{"):
        try:
            return graph_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed JSON: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("malformed graph6: empty file")
    return parse_graph6(lines[0])


# canonical labelling ----------------------------------------------------------


def _refine(adj: Sequence[Sequence[int]], cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement; cell order is isomorphism-equivariant."""
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        for s in range(len(cells)):
            splitter = set(cells[s])
            new_cells: list[list[int]] = []
            split = False
            for c in cells:
                if len(c) == 1:
                    new_cells.append(c)
                    continue
                groups: dict[int, list[int]] = {}
                for v in c:
                    k = sum(1 for w in adj[v] if w in splitter)
                    groups.setdefault(k, []).append(v)
                if len(groups) == 1:
                    new_cells.append(c)
                else:
                    split = True
                    for k in sorted(groups):
                        new_cells.append(groups[k])
            if split:
                cells = new_cells
                changed = True
                break
    return cells


def _leaves(adj, cells) -> Iterator[list[int]]:
    cells = _refine(adj, cells)
    target = None
    for i, c in enumerate(cells):
        if len(c) > 1 and (target is None or len(c) < len(cells[target])):
            target = i
    if target is None:
        yield [c[0] for c in cells]
        return
    cell = cells[target]
    for v in cell:
        rest = [w for w in cell if w != v]
        yield from _leaves(adj, cells[:target] + [[v], rest] + cells[target + 1:])


def _certificate(g: DartGraph, order: Sequence[int]) -> bytes:
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    es = sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges)
    return bytes([g.n]) + bytes(x for e in es for x in e)


def _search(g: DartGraph) -> tuple[bytes, list[list[int]]]:
    adj = [g.neighbors(v) for v in range(g.n)]
    best: Optional[bytes] = None
    ties: list[list[int]] = []
    for order in _leaves(adj, [list(range(g.n))]):
        cert = _certificate(g, order)
        if best is None or cert > best:
            best, ties = cert, [order]
        elif cert == best:
            ties.append(order)
    return best or bytes([0]), ties


def canonical_form(g: DartGraph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic."""
    return _search(g)[0]


def canonical_labeling(g: DartGraph) -> tuple[bytes, list[int]]:
    """Canonical form plus a vertex order realizing it."""
    cert, ties = _search(g)
    return cert, (ties[0] if ties else [])


def automorphisms(g: DartGraph) -> list[tuple[int, ...]]:
    """All automorphisms as tuples p with p[v] the image of v."""
    if g.n == 0:
        return [()]
    _, ties = _search(g)
    base = ties[0]
    out = []
    for order in ties:
        p = [0] * g.n
        for a, b in zip(base, order):
            p[a] = b
        out.append(tuple(p))
    return sorted(out)


def canonical_graph(g: DartGraph) -> DartGraph:
    _, order = canonical_labeling(g)
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    return g.relabel(pos)


# connections and index sets -----------------------------------------------------


@dataclass(frozen=True)
class Connection:
    """Bijection from the darts leaving i(e) to the darts leaving t(e)."""

    edge: Dart
    mapping: tuple[tuple[Dart, Dart], ...]

    def __call__(self, dart: Dart) -> Dart:
        return dict(self.mapping)[dart]


def connections_along(g: DartGraph, e: Dart) -> list[Connection]:
    """All connections along e, ordered by the image tuple of the other darts."""
    v, w = e
    if w not in g.neighbors(v):
        raise GraphError(f"{e} is not a dart")
    src = [d for d in g.out_darts(v) if d != e]
    dst = [d for d in g.out_darts(w) if d != (w, v)]
    out = []
    for img in permutations(dst):
        out.append(Connection(e, ((e, (w, v)),) + tuple(zip(src, img))))
    return out


def index_sets(ordered_edges: Sequence[Dart], v: int) -> tuple[int, ...]:
    """Indices k (0-based) with v an endpoint of the k-th oriented edge."""
    return tuple(k for k, (a, b) in enumerate(ordered_edges) if v in (a, b))


def connection_index_map(ordered_edges: Sequence[Dart], conn: Connection) -> dict[int, int]:
    """The induced bijection IND_{i(e)} -> IND_{t(e)} on edge indices."""
    where = {}
    for k, (a, b) in enumerate(ordered_edges):
        where[(a, b)] = k
        where[(b, a)] = k
    return {where[s]: where[t] for s, t in conn.mapping}


# brute-force generator (oracle) ------------------------------------------------


def generate_cubic(n_vertices: int) -> list[DartGraph]:
    """All connected cubic graphs on n_vertices (4..10) up to isomorphism.

    Brute force over labelled graphs whose labelling is a breadth-first
    order from vertex 0 (every connected graph has one), with isomorphic
    duplicates rejected by canonical form.
    """
    n = n_vertices
    if n % 2 or not 4 <= n <= 10:
        raise GraphError("vertex count must be even and in 4..10")
    seen: dict[bytes, DartGraph] = {}
    deg = [0] * n
    adj: list[set[int]] = [set() for _ in range(n)]
    edges: list[Dart] = []

    def rec(v: int, nxt: int) -> None:
        if v == n:
            g = DartGraph.from_edges(n, edges)
            seen.setdefault(canonical_form(g), g)
            return
        if v >= nxt:
            return  # v was never reached: disconnected
        r = 3 - deg[v]
        old = [w for w in range(v + 1, nxt) if deg[w] < 3 and w not in adj[v]]
        for s in range(min(r, len(old)), -1, -1):
            fresh = r - s
            if nxt + fresh > n:
                continue
            for pick in combinations(old, s):
                new = list(pick) + list(range(nxt, nxt + fresh))
                for w in new:
                    adj[v].add(w)
                    adj[w].add(v)
                    deg[v] += 1
                    deg[w] += 1
                    edges.append((v, w))
                rec(v + 1, nxt + fresh)
                for w in new:
                    adj[v].discard(w)
                    adj[w].discard(v)
                    deg[v] -= 1
                    deg[w] -= 1
                    edges.pop()

    rec(0, 1)
    return [canonical_graph(g) for _, g in sorted(seen.items())]
