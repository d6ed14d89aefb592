"""Connected cubic graph database: generation, storage and ingestion.

The database is grown from K4 with canonical-form dedup using four moves:
edge insertion (subdivide two distinct edges, join the new vertices),
vertex-to-triangle expansion, edge-to-diamond replacement, and bridge
joins of two smaller graphs.  Edge insertion alone misses graphs in which
every edge sits next to a triangle (rings of diamonds) and graphs with
bridges; the other moves reach those.  Completeness is certified by the
known counts per vertex number, checked in the test suite.  Files are
``cubNN.g6`` with one canonically labelled graph per line, sorted by
canonical form.
"""

from __future__ import annotations

import os
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional

from .graphs import Dart, DartGraph, canonical_labeling, read_graph6_file, to_graph6

SIZES = (4, 6, 8, 10, 12, 14, 16)
KNOWN_COUNTS = {4: 1, 6: 2, 8: 5, 10: 19, 12: 85, 14: 509, 16: 4060}

K4 = DartGraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def insert_edge(g: DartGraph, e1, e2) -> DartGraph:
    """Subdivide e1 and e2 by new vertices a, b and add the edge ab."""
    a, b = g.n, g.n + 1
    edges = [e for e in g.edges if e not in (e1, e2)]
    edges += [(e1[0], a), (a, e1[1]), (e2[0], b), (b, e2[1]), (a, b)]
    return DartGraph.from_edges(g.n + 2, edges)


def expand_vertex(g: DartGraph, v: int) -> DartGraph:
    """Replace vertex v by a triangle."""
    a, b = g.n, g.n + 1
    x, y, z = g.neighbors(v)
    edges = [e for e in g.edges if v not in e]
    edges += [(v, x), (a, y), (b, z), (v, a), (v, b), (a, b)]
    return DartGraph.from_edges(g.n + 2, edges)


def insert_diamond(g: DartGraph, e) -> DartGraph:
    """Replace edge e = uv by u - p, diamond on p, c, d, q, q - v."""
    p, c, d, q = range(g.n, g.n + 4)
    u, v = e
    edges = [f for f in g.edges if f != e]
    edges += [(u, p), (p, c), (p, d), (c, d), (c, q), (d, q), (q, v)]
    return DartGraph.from_edges(g.n + 4, edges)


def bridge_join(g: DartGraph, e: Dart, h: DartGraph, f: Dart) -> DartGraph:
    """Subdivide e in g and f in h, then join the two new vertices."""
    a = g.n + h.n
    b = a + 1
    off = g.n
    edges = [x for x in g.edges if x != e]
    edges += [(u + off, v + off) for u, v in h.edges if (u, v) != f]
    edges += [(e[0], a), (a, e[1]), (f[0] + off, b), (b, f[1] + off), (a, b)]
    return DartGraph.from_edges(g.n + h.n + 2, edges)


def _canon(g: DartGraph) -> tuple[bytes, DartGraph]:
    cert, order = canonical_labeling(g)
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    return cert, g.relabel(pos)


def _children(g: DartGraph):
    for e1, e2 in combinations(g.edges, 2):
        yield insert_edge(g, e1, e2)
    for v in range(g.n):
        yield expand_vertex(g, v)


def grow(
    graphs: Iterable[DartGraph],
    smaller: Iterable[DartGraph] = (),
    bridge_pairs: Iterable[tuple[DartGraph, DartGraph]] = (),
) -> list[DartGraph]:
    """Children of ``graphs`` (+2 vertices), diamonds on ``smaller`` (+4)
    and bridge joins of the given pairs."""
    seen: dict[bytes, DartGraph] = {}
    for g, h in bridge_pairs:
        for e in g.edges:
            for f in h.edges:
                cert, child = _canon(bridge_join(g, e, h, f))
                seen.setdefault(cert, child)
    for g in graphs:
        for child in _children(g):
            cert, child = _canon(child)
            seen.setdefault(cert, child)
    for g in smaller:
        for e in g.edges:
            cert, child = _canon(insert_diamond(g, e))
            seen.setdefault(cert, child)
    return [seen[k] for k in sorted(seen)]


def generate_database(max_vertices: int = 16, progress=None) -> dict[int, list[DartGraph]]:
    """Generate all connected cubic graphs up to max_vertices."""
    db = {4: [_canon(K4)[1]]}
    n = 4
    while n + 2 <= max_vertices:
        pairs = [
            (g, h)
            for a in db
            for b in db
            if a <= b and a + b + 2 == n + 2
            for i, g in enumerate(db[a])
            for j, h in enumerate(db[b])
            if a < b or i <= j
        ]
        db[n + 2] = grow(db[n], db.get(n - 2, ()), pairs)
        n += 2
        if progress:
            progress(n, len(db[n]))
    return db


def write_database(db: dict[int, list[DartGraph]], directory) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for n, graphs in sorted(db.items()):
        with open(d / f"cub{n:02d}.g6", "w") as fh:
            for g in graphs:
                fh.write(to_graph6(g) + "\n")


def bundled_database_dir() -> Path:
    return Path(str(resources.files("gkm_forge") / "data"))


def resolve_database_dir(directory: Optional[str] = None) -> Path:
    """Explicit directory, else $GKM_FORGE_DB, else the bundled files."""
    if directory:
        return Path(directory)
    env = os.environ.get("GKM_FORGE_DB")
    if env:
        return Path(env)
    return bundled_database_dir()


def load_database(directory=None, sizes: Iterable[int] = SIZES) -> dict[int, list[DartGraph]]:
    """Read ``cubNN.g6`` files; graphs keep file order."""
    d = resolve_database_dir(directory)
    out = {}
    for n in sizes:
        path = d / f"cub{n:02d}.g6"
        out[n] = read_graph6_file(path)
    return out
