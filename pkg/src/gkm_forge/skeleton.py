"""GKM skeletons: structure matrix, defect, kernel conditions, weights, projection test."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .gkm import AbstractGKMGraph, first_chern_map, validate
from .graphs import Dart, DartGraph, automorphisms, connection_index_map, connections_along, index_sets
from .linalg import (
    RationalMatrix,
    independent,
    invert,
    kernel_basis,
    lattice_span_basis,
    multiple_of,
    vectors_rank,
)


class SkeletonError(ValueError):
    pass


@dataclass(frozen=True)
class GKMSkeleton:
    """Graph with an oriented, ordered edge list and integer labels d."""

    graph: DartGraph
    d: tuple[int, ...]
    oriented: tuple[Dart, ...] = ()

    def __post_init__(self):
        if not self.oriented:
            object.__setattr__(self, "oriented", self.graph.edges)
        if sorted(tuple(sorted(e)) for e in self.oriented) != list(self.graph.edges):
            raise SkeletonError("orientation must list each edge exactly once")
        if len(self.d) != len(self.oriented):
            raise SkeletonError(f"label vector has length {len(self.d)}, expected {len(self.oriented)}")
        if self.graph.valency is None or not self.graph.is_connected():
            raise SkeletonError("skeleton graph must be connected and regular")
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))

    @property
    def m(self) -> int:
        return len(self.oriented)

    @cached_property
    def structure(self) -> tuple[tuple[int, ...], ...]:
        return structure_matrix_int(self.oriented)

    def index_set(self, v: int) -> tuple[int, ...]:
        return index_sets(self.oriented, v)


def structure_matrix_int(oriented: Sequence[Dart]) -> tuple[tuple[int, ...], ...]:
    rows = []
    for j, (ij, tj) in enumerate(oriented):
        row = []
        for k, (ik, tk) in enumerate(oriented):
            if j == k:
                row.append(2)
            elif ij == ik or tj == tk:
                row.append(1)
            elif ij == tk or tj == ik:
                row.append(-1)
            else:
                row.append(0)
        rows.append(tuple(row))
    return tuple(rows)


def structure_matrix(s: GKMSkeleton) -> RationalMatrix:
    return RationalMatrix.from_rows(s.structure, s.m)


def defect_and_fundamental_system(s: GKMSkeleton) -> tuple[int, Optional[RationalMatrix]]:
    """Defect and the canonical (RREF) fundamental system, rows spanning ker(A - D)."""
    A = s.structure
    rows = [[A[j][k] - (s.d[j] if j == k else 0) for k in range(s.m)] for j in range(s.m)]
    ker = kernel_basis(rows)
    if not ker:
        return 0, None
    return len(ker), RationalMatrix.from_rows(ker, s.m)


def is_fundamental_system(s: GKMSkeleton, F: RationalMatrix) -> bool:
    """True iff the rows of F form a basis of ker(A - D)."""
    delta, canon = defect_and_fundamental_system(s)
    if F.rows != delta or F.cols != s.m:
        return False
    if delta == 0:
        return True
    return vectors_rank(F.entries) == delta and vectors_rank(list(F.entries) + list(canon.entries)) == delta


def check_k1(fs: RationalMatrix, structure) -> bool:
    """f_j, f_k independent whenever a_jk = +-1."""
    cols = fs.columns()
    A = structure.entries if isinstance(structure, RationalMatrix) else structure
    m = len(cols)
    for j in range(m):
        for k in range(j + 1, m):
            if A[j][k] != 0 and not independent(cols[j], cols[k]):
                return False
    return True


# K2 ---------------------------------------------------------------------------

SATISFIES = "satisfies"
RATIONAL = "fails-by-rational"
NONCOLLINEAR = "fails-noncollinear"


@dataclass(frozen=True)
class ConnectionMark:
    index_map: tuple[tuple[int, int], ...]  # k -> nabla~(k)
    marks: tuple[tuple[int, str, Optional[Fraction]], ...]  # (k, status, coefficient)

    @property
    def ok(self) -> bool:
        return all(st == SATISFIES for _, st, _ in self.marks)

    @property
    def fails_by_rational(self) -> bool:
        return any(st == RATIONAL for _, st, _ in self.marks)


@dataclass(frozen=True)
class K2Report:
    edges: tuple[tuple[ConnectionMark, ...], ...]  # per edge index j

    def holds_at(self, j: int) -> bool:
        return any(c.ok for c in self.edges[j])

    @property
    def failing_edges(self) -> tuple[int, ...]:
        return tuple(j for j in range(len(self.edges)) if not self.holds_at(j))


def _status(vec, fj) -> tuple[str, Optional[Fraction]]:
    c = multiple_of(vec, fj)
    if c is None:
        return NONCOLLINEAR, None
    if c.denominator != 1:
        return RATIONAL, c
    return SATISFIES, c


def k2_report(s: GKMSkeleton, fs: RationalMatrix) -> K2Report:
    A = s.structure
    cols = fs.columns()
    per_edge = []
    for j, e in enumerate(s.oriented):
        conns = []
        for conn in connections_along(s.graph, e):
            imap = connection_index_map(s.oriented, conn)
            marks = []
            for k in sorted(imap):
                nk = imap[k]
                vec = [A[j][k] * a + A[j][nk] * b for a, b in zip(cols[k], cols[nk])]
                st, c = _status(vec, cols[j])
                marks.append((k, st, c))
            conns.append(ConnectionMark(tuple(sorted(imap.items())), tuple(marks)))
        per_edge.append(tuple(conns))
    return K2Report(tuple(per_edge))


def check_k2(s: GKMSkeleton, fs: RationalMatrix) -> tuple[bool, K2Report]:
    rep = k2_report(s, fs)
    return not rep.failing_edges, rep


# weights ------------------------------------------------------------------------


def construct_weights(s: GKMSkeleton, fs: RationalMatrix) -> AbstractGKMGraph:
    """The unique (up to isomorphism) graph supported by a skeleton passing K1 and K2."""
    delta = fs.rows
    if delta == 0 or not check_k1(fs, s.structure) or not check_k2(s, fs)[0]:
        raise SkeletonError("weights can only be constructed when K1 and K2 hold")
    cols = fs.columns()
    spans = {}
    for v in range(s.graph.n):
        spans[v] = lattice_span_basis([cols[k] for k in s.index_set(v)])
    base = spans[0]
    for v, b in spans.items():
        # same lattice at every vertex: each basis expresses the other integrally
        M_v = invert(RationalMatrix.from_columns(b))
        for x in base:
            if any(y.denominator != 1 for y in M_v.apply(x)):
                raise SkeletonError(f"axiom violation: lattice at vertex {v} differs")
    M = invert(RationalMatrix.from_columns(base))
    ws = []
    for f in cols:
        w = M.apply(f)
        if any(x.denominator != 1 for x in w):
            raise SkeletonError("axiom violation: non-integral weight")
        ws.append(tuple(int(x) for x in w))
    g = AbstractGKMGraph.from_dart_weights(s.graph, delta, dict(zip(s.oriented, ws)))
    check = validate(g)
    if not check:
        raise SkeletonError("axiom violation: " + "; ".join(check.problems))
    c1 = first_chern_map(g)
    if any(c1[e] != dj for e, dj in zip(s.oriented, s.d)):
        raise SkeletonError("axiom violation: C1 differs from the labels")
    assert_supported(s, ws)
    return g


def assert_supported(s: GKMSkeleton, ws: Sequence[Sequence[int]]) -> None:
    """A W^T = D W^T with W the matrix of weights along the ordered edges."""
    A = s.structure
    for j in range(s.m):
        for c in range(len(ws[0])):
            lhs = sum(A[j][k] * ws[k][c] for k in range(s.m))
            if lhs != s.d[j] * ws[j][c]:
                raise SkeletonError("axiom violation: A W^T != D W^T")


# projection test ---------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionVerdict:
    ruled_out: bool
    reason: str
    witnesses: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.ruled_out


def projection_witnesses(s: GKMSkeleton, fs: RationalMatrix, rep: K2Report, limit: Optional[int] = None):
    """All (j1, j2, k1, k2, h1, h2) satisfying the two-edge rank criterion."""
    A = s.structure
    cols = fs.columns()
    single = {}
    for j, conns in enumerate(rep.edges):
        live = [c for c in conns if not c.fails_by_rational]
        if len(live) == 1:
            single[j] = dict(live[0].index_map)
    found = []
    hs = {}
    for j, imap in single.items():
        i_e = s.oriented[j][0]
        for k in s.index_set(i_e):
            if k == j:
                continue
            nk = imap[k]
            hs.setdefault(j, []).append((k, tuple(A[j][k] * a + A[j][nk] * b for a, b in zip(cols[k], cols[nk]))))
    for j1 in sorted(single):
        for j2 in sorted(single):
            if j1 == j2:
                continue
            f1, f2 = cols[j1], cols[j2]
            for k1, h1 in hs[j1]:
                for k2, h2 in hs[j2]:
                    if not any(h1) or not any(h2):
                        continue
                    dep = (
                        not independent(f1, h2)
                        or not independent(f1, f2)
                        or not independent(h1, f2)
                        or not independent(h1, h2)
                    )
                    if dep and vectors_rank([f1, f2, h1, h2]) == 3:
                        found.append((j1, j2, k1, k2, h1, h2))
                        if limit is not None and len(found) >= limit:
                            return found
    return found


def projection_test(s: GKMSkeleton, fs: RationalMatrix, rep: Optional[K2Report] = None, all_witnesses: bool = False) -> ProjectionVerdict:
    """Rule out (3,2) support for a defect-3 skeleton that passes K1 but fails K2."""
    if s.graph.valency != 3 or fs.rows != 3:
        raise SkeletonError("projection test needs n = 3 and defect 3")
    if rep is None:
        rep = k2_report(s, fs)
    if not rep.failing_edges:
        raise SkeletonError("projection test needs K2 to fail")
    if not check_k1(fs, s.structure):
        raise SkeletonError("projection test needs K1")
    for j, conns in enumerate(rep.edges):
        if all(c.fails_by_rational for c in conns):
            return ProjectionVerdict(True, f"every connection along edge {j} fails by a rational number", ((j,),))
    wit = projection_witnesses(s, fs, rep, None if all_witnesses else 1)
    if wit:
        return ProjectionVerdict(True, "two-edge rank criterion", tuple(wit))
    return ProjectionVerdict(False, "no statement")


# isomorphism of labels ----------------------------------------------------------------


def skeleton_canonical_label_vector(s: GKMSkeleton, auts: Optional[Sequence[Sequence[int]]] = None) -> tuple[int, ...]:
    """Lexicographically least relabelling of d under the graph automorphisms."""
    where = {}
    for k, (a, b) in enumerate(s.oriented):
        where[(a, b)] = k
        where[(b, a)] = k
    best = None
    for p in auts if auts is not None else automorphisms(s.graph):
        img = [0] * s.m
        for k, (a, b) in enumerate(s.oriented):
            img[where[(p[a], p[b])]] = s.d[k]
        t = tuple(img)
        if best is None or t < best:
            best = t
    return best


def is_positive_and_24(s: GKMSkeleton) -> bool:
    return all(x > 0 for x in s.d) and sum(s.d) == 24
