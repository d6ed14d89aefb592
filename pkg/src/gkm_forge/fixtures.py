"""Reference fixtures with printed values, and a checker that runs them all.

Vertices named v1, v2, ... (or p0, p1, ...) map to 0, 1, ...; edges e1, e2,
... map to indices 0, 1, ... of the lexicographic default ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .graphs import DartGraph
from .gkm import AbstractGKMGraph
from .linalg import RationalMatrix
from .polytope import Polytope

K4 = DartGraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])

K4_STRUCTURE = (
    (2, 1, 1, -1, -1, 0),
    (1, 2, 1, 1, 0, -1),
    (1, 1, 2, 0, 1, 1),
    (-1, 1, 0, 2, 1, -1),
    (-1, 0, 1, 1, 2, 1),
    (0, -1, 1, -1, 1, 2),
)
K4_D_FOUR = (4, 4, 4, 4, 4, 4)
K4_F_FOUR = ((0, -1, 0, -1, 0, 1), (-1, 0, 0, 1, 1, 0), (1, 1, 1, 0, 0, 0))
K4_D_ZERO = (0, 0, 0, 0, 0, 0)
K4_F_ZERO = ((0, 1, -1, 0, 0, 1), (1, 0, -1, 0, 1, 0), (1, -1, 0, 1, 0, 0))
K4_M = ((-1, 1, 0), (2, -1, 1))
# index maps IND_{v1} -> IND_{v2} of the two connections along (v1, v2), 0-based
K4_CONNECTION_MAPS = ({0: 0, 1: 3, 2: 4}, {0: 0, 1: 4, 2: 3})

# six-vertex prism; e1..e9 in lexicographic order
PRISM = DartGraph.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)])
PRISM_F = (
    (-1, 0, 0, 1, 0, 0, -1, 0, 1),
    (1, 1, 0, 0, 0, 0, 1, 1, 0),
    (1, 2, 3, 1, 3, 3, 0, 0, 0),
)
# printed structure rows (the row of e8 is absent from the printed matrix)
PRISM_STRUCTURE_ROWS = {
    0: (2, 1, 1, -1, -1, 0, 0, 0, 0),
    1: (1, 2, 1, 1, 0, -1, 0, 0, 0),
    2: (1, 1, 2, 0, 0, 0, -1, -1, 0),
    3: (-1, 1, 0, 2, 1, -1, 0, 0, 0),
    4: (-1, 0, 0, 1, 2, 0, 1, 0, -1),
    5: (0, -1, 0, -1, 0, 2, 0, 1, 1),
    6: (0, 0, -1, 0, 1, 0, 2, 1, -1),
    8: (0, 0, 0, 0, -1, 1, -1, 1, 2),
}
PRISM_K2_FAILING = (2, 4, 5)
PRISM_H1 = (-1, 0, 1)
PRISM_H2 = (0, -1, -1)


def prism_labels() -> tuple[int, ...]:
    """Labels d recovered from A f = d f on the printed fundamental system."""
    from .skeleton import structure_matrix_int

    A = structure_matrix_int(PRISM.edges)
    cols = list(zip(*PRISM_F))
    out = []
    for j in range(9):
        af = [sum(A[j][k] * cols[k][r] for k in range(9)) for r in range(3)]
        r = next(r for r in range(3) if cols[j][r] != 0)
        out.append(Fraction(af[r], cols[j][r]))
    return tuple(int(x) for x in out)


K33 = DartGraph.from_edges(6, [(0, 1), (0, 3), (0, 5), (1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (4, 5)])
K33_WEIGHTS = {
    (0, 1): (-1, 2),
    (0, 3): (0, 1),
    (0, 5): (2, 0),
    (1, 2): (0, 1),
    (1, 4): (2, 0),
    (2, 3): (1, 0),
    (2, 5): (2, -1),
    (3, 4): (2, -1),
    (4, 5): (3, -2),
}
K33_XI = (1, 1)
K33_INDEX = (0, 1, 1, 2, 2, 3)
K33_PHI = ((-1, -3), (-3, 1), (-3, 2), (-1, 2), (1, 1), (7, -3))
K33_PHI_XI = (-4, -2, -1, 1, 2, 4)
K33_STABLE = ({0, 1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {2, 3, 4, 5}, {3, 4, 5}, {4, 5}, {5})
K33_TAU_V2 = (1, -2)
K33_A = (2, 1)
K33_GAMMA_V4 = (0, -2)
K33_B1 = Fraction(1, 2)


def k33_graph() -> AbstractGKMGraph:
    return AbstractGKMGraph.from_dart_weights(K33, 2, K33_WEIGHTS)


CP3_VERTEX_WEIGHTS = (
    ((1, 0), (0, 2), (3, 3)),
    ((-1, 0), (-1, 2), (2, 3)),
    ((1, -2), (0, -2), (3, 1)),
    ((-2, -3), (-3, -1), (-3, -3)),
)
CP3_EDGE_WEIGHTS = {(0, 1): (1, 0), (0, 2): (0, 2), (0, 3): (3, 3), (1, 2): (-1, 2), (1, 3): (2, 3), (2, 3): (3, 1)}


def cp3_graph() -> AbstractGKMGraph:
    return AbstractGKMGraph.from_dart_weights(K4, 2, CP3_EDGE_WEIGHTS)


def k4_standard_graph() -> AbstractGKMGraph:
    """K4 with w(e_i) the columns of the printed system for d = (4, ..., 4)."""
    cols = list(zip(*K4_F_FOUR))
    return AbstractGKMGraph.from_dart_weights(K4, 3, dict(zip(K4.edges, cols)))


SEVEN_CLASSES = ((1, 54, 4), (2, 30, 6), (2, 40, 6), (2, 46, 6), (2, 48, 6), (3, 26, 8), (3, 38, 8))
CUBIC_COUNTS = {4: 1, 6: 2, 8: 5, 10: 19, 12: 85, 14: 509, 16: 4060}
STAGE1_COUNTS = {4: 1, 6: 2, 8: 3, 10: 4, 12: 4, 14: 0, 16: 0}

# planar polytopes: (A) smooth reflexive, (B) smooth reflexive, (C) smooth only, (D) reflexive only
POLY_A = Polytope(2, ((-1, -1), (2, -1), (-1, 2)))
POLY_B = Polytope(2, ((-1, -1), (1, -1), (1, 1), (-1, 1)))
POLY_C = Polytope(2, ((-1, Fraction(-5, 4)), (1, Fraction(-5, 4)), (1, Fraction(5, 4)), (-1, Fraction(5, 4))))
POLY_D = Polytope(2, ((1, 0), (0, 1), (-1, -1)))


# checker --------------------------------------------------------------------------


@dataclass
class FixtureResult:
    name: str
    ok: bool
    detail: str = ""


def _check_k4_four() -> str:
    from .gkm import isomorphic
    from .polytope import graph_from_polytope, simplex
    from .skeleton import (
        GKMSkeleton,
        check_k1,
        check_k2,
        construct_weights,
        defect_and_fundamental_system,
        is_fundamental_system,
        structure_matrix,
    )

    s = GKMSkeleton(K4, K4_D_FOUR)
    assert structure_matrix(s) == RationalMatrix.from_rows(K4_STRUCTURE), "structure matrix"
    delta, F = defect_and_fundamental_system(s)
    assert delta == 3, f"defect {delta}"
    assert is_fundamental_system(s, RationalMatrix.from_rows(K4_F_FOUR)), "printed system"
    assert check_k1(F, s.structure) and check_k2(s, F)[0], "K1/K2"
    g = construct_weights(s, F)
    assert isomorphic(g, graph_from_polytope(simplex(3, 4))) is not None, "not the simplex graph"
    return "defect 3, K1, K2, simplex graph"


def _check_k4_zero() -> str:
    from .gkm import validate
    from .skeleton import GKMSkeleton, check_k1, check_k2, defect_and_fundamental_system, is_fundamental_system

    s = GKMSkeleton(K4, K4_D_ZERO)
    delta, F = defect_and_fundamental_system(s)
    Fp = RationalMatrix.from_rows(K4_F_ZERO)
    assert delta == 3 and is_fundamental_system(s, Fp), "defect / printed system"
    assert check_k1(F, s.structure) and not check_k2(s, F)[0], "K1 pass, K2 fail"
    M = RationalMatrix.from_rows(K4_M)
    ws = {e: tuple(int(x) for x in M.apply(f)) for e, f in zip(K4.edges, Fp.columns())}
    assert validate(AbstractGKMGraph.from_dart_weights(K4, 2, ws)), "M F is not a GKM graph"
    return "defect 3, K2 fails, M F valid"


def _check_prism() -> str:
    from .skeleton import (
        GKMSkeleton,
        check_k1,
        check_k2,
        defect_and_fundamental_system,
        is_fundamental_system,
        projection_test,
    )

    s = GKMSkeleton(PRISM, prism_labels())
    for j, row in PRISM_STRUCTURE_ROWS.items():
        assert s.structure[j] == row, f"structure row {j + 1}"
    delta, F = defect_and_fundamental_system(s)
    Fp = RationalMatrix.from_rows(PRISM_F)
    assert delta == 3 and is_fundamental_system(s, Fp), "defect / printed system"
    assert check_k1(Fp, s.structure), "K1"
    ok, rep = check_k2(s, Fp)
    assert not ok and rep.failing_edges == PRISM_K2_FAILING, f"K2 failing at {rep.failing_edges}"
    verdict = projection_test(s, Fp, rep, all_witnesses=True)
    assert verdict.ruled_out, "projection test"
    h1, h2 = tuple(map(Fraction, PRISM_H1)), tuple(map(Fraction, PRISM_H2))
    assert any(w[0] == 2 and w[1] == 4 and w[4] == h1 and w[5] == h2 for w in verdict.witnesses), "witness"
    return "K2 fails at e3, e5, e6; ruled out"


def _check_k33() -> str:
    from .gkm import is_positive, kirwan_class_test, twenty_four_rule, vertex_profile

    g = k33_graph()
    assert is_positive(g) and twenty_four_rule(g), "positivity / 24"
    p = vertex_profile(g, K33_XI)
    assert p.index == K33_INDEX and p.phi == K33_PHI and p.phi_xi == K33_PHI_XI, "profile"
    assert [set(x) for x in p.stable] == [set(x) for x in K33_STABLE], "stable sets"
    res = kirwan_class_test(g, K33_XI)
    w = res.witness or {}
    assert not res.passed and w.get("v") == 1 and w.get("A", (None,))[0] == K33_B1, f"kirwan {w}"
    return "profile matches; Kirwan fails at v2 with 1/2"


def _check_cp3() -> str:
    from .gkm import abbv_integrate, equivariant_chern_class, first_chern_map, membership_test
    from .symalg import pairwise_coprime

    g = cp3_graph()
    for v, ws in enumerate(CP3_VERTEX_WEIGHTS):
        assert sorted(g.weights_at(v)) == sorted(ws), f"weights at p{v}"
        assert pairwise_coprime(ws), f"coprime at p{v}"
    c1 = first_chern_map(g)
    assert set(c1.values()) == {4} and sum(c1[e] for e in K4.edges) == 24, "C1"
    assert abbv_integrate(g, [3]) == 4, "euler"
    for k in (1, 2, 3):
        assert membership_test(g, equivariant_chern_class(g, k)), f"c{k} membership"
    return "C1 = 4, sum 24, c3 = 4, membership"


FIXTURES: dict[str, Callable[[], str]] = {
    "k4-four": _check_k4_four,
    "k4-zero": _check_k4_zero,
    "prism-projection": _check_prism,
    "k33-kirwan": _check_k33,
    "cp3-weights": _check_cp3,
}


def verify_fixtures() -> list[FixtureResult]:
    out = []
    for name, fn in FIXTURES.items():
        try:
            out.append(FixtureResult(name, True, fn()))
        except AssertionError as exc:
            out.append(FixtureResult(name, False, str(exc)))
    return out
