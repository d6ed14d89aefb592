from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from _pool import gkm_graphs, positive_graphs
from gkm_forge.fixtures import (
    CP3_EDGE_WEIGHTS,
    CP3_VERTEX_WEIGHTS,
    K4,
    K4_F_ZERO,
    K4_M,
    K33_B1,
    K33_INDEX,
    K33_PHI,
    K33_PHI_XI,
    K33_STABLE,
    K33_XI,
    cp3_graph,
    k33_graph,
    k4_standard_graph,
)
from gkm_forge.gkm import (
    AbstractGKMGraph,
    GKMError,
    abbv_integrate,
    betti_numbers,
    chern_sum,
    equivariant_chern_class,
    find_generic,
    first_chern_map,
    is_generic,
    is_positive,
    isomorphic,
    kirwan_class_test,
    membership_test,
    parse_monomial,
    project,
    sample_generic,
    twenty_four_rule,
    validate,
    vertex_profile,
)
from gkm_forge.graphs import DartGraph
from gkm_forge.linalg import RationalMatrix, int_det, vectors_rank
from gkm_forge.polytope import Polytope, cube, graph_from_polytope, simplex
from gkm_forge.symalg import IntPolynomial, pairwise_coprime


def _non_positive() -> AbstractGKMGraph:
    """Prism over the a = 3 Hirzebruch trapezoid; the short vertical edges have C1 = -1."""
    base = [(0, 0), (1, 0), (1, 1), (0, 4)]
    return graph_from_polytope(Polytope(3, tuple((x, y, z) for z in (0, 1) for x, y in base)))


def _negated(g: AbstractGKMGraph) -> AbstractGKMGraph:
    return g.map_weights([[-int(i == j) for j in range(g.d)] for i in range(g.d)])


# validation -------------------------------------------------------------------------


def test_k4_standard_graph_is_valid():
    assert validate(k4_standard_graph())


def test_m_times_printed_system_is_a_valid_rank_two_graph():
    M = RationalMatrix.from_rows(K4_M)
    cols = RationalMatrix.from_rows(K4_F_ZERO).columns()
    g = AbstractGKMGraph.from_dart_weights(K4, 2, {e: tuple(int(x) for x in M.apply(f)) for e, f in zip(K4.edges, cols)})
    assert validate(g)


def test_doubled_weights_fail_the_span_axiom():
    g = cp3_graph().map_weights([[2, 0], [0, 2]])
    check = validate(g)
    assert not check and any("span" in p for p in check.problems)


def test_rank_one_graph_is_rejected():
    g = AbstractGKMGraph.from_dart_weights(K4, 1, {e: (1,) for e in K4.edges})
    assert not validate(g)


def test_antisymmetry():
    g = cp3_graph()
    for e in g.graph.edges:
        assert g.weight(e) == tuple(-x for x in g.weight(e[::-1]))


# first Chern class ---------------------------------------------------------------------


def test_cp3_first_chern_class_from_vertex_sums():
    g = cp3_graph()
    sums = [tuple(map(sum, zip(*ws))) for ws in CP3_VERTEX_WEIGHTS]
    for (p, q), w in CP3_EDGE_WEIGHTS.items():
        diff = tuple(a - b for a, b in zip(sums[p], sums[q]))
        assert diff == tuple(4 * x for x in w)
        assert first_chern_map(g)[(p, q)] == 4


def test_k33_first_chern_values():
    c1 = first_chern_map(k33_graph())
    assert c1[(0, 1)] == 2 and c1[(0, 5)] == 4


def test_positivity_and_24_rule():
    for g in (cp3_graph(), k33_graph()):
        assert is_positive(g) and twenty_four_rule(g)
        assert is_positive(_negated(g))
    assert chern_sum(cp3_graph()) == 24


# isomorphism and projection ---------------------------------------------------------------


def test_isomorphic_to_relabeling_and_negation():
    g = k33_graph()
    h = g.relabel([5, 3, 1, 0, 2, 4])
    assert isomorphic(g, h) is not None
    F, theta = isomorphic(g, _negated(g))
    for e in g.graph.darts:
        w = [sum(a * b for a, b in zip(row, g.weight(e))) for row in theta]
        assert tuple(w) == tuple(-x for x in g.weight((F[e[0]], F[e[1]])))


def test_isomorphic_rejects_different_rank():
    assert isomorphic(k4_standard_graph(), cp3_graph()) is None


def test_projection_of_standard_graph_by_printed_matrix():
    h = project(k4_standard_graph(), K4_M)
    assert h is not None and h.d == 2 and validate(h)


def test_projection_to_a_line_fails():
    assert project(k4_standard_graph(), [[1, 2, 5]]) is None


def test_identity_projection():
    g = k4_standard_graph()
    assert project(g, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == g


# generic vectors and profiles --------------------------------------------------------------


def test_find_generic():
    g = cp3_graph()
    xi = find_generic(g)
    assert all(sum(a * b for a, b in zip(w, xi)) != 0 for w in CP3_EDGE_WEIGHTS.values())
    assert is_generic(k33_graph(), (1, 1))
    bad = AbstractGKMGraph.from_dart_weights(K4, 2, {**CP3_EDGE_WEIGHTS, (0, 1): (1, -1)})
    assert not is_generic(bad, (1, 1))


def test_k33_profile_table():
    p = vertex_profile(k33_graph(), K33_XI)
    assert p.index == K33_INDEX == (0, 1, 1, 2, 2, 3)
    assert p.phi[0] == (-1, -3) and p.phi_xi[0] == -4
    assert p.phi == K33_PHI and p.phi_xi == K33_PHI_XI
    assert set(p.stable[2]) == {2, 3, 4, 5}
    assert [set(s) for s in p.stable] == [set(s) for s in K33_STABLE]


def test_stable_sets_are_phi_increasing():
    g = k33_graph()
    p = vertex_profile(g, K33_XI)
    for v, s in enumerate(p.stable):
        assert all(p.phi_xi[v] < p.phi_xi[q] for q in s if q != v)


def test_reversing_xi_reverses_index():
    g = k33_graph()
    a = vertex_profile(g, (1, 1)).index
    b = vertex_profile(g, (-1, -1)).index
    assert all(x + y == 3 for x, y in zip(a, b))
    assert betti_numbers(g, (1, 1)) == betti_numbers(g, (-1, -1))[::-1]


def test_betti_numbers():
    assert betti_numbers(k33_graph(), K33_XI) == (1, 2, 2, 1)
    g = k4_standard_graph()
    assert betti_numbers(g, find_generic(g)) == (1, 1, 1, 1)


# Kirwan class test --------------------------------------------------------------------------


def test_k33_fails_the_kirwan_test_at_v2():
    res = kirwan_class_test(k33_graph(), K33_XI)
    assert not res.passed
    assert res.witness["v"] == 1 and res.witness["A"][0] == K33_B1 == Fraction(1, 2)


def test_cp3_passes_the_kirwan_test():
    g = cp3_graph()
    res = kirwan_class_test(g)
    assert res.passed and res.classes


@pytest.mark.parametrize("poly", [simplex(3, 1), cube(3), simplex(3, 4)])
def test_polytope_graphs_pass_the_kirwan_test(poly):
    g = graph_from_polytope(poly)
    for xi in sample_generic(g, 8):
        assert kirwan_class_test(g, xi).passed


def test_kirwan_preconditions():
    with pytest.raises(GKMError, match="generic"):
        kirwan_class_test(k33_graph(), (0, 0))
    with pytest.raises(GKMError, match="positive"):
        kirwan_class_test(_non_positive())


def test_non_positive_example():
    g = _non_positive()
    assert validate(g) and not is_positive(g) and min(first_chern_map(g).values()) == -1


# localization ---------------------------------------------------------------------------------


def _sympy_abbv(g: AbstractGKMGraph, monomial) -> sympy.Expr:
    x = sympy.symbols(f"x1:{g.d + 1}")
    total = 0
    for v in range(g.graph.n):
        forms = [sum(c * xi for c, xi in zip(w, x)) for w in g.weights_at(v)]
        num = 1
        for k in monomial:
            num *= sum(sympy.prod(s) for s in combinations(forms, k))
        total += num / sympy.prod(forms)
    return sympy.simplify(sympy.together(total))


def test_abbv_examples():
    g = k33_graph()
    assert abbv_integrate(g, [1, 2]) == 24
    assert abbv_integrate(g, [3]) == 6
    assert abbv_integrate(g, []) == 0


def test_c1_cubed_on_standard_graph_matches_symbolic_sum():
    g = k4_standard_graph()
    assert _sympy_abbv(g, [1, 1, 1]) == 64
    assert abbv_integrate(g, [1, 1, 1]) == 64


def test_abbv_rejects_excess_degree():
    with pytest.raises(GKMError):
        abbv_integrate(cp3_graph(), [2, 2])


def test_parse_monomial():
    assert parse_monomial("c1^3") == [1, 1, 1]
    assert parse_monomial("c1*c2") == [1, 2]
    assert parse_monomial("1") == []
    with pytest.raises(GKMError):
        parse_monomial("x^2")


def test_membership_examples():
    g = cp3_graph()
    one = {v: IntPolynomial.constant(2, 1) for v in range(4)}
    assert membership_test(g, one)
    assert membership_test(g, equivariant_chern_class(g, 1))
    spike = {v: IntPolynomial.constant(2, int(v == 0)) for v in range(4)}
    assert not membership_test(g, spike)


def test_membership_requires_coprime_weights():
    g = cp3_graph().map_weights([[2, 0], [0, 2]])
    with pytest.raises(GKMError, match="coprime"):
        membership_test(g, {v: IntPolynomial.constant(2, 1) for v in range(4)})


# property suites -----------------------------------------------------------------------------


@st.composite
def unimodular(draw, d: int):
    """Product of random elementary integer matrices and sign flips."""
    m = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(draw(st.integers(0, 6))):
        i, j = draw(st.integers(0, d - 1)), draw(st.integers(0, d - 1))
        if i == j:
            m[i] = [-x for x in m[i]]
        else:
            c = draw(st.integers(-2, 2))
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    return m


@st.composite
def graph_and_changes(draw, pool=gkm_graphs):
    g = draw(st.sampled_from(pool()))
    perm = draw(st.permutations(range(g.graph.n)))
    theta = draw(unimodular(g.d))
    return g, perm, theta


@given(graph_and_changes())
def test_c1_symmetric_and_isomorphism_invariant(data):
    g, perm, theta = data
    c1 = first_chern_map(g)
    for p, q in g.graph.darts:
        assert c1[(p, q)] == c1[(q, p)]
    h = g.relabel(perm).map_weights(theta)
    assert abs(int_det(theta)) == 1
    c1h = first_chern_map(h)
    for p, q in g.graph.darts:
        assert c1h[(perm[p], perm[q])] == c1[(p, q)]
    assert isomorphic(g, h) is not None


@given(st.data())
def test_c1_invariant_under_projection(data):
    g = data.draw(st.sampled_from([g for g in gkm_graphs() if g.d == 3]))
    theta = [data.draw(st.lists(st.integers(-2, 2), min_size=3, max_size=3)) for _ in range(2)]
    assume(vectors_rank(theta) == 2)
    h = project(g, theta)
    if h is not None:
        assert first_chern_map(h) == first_chern_map(g)


@given(st.data())
def test_chern_sum_is_orientation_independent(data):
    g = data.draw(st.sampled_from(gkm_graphs()))
    flips = data.draw(st.lists(st.booleans(), min_size=len(g.graph.edges), max_size=len(g.graph.edges)))
    orientation = [(b, a) if f else (a, b) for (a, b), f in zip(g.graph.edges, flips)]
    assert chern_sum(g, orientation) == chern_sum(g)


@given(graph_and_changes())
def test_abbv_identities(data):
    g0, perm, theta = data
    g = g0.relabel(perm).map_weights(theta)
    assert abbv_integrate(g, []) == 0
    assert abbv_integrate(g, [1]) == 0
    assert abbv_integrate(g, [g.n]) == g.graph.n
    if g.n == 3:
        assert abbv_integrate(g, [1, 2]) == chern_sum(g)
        assert abbv_integrate(g, [1, 1, 1]) == abbv_integrate(g0, [1, 1, 1])
    assert abbv_integrate(g, [1] * g.n).denominator == 1


@given(st.data())
def test_weak_index_increasing_on_positive_graphs(data):
    g0, perm, theta = data.draw(graph_and_changes(positive_graphs))
    g = g0.relabel(perm).map_weights(theta)
    xi = data.draw(st.sampled_from(sample_generic(g, 8)))
    prof = vertex_profile(g, xi)
    for p, q in g.graph.darts:
        if sum(a * b for a, b in zip(g.weight((p, q)), xi)) > 0:
            assert prof.index[p] <= prof.index[q]
            assert prof.phi_xi[p] < prof.phi_xi[q]


@given(st.data())
def test_kirwan_classes_are_equivariant(data):
    g = data.draw(st.sampled_from([g for g in positive_graphs() if g.n == 3]))
    xi = data.draw(st.sampled_from(sample_generic(g, 8)))
    res = kirwan_class_test(g, xi)
    for _, gamma in res.classes:
        for p, q in g.graph.edges:
            diff = [a - b for a, b in zip(gamma[p], gamma[q])]
            w = g.weight((p, q))
            k = next(i for i, x in enumerate(w) if x)
            assert diff[k] % w[k] == 0 and all(a * w[k] == diff[k] * b for a, b in zip(diff, w))


@given(st.data())
def test_equivariant_chern_classes_pass_membership(data):
    coprime = [g for g in gkm_graphs() if all(pairwise_coprime(g.weights_at(v)) for v in range(g.graph.n))]
    g = data.draw(st.sampled_from(coprime))
    k = data.draw(st.integers(0, g.n))
    assert membership_test(g, equivariant_chern_class(g, k))


def test_dart_graph_used_by_pool_is_cubic():
    assert all(isinstance(g.graph, DartGraph) and g.n == 3 for g in gkm_graphs())
