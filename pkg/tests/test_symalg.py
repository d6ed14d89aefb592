from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from gkm_forge.fixtures import CP3_VERTEX_WEIGHTS
from gkm_forge.symalg import (
    IntPolynomial,
    LinearForm,
    SymalgError,
    divisible_by_linear,
    evaluate,
    pairwise_coprime,
    sym_poly_in_weights,
)

X = sympy.symbols("x1:4")


def P(expr, nvars: int = 2) -> IntPolynomial:
    poly = sympy.Poly(sympy.expand(expr), *X[:nvars])
    return IntPolynomial.from_dict(nvars, {tuple(e): int(c) for e, c in poly.terms()})


def to_sympy(p: IntPolynomial):
    return sum(c * sympy.prod(x**k for x, k in zip(X, e)) for e, c in p.terms)


def test_sigma1_of_cp3_vertex_weights():
    assert sym_poly_in_weights(CP3_VERTEX_WEIGHTS[0], 1) == P(4 * X[0] + 5 * X[1])


def test_sigma0_is_one_and_sigma2_of_coordinates():
    assert sym_poly_in_weights([(1, 2), (3, 4)], 0) == IntPolynomial.constant(2, 1)
    assert sym_poly_in_weights([(1, 0), (0, 1)], 2) == P(X[0] * X[1])


def test_degree_out_of_range():
    with pytest.raises(SymalgError):
        sym_poly_in_weights([(1, 0)], 2)


def test_division_examples():
    assert divisible_by_linear(P(X[0] ** 2 - X[1] ** 2), (1, -1)) == P(X[0] + X[1])
    assert divisible_by_linear(P(X[0]), (2, 0)) is None
    assert divisible_by_linear(P((3 * X[0] + X[1]) * (X[0] - 2 * X[1])), (3, 1)) == P(X[0] - 2 * X[1])


def test_division_of_non_multiple_and_zero():
    assert divisible_by_linear(P(X[0] ** 2 + X[1] ** 2), (1, -1)) is None
    assert divisible_by_linear(IntPolynomial.constant(2, 0), (1, 1)) == IntPolynomial.constant(2, 0)
    assert divisible_by_linear(IntPolynomial.constant(2, 3), (1, 1)) is None


def test_linear_form_must_be_nonzero():
    with pytest.raises(SymalgError):
        LinearForm((0, 0))


def test_mixing_variable_counts_is_rejected():
    with pytest.raises(SymalgError):
        IntPolynomial.constant(2, 1) + IntPolynomial.constant(3, 1)
    with pytest.raises(SymalgError):
        divisible_by_linear(IntPolynomial.constant(2, 1), (1, 0, 0))


def test_pairwise_coprime_examples():
    assert pairwise_coprime(CP3_VERTEX_WEIGHTS[0])
    assert not pairwise_coprime([(2, 0), (0, 2)])
    assert pairwise_coprime(CP3_VERTEX_WEIGHTS[3])


def test_evaluate_examples():
    assert evaluate(IntPolynomial.constant(2, 1), (Fraction(3, 7), 5)) == 1
    assert evaluate(P(X[0] + X[1]), (1, 1)) == 2
    # sigma_3 at the first CP3 vertex: (1)(2)(6)
    assert evaluate(sym_poly_in_weights(CP3_VERTEX_WEIGHTS[0], 3), (1, 1)) == 12


coeff = st.integers(-5, 5)


@st.composite
def polys(draw, nvars: int, max_terms: int = 6, max_deg: int = 3):
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, max_deg)] * nvars), coeff, max_size=max_terms))
    return IntPolynomial.from_dict(nvars, terms)


@st.composite
def forms(draw, nvars: int):
    return tuple(draw(st.lists(coeff, min_size=nvars, max_size=nvars).filter(any)))


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(polys(d), forms(d))))
def test_division_round_trip(data):
    q, ell = data
    p = LinearForm(ell).poly() * q
    assert divisible_by_linear(p, ell) == q


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(polys(d), forms(d))))
def test_division_agrees_with_sympy(data):
    p, ell = data
    nv = p.nvars
    lin = sum(c * x for c, x in zip(ell, X[:nv]))
    q, r = sympy.div(sympy.Poly(to_sympy(p), *X[:nv]), sympy.Poly(lin, *X[:nv]), domain="QQ")
    integral = all(c.is_integer for c in q.coeffs()) if not q.is_zero else True
    expect = r.is_zero and integral
    got = divisible_by_linear(p, ell)
    assert (got is not None) == expect
    if got is not None:
        assert sympy.expand(to_sympy(got) - q.as_expr()) == 0


@given(st.integers(1, 3).flatmap(lambda d: st.lists(forms(d), min_size=1, max_size=4)))
def test_sym_poly_generating_function(weights):
    t = sympy.Symbol("t")
    nv = len(weights[0])
    lhs = sum(to_sympy(sym_poly_in_weights(weights, k)) * t**k for k in range(len(weights) + 1))
    rhs = sympy.prod(1 + t * sum(c * x for c, x in zip(w, X[:nv])) for w in weights)
    assert sympy.expand(lhs - rhs) == 0


@given(st.lists(forms(2), min_size=2, max_size=4), st.randoms(use_true_random=False))
def test_pairwise_coprime_invariant_under_sign_and_order(weights, rng):
    base = pairwise_coprime(weights)
    changed = [tuple(-x for x in w) if rng.random() < 0.5 else w for w in weights]
    rng.shuffle(changed)
    assert pairwise_coprime(changed) == base
