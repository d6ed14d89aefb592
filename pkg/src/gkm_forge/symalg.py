"""Sparse integer polynomials in d variables and division by linear forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence

Exponent = tuple[int, ...]


class SymalgError(ValueError):
    pass


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients; ``terms`` maps exponents to coefficients."""

    nvars: int
    terms: tuple[tuple[Exponent, int], ...]

    @classmethod
    def from_dict(cls, nvars: int, terms: Mapping[Exponent, int]) -> "IntPolynomial":
        for e in terms:
            if len(e) != nvars:
                raise SymalgError("exponent length differs from variable count")
        return cls(nvars, tuple(sorted((tuple(e), int(c)) for e, c in terms.items() if c != 0)))

    @classmethod
    def constant(cls, nvars: int, c: int) -> "IntPolynomial":
        return cls.from_dict(nvars, {(0,) * nvars: c})

    @classmethod
    def linear(cls, coeffs: Sequence[int]) -> "IntPolynomial":
        d = len(coeffs)
        return cls.from_dict(d, {tuple(int(i == j) for j in range(d)): c for i, c in enumerate(coeffs)})

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def homogeneous_part(self, k: int) -> "IntPolynomial":
        return IntPolynomial(self.nvars, tuple(t for t in self.terms if sum(t[0]) == k))

    def _check(self, other: "IntPolynomial") -> None:
        if self.nvars != other.nvars:
            raise SymalgError("variable count mismatch")

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        self._check(other)
        out = self.as_dict()
        for e, c in other.terms:
            out[e] = out.get(e, 0) + c
        return IntPolynomial.from_dict(self.nvars, out)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial.from_dict(self.nvars, {e: c * other for e, c in self.terms})
        self._check(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return IntPolynomial.from_dict(self.nvars, out)

    __rmul__ = __mul__

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise SymalgError("point dimension mismatch")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms:
            term = Fraction(c)
            for x, k in zip(pt, e):
                if k:
                    term *= x**k
            total += term
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms, key=lambda t: (-sum(t[0]), [-x for x in t[0]])):
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class LinearForm:
    """Nonzero integer linear form sum c_i x_i."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not any(self.coeffs):
            raise SymalgError("linear form must be nonzero")

    def poly(self) -> IntPolynomial:
        return IntPolynomial.linear(self.coeffs)


def _as_form(w) -> LinearForm:
    return w if isinstance(w, LinearForm) else LinearForm(tuple(int(x) for x in w))


def sym_poly_in_weights(weights: Sequence, k: int) -> IntPolynomial:
    """Elementary symmetric polynomial of degree k in the weight forms."""
    forms = [_as_form(w) for w in weights]
    if not forms:
        raise SymalgError("need at least one weight")
    d = len(forms[0].coeffs)
    if not 0 <= k <= len(forms):
        raise SymalgError("degree out of range")
    total = IntPolynomial.constant(d, 0)
    for sub in combinations(forms, k):
        prod = IntPolynomial.constant(d, 1)
        for f in sub:
            prod = prod * f.poly()
        total = total + prod
    return total


def divisible_by_linear(p: IntPolynomial, form) -> Optional[IntPolynomial]:
    """Return q in Z[x] with p = form*q, or None."""
    ell = _as_form(form)
    c = ell.coeffs
    if len(c) != p.nvars:
        raise SymalgError("variable count mismatch")
    m = next(i for i, x in enumerate(c) if x != 0)
    # long division in x_m over Q; x_m appears in ell only linearly
    rem: dict[Exponent, Fraction] = {e: Fraction(v) for e, v in p.terms}
    quot: dict[Exponent, Fraction] = {}
    while rem:
        # leading term: highest power of x_m, ties broken deterministically
        e = max(rem, key=lambda t: (t[m], t))
        if e[m] == 0:
            return None
        coef = rem[e] / c[m]
        qe = tuple(x - (i == m) for i, x in enumerate(e))
        quot[qe] = quot.get(qe, Fraction(0)) + coef
        for i, ci in enumerate(c):
            if ci:
                te = tuple(x + (j == i) for j, x in enumerate(qe))
                val = rem.get(te, Fraction(0)) - coef * ci
                if val:
                    rem[te] = val
                else:
                    rem.pop(te, None)
    if any(v.denominator != 1 for v in quot.values()):
        return None
    return IntPolynomial.from_dict(p.nvars, {e: int(v) for e, v in quot.items()})


def _content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def pairwise_coprime(weights: Sequence) -> bool:
    """No integer other than +-1 divides two distinct weights."""
    cs = [_content(_as_form(w).coeffs) for w in weights]
    return all(gcd(a, b) == 1 for a, b in combinations(cs, 2))


def evaluate(p: IntPolynomial, point: Sequence) -> Fraction:
    return p.evaluate(point)
