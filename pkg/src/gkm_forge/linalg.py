"""Exact rational and integer linear algebra.

Every routine works over :class:`fractions.Fraction` or Python ``int``; there
are no tolerances anywhere.  Vectors are plain tuples, matrices are
:class:`RationalMatrix` values or row sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Vector = tuple  # tuple of Fraction or int


class LinalgError(ValueError):
    """Raised on contract violations (singular input, deficient span, ...)."""


def _frac_row(row: Iterable) -> tuple[Fraction, ...]:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in row)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense immutable matrix over the rationals, row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RationalMatrix":
        data = tuple(_frac_row(r) for r in rows)
        if cols is None:
            if not data:
                raise LinalgError("column count needed for an empty matrix")
            cols = len(data[0])
        if any(len(r) != cols for r in data):
            raise LinalgError("ragged rows")
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RationalMatrix":
        if not columns:
            raise LinalgError("no columns")
        return cls.from_rows(list(zip(*columns)), len(columns))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise LinalgError("shape mismatch")
        ocols = other.columns()
        return RationalMatrix.from_rows(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols] for r in self.entries],
            other.cols,
        )

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise LinalgError("shape mismatch")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.entries)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


def _as_rows(m) -> list[list[Fraction]]:
    if isinstance(m, RationalMatrix):
        return [list(r) for r in m.entries]
    return [list(_frac_row(r)) for r in m]


def _ncols(m) -> int:
    if isinstance(m, RationalMatrix):
        return m.cols
    return len(m[0]) if len(m) else 0


def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row-echelon form and pivot columns; zero rows dropped."""
    rows = _as_rows(m)
    ncols = _ncols(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel_basis(m) -> list[tuple[Fraction, ...]]:
    """Basis of ker(m), returned as the RREF of the kernel subspace.

    The result depends only on the subspace, so it is canonical.
    """
    ncols = _ncols(m)
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    if not basis:
        return []
    canon, _ = rref(basis)
    return [tuple(r) for r in canon]


def _integer_rows(m) -> list[list[int]]:
    rows = _as_rows(m)
    out = []
    for r in rows:
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


def rank(m) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    a = _integer_rows(m)
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(nc):
        p = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nr):
            ai = a[i]
            f = ai[c]
            ai[c] = 0
            for j in range(c + 1, nc):
                ai[j] = (piv * ai[j] - f * a[r][j]) // prev
        prev = piv
        r += 1
        if r == nr:
            break
    return r


def vectors_rank(vectors: Sequence[Sequence]) -> int:
    """Rank of a list of vectors (as rows)."""
    if not vectors:
        return 0
    return rank([list(v) for v in vectors])


def independent(u: Sequence, v: Sequence) -> bool:
    """True iff u and v are linearly independent."""
    if not any(u) or not any(v):
        return False
    n = len(u)
    return any(u[i] * v[j] != u[j] * v[i] for i in range(n) for j in range(i + 1, n))


def multiple_of(v: Sequence, f: Sequence) -> Optional[Fraction]:
    """Return c with v = c*f, or None when v is not collinear with f."""
    if len(v) != len(f):
        raise LinalgError("dimension mismatch")
    k = next((i for i, x in enumerate(f) if x != 0), None)
    if k is None:
        return Fraction(0) if not any(v) else None
    c = Fraction(v[k]) / Fraction(f[k])
    if all(Fraction(a) == c * b for a, b in zip(v, f)):
        return c
    return None


def hnf_columns(mat: list[list[int]]) -> list[list[int]]:
    """Column-style Hermite normal form of an integer matrix.

    Returns the nonzero columns of the lower-triangular echelon form: each
    pivot is positive and the entries left of a pivot in its row are reduced
    into ``[0, pivot)``.
    """
    if not mat:
        return []
    nr = len(mat)
    cols = [list(c) for c in zip(*mat)]
    out: list[list[int]] = []
    pivot_rows: list[int] = []
    for r in range(nr):
        live = [c for c in cols if c[r] != 0]
        rest = [c for c in cols if c[r] == 0]
        if not live:
            cols = rest
            continue
        # Euclid on row r across live columns
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[r]))
            p = live[0]
            nxt = [p]
            for c in live[1:]:
                q = c[r] // p[r]
                c = [a - q * b for a, b in zip(c, p)]
                if c[r] != 0:
                    nxt.append(c)
                elif any(c):
                    rest.append(c)
            live = nxt
        p = live[0]
        if p[r] < 0:
            p = [-a for a in p]
        out.append(p)
        pivot_rows.append(r)
        cols = [c for c in rest if any(c)]
    # reduce left entries modulo pivots
    for k in range(len(out)):
        r = pivot_rows[k]
        for j in range(k):
            q = out[j][r] // out[k][r]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], out[k])]
    return out


def lattice_span_basis(vectors: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """A basis of the Z-span of rational vectors whose Q-span is everything."""
    if not vectors:
        raise LinalgError("span deficient")
    dim = len(vectors[0])
    fr = [_frac_row(v) for v in vectors]
    den = lcm(*(x.denominator for v in fr for x in v))
    cols = [[int(x * den) for x in v] for v in fr]
    mat = [list(r) for r in zip(*cols)]
    basis = hnf_columns(mat)
    if len(basis) != dim:
        raise LinalgError("span deficient")
    return [tuple(Fraction(x, den) for x in b) for b in basis]


def invert(m) -> RationalMatrix:
    """Exact inverse of a square nonsingular matrix."""
    rows = _as_rows(m)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise LinalgError("not square")
    aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise LinalgError("singular")
    return RationalMatrix.from_rows([r[n:] for r in red], n)


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_two_unknowns(
    target: Sequence, u: Sequence[int], v: Sequence[int]
) -> Optional[tuple[Fraction, Fraction]]:
    """Solve target = A1*u + A2*v; None if target is outside span(u, v)."""
    if not independent(u, v):
        raise LinalgError("dependent directions")
    n = len(u)
    i, j = next((i, j) for i in range(n) for j in range(i + 1, n) if u[i] * v[j] != u[j] * v[i])
    det = Fraction(u[i] * v[j] - u[j] * v[i])
    t = _frac_row(target)
    a1 = (t[i] * v[j] - t[j] * v[i]) / det
    a2 = (u[i] * t[j] - u[j] * t[i]) / det
    if any(a1 * x + a2 * y != z for x, y, z in zip(u, v, t)):
        return None
    return a1, a2


def content(v: Iterable[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through a nonzero rational vector."""
    fr = _frac_row(v)
    den = lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = content(ints)
    if g == 0:
        raise LinalgError("zero vector has no primitive direction")
    return tuple(x // g for x in ints)
