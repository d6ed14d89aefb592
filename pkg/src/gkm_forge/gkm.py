"""Abstract GKM graphs: validation, first Chern class map, Kirwan test, ABBV."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Mapping, Optional, Sequence

from .graphs import Dart, DartGraph, canonical_labeling, automorphisms, connections_along
from .linalg import (
    LinalgError,
    RationalMatrix,
    independent,
    invert,
    lattice_span_basis,
    multiple_of,
    solve_two_unknowns,
    vectors_rank,
)
from .symalg import IntPolynomial, divisible_by_linear, pairwise_coprime, sym_poly_in_weights

Weight = tuple[int, ...]


class GKMError(ValueError):
    """Malformed GKM graph input or a violated precondition."""


@dataclass(frozen=True)
class AbstractGKMGraph:
    """Graph plus antisymmetric weights; ``edge_weights[i]`` is w(graph.edges[i])."""

    graph: DartGraph
    d: int
    edge_weights: tuple[Weight, ...]

    def __post_init__(self):
        if len(self.edge_weights) != len(self.graph.edges):
            raise GKMError("one weight per edge required")
        ws = tuple(tuple(int(x) for x in w) for w in self.edge_weights)
        if any(len(w) != self.d for w in ws):
            raise GKMError("weight dimension differs from d")
        object.__setattr__(self, "edge_weights", ws)

    @classmethod
    def from_dart_weights(cls, graph: DartGraph, d: int, weights: Mapping[Dart, Sequence[int]]) -> "AbstractGKMGraph":
        out = []
        for u, v in graph.edges:
            if (u, v) in weights:
                w = tuple(weights[(u, v)])
                if (v, u) in weights and tuple(weights[(v, u)]) != tuple(-x for x in w):
                    raise GKMError(f"weights on ({u}, {v}) are not antisymmetric")
            elif (v, u) in weights:
                w = tuple(-x for x in weights[(v, u)])
            else:
                raise GKMError(f"missing weight on edge ({u}, {v})")
            out.append(w)
        return cls(graph, d, tuple(out))

    @cached_property
    def _index(self) -> dict[Dart, int]:
        return {e: i for i, e in enumerate(self.graph.edges)}

    def weight(self, dart: Dart) -> Weight:
        i = self._index.get(dart)
        if i is not None:
            return self.edge_weights[i]
        return tuple(-x for x in self.edge_weights[self._index[(dart[1], dart[0])]])

    def weights_at(self, v: int) -> list[Weight]:
        return [self.weight(e) for e in self.graph.out_darts(v)]

    @property
    def n(self) -> int:
        return self.graph.valency or 0

    def map_weights(self, theta: Sequence[Sequence[int]]) -> "AbstractGKMGraph":
        rows = [tuple(int(x) for x in r) for r in theta]
        ws = tuple(tuple(sum(a * b for a, b in zip(r, w)) for r in rows) for w in self.edge_weights)
        return AbstractGKMGraph(self.graph, len(rows), ws)

    def relabel(self, perm: Sequence[int]) -> "AbstractGKMGraph":
        g2 = self.graph.relabel(perm)
        mp = {(perm[u], perm[v]): w for (u, v), w in zip(self.graph.edges, self.edge_weights)}
        return AbstractGKMGraph.from_dart_weights(g2, self.d, mp)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "vertices": self.graph.n,
            "edges": [{"src": u, "dst": v, "w": list(w)} for (u, v), w in zip(self.graph.edges, self.edge_weights)],
        }

    @classmethod
    def from_json(cls, obj) -> "AbstractGKMGraph":
        try:
            d = int(obj["d"])
            n = int(obj["vertices"])
            edges = [(int(e["src"]), int(e["dst"]), [int(x) for x in e["w"]]) for e in obj["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise GKMError(f"malformed GKM graph JSON: {exc}") from exc
        g = DartGraph.from_edges(n, [(u, v) for u, v, _ in edges])
        return cls.from_dart_weights(g, d, {(u, v): w for u, v, w in edges})


def load_gkm(path) -> AbstractGKMGraph:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise GKMError(f"malformed JSON: {exc}") from exc
    return AbstractGKMGraph.from_json(obj)


# validation -------------------------------------------------------------------


@dataclass
class Validation:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def compatible_connection(g: AbstractGKMGraph, e: Dart):
    """First connection along e compatible with the weights, with its integers a_{e,e'}."""
    we = g.weight(e)
    for conn in connections_along(g.graph, e):
        coeffs = {}
        for src, dst in conn.mapping:
            diff = [a - b for a, b in zip(g.weight(src), g.weight(dst))]
            c = multiple_of(diff, we)
            if c is None or c.denominator != 1:
                break
            coeffs[src] = int(c)
        else:
            return conn, coeffs
    return None


def validate(g: AbstractGKMGraph) -> Validation:
    """Check the abstract GKM axioms, reporting each violation with a witness."""
    probs: list[str] = []
    G = g.graph
    n = G.valency
    if n is None:
        probs.append("graph is not regular")
    if not G.is_connected():
        probs.append("graph is not connected")
    if n is not None and n >= 2 and g.d < 2:
        probs.append(f"torus rank d={g.d} < 2 for valency {n}")
    if n is not None and g.d > n:
        probs.append(f"torus rank d={g.d} exceeds valency {n}")
    for e, w in zip(G.edges, g.edge_weights):
        if not any(w):
            probs.append(f"zero weight on {e}")
    if probs:
        return Validation(False, probs)
    for v in range(G.n):
        ws = g.weights_at(v)
        try:
            basis = lattice_span_basis(ws)
            ident = all(basis[i][j] == (i == j) for i in range(g.d) for j in range(g.d))
        except LinalgError:
            ident = False
        if not ident:
            probs.append(f"weights at vertex {v} do not span Z^{g.d}")
        for (e1, w1), (e2, w2) in combinations(zip(G.out_darts(v), ws), 2):
            if not independent(w1, w2):
                probs.append(f"weights of {e1} and {e2} are dependent")
    for dart in G.darts:
        if compatible_connection(g, dart) is None:
            probs.append(f"no compatible connection along {dart}")
    return Validation(not probs, probs)


# first Chern class ----------------------------------------------------------------


def first_chern_map(g: AbstractGKMGraph) -> dict[Dart, int]:
    """C1 on every dart from the weight-sum difference identity."""
    sums = [tuple(map(sum, zip(*g.weights_at(v)))) for v in range(g.graph.n)]
    out = {}
    for p, q in g.graph.darts:
        diff = [a - b for a, b in zip(sums[p], sums[q])]
        c = multiple_of(diff, g.weight((p, q)))
        if c is None or c.denominator != 1:
            raise GKMError(f"weight sums at ({p}, {q}) are not an integer multiple of its weight")
        out[(p, q)] = int(c)
    return out


def is_positive(g: AbstractGKMGraph) -> bool:
    return all(c > 0 for c in first_chern_map(g).values())


def chern_sum(g: AbstractGKMGraph, orientation: Optional[Sequence[Dart]] = None) -> int:
    c1 = first_chern_map(g)
    return sum(c1[e] for e in (orientation or g.graph.edges))


def twenty_four_rule(g: AbstractGKMGraph) -> bool:
    return chern_sum(g) == 24


# isomorphism and projection --------------------------------------------------------


def _graph_isomorphisms(g1: DartGraph, g2: DartGraph) -> list[tuple[int, ...]]:
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return []
    c1, o1 = canonical_labeling(g1)
    c2, o2 = canonical_labeling(g2)
    if c1 != c2:
        return []
    base = [0] * g1.n
    for a, b in zip(o1, o2):
        base[a] = b
    return [tuple(base[a[v]] for v in range(g1.n)) for a in automorphisms(g1)]


def isomorphic(g1: AbstractGKMGraph, g2: AbstractGKMGraph):
    """Return (F, theta) with theta(w1(v, w)) = w2(F v, F w), or None."""
    if g1.d != g2.d:
        return None
    d = g1.d
    for F in _graph_isomorphisms(g1.graph, g2.graph):
        # theta from d independent weights at vertex 0
        darts = g1.graph.out_darts(0)
        pick = None
        for sub in combinations(darts, d):
            if vectors_rank([g1.weight(e) for e in sub]) == d:
                pick = sub
                break
        if pick is None:
            continue
        U = RationalMatrix.from_columns([g1.weight(e) for e in pick])
        W = RationalMatrix.from_columns([g2.weight((F[a], F[b])) for a, b in pick])
        theta = W @ invert(U)
        if any(x.denominator != 1 for r in theta.entries for x in r):
            continue
        T = [[int(x) for x in r] for r in theta.entries]
        from .linalg import int_det

        if abs(int_det(T)) != 1:
            continue
        if all(
            tuple(sum(a * b for a, b in zip(r, g1.weight(e))) for r in T) == g2.weight((F[e[0]], F[e[1]]))
            for e in g1.graph.edges
        ):
            return F, tuple(tuple(r) for r in T)
    return None


def project(g: AbstractGKMGraph, theta: Sequence[Sequence[int]]) -> Optional[AbstractGKMGraph]:
    """Apply an integer surjection to every weight; None unless the result validates."""
    T = [list(map(int, r)) for r in theta]
    if any(len(r) != g.d for r in T):
        raise GKMError("projection matrix has wrong width")
    if vectors_rank(T) != len(T):
        raise GKMError("projection is not surjective over Q")
    h = g.map_weights(T)
    if any(not any(w) for w in h.edge_weights):
        return None
    return h if validate(h) else None


# generic vectors and profiles -----------------------------------------------------------


def _spiral(d: int):
    r = 1
    while True:
        shell = [p for p in product(range(-r, r + 1), repeat=d) if max(map(abs, p)) == r]
        shell.sort(key=lambda p: (sum(map(abs, p)), [-x for x in p]))
        yield from shell
        r += 1


def is_generic(g: AbstractGKMGraph, xi: Sequence[int]) -> bool:
    return all(sum(a * b for a, b in zip(w, xi)) != 0 for w in g.edge_weights)


def find_generic(g: AbstractGKMGraph) -> tuple[int, ...]:
    """First generic integer vector in a fixed shell-by-shell enumeration."""
    return sample_generic(g, 1)[0]


def sample_generic(g: AbstractGKMGraph, count: int) -> list[tuple[int, ...]]:
    out = []
    for xi in _spiral(g.d):
        if is_generic(g, xi):
            out.append(tuple(xi))
            if len(out) == count:
                return out
    raise AssertionError("unreachable")


def _pair(w, xi) -> int:
    return sum(a * b for a, b in zip(w, xi))


@dataclass(frozen=True)
class VertexProfile:
    index: tuple[int, ...]
    phi: tuple[Weight, ...]
    phi_xi: tuple[int, ...]
    stable: tuple[frozenset, ...]


def vertex_profile(g: AbstractGKMGraph, xi: Sequence[int]) -> VertexProfile:
    if not is_generic(g, xi):
        raise GKMError(f"xi={tuple(xi)} is not generic")
    G = g.graph
    lam = tuple(sum(1 for e in G.out_darts(v) if _pair(g.weight(e), xi) < 0) for v in range(G.n))
    phi = tuple(tuple(-x for x in map(sum, zip(*g.weights_at(v)))) for v in range(G.n))
    phix = tuple(_pair(p, xi) for p in phi)
    stable = []
    for v in range(G.n):
        seen = {v}
        queue = [v]
        while queue:
            x = queue.pop(0)
            for e in G.out_darts(x):
                if _pair(g.weight(e), xi) > 0 and e[1] not in seen:
                    seen.add(e[1])
                    queue.append(e[1])
        stable.append(frozenset(seen))
    return VertexProfile(lam, phi, phix, tuple(stable))


def betti_numbers(g: AbstractGKMGraph, xi: Sequence[int]) -> tuple[int, ...]:
    """(b_0, b_2, ..., b_2n); odd Betti numbers vanish."""
    lam = vertex_profile(g, xi).index
    return tuple(lam.count(i) for i in range(g.n + 1))


# Kirwan class test -----------------------------------------------------------------


@dataclass(frozen=True)
class KirwanResult:
    passed: bool
    xi: tuple[int, ...]
    classes: tuple = ()  # per index-1 vertex: (v, gamma tuple)
    witness: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.passed


def kirwan_class_test(g: AbstractGKMGraph, xi: Optional[Sequence[int]] = None) -> KirwanResult:
    """Try to build the special degree-2 class for every index-1 vertex."""
    if g.n != 3:
        raise GKMError("the Kirwan class test needs a 3-valent graph")
    xi = tuple(xi) if xi is not None else find_generic(g)
    if not is_positive(g):
        raise GKMError("graph is not positive")
    prof = vertex_profile(g, xi)
    G = g.graph
    lam = prof.index
    zero = (Fraction(0),) * g.d
    higher = sorted((v for v in range(G.n) if lam[v] >= 2), key=lambda v: (prof.phi_xi[v], v))
    classes = []
    for v in (v for v in range(G.n) if lam[v] == 1):
        tau = next(g.weight(e) for e in G.out_darts(v) if _pair(g.weight(e), xi) < 0)
        gamma: dict[int, tuple] = {}
        for x in range(G.n):
            if lam[x] <= 1:
                inside = lam[x] == 1 and x in prof.stable[v]
                gamma[x] = tuple(map(Fraction, tau)) if inside else zero
        for x in higher:
            down = sorted(e for e in G.out_darts(x) if _pair(g.weight(e), xi) < 0)
            (_, r1), (_, r2) = down[0], down[1]
            u1, u2 = g.weight((x, r1)), g.weight((x, r2))
            target = [a - b for a, b in zip(gamma[r1], gamma[r2])]
            sol = solve_two_unknowns(target, [-c for c in u1], u2)
            wit = {"v": v, "x": x, "r1": r1, "r2": r2}
            if sol is None:
                return KirwanResult(False, xi, witness={**wit, "reason": "inconsistent"})
            a1, a2 = sol
            if a1.denominator != 1 or a2.denominator != 1:
                return KirwanResult(False, xi, witness={**wit, "reason": "non-integer", "A": (a1, a2)})
            gamma[x] = tuple(a + a1 * c for a, c in zip(gamma[r1], u1))
        # every edge must satisfy the divisibility condition
        for p, q in G.edges:
            diff = [a - b for a, b in zip(gamma[p], gamma[q])]
            c = multiple_of(diff, g.weight((p, q)))
            if c is None or c.denominator != 1:
                return KirwanResult(
                    False, xi, witness={"v": v, "x": p, "r1": q, "reason": "edge divisibility", "A": (c,)}
                )
        classes.append((v, tuple(tuple(int(a) for a in gamma[x]) for x in range(G.n))))
    return KirwanResult(True, xi, tuple(classes))


# equivariant classes and localization ----------------------------------------------------


def equivariant_chern_class(g: AbstractGKMGraph, k: int) -> dict[int, IntPolynomial]:
    """Restriction of c_k^T to each vertex: sigma_k of the weights there."""
    return {v: sym_poly_in_weights(g.weights_at(v), k) for v in range(g.graph.n)}


def membership_test(g: AbstractGKMGraph, alpha: Mapping[int, IntPolynomial]) -> bool:
    """Edge divisibility test for a map vertex -> polynomial."""
    for v in range(g.graph.n):
        if not pairwise_coprime(g.weights_at(v)):
            raise GKMError(f"weights at vertex {v} are not pairwise coprime")
    for p, q in g.graph.edges:
        if divisible_by_linear(alpha[p] - alpha[q], g.weight((p, q))) is None:
            return False
    return True


def _eval_points(g: AbstractGKMGraph):
    """Deterministic rational points avoiding every weight hyperplane."""
    t = 2
    while True:
        pt = tuple(Fraction(t**i, 7 + i) for i in range(g.d))
        if all(_pair(w, pt) != 0 for w in g.edge_weights):
            yield pt
        t += 1


def _abbv_at(g: AbstractGKMGraph, polys, point) -> Fraction:
    total = Fraction(0)
    for v in range(g.graph.n):
        euler = Fraction(1)
        for w in g.weights_at(v):
            euler *= _pair(w, point)
        num = Fraction(1)
        for p in polys[v]:
            num *= p.evaluate(point)
        total += num / euler
    return total


def abbv_integrate(g: AbstractGKMGraph, monomial: Sequence[int]) -> Fraction:
    """Integral of a product of Chern classes by localization.

    ``monomial`` lists Chern indices, e.g. ``[1, 1, 1]`` for c1^3.
    """
    n = g.n
    if any(k < 0 or k > n for k in monomial):
        raise GKMError("Chern index out of range")
    if sum(monomial) > n:
        raise GKMError(f"degree {sum(monomial)} exceeds dimension {n}")
    polys = {v: [sym_poly_in_weights(g.weights_at(v), k) for k in monomial] for v in range(g.graph.n)}
    pts = _eval_points(g)
    a = _abbv_at(g, polys, next(pts))
    b = _abbv_at(g, polys, next(pts))
    if a != b:
        raise GKMError("localization sum depends on the evaluation point")
    if sum(monomial) == n and a.denominator != 1:
        raise GKMError("top-degree integral is not an integer")
    return a


def parse_monomial(text: str) -> list[int]:
    """Parse ``c1^3``, ``c1*c2``, ``c3`` or ``1`` into a list of Chern indices."""
    text = text.replace(" ", "")
    if text in ("", "1"):
        return []
    out: list[int] = []
    for factor in text.split("*"):
        base, _, exp = factor.partition("^")
        if not base.startswith("c") or not base[1:].isdigit():
            raise GKMError(f"bad monomial factor {factor!r}")
        if exp and not exp.isdigit():
            raise GKMError(f"bad exponent in {factor!r}")
        out += [int(base[1:])] * (int(exp) if exp else 1)
    return out
