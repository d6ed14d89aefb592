"""Rational polytopes of small dimension: facets, smoothness, reflexivity, GKM graphs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence

from .gkm import AbstractGKMGraph, GKMError, validate
from .graphs import DartGraph
from .linalg import int_det, kernel_basis, primitive, vectors_rank


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]  # primitive outward normal
    level: Fraction  # <normal, x> = level on the facet
    vertices: frozenset


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        vs = tuple(tuple(Fraction(x) for x in v) for v in self.vertices)
        if any(len(v) != self.dim for v in vs):
            raise PolytopeError("vertex dimension mismatch")
        if len(set(vs)) != len(vs):
            raise PolytopeError("repeated vertex")
        object.__setattr__(self, "vertices", vs)
        if len(vs) <= self.dim or vectors_rank([[a - b for a, b in zip(v, vs[0])] for v in vs[1:]]) != self.dim:
            raise PolytopeError("polytope is not full-dimensional")

    @classmethod
    def from_json(cls, obj) -> "Polytope":
        try:
            dim = int(obj["dim"])
            verts = [[Fraction(str(x)) for x in v] for v in obj["vertices"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise PolytopeError(f"malformed polytope JSON: {exc}") from exc
        return cls(dim, tuple(map(tuple, verts)))

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [[str(x) for x in v] for v in self.vertices]}

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        """Exhaustive hull: every supporting hyperplane through dim affinely independent vertices."""
        vs = self.vertices
        found: dict[tuple, Facet] = {}
        for sub in combinations(range(len(vs)), self.dim):
            base = vs[sub[0]]
            diffs = [[a - b for a, b in zip(vs[i], base)] for i in sub[1:]]
            ker = kernel_basis(diffs) if diffs else kernel_basis([[0] * self.dim])
            if len(ker) != 1:
                continue
            nrm = primitive(ker[0])
            lvl = sum(a * b for a, b in zip(nrm, base))
            vals = [sum(a * b for a, b in zip(nrm, v)) for v in vs]
            if all(x <= lvl for x in vals):
                pass
            elif all(x >= lvl for x in vals):
                nrm, lvl, vals = tuple(-a for a in nrm), -lvl, [-x for x in vals]
            else:
                continue
            key = (nrm, lvl)
            if key not in found:
                on = frozenset(i for i, x in enumerate(vals) if x == lvl)
                found[key] = Facet(nrm, lvl, on)
        return tuple(sorted(found.values(), key=lambda f: (f.normal, f.level)))

    def _incident(self, idx: Sequence[int]) -> list[Facet]:
        return [f for f in self.facets if all(i in f.vertices for i in idx)]

    def check_vertices(self) -> None:
        for i in range(len(self.vertices)):
            if vectors_rank([f.normal for f in self._incident([i])]) != self.dim:
                raise PolytopeError(f"point {i} is not a vertex")

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        self.check_vertices()
        out = []
        for i, j in combinations(range(len(self.vertices)), 2):
            fs = self._incident([i, j])
            if fs and vectors_rank([f.normal for f in fs]) == self.dim - 1:
                out.append((i, j))
        return tuple(out)

    def edge_direction(self, i: int, j: int) -> tuple[int, ...]:
        return primitive([b - a for a, b in zip(self.vertices[i], self.vertices[j])])


def load_polytope(path) -> tuple[Polytope, Optional[list]]:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise PolytopeError(f"malformed JSON: {exc}") from exc
    p = Polytope.from_json(obj)
    return p, obj.get("edges")


def _edges(p: Polytope, edges) -> list[tuple[int, int]]:
    if edges is None:
        return list(p.edges)
    return [tuple(sorted((int(a), int(b)))) for a, b in edges]


def is_smooth(p: Polytope, edges=None) -> bool:
    """Exactly dim edges at every vertex with primitive directions forming a Z-basis."""
    es = _edges(p, edges)
    for v in range(len(p.vertices)):
        dirs = [p.edge_direction(v, w if a == v else a) for a, w in es if v in (a, w)]
        if len(dirs) != p.dim or abs(int_det(dirs)) != 1:
            return False
    return True


def is_reflexive(p: Polytope) -> bool:
    """Integral vertices and level 1 on every facet."""
    if any(x.denominator != 1 for v in p.vertices for x in v):
        return False
    return all(f.level == 1 for f in p.facets)


def graph_from_polytope(p: Polytope, edges=None) -> AbstractGKMGraph:
    """GKM graph with w(p, q) the primitive vector along q - p."""
    es = _edges(p, edges)
    if not is_smooth(p, es):
        raise PolytopeError("polytope is not smooth")
    g = DartGraph.from_edges(len(p.vertices), es)
    ws = {(a, b): p.edge_direction(a, b) for a, b in g.edges}
    out = AbstractGKMGraph.from_dart_weights(g, p.dim, ws)
    check = validate(out)
    if not check:
        raise GKMError("polytope graph fails validation: " + "; ".join(check.problems))
    return out


def simplex(dim: int, scale: int = 1) -> Polytope:
    verts = [tuple(0 for _ in range(dim))] + [tuple(scale * int(i == j) for j in range(dim)) for i in range(dim)]
    return Polytope(dim, tuple(verts))


def cube(dim: int, lo=0, hi=1) -> Polytope:
    from itertools import product

    return Polytope(dim, tuple(product((lo, hi), repeat=dim)))
