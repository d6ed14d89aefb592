"""Graphviz DOT output for graphs and GKM graphs."""

from __future__ import annotations

from typing import Union

from .gkm import AbstractGKMGraph, first_chern_map
from .graphs import DartGraph


def _fmt(w) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"


def render_dot(g: Union[AbstractGKMGraph, DartGraph], name: str = "G") -> str:
    """Deterministic undirected DOT; GKM edges carry "w=...; C1=..." labels."""
    weighted = isinstance(g, AbstractGKMGraph)
    graph = g.graph if weighted else g
    c1 = first_chern_map(g) if weighted else {}
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    lines += [f"  v{v};" for v in range(graph.n)]
    for u, v in graph.edges:
        if weighted:
            lines.append(f'  v{u} -- v{v} [label="w={_fmt(g.weight((u, v)))}; C1={c1[(u, v)]}"];')
        else:
            lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
