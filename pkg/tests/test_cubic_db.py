from __future__ import annotations

from functools import lru_cache

import networkx as nx
import pytest

from gkm_forge.cubic_db import (
    K4,
    KNOWN_COUNTS,
    SIZES,
    bridge_join,
    expand_vertex,
    generate_database,
    insert_diamond,
    insert_edge,
    load_database,
    resolve_database_dir,
    write_database,
)
from gkm_forge.graphs import canonical_form, generate_cubic, is_cubic_connected, to_graph6


@lru_cache(maxsize=None)
def _bundled():
    return load_database()


def test_bundled_counts():
    assert {x: len(v) for x, v in _bundled().items()} == KNOWN_COUNTS


@pytest.mark.parametrize("x", SIZES)
def test_bundled_graphs_are_distinct_cubic_and_canonical(x):
    graphs = _bundled()[x]
    assert all(g.n == x and is_cubic_connected(g) for g in graphs)
    certs = [canonical_form(g) for g in graphs]
    assert len(set(certs)) == len(certs) and certs == sorted(certs)


@pytest.mark.parametrize("x", [4, 6, 8, 10])
def test_enumerator_agrees_with_database(x):
    ours = sorted(canonical_form(g) for g in generate_cubic(x))
    assert ours == sorted(canonical_form(g) for g in _bundled()[x])


@pytest.mark.parametrize("x", [8, 10])
def test_database_is_pairwise_non_isomorphic(x):
    nxg = [nx.Graph(list(g.edges)) for g in _bundled()[x]]
    for i in range(len(nxg)):
        for j in range(i):
            assert not nx.is_isomorphic(nxg[i], nxg[j])


def test_regeneration_matches_bundled_files(tmp_path):
    db = generate_database(12)
    write_database(db, tmp_path)
    for x in (4, 6, 8, 10, 12):
        assert (tmp_path / f"cub{x:02d}.g6").read_text() == "".join(to_graph6(g) + "\n" for g in _bundled()[x])


def test_moves_produce_cubic_graphs():
    e1, e2 = K4.edges[0], K4.edges[5]
    assert insert_edge(K4, e1, e2).n == 6 and is_cubic_connected(insert_edge(K4, e1, e2))
    tri = expand_vertex(K4, 0)
    assert tri.n == 6 and is_cubic_connected(tri)
    dia = insert_diamond(K4, e1)
    assert dia.n == 8 and is_cubic_connected(dia)
    br = bridge_join(K4, e1, K4, e2)
    assert br.n == 10 and is_cubic_connected(br)
    assert (br.n - 2, br.n - 1) in set(nx.bridges(nx.Graph(list(br.edges))))


def test_database_dir_resolution(monkeypatch, tmp_path):
    monkeypatch.setenv("GKM_FORGE_DB", str(tmp_path))
    assert resolve_database_dir() == tmp_path
    assert resolve_database_dir("elsewhere").name == "elsewhere"
    monkeypatch.delenv("GKM_FORGE_DB")
    assert (resolve_database_dir() / "cub04.g6").exists()
