from __future__ import annotations

import json
import shutil
from math import comb
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gkm_forge import fixtures, kernels
from gkm_forge.cubic_db import load_database
from gkm_forge.fixtures import K4, K4_D_FOUR, PRISM, k33_graph, k4_standard_graph, prism_labels
from gkm_forge.gkm import first_chern_map, validate
from gkm_forge.graphs import DartGraph, automorphisms, canonical_graph
from gkm_forge.pipeline import (
    FAIL_KIRWAN,
    PASS,
    RULED_OUT,
    SUPPORTED3,
    ClassificationRecord,
    PipelineConfig,
    analyze_skeleton,
    candidate_labels,
    classify_full,
    enumerate_compositions,
    exact_check,
    stage1,
    stage2,
)
from gkm_forge.render import render_dot
from gkm_forge.skeleton import GKMSkeleton, skeleton_canonical_label_vector


# compositions ---------------------------------------------------------------------


@pytest.mark.parametrize("parts, count", [(24, 1), (6, comb(23, 5)), (25, 0), (1, 1), (9, comb(23, 8))])
def test_composition_counts(parts, count):
    assert sum(1 for _ in enumerate_compositions(parts)) == count


@given(st.integers(1, 6), st.integers(1, 12))
def test_compositions_are_sorted_and_positive(parts, total):
    comps = list(enumerate_compositions(parts, total))
    assert comps == sorted(set(comps))
    assert all(len(c) == parts and sum(c) == total and min(c) >= 1 for c in comps)
    assert len(comps) == (comb(total - 1, parts - 1) if total >= parts else 0)


# the sweep against a brute-force filter ---------------------------------------------


def test_candidates_match_brute_force():
    brute = [d for d in enumerate_compositions(6) if exact_check(K4, d) is not None]
    assert candidate_labels(K4) == brute and len(brute) == 8


def test_compiled_and_pure_sweeps_agree():
    s = GKMSkeleton(K4, K4_D_FOUR)
    runs = []
    for fn in (kernels.sweep, kernels.pure_sweep):
        hits: list = []
        nodes = fn(s.structure, 24, 2, lambda d: hits.append(d) and False)
        runs.append((nodes, hits))
    assert runs[0] == runs[1]
    assert runs[0][0] == 43056 and len(runs[0][1]) == 20


def test_sweep_early_exit_and_degenerate_inputs():
    s = GKMSkeleton(K4, K4_D_FOUR)
    for fn in (kernels.sweep, kernels.pure_sweep):
        seen: list = []
        fn(s.structure, 24, 2, lambda d: seen.append(d) or True)
        assert len(seen) == 1
        assert fn(s.structure, 5, 2, lambda d: False) == 0
        assert fn(s.structure, 24, 7, lambda d: False) == 0


# stage 2 examples -------------------------------------------------------------------


def test_k4_with_fours_is_supported():
    rec = analyze_skeleton(GKMSkeleton(K4, K4_D_FOUR))
    assert rec.bucket == SUPPORTED3 and rec.defect == 3
    assert "polytope" in rec.notes[0]


def test_prism_fixture_is_ruled_out():
    rec = analyze_skeleton(GKMSkeleton(PRISM, prism_labels()))
    assert rec.bucket == RULED_OUT and rec.defect == 3 and not rec.k2
    assert rec.projection


def test_k33_labels_fail_kirwan():
    g = k33_graph()
    c1 = first_chern_map(g)
    rec = analyze_skeleton(GKMSkeleton(g.graph, tuple(c1[e] for e in g.graph.edges)))
    assert rec.defect == 2 and rec.bucket == FAIL_KIRWAN and not rec.kirwan["passed"]


def test_record_json_round_trip():
    rec = analyze_skeleton(GKMSkeleton(K4, K4_D_FOUR), source="C4.1")
    back = ClassificationRecord.from_json(json.loads(json.dumps(rec.to_json())))
    assert back == rec


@pytest.mark.parametrize("x", [4, 6])
def test_dedup_agrees_with_naive_enumeration(x):
    for g in load_database(None, [x])[x]:
        cg = canonical_graph(g)
        auts = automorphisms(cg)
        naive = stage2(g, dedup=False)
        dedup = {r.d: r.bucket for r in stage2(g)}
        assert {skeleton_canonical_label_vector(GKMSkeleton(cg, r.d), auts) for r in naive} == set(dedup)
        for r in naive:
            assert r.bucket == dedup[skeleton_canonical_label_vector(GKMSkeleton(cg, r.d), auts)]


def test_stage1_small_sizes():
    db = load_database(None, [4, 6, 8])
    assert [h.source for h in stage1(4, db[4])] == ["C4.1"]
    assert [h.source for h in stage1(6, db[6])] == ["C6.1", "C6.2"]
    for h in stage1(8, db[8]):
        delta, _ = exact_check(h.graph, h.witness)
        assert delta >= 2


# full runs on small sizes -------------------------------------------------------------


def _run(out: Path, workers: int = 1) -> dict:
    return classify_full(PipelineConfig(sizes=(4, 6), out=str(out), workers=workers, xi_samples=2))


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    return out, _run(out)


def test_small_run_report(small_run):
    out, report = small_run
    assert report["stage1_counts"] == {"4": 1, "6": 2}
    assert report["buckets"]["needs-manual"] == 0 and report["flags"] == []
    assert report["delta3_all_valid"]
    triples = sorted((c["b2"], c["c1^3"], c["vertices"]) for c in report["delta2_pass_classes"])
    assert triples == [(1, 54, 4), (2, 30, 6), (2, 40, 6), (2, 46, 6), (2, 48, 6)]
    assert json.loads((out / "report.json").read_text()) == json.loads(json.dumps(report))


def test_records_carry_valid_graphs(small_run):
    out, _ = small_run
    for line in (out / "records.jsonl").read_text().splitlines():
        rec = ClassificationRecord.from_json(json.loads(line))
        if rec.bucket in (PASS, SUPPORTED3):
            g = rec.gkm_graph()
            assert validate(g)
            c1 = first_chern_map(g)
            assert tuple(c1[e] for e in g.graph.edges) == rec.d


def test_worker_count_does_not_change_output(small_run, tmp_path):
    out, _ = small_run
    _run(tmp_path / "par", workers=2)
    assert (tmp_path / "par" / "records.jsonl").read_bytes() == (out / "records.jsonl").read_bytes()
    assert (tmp_path / "par" / "report.json").read_bytes() == (out / "report.json").read_bytes()


def test_partial_caches_merge_to_the_same_report(small_run, tmp_path):
    out, _ = small_run
    a, b = tmp_path / "a", tmp_path / "b"
    shutil.copytree(out / "cache", a / "cache")
    shutil.copytree(out / "cache", b / "cache")
    files = sorted((out / "cache").rglob("*.jsonl"))
    assert len(files) == 3
    # each interrupted run kept a different subset
    for i, f in enumerate(files):
        rel = f.relative_to(out)
        ((a if i % 2 else b) / rel).unlink()
    _run(a), _run(b)
    merged = tmp_path / "m"
    for src in (a, b):
        shutil.copytree(src / "cache", merged / "cache", dirs_exist_ok=True)
    _run(merged)
    for name in ("records.jsonl", "report.json"):
        assert (merged / name).read_bytes() == (out / name).read_bytes()
        assert (a / name).read_bytes() == (out / name).read_bytes()


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(sizes=(5,))
    with pytest.raises(ValueError):
        PipelineConfig(workers=0)


# rendering and fixtures -------------------------------------------------------------


def test_render_k4():
    dot = render_dot(k4_standard_graph())
    assert dot.count("  v") - dot.count(" -- ") == 4
    assert dot.count(" -- ") == 6 and dot.count('label="w=') == 6
    assert render_dot(k4_standard_graph()) == dot


def test_render_plain_graph_is_unlabeled():
    dot = render_dot(DartGraph.from_edges(4, K4.edges))
    assert dot.count(" -- ") == 6 and "label" not in dot


def test_render_k33_labels_sum_to_24():
    dot = render_dot(k33_graph())
    c1 = [int(line.split("C1=")[1].split('"')[0]) for line in dot.splitlines() if "C1=" in line]
    assert len(c1) == 9 and sum(c1) == 24


def test_fixtures_all_pass():
    results = fixtures.verify_fixtures()
    assert len(results) == 5 and all(r.ok for r in results), [r for r in results if not r.ok]


def test_perturbed_weight_fails_cp3_fixture(monkeypatch):
    weights = dict(fixtures.CP3_EDGE_WEIGHTS)
    weights[(0, 1)] = (1, 1)
    monkeypatch.setattr(fixtures, "CP3_EDGE_WEIGHTS", weights)
    res = {r.name: r.ok for r in fixtures.verify_fixtures()}
    assert not res["cp3-weights"] and res["k4-four"]


def test_dropped_column_fails_k4_fixture(monkeypatch):
    monkeypatch.setattr(fixtures, "K4_F_FOUR", tuple(row[:5] + (0,) for row in fixtures.K4_F_FOUR))
    res = {r.name: r.ok for r in fixtures.verify_fixtures()}
    assert not res["k4-four"] and res["cp3-weights"]
