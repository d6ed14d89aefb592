"""Classification pipeline over cubic graphs.

Stage 1 keeps a graph when some positive label vector summing to 24 has
defect at least 2 and passes K1.  Stage 2 enumerates every such label vector
up to graph automorphism and sorts it into a bucket.  Label vectors come from
the modular sweep in :mod:`gkm_forge.kernels`; each is rechecked exactly.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterator, Optional, Sequence

from . import __version__
from .cubic_db import SIZES, load_database, resolve_database_dir
from .gkm import (
    AbstractGKMGraph,
    abbv_integrate,
    betti_numbers,
    find_generic,
    isomorphic,
    kirwan_class_test,
    sample_generic,
    validate,
)
from .graphs import DartGraph, automorphisms, canonical_graph, canonical_labeling, to_graph6
from .kernels import sweep
from .linalg import RationalMatrix
from .skeleton import (
    GKMSkeleton,
    check_k1,
    check_k2,
    construct_weights,
    defect_and_fundamental_system,
    projection_test,
    skeleton_canonical_label_vector,
)

log = logging.getLogger(__name__)

TOTAL = 24
XI_SAMPLES = 8

PASS = "δ2-pass"
FAIL_KIRWAN = "δ2-fail-kirwan"
SUPPORTED3 = "δ3-supported"
RULED_OUT = "ruled-out"
MANUAL = "needs-manual"
BUCKETS = (PASS, FAIL_KIRWAN, SUPPORTED3, RULED_OUT, MANUAL)


def enumerate_compositions(parts: int, total: int = TOTAL) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into ``parts`` positive parts, lexicographically."""
    if parts <= 0 or parts > total:
        return
    for bars in combinations(range(1, total), parts - 1):
        cuts = (0, *bars, total)
        yield tuple(b - a for a, b in zip(cuts, cuts[1:]))


def exact_check(graph: DartGraph, d: Sequence[int]) -> Optional[tuple[int, RationalMatrix]]:
    """(defect, fundamental system) when the defect is at least 2 and K1 holds."""
    s = GKMSkeleton(graph, tuple(d))
    delta, fs = defect_and_fundamental_system(s)
    if delta < 2 or not check_k1(fs, s.structure):
        return None
    return delta, fs


def candidate_labels(graph: DartGraph, first_only: bool = False) -> list[tuple[int, ...]]:
    """Label vectors with defect >= 2 passing K1, in lexicographic order."""
    structure = GKMSkeleton(graph, (0,) * len(graph.edges)).structure
    found: list[tuple[int, ...]] = []

    def accept(d: tuple[int, ...]) -> bool:
        if exact_check(graph, d) is not None:
            found.append(d)
            return first_only
        return False

    sweep(structure, TOTAL, 2, accept)
    return found


def graph_id(x: int, index: int) -> str:
    """Database identifier: vertex count and 1-based position in file order."""
    return f"C{x}.{index + 1}"


def canonical_key(graph: DartGraph) -> str:
    return hashlib.sha256(canonical_labeling(graph)[0]).hexdigest()[:20]


def _first_hit(graph: DartGraph) -> Optional[tuple[int, ...]]:
    hits = candidate_labels(graph, first_only=True)
    return hits[0] if hits else None


def _map(fn, items, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=1))


@dataclass(frozen=True)
class StageOneHit:
    source: str
    graph: DartGraph
    witness: tuple[int, ...]


def stage1(x: int, graphs: Sequence[DartGraph], workers: int = 1) -> list[StageOneHit]:
    """Graphs with some label vector of defect >= 2 passing K1; stops at the first per graph."""
    hits = _map(_first_hit, list(graphs), workers)
    return [StageOneHit(graph_id(x, i), g, d) for i, (g, d) in enumerate(zip(graphs, hits)) if d is not None]


# stage 2 --------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationRecord:
    graph: str  # graph6 of the canonically labelled graph
    source: str
    d: tuple[int, ...]
    defect: int
    k1: bool
    k2: bool
    bucket: str
    projection: Optional[str] = None
    weights: Optional[dict] = None
    kirwan: Optional[dict] = None
    abbv: Optional[dict] = None
    betti: Optional[tuple[int, ...]] = None
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        out = asdict(self)
        out["d"] = list(self.d)
        out["betti"] = list(self.betti) if self.betti is not None else None
        out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ClassificationRecord":
        obj = dict(obj)
        obj["d"] = tuple(obj["d"])
        obj["betti"] = tuple(obj["betti"]) if obj.get("betti") is not None else None
        obj["notes"] = tuple(obj.get("notes", ()))
        return cls(**obj)

    def gkm_graph(self) -> Optional[AbstractGKMGraph]:
        return AbstractGKMGraph.from_json(self.weights) if self.weights else None

    def sort_key(self) -> tuple:
        return (self.source, self.graph, self.d)


def _invariants(g: AbstractGKMGraph, xi: Sequence[int], samples: int) -> tuple[dict, tuple[int, ...], tuple[str, ...]]:
    abbv = {
        "c1^3": int(abbv_integrate(g, [1, 1, 1])),
        "c1*c2": int(abbv_integrate(g, [1, 2])),
        "c3": int(abbv_integrate(g, [3])),
    }
    betti = betti_numbers(g, xi)
    # reported per xi; any dependence on xi is flagged
    varies = any(betti_numbers(g, x) != betti for x in sample_generic(g, samples)) if samples else False
    return abbv, betti, ("betti numbers depend on xi",) if varies else ()


def _kirwan(g: AbstractGKMGraph, samples: int) -> dict:
    """Verdict at the primary generic vector and at sampled ones; fails if any fails."""
    primary = find_generic(g)
    results = [kirwan_class_test(g, xi) for xi in sample_generic(g, samples)] if samples else []
    first = kirwan_class_test(g, primary)
    failing = next((r for r in [first, *results] if not r.passed), None)
    out = {
        "passed": failing is None,
        "xi": list(primary),
        "primary": first.passed,
        "sampled": [[list(r.xi), r.passed] for r in results],
    }
    if failing is not None:
        out["witness"] = {k: (str(v) if not isinstance(v, int) else v) for k, v in failing.witness.items()}
        out["witness_xi"] = list(failing.xi)
    return out


def analyze_skeleton(s: GKMSkeleton, source: str = "", xi_samples: int = XI_SAMPLES) -> ClassificationRecord:
    """Bucket one skeleton whose defect is at least 2 and which passes K1."""
    delta, fs = defect_and_fundamental_system(s)
    k1 = delta > 0 and check_k1(fs, s.structure)
    base = dict(graph=to_graph6(s.graph), source=source, d=s.d, defect=delta, k1=k1)
    if delta < 2 or not k1:
        return ClassificationRecord(**base, k2=False, bucket=RULED_OUT, notes=("defect below 2 or K1 fails",))
    k2, rep = check_k2(s, fs)
    if delta == 2:
        if not k2:
            return ClassificationRecord(**base, k2=False, bucket=RULED_OUT, notes=("K2 fails at defect 2",))
        g = construct_weights(s, fs)
        kir = _kirwan(g, xi_samples)
        abbv, betti, notes = _invariants(g, kir["xi"], xi_samples)
        return ClassificationRecord(
            **base, k2=True, bucket=PASS if kir["passed"] else FAIL_KIRWAN,
            weights=g.to_json(), kirwan=kir, abbv=abbv, betti=betti, notes=notes,
        )
    if delta == 3 and k2:
        g = construct_weights(s, fs)
        abbv, betti, notes = _invariants(g, find_generic(g), xi_samples)
        return ClassificationRecord(
            **base, k2=True, bucket=SUPPORTED3, weights=g.to_json(), abbv=abbv, betti=betti,
            notes=("arises from a smooth reflexive polytope or a projection of one", *notes),
        )
    if delta == 3 and s.graph.valency == 3:
        verdict = projection_test(s, fs, rep)
        return ClassificationRecord(
            **base, k2=k2, bucket=RULED_OUT if verdict.ruled_out else MANUAL, projection=verdict.reason,
        )
    return ClassificationRecord(**base, k2=k2, bucket=MANUAL, notes=(f"defect {delta} not covered by the tests",))


def stage2(
    graph: DartGraph, source: str = "", dedup: bool = True, xi_samples: int = XI_SAMPLES
) -> list[ClassificationRecord]:
    """Records for every label vector (up to automorphism when ``dedup``) of defect >= 2 passing K1."""
    cg = canonical_graph(graph)
    labels = candidate_labels(cg)
    if dedup:
        auts = automorphisms(cg)
        labels = sorted({skeleton_canonical_label_vector(GKMSkeleton(cg, d), auts) for d in labels})
    return [analyze_skeleton(GKMSkeleton(cg, d), source, xi_samples) for d in labels]


# caching and the full run ------------------------------------------------------------


def _cache_path(out: Path, x: int, graph: DartGraph) -> Path:
    return out / "cache" / f"X{x:02d}" / f"{canonical_key(graph)}.jsonl"


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def cached_stage2(out: Path, x: int, hit: StageOneHit, xi_samples: int = XI_SAMPLES) -> list[ClassificationRecord]:
    """Stage 2 for one graph, persisted atomically as JSON lines keyed by canonical form."""
    path = _cache_path(out, x, hit.graph)
    if path.exists():
        with open(path, encoding="utf-8") as fh:
            return [ClassificationRecord.from_json(json.loads(line)) for line in fh if line.strip()]
    recs = stage2(hit.graph, hit.source, xi_samples=xi_samples)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(f".tmp{os.getpid()}")
    with open(tmp, "w", encoding="utf-8") as fh:
        for r in recs:
            fh.write(_dumps(r.to_json()) + "\n")
    os.replace(tmp, path)
    return recs


def _stage2_job(args) -> list[ClassificationRecord]:
    return cached_stage2(*args)


@dataclass(frozen=True)
class PipelineConfig:
    db: Optional[str] = None
    sizes: tuple[int, ...] = SIZES
    out: str = "gkm-forge-out"
    workers: int = 1
    xi_samples: int = XI_SAMPLES

    def __post_init__(self):
        if not set(self.sizes) <= set(SIZES):
            raise ValueError(f"sizes must be drawn from {SIZES}")
        if self.workers < 1:
            raise ValueError("workers must be positive")


def isomorphism_classes(graphs: Sequence[AbstractGKMGraph]) -> list[list[int]]:
    """Partition indices into classes under ``isomorphic``."""
    classes: list[list[int]] = []
    for i, g in enumerate(graphs):
        for cls in classes:
            if isomorphic(graphs[cls[0]], g) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


def classify_full(config: PipelineConfig) -> dict:
    """Stage 1 and stage 2 over all configured sizes; writes records and a report to ``config.out``."""
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    db = load_database(config.db, config.sizes)
    stage1_ids: dict[str, list[str]] = {}
    jobs = []
    for x in sorted(db):
        hits = stage1(x, db[x], config.workers)
        log.info("stage 1, X=%d: %d of %d graphs", x, len(hits), len(db[x]))
        stage1_ids[str(x)] = [h.source for h in hits]
        jobs += [(out, x, h, config.xi_samples) for h in hits]
    records = sorted((r for rs in _map(_stage2_job, jobs, config.workers) for r in rs), key=ClassificationRecord.sort_key)

    with open(out / "records.jsonl", "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(_dumps(r.to_json()) + "\n")

    passing = [r for r in records if r.bucket == PASS]
    graphs = [r.gkm_graph() for r in passing]
    classes = []
    for cls in isomorphism_classes(graphs):
        rep = passing[cls[0]]
        classes.append({
            "vertices": graphs[cls[0]].graph.n,
            "b2": rep.betti[1],
            "betti": list(rep.betti),
            "c1^3": rep.abbv["c1^3"],
            "c1*c2": rep.abbv["c1*c2"],
            "euler": rep.abbv["c3"],
            "members": [[passing[i].source, list(passing[i].d)] for i in cls],
            "graph": rep.weights,
        })
    classes.sort(key=lambda c: (c["vertices"], c["b2"], c["c1^3"]))
    supported3 = [r for r in records if r.bucket == SUPPORTED3]
    report = {
        "sizes": list(sorted(db)),
        "database": {str(x): len(db[x]) for x in sorted(db)},
        "stage1": stage1_ids,
        "stage1_counts": {x: len(v) for x, v in stage1_ids.items()},
        "buckets": {b: sum(r.bucket == b for r in records) for b in BUCKETS},
        "delta2_pass_classes": classes,
        "delta3_supported": [[r.source, list(r.d)] for r in supported3],
        "delta3_all_valid": all(bool(validate(r.gkm_graph())) and r.defect == 3 for r in supported3),
        "needs_manual": [[r.source, list(r.d)] for r in records if r.bucket == MANUAL],
        "flags": ["needs-manual bucket is not empty"] if any(r.bucket == MANUAL for r in records) else [],
        "provenance": {
            "version": __version__,
            "database_dir": str(resolve_database_dir(config.db)) if config.db else "bundled",
            "label_total": TOTAL,
            "xi_samples": config.xi_samples,
        },
    }
    (out / "report.json").write_text(_dumps(report) + "\n", encoding="utf-8")
    return report
