"""End-to-end random-hide experiments and their CSV bundle."""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np

from ..algorithms import DEFAULT_ALGORITHMS, AlgoSpec, parse_algo
from ..corpus import CorpusGraph, temporal_snapshot
from ..projection import projection_graph, seed_degrees
from ..ranking import ranks, top_k
from .metrics import delta_mask, recall_at_k, recall_by_seed_degree
from .queries import Query, generate_queries
from .relevance import RelevanceOracle, relevance_at_k, relevance_upper_bound

log = logging.getLogger(__name__)

METRICS = ("recall", "delta", "relevance", "overlap", "scatter", "runtime", "projdeg")


@dataclass
class EvalConfig:
    algorithms: list[str] = field(default_factory=lambda: list(DEFAULT_ALGORITHMS))
    n_queries: int = 100
    ref_range: tuple[int, int] = (20, 200)
    year_range: tuple[int, int] = (2005, 2010)
    hide_frac: float = 0.1
    rng_seed: int = 0
    ks: tuple[int, ...] = (10, 20, 50)
    deltas: tuple[int, ...] = (0, 1, 2, 3, 4, 5)
    delta_modes: tuple[str, ...] = ("eq",)
    relevance_ks: tuple[int, ...] = (10, 20, 50)
    relevance_variants: tuple[str, ...] = ("r", "rb", "rbd")
    relevance_delta: tuple[int, str] | None = None
    overlap_k: int = 10
    overlap_delta: tuple[int, str] | None = None
    scatter_pairs: list[tuple[str, str]] | None = None
    metrics: tuple[str, ...] = METRICS
    corpus: str | None = None
    synthetic: dict | None = None
    threads: int = 1

    @classmethod
    def from_dict(cls, d: dict) -> "EvalConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known - {"out"}
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kw = {k: v for k, v in d.items() if k in known}
        for key in ("ref_range", "year_range", "ks", "deltas", "delta_modes", "relevance_ks",
                    "relevance_variants", "metrics"):
            if key in kw and kw[key] is not None:
                kw[key] = tuple(kw[key])
        for key in ("relevance_delta", "overlap_delta"):
            if kw.get(key) is not None:
                kw[key] = (int(kw[key][0]), str(kw[key][1]))
        if kw.get("scatter_pairs") is not None:
            kw["scatter_pairs"] = [tuple(p) for p in kw["scatter_pairs"]]
        return cls(**kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        return json.loads(json.dumps(d))

    @property
    def hash(self) -> str:
        """Digest of everything that can change an output byte (thread count cannot)."""
        d = self.to_dict()
        d.pop("threads", None)
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    def specs(self) -> list[AlgoSpec]:
        specs = [parse_algo(a) for a in self.algorithms]
        labels = [s.label for s in specs]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate algorithm in config")
        for m in self.metrics:
            if m not in METRICS:
                raise ValueError(f"unknown metric {m!r}")
        return specs


@dataclass
class QueryResult:
    query: Query
    recall: dict = field(default_factory=dict)          # (label, k) -> recall
    hit_counts: dict = field(default_factory=dict)      # (label, k) -> hits in top k
    delta: dict = field(default_factory=dict)           # (label, delta, mode, k) -> recall or None
    relevance: dict = field(default_factory=dict)       # (label, variant, K) -> value
    upper: dict = field(default_factory=dict)           # (variant, K) -> bound
    overlap_hits: dict = field(default_factory=dict)    # label -> set of original ids
    hidden_ranks: dict = field(default_factory=dict)    # label -> ranks of hidden papers
    runtime: dict = field(default_factory=dict)         # label -> seconds
    proj_degrees: list = field(default_factory=list)
    failures: dict = field(default_factory=dict)        # label -> message


@dataclass
class EvalReport:
    config: EvalConfig
    queries: list[Query]
    per_query: list[QueryResult]
    labels: list[str]
    recall_rows: list[tuple] = field(default_factory=list)
    delta_rows: list[tuple] = field(default_factory=list)
    relevance_rows: list[tuple] = field(default_factory=list)
    overlap: np.ndarray | None = None
    scatter: dict = field(default_factory=dict)
    runtime_rows: list[tuple] = field(default_factory=list)
    proj_degree_hist: Counter = field(default_factory=Counter)
    failures: list[tuple] = field(default_factory=list)
    ext_ids: Sequence[str] = ()

    # ---- CSV bundle

    def _header(self) -> str:
        return f"# config={self.config.hash} rng_seed={self.config.rng_seed}\n"

    def _write(self, path: Path, columns, rows):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(self._header())
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([repr(x) if isinstance(x, float) else x for x in row])

    def write(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        m = self.config.metrics
        written = []

        def emit(name, columns, rows):
            self._write(out / name, columns, rows)
            written.append(out / name)

        if "recall" in m:
            emit("recall.csv", ["algorithm", "k", "mean_recall", "n_queries", "micro_recall"], self.recall_rows)
        if "delta" in m:
            emit("recall_by_delta.csv", ["algorithm", "delta", "mode", "k", "recall", "n_queries", "n_skipped"], self.delta_rows)
        if "relevance" in m:
            emit("relevance.csv", ["algorithm", "variant", "K", "value", "upper_bound"], self.relevance_rows)
        if "overlap" in m:
            rows = []
            if self.overlap is not None:
                for i, a in enumerate(self.labels):
                    for j, b in enumerate(self.labels):
                        rows.append((a, b, int(self.overlap[i, j])))
            emit("overlap.csv", ["row", "col", "count"], rows)
        if "scatter" in m:
            for (a, b), rows in self.scatter.items():
                emit(f"scatter_{_safe(a)}_{_safe(b)}.csv", ["paper", "rank1", "rank2"], rows)
        if "runtime" in m:
            emit("runtime.csv", ["algorithm", "query", "seconds"], self.runtime_rows)
        if "projdeg" in m:
            emit("proj_degree.csv", ["degree", "count"], sorted(self.proj_degree_hist.items()))
        return written

    def summary(self) -> str:
        ks = sorted({k for _, k, *_ in self.recall_rows})
        lines = ["algorithm".ljust(22) + "".join(f"recall@{k}".rjust(12) for k in ks)]
        table = {(a, k): v for a, k, v, *_ in self.recall_rows}
        for a in self.labels:
            lines.append(a.ljust(22) + "".join(
                f"{table[(a, k)]:12.4f}" if (a, k) in table else " " * 11 + "-" for k in ks))
        lines.append(f"queries: {len(self.queries)}  config: {self.config.hash}")
        if self.failures:
            lines.append(f"failures: {len(self.failures)}")
        return "\n".join(lines)


def _safe(label: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else ("p" if ch == "+" else "_") for ch in label)


def _evaluate_query(g: CorpusGraph, q: Query, specs: list[AlgoSpec], cfg: EvalConfig) -> QueryResult:
    res = QueryResult(q)
    snap = temporal_snapshot(g, q.query_paper)
    seeds = snap.to_local(q.seeds)
    seeds = seeds[seeds >= 0]
    hidden = snap.to_local(q.hidden)
    # absent hidden papers get distinct negative ids: never ranked, still counted
    hidden = np.where(hidden >= 0, hidden, -1 - np.arange(len(hidden)))
    present_hidden = hidden[hidden >= 0]
    sdeg = seed_degrees(snap, seeds)
    seed_mask = np.zeros(snap.n_papers, dtype=bool)
    seed_mask[seeds] = True
    m = cfg.metrics
    max_k = max(cfg.ks) if cfg.ks else 1

    if "projdeg" in m:
        pg = projection_graph(snap, np.concatenate([seeds, present_hidden]))
        res.proj_degrees = [pg.degree_of(h) for h in present_hidden.tolist()] + [0] * int((hidden < 0).sum())

    def filtered(delta_spec):
        if delta_spec is None:
            return seed_mask
        return seed_mask | ~delta_mask(sdeg, delta_spec[0], delta_spec[1])

    oracle = None
    if "relevance" in m and cfg.relevance_ks:
        oracle = RelevanceOracle.for_query(g, q)
        rel_exclude = filtered(cfg.relevance_delta)
        candidates = snap.to_original(np.flatnonzero(~rel_exclude))
        for variant in cfg.relevance_variants:
            for K in cfg.relevance_ks:
                res.upper[(variant, K)] = relevance_upper_bound(candidates, q.seeds, oracle, variant, K)

    for spec in specs:
        label = spec.label
        try:
            t0 = time.perf_counter()
            v = spec(snap, seeds)
            res.runtime[label] = time.perf_counter() - t0
        except Exception as exc:  # one broken ranker must not sink the run
            res.failures[label] = f"{type(exc).__name__}: {exc}"
            continue
        if "recall" in m and cfg.ks:
            ranked = top_k(v, max_k, seed_mask)
            for k in cfg.ks:
                res.hit_counts[(label, k)] = len(set(ranked.papers[:k].tolist()) & set(hidden.tolist()))
                res.recall[(label, k)] = recall_at_k(ranked, hidden.tolist(), k)
        if "delta" in m:
            for mode in cfg.delta_modes:
                for delta in cfg.deltas:
                    for k in cfg.ks:
                        res.delta[(label, delta, mode, k)] = recall_by_seed_degree(v, seeds, hidden, k, delta, mode, sdeg)
        if oracle is not None:
            rel_list = top_k(v, max(cfg.relevance_ks), rel_exclude)
            rec = snap.to_original(rel_list.papers)
            for variant in cfg.relevance_variants:
                for K in cfg.relevance_ks:
                    res.relevance[(label, variant, K)] = relevance_at_k(rec, q.seeds, oracle, variant, K)
        if "overlap" in m:
            ov = top_k(v, cfg.overlap_k, filtered(cfg.overlap_delta))
            res.overlap_hits[label] = set(ov.papers.tolist()) & set(present_hidden.tolist())
        if "scatter" in m:
            r = ranks(v.scores, seed_mask)
            last = int(snap.n_papers - len(seeds)) + 1
            res.hidden_ranks[label] = [int(r[h]) if h >= 0 else last for h in hidden.tolist()]
    return res


def run_evaluation(g: CorpusGraph, cfg: EvalConfig, queries: list[Query] | None = None) -> EvalReport:
    specs = cfg.specs()
    labels = [s.label for s in specs]
    if queries is None:
        queries = generate_queries(g, cfg.n_queries, cfg.ref_range, cfg.year_range, cfg.hide_frac, cfg.rng_seed)
    if not queries:
        log.warning("no queries to evaluate; the report will be empty")

    def work(q):
        return _evaluate_query(g, q, specs, cfg)

    if cfg.threads > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(work, queries))
    else:
        results = [work(q) for q in queries]

    rep = EvalReport(cfg, list(queries), results, labels, ext_ids=g.ext_ids)
    for r in results:
        for label, msg in sorted(r.failures.items()):
            rep.failures.append((label, r.query.query_paper, msg))

    for label in labels:
        for k in cfg.ks:
            vals = [r.recall[(label, k)] for r in results if (label, k) in r.recall]
            if not vals:
                continue
            hit = sum(r.hit_counts[(label, k)] for r in results if (label, k) in r.hit_counts)
            tot = sum(len(r.query.hidden) for r in results if (label, k) in r.recall)
            rep.recall_rows.append((label, k, math.fsum(vals) / len(vals), len(vals), hit / tot))
        for mode in cfg.delta_modes:
            for delta in cfg.deltas:
                for k in cfg.ks:
                    key = (label, delta, mode, k)
                    got = [r.delta[key] for r in results if key in r.delta]
                    vals = [x for x in got if x is not None]
                    if got:
                        mean = math.fsum(vals) / len(vals) if vals else float("nan")
                        rep.delta_rows.append((label, delta, mode, k, mean, len(vals), len(got) - len(vals)))
        for variant in cfg.relevance_variants:
            for K in cfg.relevance_ks:
                key = (label, variant, K)
                pairs = [(r.relevance[key], r.upper[(variant, K)]) for r in results if key in r.relevance]
                if pairs:
                    rep.relevance_rows.append((label, variant, K,
                                               math.fsum(p[0] for p in pairs) / len(pairs),
                                               math.fsum(p[1] for p in pairs) / len(pairs)))

    if "overlap" in cfg.metrics and results:
        table = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for r in results:
            found = [r.overlap_hits.get(a, set()) for a in labels]
            for i, fi in enumerate(found):
                for j, fj in enumerate(found):
                    table[i, j] += len(fi) if i == j else len(fi - fj)
        rep.overlap = table

    if "scatter" in cfg.metrics:
        pairs = cfg.scatter_pairs if cfg.scatter_pairs is not None else list(combinations(labels, 2))
        for a, b in pairs:
            a, b = parse_algo(a).label, parse_algo(b).label
            rows = []
            for r in results:
                if a in r.hidden_ranks and b in r.hidden_ranks:
                    for h, ra, rb in zip(r.query.hidden, r.hidden_ranks[a], r.hidden_ranks[b]):
                        rows.append((g.ext_ids[h], ra, rb))
            rep.scatter[(a, b)] = rows

    for r in results:
        for label in labels:
            if label in r.runtime:
                rep.runtime_rows.append((label, g.ext_ids[r.query.query_paper], r.runtime[label]))
        rep.proj_degree_hist.update(r.proj_degrees)
    return rep
