"""Acceptance criteria 1-10, one test each.

Every test records a verdict line via :func:`verdict`; the lines are printed
in the terminal summary (see ``conftest.py``) and with ``-s`` as they happen.
Criterion 7 builds a 100k-paper corpus and takes a couple of minutes.
"""
import math
import time
from collections import Counter, defaultdict
from itertools import combinations

import numpy as np
import pytest

from citerec.algorithms import ALGORITHMS
from citerec.citation import cocitation, cocoupling, paperrank
from citerec.cli import main
from citerec.corpus import temporal_snapshot
from citerec.evaluation import EvalConfig, RelevanceOracle, generate_queries, generate_synthetic_corpus, run_evaluation
from citerec.metadata import attribute_walk, build_attribute_graph, c_plus_x
from citerec.metapath import path_count, path_sim, rank_by_metapath
from citerec.projection import proj_degree_distribution, projection_graph
from citerec.ranking import WalkParams, ordering
from helpers import (
    brute_weights, citations, dense_attribute_walk, dense_cplusx, dense_paperrank, entity_lists, graph_from,
    random_small_graph,
)

RESULTS: dict[int, str] = {}
TIGHT = WalkParams(tolerance=1e-13, max_iters=2000)


def verdict(n: int, ok: bool, detail: str):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def snapshot_queries(g, n, rng_seed, **kw):
    """(snapshot, local seeds, local hidden, query) for ``n`` random-hide queries."""
    out = []
    for q in generate_queries(g, n, rng_seed=rng_seed, **kw):
        s = temporal_snapshot(g, q.query_paper)
        seeds = s.to_local(q.seeds)
        hidden = s.to_local(q.hidden)
        out.append((s, seeds[seeds >= 0], hidden, q))
    return out


def test_criterion_01_pathsim_fixtures():
    t0 = time.perf_counter()
    g1 = graph_from({"P1": {"authors": ["A1", "A2"]}, "P2": {"authors": ["A1", "A2"]}})
    g2 = graph_from({"P1": {"authors": ["A1", "A2", "A3"]}, "P2": {"authors": ["A1", "A2", "A4", "A5"]}})
    sim1, sim2 = path_sim(g1, "PAP", 0, 1), path_sim(g2, "PAP", 0, 1)
    counts = (path_count(g1, "PAP", 0, 1), path_count(g2, "PAP", 0, 1))
    ms = 1000 * (time.perf_counter() - t0)
    ok = sim1 == 1.0 and abs(sim2 - 4 / 7) <= 1e-12 and counts == (2, 2)
    verdict(1, ok, f"PathSim G1={sim1} G2={sim2:.12f} PathCount={counts} in {ms:.1f} ms")


def test_criterion_02_metapath_equivalences(corpus10k):
    inversions = 0
    max_rel = 0.0
    pvp_mismatch = 0
    for s, seeds, _, _ in snapshot_queries(corpus10k, 100, rng_seed=21):
        k = len(seeds)
        for path, base in (("PCoP", cocitation), ("PCiP", cocoupling)):
            pc = rank_by_metapath(s, path, "PathCount", seeds).scores
            ref = base(s, seeds).scores
            if not np.array_equal(ordering(pc, seeds), ordering(ref, seeds)):
                inversions += 1
            max_rel = max(max_rel, float(np.abs(pc * k - ref).max() / max(ref.max(), 1)))
        a = rank_by_metapath(s, "PVP", "PathCount", seeds).scores
        b = rank_by_metapath(s, "PVP", "PathSim", seeds).scores
        pvp_mismatch += int(not np.array_equal(a, b))
    ok = inversions == 0 and pvp_mismatch == 0 and max_rel < 1e-12
    verdict(2, ok, f"100 queries: ordering mismatches={inversions}, PVP mismatches={pvp_mismatch}, "
                   f"max |S|*PathCount - base rel err={max_rel:.1e}")


def test_criterion_03_beta_zero_reduction(corpus10k):
    t0 = time.perf_counter()
    worst = 0.0
    for s, seeds, _, _ in snapshot_queries(corpus10k, 50, rng_seed=31):
        for kind in ("author", "venue", "keyword"):
            a = c_plus_x(s, kind, seeds, alpha=0.85, beta=0.0).scores
            b = paperrank(s, seeds, WalkParams(damping=0.85)).scores
            worst = max(worst, float(np.abs(a - b).max()))
    secs = time.perf_counter() - t0
    verdict(3, worst < 1e-8 and secs < 60, f"50 queries x 3 kinds: max |diff|={worst:.2e}, {secs:.1f} s")


def _fixture_suite():
    """Hand-made graphs plus 60 seeded random graphs, all with at most 50 papers."""
    suite = [
        (graph_from(citations("a>b", "b>c", "c>d")), [0]),
        (graph_from(citations(*[f"v{i}>v{(i + 1) % 6}" for i in range(6)])), [0, 3]),
        (graph_from(citations("s", "u", "w")), [0]),
        (graph_from(citations(*[f"s>r{i}" for i in range(5)], s={"authors": ["A"]}, r0={"authors": ["A", "B"]})), [0]),
        (graph_from({"s": {"authors": ["A"]}, "t": {"authors": ["A"]}, "u": {}}), [0]),
    ]
    rng = np.random.default_rng(2024)
    for i in range(60):
        n = int(rng.integers(3, 51))
        g = graph_from(random_small_graph(rng, n, float(rng.uniform(0.03, 0.3)), n_authors=int(rng.integers(2, 15)),
                                          isolated=int(rng.integers(0, 4))))
        seeds = sorted(set(rng.choice(n, size=int(rng.integers(1, min(n, 6) + 1)), replace=False).tolist()))
        suite.append((g, seeds))
    return suite


def test_criterion_04_dense_oracles():
    worst = {"paperrank": 0.0, "attribute_walk": 0.0, "c_plus_x": 0.0}
    runs = Counter()
    for g, seeds in _fixture_suite():
        n = g.n_papers
        edges = g.citation_edges().tolist()
        got = paperrank(g, seeds, TIGHT).scores
        want = dense_paperrank(n, edges, seeds, 0.85, method="power")
        worst["paperrank"] = max(worst["paperrank"], float(np.abs(got - want).max()))
        runs["paperrank"] += 1
        for kind in ("author", "venue", "keyword"):
            for alpha, beta in ((0.65, 0.2), (0.4, 0.4)):
                got = c_plus_x(g, kind, seeds, alpha, beta, TIGHT).scores
                want = dense_cplusx(n, edges, entity_lists(g, kind), seeds, alpha, beta, method="power")
                worst["c_plus_x"] = max(worst["c_plus_x"], float(np.abs(got - want).max()))
                runs["c_plus_x"] += 1
            ag = build_attribute_graph(g, kind)
            ents = sorted({e for s in seeds for e in entity_lists(g, kind)[s]})
            if ents:
                weighted = [(i, j, x) for (i, j), x in brute_weights(g, kind).items()]
                got = attribute_walk(ag, ents, 0.5, TIGHT).scores
                want = dense_attribute_walk(ag.n_entities, weighted, ents, 0.5, method="power")
                worst["attribute_walk"] = max(worst["attribute_walk"], float(np.abs(got - want).max()))
                runs["attribute_walk"] += 1
    ok = all(v < 1e-9 for v in worst.values())
    detail = ", ".join(f"{k}: {runs[k]} runs max |diff|={v:.1e}" for k, v in worst.items())
    verdict(4, ok, detail)


def test_criterion_05_normalization(corpus10k):
    pr_worst, cx_worst = 0.0, 0.0
    n_pr = n_cx = 0
    for s, seeds, _, _ in snapshot_queries(corpus10k, 40, rng_seed=51):
        v = paperrank(s, seeds)
        if v.converged:
            pr_worst = max(pr_worst, abs(v.scores.sum() - 1))
            n_pr += 1
        for kind in ("author", "venue", "keyword"):
            w = c_plus_x(s, kind, seeds)
            if w.converged:
                cx_worst = max(cx_worst, abs(w.scores.sum() - 1))
                n_cx += 1
    for g, seeds in _fixture_suite():
        pr_worst = max(pr_worst, abs(paperrank(g, seeds).scores.sum() - 1))
        n_pr += 1
        for kind in ("author", "venue", "keyword"):
            cx_worst = max(cx_worst, abs(c_plus_x(g, kind, seeds).scores.sum() - 1))
            n_cx += 1
    ok = pr_worst < 1e-6 and cx_worst < 1e-4 and n_pr > 0 and n_cx > 0
    verdict(5, ok, f"PaperRank {n_pr} runs max|sum-1|={pr_worst:.1e}; C+X {n_cx} runs max|sum-1|={cx_worst:.1e}")


def test_criterion_06_relevance_dominance(corpus10k):
    cfg = EvalConfig(algorithms=sorted(ALGORITHMS), n_queries=100, rng_seed=61, relevance_ks=(10, 20, 50),
                     metrics=("relevance",))
    rep = run_evaluation(corpus10k, cfg)
    checked = violations = 0
    for r in rep.per_query:
        for (label, variant, K), val in r.relevance.items():
            checked += 1
            violations += int(not r.upper[(variant, K)] >= val)
            if variant == "rbd":
                violations += int(not val <= r.relevance[(label, "rb", K)])
    pointwise = 0
    for q in rep.queries[:100]:
        o = RelevanceOracle.for_query(corpus10k, q)
        everyone = range(corpus10k.n_papers)
        pointwise += int(np.sum(o.relevance(everyone, q.seeds, "rbd") > o.relevance(everyone, q.seeds, "rb")))
    ok = violations == 0 and pointwise == 0 and not rep.failures and checked == 100 * len(ALGORITHMS) * 9
    verdict(6, ok, f"{checked} (query, algorithm, variant, K) cells over {len(ALGORITHMS)} algorithms: "
                   f"{violations} violations; pointwise rbd>rb: {pointwise}")


@pytest.mark.slow
def test_criterion_07_locality():
    g = generate_synthetic_corpus(100_000, rng_seed=11)
    cfg = EvalConfig(algorithms=["c+a", "c+a_local"], n_queries=200, rng_seed=71, ks=(10,), metrics=("recall", "runtime"))
    rep = run_evaluation(g, cfg)
    secs = defaultdict(list)
    for label, _, s in rep.runtime_rows:
        secs[label].append(s)
    mean = {k: math.fsum(v) / len(v) for k, v in secs.items()}
    recall = {a: val for a, k, val, *_ in rep.recall_rows}
    gap = abs(recall["c+a_local"] - recall["c+a"])
    ratio = mean["c+a_local"] / mean["c+a"]
    ok = ratio < 0.5 and gap <= 0.03 and len(secs["c+a"]) == 200
    verdict(7, ok, f"{g.n_papers} papers, {g.n_citations} edges, 200 queries: local/global time={ratio:.3f} "
                   f"({mean['c+a_local'] * 1000:.1f} vs {mean['c+a'] * 1000:.1f} ms), "
                   f"recall@10 {recall['c+a_local']:.4f} vs {recall['c+a']:.4f} (gap {gap:.4f})")


def _brute_projection(edge_set, cited):
    cited = sorted(set(cited))
    edges = [(u, v) for u, v in combinations(cited, 2) if (u, v) in edge_set or (v, u) in edge_set]
    deg = Counter()
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return edges, [deg[v] for v in cited]


def test_criterion_08_projection(corpus10k):
    g = corpus10k
    edge_set = {tuple(e) for e in g.citation_edges().tolist()}
    rng = np.random.default_rng(81)
    mismatches = 0
    for _ in range(1000):
        size = int(rng.integers(1, 101))
        # half of each set comes from one reference list so that projections are not empty
        refs = g.refs(int(rng.integers(g.n_papers))).tolist()[: size // 2]
        extra = rng.choice(g.n_papers, size, replace=False).tolist()
        cited = list(dict.fromkeys(refs + extra))[:size]
        pg = projection_graph(g, cited)
        edges, deg = _brute_projection(edge_set, cited)
        mismatches += int([tuple(e) for e in pg.edges.tolist()] != edges or pg.degree.tolist() != deg)
    # the histogram over queries against the same pair scan
    hist_ok = True
    snaps = snapshot_queries(g, 50, rng_seed=82)
    hist = proj_degree_distribution([q for *_, q in snaps], [s for s, *_ in snaps])
    want = Counter()
    for s, seeds, hidden, q in snaps:
        local_edges = {tuple(e) for e in s.citation_edges().tolist()}
        present = hidden[hidden >= 0].tolist()
        want[0] += int((hidden < 0).sum())
        verts = sorted(set(seeds.tolist()) | set(present))
        _, deg = _brute_projection(local_edges, verts)
        d = dict(zip(verts, deg))
        for h in present:
            want[d[h]] += 1
    hist_ok = hist == want
    verdict(8, mismatches == 0 and hist_ok,
            f"1000 cited sets (<=100 vertices): {mismatches} mismatches; proj-degree histogram over 50 queries "
            f"{'matches' if hist_ok else 'differs'}")


def test_criterion_09_determinism(tmp_path):
    argv = ["evaluate", "--synthetic", "n=5000,seed=3", "--queries", "30", "--rng-seed", "17",
            "--delta", "0,1,2,3", "--delta-mode", "eq", "--delta-mode", "le"]
    rc_a = main([*argv, "--out", str(tmp_path / "a")])
    rc_b = main([*argv, "--out", str(tmp_path / "b")])
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    compared = [n for n in names if n != "runtime.csv"]
    same = [n for n in compared if (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()]
    ok = rc_a == rc_b == 0 and names == sorted(p.name for p in (tmp_path / "b").iterdir()) and same == compared
    verdict(9, ok, f"{len(same)}/{len(compared)} CSVs byte-identical (runtime.csv excluded); exit codes {rc_a},{rc_b}")


def test_criterion_10_shape(corpus10k):
    cfg = EvalConfig(algorithms=["paperrank", "c+k"], n_queries=500, rng_seed=101, ks=(10,), deltas=(0,),
                     metrics=("recall", "delta"))
    rep = run_evaluation(corpus10k, cfg)
    recall = {a: v for a, k, v, *_ in rep.recall_rows}
    d0 = {a: (v, n) for a, _, _, _, v, n, _ in rep.delta_rows}
    pr0, ck0 = d0["paperrank"][0], d0["c+k"][0]
    ok = pr0 < recall["paperrank"] and ck0 >= pr0 - 0.05
    verdict(10, ok, f"500 queries: PaperRank recall@10 all={recall['paperrank']:.4f} delta=0={pr0:.4f} "
                    f"({d0['paperrank'][1]} queries with delta=0 hidden); C+K delta=0={ck0:.4f}")
