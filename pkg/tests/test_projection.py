from collections import Counter
from itertools import combinations
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from citerec.corpus import SubGraph, temporal_snapshot
from citerec.evaluation.queries import generate_queries
from citerec.projection import (
    histogram_csv, proj_degree_distribution, projection_graph, seed_degree, seed_degrees,
)
from helpers import citations, graph_from


def brute_projection(edge_set, cited):
    """O(n^2) pair scan: (edges with u < v, degree per vertex)."""
    cited = sorted(set(cited))
    edges = [(u, v) for u, v in combinations(cited, 2) if (u, v) in edge_set or (v, u) in edge_set]
    deg = Counter()
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return edges, [deg[v] for v in cited]


def test_single_edge():
    g = graph_from(citations("a>b", "c"))
    a, b = g.index_of("a"), g.index_of("b")
    pg = projection_graph(g, [a, b])
    assert pg.edges.tolist() == [[min(a, b), max(a, b)]]
    assert pg.degree_of(a) == pg.degree_of(b) == 1


def test_no_internal_citations():
    g = graph_from(citations("a>x", "b>x", "c"))
    pg = projection_graph(g, [g.index_of(n) for n in "abc"])
    assert len(pg.edges) == 0
    assert pg.degree.tolist() == [0, 0, 0]


def test_mutual_citation_is_one_edge():
    g = graph_from(citations("a>b", "b>a"))
    pg = projection_graph(g, [0, 1])
    assert pg.degree.tolist() == [1, 1]
    assert len(pg.edges) == 1


def test_degree_of_unknown_vertex():
    g = graph_from(citations("a>b", "c"))
    with pytest.raises(KeyError):
        projection_graph(g, [0, 1]).degree_of(2)


def test_matches_brute_force(corpus2k):
    g = corpus2k
    edge_set = {tuple(e) for e in g.citation_edges().tolist()}
    rng = np.random.default_rng(1)
    for _ in range(20):
        # a paper's reference list plus a few random papers, so some edges exist
        q = int(rng.integers(g.n_papers))
        cited = set(g.refs(q).tolist()) | set(rng.choice(g.n_papers, 50, replace=False).tolist())
        pg = projection_graph(g, cited)
        edges, deg = brute_projection(edge_set, cited)
        assert [tuple(e) for e in pg.edges.tolist()] == edges
        assert pg.degree.tolist() == deg


def test_seed_degree_examples():
    g = graph_from(citations("x>s1", "x>s2", "s3>x", "y"))
    seeds = [g.index_of(n) for n in ("s1", "s2", "s3")]
    assert seed_degree(g, g.index_of("x"), seeds) == 3
    assert seed_degree(g, g.index_of("y"), seeds) == 0
    with pytest.raises(ValueError):
        seed_degree(g, seeds[0], seeds)


def test_seed_degree_cross_checks(corpus2k):
    g = corpus2k
    rng = np.random.default_rng(2)
    seeds = rng.choice(g.n_papers, 60, replace=False).tolist()
    vec = seed_degrees(g, seeds)
    for x in rng.choice(g.n_papers, 40, replace=False).tolist():
        if x in seeds:
            continue
        d = seed_degree(g, x, seeds)
        assert vec[x] == d
        assert projection_graph(g, seeds + [x]).degree_of(x) == d


def _query(seeds, hidden):
    return SimpleNamespace(seeds=tuple(seeds), hidden=tuple(hidden))


def test_distribution_isolated_hidden():
    g = graph_from(citations("s1>s2", "h1", "h2"))
    q = _query([g.index_of("s1"), g.index_of("s2")], [g.index_of("h1"), g.index_of("h2")])
    whole = SubGraph(g, np.arange(g.n_papers))
    assert proj_degree_distribution([q], [whole]) == Counter({0: 2})


def test_distribution_clique():
    names = [f"p{i}" for i in range(5)]
    g = graph_from(citations(*[f"{a}>{b}" for a, b in combinations(names, 2)]))
    whole = SubGraph(g, np.arange(g.n_papers))
    q = _query([0, 1], [2, 3, 4])
    assert proj_degree_distribution([q], [whole]) == Counter({4: 3})


def test_distribution_sums_to_hidden(corpus2k):
    g = corpus2k
    queries = generate_queries(g, 20, ref_range=(10, 200), year_range=(2000, 2012), rng_seed=4)
    snaps = [temporal_snapshot(g, q.query_paper) for q in queries]
    hist = proj_degree_distribution(queries, snaps)
    assert sum(hist.values()) == sum(len(q.hidden) for q in queries)
    csv_text = histogram_csv(hist, header="x")
    assert csv_text.splitlines()[:2] == ["# x", "degree,count"]


def test_distribution_needs_queries():
    with pytest.raises(ValueError):
        proj_degree_distribution([], [])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(2, 30))
def test_seed_degree_monotone_in_vertex_set(seed, n_seeds):
    """Seed degree never exceeds the degree in the projection over seeds and hidden."""
    from helpers import random_small_graph
    rng = np.random.default_rng(seed)
    g = graph_from(random_small_graph(rng, 40, 0.15))
    perm = rng.permutation(g.n_papers)
    seeds, hidden = perm[:n_seeds].tolist(), perm[n_seeds:n_seeds + 5].tolist()
    pg = projection_graph(g, seeds + hidden)
    sd = seed_degrees(g, seeds)
    for h in hidden:
        assert sd[h] <= pg.degree_of(h)
