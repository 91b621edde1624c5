"""Fixture builders and independent dense oracles for the walk rankers.

The oracles deliberately avoid the package's sparse code path: adjacency and
transition matrices are assembled entry by entry with Python loops and the
fixed point is obtained with a direct linear solve or a dense power iteration.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from citerec.corpus import from_records


def graph_from(papers: dict, order=None):
    """Build a CorpusGraph from ``{name: {refs, year, authors, venue, keywords}}``."""
    names = order or list(papers)
    recs = []
    for i, name in enumerate(names):
        p = papers[name]
        recs.append((i + 1, {
            "id": name,
            "title": p.get("title", ""),
            "year": p.get("year", 2000),
            "venue": p.get("venue"),
            "authors": list(p.get("authors", [])),
            "keywords": list(p.get("keywords", [])),
            "refs": list(p.get("refs", [])),
        }))
    return from_records(recs)


def citations(*pairs, **extra):
    """Papers dict from ``"a>b"`` style citation strings; isolated names allowed."""
    papers: dict = {}
    for item in pairs:
        if ">" in item:
            src, dst = item.split(">")
            papers.setdefault(src, {"refs": []})["refs"].append(dst)
            papers.setdefault(dst, {"refs": []})
        else:
            papers.setdefault(item, {"refs": []})
    for name, fields in extra.items():
        papers.setdefault(name, {"refs": []}).update(fields)
    return papers


def dense_undirected(n, edges):
    a = np.zeros((n, n))
    for u, v in edges:
        if u != v:
            a[u, v] = 1.0
            a[v, u] = 1.0
    return a


def fixed_point(t, b, method="solve"):
    """Solve r = t r + b, either directly or by dense power iteration."""
    if method == "solve":
        return np.linalg.solve(np.eye(len(b)) - t, b)
    r = b.copy()
    for _ in range(100_000):
        nxt = t @ r + b
        if np.abs(nxt - r).sum() < 1e-14:
            return nxt
        r = nxt
    return r


def dense_paperrank(n, edges, seeds, d, method="solve"):
    a = dense_undirected(n, edges)
    restart = np.zeros(n)
    for s in seeds:
        restart[s] = 1.0 / len(seeds)
    t = np.zeros((n, n))
    for j in range(n):
        deg = a[:, j].sum()
        if deg == 0:
            t[:, j] = restart
        else:
            for i in range(n):
                t[i, j] = a[i, j] / deg
    return fixed_point(d * t, (1 - d) * restart, method)


def dense_power_iteration(n, edges, seeds, d, iters=2000):
    a = dense_undirected(n, edges)
    restart = np.zeros(n)
    restart[list(seeds)] = 1.0 / len(seeds)
    r = restart.copy()
    for _ in range(iters):
        nxt = np.zeros(n)
        for j in range(n):
            deg = a[:, j].sum()
            if deg == 0:
                nxt += d * r[j] * restart
            else:
                nxt += d * r[j] * a[:, j] / deg
        nxt += (1 - d) * restart
        if np.abs(nxt - r).sum() < 1e-15:
            return nxt
        r = nxt
    return r


def dense_cplusx(n, edges, entity_lists, seeds, alpha, beta, method="solve"):
    """Fixed point of the coupled citation + metadata walk."""
    a = dense_undirected(n, edges)
    n_ent = 1 + max((e for lst in entity_lists for e in lst), default=-1)
    restart = np.zeros(n)
    for s in seeds:
        restart[s] = 1.0 / len(seeds)
    mpp = np.zeros((n, n))
    for j in range(n):
        deg = a[:, j].sum()
        mpp[:, j] = restart if deg == 0 else a[:, j] / deg
    papers_of = [[p for p in range(n) if e in entity_lists[p]] for e in range(n_ent)]
    map_ = np.zeros((n_ent, n))
    for j in range(n):
        for e in set(entity_lists[j]):
            map_[e, j] = 1.0 / len(set(entity_lists[j]))
    mpa = np.zeros((n, n_ent))
    for e in range(n_ent):
        for i in papers_of[e]:
            mpa[i, e] = 1.0 / len(papers_of[e])
    meta = mpa @ map_
    for j in range(n):
        if not entity_lists[j]:
            meta[:, j] = restart
    t = alpha * mpp + beta * meta
    return fixed_point(t, (1 - alpha - beta) * restart, method)


def dense_attribute_walk(n_ent, weighted_edges, seeds, alpha, method="solve"):
    w = np.zeros((n_ent, n_ent))
    for u, v, x in weighted_edges:
        w[u, v] += x
        w[v, u] += x
    m = np.zeros_like(w)
    for j in range(n_ent):
        col = w[:, j].sum()
        if col > 0:
            m[:, j] = w[:, j] / col
    restart = np.zeros(n_ent)
    for s in seeds:
        restart[s] = 1.0 / len(seeds)
    return fixed_point(alpha * m, (1 - alpha) * restart, method)


def random_small_graph(rng: np.random.Generator, n: int, p_edge: float, n_authors: int = 6, isolated: int = 0):
    """Random DAG-ish citation graph of ``n`` papers (later papers cite earlier ones)."""
    papers = {}
    for i in range(n):
        refs = [f"p{j}" for j in range(i) if i >= isolated and j >= isolated and rng.random() < p_edge]
        k = int(rng.integers(0, 3))
        authors = sorted({f"a{int(x)}" for x in rng.integers(0, n_authors, size=k)})
        papers[f"p{i}"] = {
            "refs": refs,
            "year": 2000 + i // 5,
            "authors": authors,
            "venue": f"v{int(rng.integers(0, 3))}" if rng.random() < 0.9 else None,
            "keywords": sorted({f"k{int(x)}" for x in rng.integers(0, 8, size=int(rng.integers(0, 4)))}),
        }
    return papers


def entity_lists(g, kind):
    if kind == "author":
        return [g.authors(v).tolist() for v in range(g.n_papers)]
    if kind == "keyword":
        return [g.keywords(v).tolist() for v in range(g.n_papers)]
    return [[] if g.venues[v] < 0 else [int(g.venues[v])] for v in range(g.n_papers)]


def brute_weights(g, kind):
    """Pairwise co-occurrence weights by explicit enumeration."""
    w = {}
    if kind == "venue":
        venues_of = {}
        for v in range(g.n_papers):
            if g.venues[v] >= 0:
                for a in g.authors(v).tolist():
                    venues_of.setdefault(a, set()).add(int(g.venues[v]))
        for vs in venues_of.values():
            for x, y in combinations(sorted(vs), 2):
                w[(x, y)] = w.get((x, y), 0) + 1
        return w
    for ents in entity_lists(g, kind):
        for x, y in combinations(sorted(set(ents)), 2):
            w[(x, y)] = w.get((x, y), 0) + 1
    return w
