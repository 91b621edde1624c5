"""Citation-only rankers: CoCitation, CoCoupling, PaperRank, collaborative filtering."""
from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .corpus import CorpusGraph
from .ranking import ScoreVector, WalkParams


def seed_array(g: CorpusGraph, seeds: Iterable[int]) -> np.ndarray:
    s = np.unique(np.fromiter((int(x) for x in seeds), dtype=np.int64))
    if len(s) == 0:
        raise ValueError("empty seed set")
    if s[0] < 0 or s[-1] >= g.n_papers:
        raise KeyError("seed paper not in graph")
    return s


def indicator(n: int, idx: np.ndarray) -> np.ndarray:
    x = np.zeros(n)
    x[idx] = 1.0
    return x


def power_iterate(step: Callable[[np.ndarray], np.ndarray], r0: np.ndarray, tolerance: float, max_iters: int):
    """Iterate ``r <- step(r)`` until the L1 change drops below ``tolerance``.

    Returns ``(r, converged, iterations, residual, residual_history)``.
    """
    r = r0
    history = []
    for it in range(1, max_iters + 1):
        nxt = step(r)
        res = float(np.abs(nxt - r).sum())
        history.append(res)
        r = nxt
        if res < tolerance:
            return r, True, it, res, history
    return r, False, max_iters, history[-1] if history else 0.0, history


def citation_operator(g: CorpusGraph):
    """Column-stochastic walk over undirected Adj as ``(adj, inv_degree, dangling_mask)``."""
    deg = g.degree
    inv = np.zeros(g.n_papers)
    nz = deg > 0
    inv[nz] = 1.0 / deg[nz]
    return g.adjacency, inv, ~nz


def cocitation(g: CorpusGraph, seeds) -> ScoreVector:
    """Sum over seeds of the number of papers citing both the seed and x."""
    s = seed_array(g, seeds)
    per_citer = g.cit_out @ indicator(g.n_papers, s)
    return ScoreVector(g.cit_in @ per_citer, "cocitation")


def cocoupling(g: CorpusGraph, seeds) -> ScoreVector:
    """Sum over seeds of the number of references x shares with the seed."""
    s = seed_array(g, seeds)
    per_ref = g.cit_in @ indicator(g.n_papers, s)
    return ScoreVector(g.cit_out @ per_ref, "cocoupling")


def paperrank(g: CorpusGraph, seeds, params: WalkParams | None = None) -> ScoreVector:
    """Random walk with restart to the seeds over the undirected citation graph.

    Mass reaching a paper without neighbours is sent back to the seeds, so the
    scores stay a probability distribution.
    """
    p = params or WalkParams()
    d = p.damping
    s = seed_array(g, seeds)
    restart = indicator(g.n_papers, s) / len(s)
    adj, inv, dangling = citation_operator(g)

    def step(r):
        leaked = r[dangling].sum()
        return d * (adj @ (r * inv)) + (d * leaked + (1.0 - d)) * restart

    r, ok, it, res, hist = power_iterate(step, restart.copy(), p.tolerance, p.max_iters)
    return ScoreVector(np.maximum(r, 0.0), "paperrank", {"d": d, "tolerance": p.tolerance, "max_iters": p.max_iters},
                       converged=ok, iterations=it, residual=res)


def collaborative_filtering(g: CorpusGraph, seeds, k_neighbors: int = 50) -> ScoreVector:
    """User-based CF with citing papers as users and their references as items.

    A pseudo paper citing every seed is compared by binary cosine similarity
    with each citing paper; the ``k_neighbors`` most similar ones (ties by id)
    vote for their references with weight equal to the similarity.
    """
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be >= 1")
    s = seed_array(g, seeds)
    overlap = g.cit_out @ indicator(g.n_papers, s)
    n_refs = np.diff(g.cit_out.indptr)
    users = np.flatnonzero(overlap > 0)
    sim = overlap[users] / np.sqrt(len(s) * n_refs[users])
    order = np.lexsort((users, -sim))[:k_neighbors]
    weights = np.zeros(g.n_papers)
    weights[users[order]] = sim[order]
    return ScoreVector(g.cit_in @ weights, "cf", {"k_neighbors": k_neighbors})
