"""Future co-citation relevance (r, rb, rbd) and its per-query upper bound."""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from ..corpus import CorpusGraph

VARIANTS = ("r", "rb", "rbd")


class RelevanceOracle:
    """Who cites what after (and up to) a cutoff year, over the full corpus.

    Future citers have ``year > cutoff``. Past citers are the papers of the
    snapshot: ``year <= cutoff`` minus ``exclude`` (normally the query paper).
    All ids are original corpus ids.
    """

    def __init__(self, g: CorpusGraph, cutoff_year: int, exclude: Iterable[int] = ()):
        self.cutoff_year = int(cutoff_year)
        future = g.years > cutoff_year
        past = ~future
        past[np.asarray(list(exclude), dtype=np.int64)] = False
        self.n_papers = g.n_papers
        self.future_ids = np.flatnonzero(future)
        self.past_ids = np.flatnonzero(past)
        self.future = g.cit_out[self.future_ids].tocsc()
        self.past = g.cit_out[self.past_ids].tocsc()
        self.n_future_citers = np.diff(self.future.indptr).astype(np.int64)
        self._cache: dict[tuple, tuple] = {}

    @classmethod
    def for_query(cls, g: CorpusGraph, query) -> "RelevanceOracle":
        return cls(g, query.cutoff_year, [query.query_paper])

    def future_citers(self, i: int) -> np.ndarray:
        """Original ids of the papers citing ``i`` after the cutoff."""
        return self.future_ids[self.future.indices[self.future.indptr[i]:self.future.indptr[i + 1]]]

    def _cocited(self, seeds: tuple[int, ...]):
        """(future, past) co-citation counts as paper x seed CSR matrices."""
        hit = self._cache.get(seeds)
        if hit is None:
            cols = np.asarray(seeds, dtype=np.int64)
            fut = (self.future.T @ self.future[:, cols]).tocsr()
            pst = (self.past.T @ self.past[:, cols]).tocsr()
            fut.eliminate_zeros()
            pst.eliminate_zeros()
            hit = (fut, pst)
            self._cache = {seeds: hit}
        return hit

    def relevance(self, papers, seeds, variant: str) -> np.ndarray:
        """Relevance(i) = mean over seeds j of PrCo(i, j), for each i in ``papers``."""
        if variant not in VARIANTS:
            raise ValueError(f"unknown relevance variant {variant!r}")
        seeds = tuple(sorted(set(int(s) for s in seeds)))
        if not seeds:
            raise ValueError("empty seed set")
        papers = np.asarray(list(papers), dtype=np.int64)
        fut, pst = self._cocited(seeds)
        f = fut[papers]
        if variant == "r":
            num = np.asarray(f.sum(axis=1)).ravel()
            den = self.n_future_citers[papers].astype(np.float64)
            per = np.divide(num, den, out=np.zeros(len(papers)), where=den > 0)
            return per / len(seeds)
        n_pairs = np.diff(f.indptr)
        if variant == "rbd":
            both = f.multiply(pst[papers]).tocsr()
            both.eliminate_zeros()
            n_pairs = n_pairs - np.diff(both.indptr)
        return n_pairs / len(seeds)


def prco(i: int, j: int, o: RelevanceOracle, variant: str) -> float:
    """Co-citation probability of one (recommended, seed) pair."""
    fi = set(o.future.indices[o.future.indptr[i]:o.future.indptr[i + 1]].tolist())
    fj = set(o.future.indices[o.future.indptr[j]:o.future.indptr[j + 1]].tolist())
    both = fi & fj
    if variant == "r":
        return len(both) / len(fi) if fi else 0.0
    if variant == "rb":
        return 1.0 if both else 0.0
    if variant == "rbd":
        pi = set(o.past.indices[o.past.indptr[i]:o.past.indptr[i + 1]].tolist())
        pj = set(o.past.indices[o.past.indptr[j]:o.past.indptr[j + 1]].tolist())
        return 1.0 if both and not (pi & pj) else 0.0
    raise ValueError(f"unknown relevance variant {variant!r}")


def _mean_of_top(values: np.ndarray, K: int) -> float:
    # fsum is correctly rounded, so a sum over any K values can never exceed the sum of the K largest
    return math.fsum(values.tolist()) / K


def relevance_at_k(ranked, seeds, o: RelevanceOracle, variant: str, K: int) -> float:
    """Mean Relevance over the first K recommended papers (original ids); short lists count as zeros."""
    if K < 1:
        raise ValueError("K must be >= 1")
    top = np.asarray(list(ranked)[:K], dtype=np.int64)
    return _mean_of_top(o.relevance(top, seeds, variant), K)


def relevance_upper_bound(candidates, seeds, o: RelevanceOracle, variant: str, K: int) -> float:
    """Best achievable Relevance@K: the K most relevant candidates (exact, since the metric is additive)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    vals = o.relevance(candidates, seeds, variant)
    best = np.sort(vals)[::-1][:K]
    return _mean_of_top(best, K)
