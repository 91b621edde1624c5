"""Random-hide query generation."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..corpus import CorpusGraph


@dataclass(frozen=True)
class Query:
    """One random-hide instance, in original corpus ids.

    ``seeds`` and ``hidden`` partition the query paper's reference list.
    """

    query_paper: int
    seeds: tuple[int, ...]
    hidden: tuple[int, ...]
    cutoff_year: int
    rng_seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def hidden_count(n_refs: int, hide_frac: float) -> int:
    """round(hide_frac * n_refs) with halves rounded up, at least 1."""
    return max(1, int(np.floor(hide_frac * n_refs + 0.5)))


def eligible_papers(g: CorpusGraph, ref_range=(20, 200), year_range=(2005, 2010)) -> np.ndarray:
    n_refs = np.diff(g.cit_out.indptr)
    ok = (n_refs >= ref_range[0]) & (n_refs <= ref_range[1])
    ok &= (g.years >= year_range[0]) & (g.years <= year_range[1])
    return np.flatnonzero(ok)


def generate_queries(
    g: CorpusGraph,
    n: int,
    ref_range=(20, 200),
    year_range=(2005, 2010),
    hide_frac: float = 0.1,
    rng_seed: int = 0,
) -> list[Query]:
    """Sample ``n`` distinct query papers uniformly and hide part of each reference list."""
    if not 0.0 < hide_frac < 1.0:
        raise ValueError("hide_frac must lie in (0, 1)")
    if n == 0:
        return []
    pool = eligible_papers(g, ref_range, year_range)
    if len(pool) < n:
        raise ValueError(f"requested {n} queries but only {len(pool)} papers are eligible")
    rng = np.random.default_rng(rng_seed)
    chosen = rng.choice(pool, size=n, replace=False)
    queries = []
    for q in chosen.tolist():
        refs = g.refs(q)
        h = hidden_count(len(refs), hide_frac)
        if h >= len(refs):
            raise ValueError(f"paper {q} has too few references to keep a seed")
        hidden = np.sort(rng.choice(refs, size=h, replace=False))
        seeds = np.setdiff1d(refs, hidden)
        queries.append(Query(int(q), tuple(seeds.tolist()), tuple(hidden.tolist()), int(g.years[q]), rng_seed))
    return queries
