"""Recall, proj-degree filtered recall, overlap tables and rank scatters."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..ranking import RankedList, ScoreVector, ranks, top_k


def recall_at_k(ranked: RankedList | Sequence[int], hidden, k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    hidden = set(int(h) for h in hidden)
    if not hidden:
        raise ValueError("empty hidden set")
    top = ranked.papers[:k].tolist() if isinstance(ranked, RankedList) else list(ranked)[:k]
    return len(hidden.intersection(top)) / len(hidden)


def delta_mask(seed_deg: np.ndarray, delta: int, mode: str = "eq") -> np.ndarray:
    """Papers whose degree to the seeds is ``delta`` (``eq``) or at most ``delta`` (``le``)."""
    if mode == "eq":
        return seed_deg == delta
    if mode == "le":
        return seed_deg <= delta
    raise ValueError(f"unknown delta mode {mode!r}")


def recall_by_seed_degree(v: ScoreVector | np.ndarray, seeds, hidden, k: int, delta: int,
                          mode: str, seed_deg: np.ndarray) -> float | None:
    """Recall@k when only papers of the requested seed degree compete.

    Hidden ids outside the graph (negative) have no neighbours and count as
    degree 0. Returns None when no hidden paper qualifies.
    """
    ok = delta_mask(seed_deg, delta, mode)
    hidden = np.asarray(list(hidden), dtype=np.int64)
    present = hidden >= 0
    deg_h = np.where(present, seed_deg[np.where(present, hidden, 0)], 0)
    target = hidden[delta_mask(deg_h, delta, mode)]
    if len(target) == 0:
        return None
    exclude = ~ok
    exclude[np.asarray(list(seeds), dtype=np.int64)] = True
    return recall_at_k(top_k(v, k, exclude), target.tolist(), k)


def hits(ranked: RankedList, hidden, k: int) -> set[int]:
    return set(ranked.papers[:k].tolist()) & set(int(h) for h in hidden)


def overlap_table(lists: Mapping[str, Sequence[RankedList]], hidden: Sequence, k: int = 10):
    """Pairwise differences between the hit sets of several algorithms.

    ``lists[a][q]`` is algorithm ``a``'s list for query ``q``. Returns
    ``(names, table)`` with ``table[a, a]`` the number of hidden papers found
    by ``a`` and ``table[a, b]`` the number found by ``a`` but not by ``b``,
    summed over queries.
    """
    names = list(lists)
    n_q = len(hidden)
    for a in names:
        if len(lists[a]) != n_q:
            raise ValueError(f"algorithm {a!r} has {len(lists[a])} lists for {n_q} queries")
    table = np.zeros((len(names), len(names)), dtype=np.int64)
    for q in range(n_q):
        found = [hits(lists[a][q], hidden[q], k) for a in names]
        for i, fi in enumerate(found):
            for j, fj in enumerate(found):
                table[i, j] += len(fi) if i == j else len(fi - fj)
    return names, table


def rank_scatter(a1: ScoreVector | np.ndarray, a2: ScoreVector | np.ndarray, hidden, exclude=None) -> list[tuple[int, int, int]]:
    """``(paper, rank under a1, rank under a2)`` for each hidden paper.

    Ranks are 1-based over the full ordering with ``exclude`` removed. A hidden
    paper missing from the graph (negative id) is placed after the last paper.
    """
    s1 = a1.scores if isinstance(a1, ScoreVector) else np.asarray(a1)
    s2 = a2.scores if isinstance(a2, ScoreVector) else np.asarray(a2)
    if len(s1) != len(s2):
        raise ValueError("score vectors come from different graphs")
    r1, r2 = ranks(s1, exclude), ranks(s2, exclude)
    last = int(r1.max()) + 1 if len(r1) else 1
    out = []
    for h in hidden:
        h = int(h)
        if h < 0:
            out.append((h, last, last))
        else:
            out.append((h, int(r1[h]), int(r2[h])))
    return out
