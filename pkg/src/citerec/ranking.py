"""Score vectors, deterministic top-k selection and walk parameters."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class WalkParams:
    """Parameters shared by the random-walk rankers.

    ``damping`` is PaperRank's d; ``alpha``/``beta`` are the citation and
    metadata fractions of the coupled walks (logAVK uses ``alpha`` alone).
    """

    damping: float = 0.85
    alpha: float = 0.65
    beta: float = 0.2
    tolerance: float = 1e-10
    max_iters: int = 200

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must lie in (0, 1), got {self.damping}")
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta >= 1.0:
            raise ValueError(f"need alpha, beta >= 0 and alpha + beta < 1, got {self.alpha}, {self.beta}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class ScoreVector:
    """Dense relevance scores over the papers of one (snapshot) graph.

    Scores are nonnegative for every ranker except logAVK, whose log-domain
    scores are only required to be finite (``nonnegative=False``).
    """

    scores: np.ndarray
    algorithm: str
    params: dict = field(default_factory=dict)
    converged: bool = True
    iterations: int = 0
    residual: float = 0.0
    nonnegative: bool = True

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.scores.ndim != 1:
            raise ValueError("scores must be one-dimensional")
        if not np.all(np.isfinite(self.scores)):
            raise ValueError(f"{self.algorithm}: non-finite score")
        if self.nonnegative and self.scores.size and self.scores.min() < 0:
            raise ValueError(f"{self.algorithm}: negative score")

    def __len__(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class RankedList:
    papers: np.ndarray
    scores: np.ndarray
    k: int
    algorithm: str = ""

    def __len__(self) -> int:
        return len(self.papers)

    def __iter__(self):
        return iter(self.papers.tolist())

    def to_csv(self, ids=None, header: str | None = None) -> str:
        """``rank,paper_id,score`` rows; ``ids`` optionally maps paper index to an external id."""
        buf = io.StringIO()
        if header:
            for line in header.splitlines():
                buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "paper_id", "score"])
        for rank, (p, s) in enumerate(zip(self.papers.tolist(), self.scores.tolist()), 1):
            w.writerow([rank, p if ids is None else ids[p], repr(float(s))])
        return buf.getvalue()


def _mask_from(exclude: Iterable[int] | np.ndarray | None, n: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    if exclude is None:
        return mask
    if isinstance(exclude, np.ndarray) and exclude.dtype == bool:
        if exclude.shape != (n,):
            raise ValueError("boolean exclude mask has wrong length")
        return exclude.copy()
    idx = np.fromiter((int(e) for e in exclude), dtype=np.int64) if not isinstance(exclude, np.ndarray) else exclude.astype(np.int64)
    idx = idx[(idx >= 0) & (idx < n)]
    mask[idx] = True
    return mask


def ordering(scores: np.ndarray, exclude=None) -> np.ndarray:
    """All non-excluded indices, highest score first, ties by ascending index."""
    scores = np.asarray(scores, dtype=np.float64)
    keep = np.flatnonzero(~_mask_from(exclude, len(scores)))
    order = np.lexsort((keep, -scores[keep]))
    return keep[order]


def top_k(v: ScoreVector | np.ndarray, k: int, exclude=None) -> RankedList:
    """The ``k`` best papers outside ``exclude``.

    Ties go to the smaller paper id; zero-score papers fill the tail in id order.
    Fewer than ``k`` papers are returned only when the population runs out.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = v.scores if isinstance(v, ScoreVector) else np.asarray(v, dtype=np.float64)
    name = v.algorithm if isinstance(v, ScoreVector) else ""
    keep = np.flatnonzero(~_mask_from(exclude, len(scores)))
    if len(keep) > 4 * k:
        # partial selection: everything strictly above the k-th largest score,
        # plus all ties at that score, then an exact sort of the survivors
        kth = np.partition(-scores[keep], k - 1)[k - 1]
        keep = keep[-scores[keep] <= kth]
    order = keep[np.lexsort((keep, -scores[keep]))][:k]
    return RankedList(papers=order, scores=scores[order], k=k, algorithm=name)


def ranks(scores: np.ndarray, exclude=None) -> np.ndarray:
    """1-based rank of every paper under :func:`ordering`; excluded papers get 0."""
    order = ordering(scores, exclude)
    r = np.zeros(len(scores), dtype=np.int64)
    r[order] = np.arange(1, len(order) + 1)
    return r
