"""PathCount and PathSim over length-2 paper-to-paper meta paths."""
from __future__ import annotations

from enum import Enum

import numpy as np
import scipy.sparse as sp

from .citation import indicator, seed_array
from .corpus import CorpusGraph
from .ranking import ScoreVector


class MetaPath(str, Enum):
    PAP = "PAP"    # shared author
    PVP = "PVP"    # same venue
    PKP = "PKP"    # shared keyword
    PCiP = "PCiP"  # shared reference: x -> v <- y
    PCoP = "PCoP"  # shared citer:    x <- v -> y


class PathMeasure(str, Enum):
    PathCount = "PathCount"
    PathSim = "PathSim"


def _coerce(enum, value):
    if isinstance(value, enum):
        return value
    for member in enum:
        if member.value.lower() == str(value).lower():
            return member
    raise ValueError(f"unknown {enum.__name__} {value!r}")


def path_incidence(g: CorpusGraph, path: MetaPath | str) -> sp.csr_matrix:
    """Paper x middle-node incidence whose row products count path instances."""
    path = _coerce(MetaPath, path)
    return {
        MetaPath.PAP: lambda: g.pa,
        MetaPath.PVP: lambda: g.pv,
        MetaPath.PKP: lambda: g.pk,
        MetaPath.PCiP: lambda: g.cit_out,
        MetaPath.PCoP: lambda: g.cit_in,
    }[path]()


def path_count(g: CorpusGraph, path, x: int, y: int) -> int:
    m = path_incidence(g, path)
    a = m.indices[m.indptr[x]:m.indptr[x + 1]]
    b = m.indices[m.indptr[y]:m.indptr[y + 1]]
    return int(len(np.intersect1d(a, b, assume_unique=True)))


def path_sim(g: CorpusGraph, path, x: int, y: int) -> float:
    den = path_count(g, path, x, x) + path_count(g, path, y, y)
    if den == 0:
        return 0.0
    return 2.0 * path_count(g, path, x, y) / den


def rank_by_metapath(g: CorpusGraph, path, measure, seeds) -> ScoreVector:
    """Mean over seeds of PathCount or PathSim between each paper and the seed.

    Only papers one meta-path instance away from a seed are touched; every
    other paper scores 0, which is exactly its unrestricted value.
    """
    path = _coerce(MetaPath, path)
    measure = _coerce(PathMeasure, measure)
    s = seed_array(g, seeds)
    m = path_incidence(g, path)
    name = f"{measure.value.lower()}_{path.value.lower()}"
    params = {"path": path.value, "measure": measure.value}

    if measure is PathMeasure.PathCount:
        counts = m @ (m.T @ indicator(g.n_papers, s))
        return ScoreVector(counts / len(s), name, params)

    # seed x paper instance counts over the seed frontier
    pair = (m[s] @ m.T).tocoo()
    visibility = np.diff(m.indptr).astype(np.float64)
    den = visibility[s][pair.row] + visibility[pair.col]
    contrib = np.divide(2.0 * pair.data, den, out=np.zeros_like(pair.data), where=den > 0)
    scores = np.zeros(g.n_papers)
    np.add.at(scores, pair.col, contrib)
    return ScoreVector(scores / len(s), name, params)
