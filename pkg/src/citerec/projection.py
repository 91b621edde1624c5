"""Citation projection graphs and proj-degree statistics."""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .citation import indicator
from .corpus import CorpusGraph


@dataclass(frozen=True)
class ProjectionGraph:
    """Undirected subgraph induced on a cited set.

    ``edges`` holds each connected pair once as ``(u, v)`` with ``u < v``;
    ``degree[i]`` belongs to ``vertices[i]``.
    """

    vertices: np.ndarray
    edges: np.ndarray
    degree: np.ndarray

    def degree_of(self, v: int) -> int:
        i = np.searchsorted(self.vertices, v)
        if i == len(self.vertices) or self.vertices[i] != v:
            raise KeyError(v)
        return int(self.degree[i])


def projection_graph(g: CorpusGraph, cited: Iterable[int]) -> ProjectionGraph:
    vertices = np.unique(np.fromiter((int(c) for c in cited), dtype=np.int64))
    if len(vertices) and (vertices[0] < 0 or vertices[-1] >= g.n_papers):
        raise KeyError("cited paper not in graph")
    sub = sp.triu(g.adjacency[vertices][:, vertices], k=1).tocoo()
    order = np.lexsort((sub.col, sub.row))
    edges = np.column_stack([vertices[sub.row[order]], vertices[sub.col[order]]]).reshape(-1, 2)
    degree = np.zeros(len(vertices), dtype=np.int64)
    np.add.at(degree, sub.row, 1)
    np.add.at(degree, sub.col, 1)
    return ProjectionGraph(vertices, edges, degree)


def seed_degrees(g: CorpusGraph, seeds: Iterable[int]) -> np.ndarray:
    """|Adj(x) & seeds| for every paper x."""
    s = np.unique(np.fromiter((int(x) for x in seeds), dtype=np.int64))
    return np.rint(g.adjacency @ indicator(g.n_papers, s)).astype(np.int64)


def seed_degree(g: CorpusGraph, x: int, seeds: Iterable[int]) -> int:
    seeds = set(int(s) for s in seeds)
    if x in seeds:
        raise ValueError("x must not be a seed")
    return int(sum(1 for v in g.adj(x).tolist() if v in seeds))


def proj_degree_distribution(queries: Sequence, snapshots: Sequence[CorpusGraph]) -> Counter:
    """Histogram proj-degree -> number of hidden papers, over all queries.

    ``queries`` carry ``seeds`` and ``hidden`` as original corpus ids and each
    snapshot maps them with ``to_local``. Hidden papers missing from their
    snapshot count as isolated.
    """
    if len(queries) == 0:
        raise ValueError("no queries")
    hist: Counter = Counter()
    for q, snap in zip(queries, snapshots, strict=True):
        seeds = snap.to_local(list(q.seeds))
        hidden = snap.to_local(list(q.hidden))
        present = hidden[hidden >= 0]
        hist[0] += int((hidden < 0).sum())
        pg = projection_graph(snap, np.concatenate([seeds[seeds >= 0], present]))
        for h in present.tolist():
            hist[pg.degree_of(h)] += 1
    return hist


def histogram_csv(hist: Counter, header: str | None = None) -> str:
    buf = io.StringIO()
    if header:
        buf.write(f"# {header}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "count"])
    for d in sorted(hist):
        w.writerow([d, hist[d]])
    return buf.getvalue()
