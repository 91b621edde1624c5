"""Metadata-aware walks: logAVK attribute graphs, the coupled C+X walk and its local variant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .citation import citation_operator, indicator, power_iterate, seed_array
from .corpus import CorpusGraph, SubGraph
from .ranking import ScoreVector, WalkParams

KINDS = ("author", "venue", "keyword")


def _kind(kind: str) -> str:
    k = str(kind).lower()[:1]
    for full in KINDS:
        if full[0] == k:
            return full
    raise ValueError(f"unknown metadata kind {kind!r}")


def _inverse(counts: np.ndarray) -> np.ndarray:
    inv = np.zeros(len(counts))
    nz = counts > 0
    inv[nz] = 1.0 / counts[nz]
    return inv


def normalize_columns(w: sp.spmatrix) -> sp.csr_matrix:
    """Scale each column to sum 1; all-zero columns stay zero."""
    w = sp.csr_matrix(w)
    colsum = np.asarray(w.sum(axis=0)).ravel()
    return (w @ sp.diags(_inverse(colsum))).tocsr()


@dataclass(frozen=True)
class AttributeGraph:
    kind: str
    weights: sp.csr_matrix
    transition: sp.csr_matrix

    @property
    def n_entities(self) -> int:
        return self.weights.shape[0]


def _offdiag(w: sp.spmatrix) -> sp.csr_matrix:
    w = sp.csr_matrix(w)
    w.setdiag(0)
    w.eliminate_zeros()
    w.sort_indices()
    return w


def build_attribute_graph(g: CorpusGraph, kind: str) -> AttributeGraph:
    """Weighted entity-entity co-occurrence graph.

    Authors and keywords are linked by the number of papers they share. Venues
    are linked by the number of authors who published in both.
    """
    kind = _kind(kind)
    if kind == "venue":
        va = (g.pv.T @ g.pa).tocsr()
        va.data[:] = 1.0
        w = _offdiag(va @ va.T)
    else:
        x = g.incidence(kind)
        w = _offdiag(x.T @ x)
    return AttributeGraph(kind, w, normalize_columns(w))


def attribute_walk(ag: AttributeGraph, seed_entities, alpha: float = 0.5, params: WalkParams | None = None) -> ScoreVector:
    """Random walk with restart (1 - alpha) spread evenly over ``seed_entities``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    p = params or WalkParams()
    ents = np.unique(np.asarray(list(seed_entities), dtype=np.int64))
    if len(ents) == 0:
        raise ValueError("empty seed entity set")
    restart = indicator(ag.n_entities, ents) / len(ents)
    t = ag.transition

    def step(r):
        return alpha * (t @ r) + (1.0 - alpha) * restart

    r, ok, it, res, _ = power_iterate(step, restart.copy(), p.tolerance, p.max_iters)
    return ScoreVector(np.maximum(r, 0.0), f"walk_{ag.kind}", {"alpha": alpha},
                       converged=ok, iterations=it, residual=res)


def log_avk(g: CorpusGraph, seeds, alpha: float = 0.5, eps: float = 1e-12, params: WalkParams | None = None) -> ScoreVector:
    """Sum of log author, venue and keyword similarity to the seeds.

    Each component is the sum of the walk scores of a paper's entities. A
    paper unrelated to the seeds in all three graphs gets ``3 * log(eps)``.
    """
    s = seed_array(g, seeds)
    total = np.zeros(g.n_papers)
    converged, iters = True, 0
    for kind in KINDS:
        x = g.incidence(kind)
        ents = np.unique(x[s].indices)
        comp = np.zeros(g.n_papers)
        if len(ents):
            walk = attribute_walk(build_attribute_graph(g, kind), ents, alpha, params)
            comp = x @ walk.scores
            converged &= walk.converged
            iters = max(iters, walk.iterations)
        total += np.log(comp + eps)
    return ScoreVector(total, "logavk", {"alpha": alpha, "eps": eps},
                       converged=converged, iterations=iters, nonnegative=False)


def c_plus_x(g: CorpusGraph, kind: str, seeds, alpha: float = 0.65, beta: float = 0.2,
             params: WalkParams | None = None) -> ScoreVector:
    """Coupled walk over citations and one paper-entity bipartite layer.

    Each step a paper sends ``alpha`` of its score along citation edges (split
    evenly over Adj), ``beta`` through its entities and back to their papers,
    and the remaining ``1 - alpha - beta`` restarts at the seeds. Mass that
    finds no edge in a channel also returns to the seeds.
    """
    kind = _kind(kind)
    p = params or WalkParams()
    if alpha < 0 or beta < 0 or alpha + beta >= 1.0:
        raise ValueError(f"need alpha, beta >= 0 and alpha + beta < 1, got {alpha}, {beta}")
    s = seed_array(g, seeds)
    restart = indicator(g.n_papers, s) / len(s)
    adj, inv_deg, dang_c = citation_operator(g)
    x = g.incidence(kind)
    xt = x.T.tocsr()
    inv_px = _inverse(np.diff(x.indptr).astype(np.float64))   # paper -> its entities
    inv_ep = _inverse(np.diff(xt.indptr).astype(np.float64))  # entity -> its papers
    dang_x = inv_px == 0
    teleport = 1.0 - alpha - beta

    def step(r):
        leaked = alpha * r[dang_c].sum() + beta * r[dang_x].sum()
        ent = xt @ (r * inv_px)
        return alpha * (adj @ (r * inv_deg)) + beta * (x @ (ent * inv_ep)) + (leaked + teleport) * restart

    r, ok, it, res, _ = power_iterate(step, restart.copy(), p.tolerance, p.max_iters)
    tag = "c+" + kind[0]
    return ScoreVector(np.maximum(r, 0.0), tag,
                       {"kind": kind, "alpha": alpha, "beta": beta, "local": False},
                       converged=ok, iterations=it, residual=res)


class HeteroSubgraph(SubGraph):
    """Seeds plus their distance-1 neighbours, with induced citations and metadata."""

    def __init__(self, parent: CorpusGraph, keep, seeds):
        super().__init__(parent, keep)
        self.seeds = self.to_local(seeds)


def local_subgraph(g: CorpusGraph, seeds) -> HeteroSubgraph:
    s = seed_array(g, seeds)
    adj = g.adjacency
    neighbours = adj[s].indices
    return HeteroSubgraph(g, np.union1d(s, neighbours), s)


def local_c_plus_x(g: CorpusGraph, kind: str, seeds, alpha: float = 0.65, beta: float = 0.2,
                   params: WalkParams | None = None) -> ScoreVector:
    """C+X run on :func:`local_subgraph`; papers outside it score 0."""
    sub = local_subgraph(g, seeds)
    inner = c_plus_x(sub, kind, sub.seeds, alpha, beta, params)
    scores = np.zeros(g.n_papers)
    scores[sub.original_ids] = inner.scores
    return ScoreVector(scores, inner.algorithm + "_local", {**inner.params, "local": True, "subgraph_size": sub.n_papers},
                       converged=inner.converged, iterations=inner.iterations, residual=inner.residual)
