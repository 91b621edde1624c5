"""
Ranking with citations and metadata
===================================

Run every ranker on the same query and see where each one puts the
withheld references.
"""

import numpy as np

from citerec.algorithms import ALGORITHMS, parse_algo
from citerec.corpus import temporal_snapshot
from citerec.evaluation import generate_queries, generate_synthetic_corpus
from citerec.metadata import local_subgraph
from citerec.ranking import ranks, top_k

g = generate_synthetic_corpus(5000, rng_seed=1)
q = generate_queries(g, 1, rng_seed=5)[0]
snap = temporal_snapshot(g, q.query_paper)
seeds = snap.to_local(q.seeds)
hidden = snap.to_local(q.hidden)
print(f"{len(seeds)} seeds, hidden papers (snapshot ids): {hidden.tolist()}")

# rank of each hidden paper under every registered algorithm (1 = best)
for name in sorted(ALGORITHMS):
    v = parse_algo(name)(snap, seeds)
    r = ranks(v.scores, seeds)
    print(f"{name:16s} hidden ranks: {[int(r[h]) for h in hidden if h >= 0]}")

# parameters are passed as name:key=value
v = parse_algo("c+k:alpha=0.5,beta=0.3")(snap, seeds)
print("C+K params:", v.params, "converged:", v.converged, "after", v.iterations, "iterations")

# the walk scores form a distribution over papers
print("PaperRank mass:", parse_algo("paperrank")(snap, seeds).scores.sum())

# the local variant only looks at the seeds and their direct neighbours
sub = local_subgraph(snap, seeds)
print(f"local subgraph: {sub.n_papers} of {snap.n_papers} papers")

# a ranked list as CSV, with external ids
print(top_k(v, 5, seeds).to_csv(ids=[g.ext_ids[i] for i in snap.original_ids], header="c+k top 5"))

# log-domain scores are negative and bounded below by 3*log(eps)
lv = parse_algo("logavk")(snap, seeds).scores
print("logAVK min:", lv.min(), " bound:", 3 * np.log(1e-12))
