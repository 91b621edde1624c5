"""
Corpora, snapshots and projection graphs
========================================

Build a small synthetic bibliography, look at one paper's reference list as
of the day it was written, and measure how tightly its references cite
each other.
"""

import numpy as np

from citerec.corpus import temporal_snapshot, title_keywords
from citerec.evaluation import generate_queries, generate_synthetic_corpus
from citerec.projection import projection_graph, seed_degrees

# a 5000-paper corpus; every paper cites only papers from earlier years
g = generate_synthetic_corpus(5000, rng_seed=1)
print(g)

# in-degree is heavy tailed: a few papers collect a large share of citations
indeg = np.diff(g.cit_in.indptr)
top = np.sort(indeg)[::-1]
print("most cited:", top[:5].tolist(), " median:", int(np.median(indeg)))

# titles become keyword sets after stopword removal
print(g.titles[42], "->", sorted(title_keywords(g.titles[42])))

# pick one random-hide query: 10% of the references are withheld
q = generate_queries(g, 1, rng_seed=3)[0]
print(f"query {g.ext_ids[q.query_paper]} ({q.cutoff_year}): "
      f"{len(q.seeds)} seeds, {len(q.hidden)} hidden")

# the snapshot drops the query and everything published after it
snap = temporal_snapshot(g, q.query_paper)
print(f"snapshot keeps {snap.n_papers} of {g.n_papers} papers, {snap.n_citations} citations")

# projection graph on the full reference list, in snapshot ids
seeds = snap.to_local(q.seeds)
hidden = snap.to_local(q.hidden)
pg = projection_graph(snap, np.concatenate([seeds, hidden]))
print(f"projection graph: {len(pg.vertices)} vertices, {len(pg.edges)} edges")

# how many seeds each hidden paper touches; degree 0 papers are the hard ones
sdeg = seed_degrees(snap, seeds)
for h in hidden.tolist():
    print(f"  hidden {g.ext_ids[snap.to_original([h])[0]]}: seed degree {sdeg[h]}")
