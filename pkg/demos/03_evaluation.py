"""
The random-hide evaluation
==========================

Compare a handful of rankers on 50 queries: recall, recall restricted by
seed degree, future co-citation relevance with its upper bound, and timing.
"""

import sys
import tempfile
from pathlib import Path

from citerec.evaluation import EvalConfig, generate_synthetic_corpus, run_evaluation

g = generate_synthetic_corpus(10_000, rng_seed=7)

cfg = EvalConfig(
    algorithms=["cocitation", "cf", "paperrank", "c+a", "c+a_local", "c+k", "logavk", "pathsim_pcop"],
    n_queries=50,
    rng_seed=1,
    deltas=(0, 1, 2),
)
report = run_evaluation(g, cfg)
print(report.summary())

# recall when only papers with a given seed degree may be recommended
print("\nalgorithm       delta  recall@10  queries")
for label, delta, mode, k, value, n, skipped in report.delta_rows:
    if k == 10:
        print(f"{label:15s} {delta:5d}  {value:9.4f}  {n:7d}")

# relevance@10 against the best achievable value on the same candidates
print("\nalgorithm       variant  relevance@10  bound")
for label, variant, K, value, bound in report.relevance_rows:
    if K == 10:
        print(f"{label:15s} {variant:7s}  {value:12.5f}  {bound:.5f}")

# mean seconds per query
secs = {}
for label, _, s in report.runtime_rows:
    secs.setdefault(label, []).append(s)
print("\nms/query:", {k: round(1000 * sum(v) / len(v), 1) for k, v in secs.items()})

# every table as CSV, each headed by the config hash and rng seed
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
print("\nwrote", [p.name for p in report.write(out)][:6], "... to", out)
