"""Random-hide evaluation: queries, recall, relevance, overlap, runtime, synthetic corpora."""
from .metrics import delta_mask, overlap_table, rank_scatter, recall_at_k, recall_by_seed_degree
from .queries import Query, generate_queries
from .relevance import RelevanceOracle, prco, relevance_at_k, relevance_upper_bound
from .runner import EvalConfig, EvalReport, run_evaluation
from .runtime import RuntimeTable, measure_runtime
from .synthetic import SyntheticParams, generate_synthetic_corpus

__all__ = [
    "EvalConfig", "EvalReport", "Query", "RelevanceOracle", "RuntimeTable", "SyntheticParams",
    "delta_mask", "generate_queries", "generate_synthetic_corpus", "measure_runtime",
    "overlap_table", "prco", "rank_scatter", "recall_at_k", "recall_by_seed_degree",
    "relevance_at_k", "relevance_upper_bound", "run_evaluation",
]
