"""Citation recommendation over heterogeneous bibliographic graphs."""
from .citation import cocitation, cocoupling, collaborative_filtering, paperrank
from .corpus import (
    CorpusGraph, CorpusParseError, CorpusValidationError, PaperRecord, Snapshot,
    keywords_from_titles, load_corpus, propagate_keywords, temporal_snapshot, title_keywords,
    write_corpus,
)
from .metadata import (
    AttributeGraph, HeteroSubgraph, attribute_walk, build_attribute_graph, c_plus_x,
    local_c_plus_x, local_subgraph, log_avk,
)
from .metapath import MetaPath, PathMeasure, path_count, path_sim, rank_by_metapath
from .projection import ProjectionGraph, proj_degree_distribution, projection_graph, seed_degree, seed_degrees
from .ranking import RankedList, ScoreVector, WalkParams, top_k

__version__ = "0.1.0"
