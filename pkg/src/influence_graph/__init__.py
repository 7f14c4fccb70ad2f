"""Influence networks and disruption metrics for time-stamped artwork
feature corpora: ingest -> PCA -> style clusters -> similarity / style
networks -> artist projection -> betweenness, disruption, communities,
decadal reports.
"""

__version__ = "0.1.0"

from .clustering import OTHER, ClusterAssignment, consolidate_small, exemplars, kmeans
from .corpus import ArtworkRecord, Corpus, filter_by_min_works, load_corpus, make_corpus
from .embedding import (
    FeatureMatrix,
    PcaModel,
    cosine_similarity,
    fit_pca,
    percentile_threshold,
    transform_pca,
)
from .errors import ComputationError, PipelineError, ValidationError
from .metrics import (
    DecadeBin,
    NodeMetric,
    all_disruption,
    betweenness,
    communities,
    decadal_report,
    disruption,
    disruption_windowed,
    modularity,
    year_difference_distribution,
)
from .netbuild import (
    ARTIST,
    ISN,
    SSN,
    GraphNode,
    InfluenceGraph,
    build_isn,
    build_ssn,
    project_to_artists,
)
from .pipeline import PipelineConfig, run_pipeline, run_stage

__all__ = [
    "ARTIST",
    "ArtworkRecord",
    "ClusterAssignment",
    "ComputationError",
    "Corpus",
    "DecadeBin",
    "FeatureMatrix",
    "GraphNode",
    "ISN",
    "InfluenceGraph",
    "NodeMetric",
    "OTHER",
    "PcaModel",
    "PipelineConfig",
    "PipelineError",
    "SSN",
    "ValidationError",
    "all_disruption",
    "betweenness",
    "build_isn",
    "build_ssn",
    "communities",
    "consolidate_small",
    "cosine_similarity",
    "decadal_report",
    "disruption",
    "disruption_windowed",
    "exemplars",
    "filter_by_min_works",
    "fit_pca",
    "kmeans",
    "load_corpus",
    "make_corpus",
    "modularity",
    "percentile_threshold",
    "project_to_artists",
    "run_pipeline",
    "run_stage",
    "transform_pca",
    "year_difference_distribution",
]
