"""Labeled topic similarity networks for LDA outputs.

The pipeline: load a corpus plus fitted theta/beta matrices, compute
pairwise Hellinger similarities between topic-word rows, threshold them
into a network at a target density, detect communities, attach
automatically extracted labels, and export or serve the result.
"""

from topicatlas.cli import PipelineConfig, PipelineError, run_pipeline
from topicatlas.graph import (
    EXPORT_FORMATS,
    Edge,
    EdgeList,
    Partition,
    TopicGraph,
    TopicNode,
    connected_components,
    export_graph,
    louvain,
    modularity,
)
from topicatlas.labeling import (
    CandidateLabel,
    DegenerateSplitWarning,
    LabelSplit,
    docset_label,
    entropy,
    final_resort,
    information_gain,
    label_topics,
    lda_baseline_labels,
    prominence_weight,
    write_comparison_report,
    write_label_report,
)
from topicatlas.model import (
    Corpus,
    Document,
    TopicAssignment,
    TopicModel,
    ValidationError,
    Vocabulary,
    assign_clusters,
    load_corpus,
    load_stopwords,
    load_topic_model,
    load_vocabulary,
    save_corpus,
)
from topicatlas.service import (
    SessionState,
    apply_filter,
    build_session,
    create_app,
    graph_payload,
    relabel,
)
from topicatlas.similarity import (
    EmptyGraphWarning,
    SimilarityMatrix,
    build_network,
    hellinger_similarity,
    mapreduce_similarities,
    pairwise_similarities,
    save_similarities,
    select_threshold,
)
from topicatlas.textprep import (
    CollocationStats,
    ContingencyTable,
    CorpusAnalysis,
    DEFAULT_STOPWORDS,
    RuleTagger,
    analyze_corpus,
    assoc_score,
    collocation_stats,
    extract_noun_phrases,
    extract_proper_noun_unigrams,
    load_pretagged,
    pos_tag,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "CandidateLabel",
    "CollocationStats",
    "ContingencyTable",
    "Corpus",
    "CorpusAnalysis",
    "DEFAULT_STOPWORDS",
    "DegenerateSplitWarning",
    "Document",
    "EXPORT_FORMATS",
    "Edge",
    "EdgeList",
    "EmptyGraphWarning",
    "LabelSplit",
    "Partition",
    "PipelineConfig",
    "PipelineError",
    "RuleTagger",
    "SessionState",
    "SimilarityMatrix",
    "TopicAssignment",
    "TopicGraph",
    "TopicModel",
    "TopicNode",
    "ValidationError",
    "Vocabulary",
    "analyze_corpus",
    "apply_filter",
    "assign_clusters",
    "assoc_score",
    "build_network",
    "build_session",
    "collocation_stats",
    "connected_components",
    "create_app",
    "docset_label",
    "entropy",
    "export_graph",
    "extract_noun_phrases",
    "extract_proper_noun_unigrams",
    "final_resort",
    "graph_payload",
    "hellinger_similarity",
    "information_gain",
    "label_topics",
    "lda_baseline_labels",
    "load_corpus",
    "load_pretagged",
    "load_stopwords",
    "load_topic_model",
    "load_vocabulary",
    "louvain",
    "mapreduce_similarities",
    "modularity",
    "pairwise_similarities",
    "pos_tag",
    "prominence_weight",
    "relabel",
    "run_pipeline",
    "save_corpus",
    "save_similarities",
    "select_threshold",
    "tokenize",
    "write_comparison_report",
    "write_label_report",
    "__version__",
]
