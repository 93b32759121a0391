"""Human-in-the-loop refinement of log template mining output."""

from .core import (
    ClusteringError,
    ClusterTemplatePair,
    LogStore,
    MinedClustering,
    TokenSeq,
    is_subsequence,
    lcs,
    lcs_length,
    render_template,
    tokenize,
    trim_tokens,
)
from .corpus import (
    CorpusError,
    CorruptionKnobs,
    baseline_parse,
    export_clustering,
    generate_synthetic,
    import_clustering,
    load_corpus,
)
from .estimators import BaselineTemplateMiner, InteractiveRefiner
from .feedback import (
    Answer,
    FeedbackCounters,
    FeedbackProvider,
    GroundTruth,
    Question,
    QuestionKind,
    ScriptedFeedback,
    SessionAborted,
    SimulatedFeedback,
    build_select_question,
)
from .metrics import (
    PairDiagnosis,
    RefinementReport,
    complexity_stats,
    diagnose,
    error_census,
    group_accuracy,
    message_accuracy,
    separation_complexity_stats,
)
from .refine import (
    lossless_template,
    merge,
    message_completion,
    pipeline,
    separation,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "BaselineTemplateMiner",
    "ClusteringError",
    "ClusterTemplatePair",
    "CorpusError",
    "CorruptionKnobs",
    "FeedbackCounters",
    "FeedbackProvider",
    "GroundTruth",
    "InteractiveRefiner",
    "LogStore",
    "MinedClustering",
    "PairDiagnosis",
    "Question",
    "QuestionKind",
    "RefinementReport",
    "ScriptedFeedback",
    "SessionAborted",
    "SimulatedFeedback",
    "TokenSeq",
    "baseline_parse",
    "build_select_question",
    "complexity_stats",
    "diagnose",
    "error_census",
    "export_clustering",
    "generate_synthetic",
    "group_accuracy",
    "import_clustering",
    "is_subsequence",
    "lcs",
    "lcs_length",
    "load_corpus",
    "lossless_template",
    "merge",
    "message_accuracy",
    "message_completion",
    "pipeline",
    "render_template",
    "separation",
    "separation_complexity_stats",
    "tokenize",
    "trim_tokens",
]
