"""Recast multiple-choice reading comprehension corpora into long-premise NLI
corpora and evaluate external entailment scores on them."""

__version__ = "0.1.0"

from .builder import ConversionStats, build_premise, categories_for, convert_corpus, convert_example
from .corpus_io import (
    read_cfcs,
    read_cfcs_labeled,
    read_cfcs_pairs,
    read_mcq,
    read_nli_jsonl,
    read_scores,
    write_nli_jsonl,
)
from .errors import BackendError, DataError, PartialWriteError, RecastError, UsageError
from .hybrid import HybridConfig, HybridConverter, qa_concat, select_hypothesis, well_formed
from .metrics import (
    CfcsReport,
    GainLossReport,
    McrcReport,
    ThresholdClassifier,
    balanced_accuracy_at,
    category_accuracy,
    gain_loss,
    rank_pairs,
    score_mcrc,
    tune_threshold,
)
from .neural_adapter import ConversionRequest, ConversionResponse, NeuralConverter, convert_batch
from .question_analysis import (
    CategorySet,
    WhAnalysis,
    analyze_question,
    categorize_multirc,
    categorize_race,
)
from .records import (
    CfcsLabeledItem,
    CfcsPair,
    McqExample,
    NliExample,
    OptionEntry,
    ScoreRecord,
)
from .rule_converter import (
    ConversionOutcome,
    RuleConverter,
    convert_rule,
    load_golden_fixtures,
    normalize_answer,
)

__all__ = [
    "BackendError",
    "CategorySet",
    "CfcsLabeledItem",
    "CfcsPair",
    "CfcsReport",
    "ConversionOutcome",
    "ConversionRequest",
    "ConversionResponse",
    "ConversionStats",
    "DataError",
    "GainLossReport",
    "HybridConfig",
    "HybridConverter",
    "McqExample",
    "McrcReport",
    "NeuralConverter",
    "NliExample",
    "OptionEntry",
    "PartialWriteError",
    "RecastError",
    "RuleConverter",
    "ScoreRecord",
    "ThresholdClassifier",
    "UsageError",
    "WhAnalysis",
    "analyze_question",
    "balanced_accuracy_at",
    "build_premise",
    "categories_for",
    "categorize_multirc",
    "categorize_race",
    "category_accuracy",
    "convert_batch",
    "convert_corpus",
    "convert_example",
    "convert_rule",
    "gain_loss",
    "load_golden_fixtures",
    "normalize_answer",
    "qa_concat",
    "rank_pairs",
    "read_cfcs",
    "read_cfcs_labeled",
    "read_cfcs_pairs",
    "read_mcq",
    "read_nli_jsonl",
    "read_scores",
    "score_mcrc",
    "select_hypothesis",
    "tune_threshold",
    "well_formed",
    "write_nli_jsonl",
    "__version__",
]
