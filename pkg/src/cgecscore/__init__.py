"""Segmentation-free, character-level evaluation for Chinese GEC systems.

Scores system outputs against multi-reference gold corpora with three
metrics that never touch a word segmenter: sentence accuracy, char-level
BLEU, and char-level meaning preservation. Also ships a Pearson correlation
tool for comparing metric columns across systems.
"""

__version__ = "0.1.0"

from cgecscore._kernels import active_backend
from cgecscore.dataset import (
    Corpus,
    Diagnostic,
    EvaluationInstance,
    HypothesisSet,
    dump_corpus,
    load_corpus,
    load_hypotheses,
    validate_corpus,
)
from cgecscore.errors import DataError
from cgecscore.metrics import (
    BleuConfig,
    BleuResult,
    BrevityStat,
    MeaningPreservationConfig,
    MetricReport,
    PrecisionStat,
    SentenceScore,
    brevity_penalty,
    char_bleu,
    corpus_accuracy,
    evaluate_system,
    modified_precision,
    mp_average,
    mp_prime,
    mp_sentence,
    mp_system,
    sentence_match,
)
from cgecscore.stats import (
    ConstantInputError,
    CorrelationMatrix,
    MetricTable,
    PairCorrelation,
    correlation_matrix,
    pearson_r,
    two_sided_p,
    two_sided_p_from_t,
)
from cgecscore.textcore import (
    DEFAULT_POLICY,
    CharSequence,
    NGramMultiset,
    NormalizationPolicy,
    clipped_match,
    extract_ngrams,
    normalize,
    tokenize_chars,
)

__all__ = [
    "__version__",
    "active_backend",
    "BleuConfig",
    "BleuResult",
    "BrevityStat",
    "CharSequence",
    "ConstantInputError",
    "Corpus",
    "CorrelationMatrix",
    "DataError",
    "DEFAULT_POLICY",
    "Diagnostic",
    "EvaluationInstance",
    "HypothesisSet",
    "MeaningPreservationConfig",
    "MetricReport",
    "MetricTable",
    "NGramMultiset",
    "NormalizationPolicy",
    "PairCorrelation",
    "PrecisionStat",
    "SentenceScore",
    "brevity_penalty",
    "char_bleu",
    "clipped_match",
    "corpus_accuracy",
    "correlation_matrix",
    "dump_corpus",
    "evaluate_system",
    "extract_ngrams",
    "load_corpus",
    "load_hypotheses",
    "modified_precision",
    "mp_average",
    "mp_prime",
    "mp_sentence",
    "mp_system",
    "normalize",
    "pearson_r",
    "sentence_match",
    "tokenize_chars",
    "two_sided_p",
    "two_sided_p_from_t",
    "validate_corpus",
]
