"""cefrlab: CEFR proficiency-level prediction for L2 learning material.

A numpy-based toolkit covering the full pipeline: parsing dependency-
annotated corpora with CEFR labels, computing a 61-dimension linguistic
complexity vector per sentence or document, training a ridge multinomial
logistic regression, and running the stratified cross-validation and
confusion-matrix evaluation protocol. A deterministic synthetic-corpus
generator makes the whole pipeline testable without restricted corpora.
"""

from .corpus import (
    AnnotatedToken,
    Corpus,
    CorpusFormatError,
    Document,
    LabeledSentence,
    Sentence,
    ValidationIssue,
    corpus_stats,
    parse_corpus,
    serialize_corpus,
    validate_corpus,
)
from .datagen import GenConfig, GeneratedBundle, generate_corpus
from .evaluation import (
    ConfusionMatrix,
    CvResult,
    FoldPlan,
    MetricsReport,
    collapse_binary,
    cross_validate,
    matrix_metrics,
    pearson,
    rmse_prob,
    sentence_distribution,
    stratified_folds,
)
from .features import (
    FEATURE_GROUPS,
    FEATURE_NAMES,
    ExtractionContext,
    aggregate_document,
    corpus_features,
    dependency_stats,
    extract_document_features,
    extract_sentence_features,
    inc_sc,
    lix,
    nominal_ratio,
    select_feature_group,
    ttr_pair,
    variation,
    whole_text_lix,
)
from .levels import CLASSIFICATION_LEVELS, CefrLevel, parse_level
from .lexicon import (
    CategoryMap,
    KellyEntry,
    KellyList,
    SenseLexicon,
    default_category_map,
    load_category_map,
    load_kelly,
    load_senses,
)
from .model import (
    LinRegModel,
    MajorityModel,
    MlrModel,
    Scaler,
    load_model,
    save_model,
    train_linreg,
    train_majority,
    train_mlr,
)

__version__ = "0.1.0"
