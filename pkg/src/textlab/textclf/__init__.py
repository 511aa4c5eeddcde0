"""Classification engine: wildcard terms, Naive Bayes, logistic regression, evaluation."""

from .evaluation import (
    ConfusionMatrix,
    EvaluationReport,
    Metrics,
    TermReport,
    confusion_and_metrics,
    evaluate_terms,
    evaluate_terms_logreg,
    metrics_from_confusion,
    metrics_to_dict,
    run_pipeline,
    score_term,
    train_vocabulary,
)
from .logreg import (
    LogRegModel,
    LogRegParams,
    design_matrix,
    loss_and_gradients,
    predict_logreg,
    train_logreg,
)
from .naive_bayes import (
    NaiveBayesModel,
    WordStat,
    argmax_category,
    empty_model,
    predict_nb,
    train_nb,
    update_nb,
    word_stats,
)
from .terms import SearchTerm, expand_terms, matched_words, pattern_matcher, validate_pattern

__all__ = [
    "ConfusionMatrix",
    "EvaluationReport",
    "Metrics",
    "TermReport",
    "confusion_and_metrics",
    "evaluate_terms",
    "evaluate_terms_logreg",
    "metrics_from_confusion",
    "metrics_to_dict",
    "run_pipeline",
    "score_term",
    "train_vocabulary",
    "LogRegModel",
    "LogRegParams",
    "design_matrix",
    "loss_and_gradients",
    "predict_logreg",
    "train_logreg",
    "NaiveBayesModel",
    "WordStat",
    "argmax_category",
    "empty_model",
    "predict_nb",
    "train_nb",
    "update_nb",
    "word_stats",
    "SearchTerm",
    "expand_terms",
    "matched_words",
    "pattern_matcher",
    "validate_pattern",
]
