"""Per-term evaluation, chance-corrected scores, confusion matrices, metrics.

Metrics are kept as exact rationals (fractions.Fraction) internally;
undefined values (zero denominators) are None. The JSON form emits floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..corpus import Corpus, Document, SplitSpec, TEST, TRAIN
from ..errors import ModelFeatureMismatch, NoFeaturesMatched, UnknownCategory
from .logreg import LogRegModel, LogRegParams, predict_logreg, train_logreg
from .naive_bayes import NaiveBayesModel, argmax_category, predict_nb, train_nb
from .terms import SearchTerm, expand_terms, matched_words, pattern_matcher


@dataclass
class TermReport:
    word: str
    matched_by: str
    predicted_category: str
    accuracy: Fraction | None  # None when no test document contains the word
    targeted: int
    score: int


@dataclass
class ConfusionMatrix:
    categories: list[str]
    cells: list[list[int]]  # row = gold, column = predicted

    def total(self) -> int:
        return sum(sum(row) for row in self.cells)

    def trace(self) -> int:
        return sum(self.cells[i][i] for i in range(len(self.categories)))


@dataclass
class Metrics:
    precision: dict[str, Fraction | None]
    recall: dict[str, Fraction | None]
    f1: dict[str, Fraction | None]
    macro_f1: Fraction | None
    accuracy: Fraction | None


@dataclass
class EvaluationReport:
    rows: list[TermReport]
    confusion: ConfusionMatrix
    metrics: Metrics
    total_score: int
    scored_test_docs: int
    excluded_test_docs: int  # test docs with no feature word
    train_size: int
    test_size: int

    def to_dict(self) -> dict:
        """JSON-safe canonical form, shared by the CLI and the HTTP API."""
        return {
            "rows": [
                {
                    "word": r.word,
                    "matched_by": r.matched_by,
                    "predicted_category": r.predicted_category,
                    "accuracy": None if r.accuracy is None else float(r.accuracy),
                    "targeted": r.targeted,
                    "score": r.score,
                }
                for r in self.rows
            ],
            "confusion": {
                "categories": list(self.confusion.categories),
                "cells": [list(row) for row in self.confusion.cells],
            },
            "metrics": metrics_to_dict(self.metrics),
            "total_score": self.total_score,
            "scored_test_docs": self.scored_test_docs,
            "excluded_test_docs": self.excluded_test_docs,
            "train_size": self.train_size,
            "test_size": self.test_size,
        }


def metrics_to_dict(metrics: Metrics) -> dict:
    as_float = lambda v: None if v is None else float(v)
    return {
        "precision": {c: as_float(v) for c, v in metrics.precision.items()},
        "recall": {c: as_float(v) for c, v in metrics.recall.items()},
        "f1": {c: as_float(v) for c, v in metrics.f1.items()},
        "macro_f1": as_float(metrics.macro_f1),
        "accuracy": as_float(metrics.accuracy),
    }


def score_term(accuracy, targeted: int, num_categories: int) -> int:
    """Chance-corrected coverage score.

    round(targeted * max(0, accuracy - 1/K) / (1 - 1/K)); zero when no test
    document contains the word. Rewards both precision and reach, zero at
    chance level.
    """
    if targeted == 0 or accuracy is None:
        return 0
    acc = Fraction(accuracy) if not isinstance(accuracy, float) else Fraction(str(accuracy))
    chance = Fraction(1, num_categories)
    lift = max(Fraction(0), acc - chance) / (1 - chance)
    return round(targeted * lift)


def confusion_and_metrics(pairs: list[tuple[str, str]],
                          categories: list[str]) -> tuple[ConfusionMatrix, Metrics]:
    """Standard confusion matrix and per-category metrics from (gold, predicted) pairs."""
    index = {c: i for i, c in enumerate(categories)}
    for gold, predicted in pairs:
        if gold not in index:
            raise UnknownCategory(f"gold label {gold!r} not in {categories}")
        if predicted not in index:
            raise UnknownCategory(f"prediction {predicted!r} not in {categories}")
    k = len(categories)
    cells = [[0] * k for _ in range(k)]
    for gold, predicted in pairs:
        cells[index[gold]][index[predicted]] += 1
    matrix = ConfusionMatrix(categories=list(categories), cells=cells)
    return matrix, metrics_from_confusion(matrix)


def metrics_from_confusion(matrix: ConfusionMatrix) -> Metrics:
    k = len(matrix.categories)
    cells = matrix.cells
    precision: dict[str, Fraction | None] = {}
    recall: dict[str, Fraction | None] = {}
    f1: dict[str, Fraction | None] = {}
    for i, cat in enumerate(matrix.categories):
        col_sum = sum(cells[r][i] for r in range(k))
        row_sum = sum(cells[i])
        p = Fraction(cells[i][i], col_sum) if col_sum else None
        r = Fraction(cells[i][i], row_sum) if row_sum else None
        precision[cat] = p
        recall[cat] = r
        if p is None or r is None or p + r == 0:
            f1[cat] = None
        else:
            f1[cat] = 2 * p * r / (p + r)
    defined = [v for v in f1.values() if v is not None]
    macro_f1 = sum(defined) / len(defined) if defined else None
    total = matrix.total()
    accuracy = Fraction(matrix.trace(), total) if total else None
    return Metrics(precision=precision, recall=recall, f1=f1,
                   macro_f1=macro_f1, accuracy=accuracy)


def train_vocabulary(corpus: Corpus, split: SplitSpec) -> set[str]:
    vocab: set[str] = set()
    for doc in corpus.documents:
        if split.assignment.get(doc.id) == TRAIN:
            vocab.update(doc.tokens)
    return vocab


def _first_patterns(terms: list[SearchTerm], union: set[str]) -> dict[str, str]:
    """Each matched word's first matching pattern, in term order."""
    first: dict[str, str] = {}
    for term in terms:
        matcher = pattern_matcher(term.pattern)
        for word in union:
            if word not in first and matcher(word):
                first[word] = term.pattern
    return first


def _term_rows(union: set[str], first_pattern: dict[str, str],
               predicted_of: dict[str, str], test_docs: list[Document],
               num_categories: int) -> list[TermReport]:
    rows = []
    for word in sorted(union):
        predicted = predicted_of[word]
        containing = [d for d in test_docs if word in d.tokens]
        targeted = len(containing)
        if targeted == 0:
            accuracy = None
        else:
            hits = sum(1 for d in containing if d.category == predicted)
            accuracy = Fraction(hits, targeted)
        rows.append(TermReport(
            word=word,
            matched_by=first_pattern[word],
            predicted_category=predicted,
            accuracy=accuracy,
            targeted=targeted,
            score=score_term(accuracy, targeted, num_categories),
        ))
    rows.sort(key=lambda r: (-r.score, r.word))
    return rows


def _assemble(predict, predicted_of, terms, union, split, corpus,
              categories) -> EvaluationReport:
    test_docs = [d for d in corpus.documents if split.assignment.get(d.id) == TEST]
    train_size = sum(1 for d in corpus.documents if split.assignment.get(d.id) == TRAIN)
    rows = _term_rows(union, _first_patterns(terms, union), predicted_of,
                      test_docs, len(categories))

    pairs = []
    excluded = 0
    for doc in test_docs:
        if any(t in union for t in doc.tokens):
            distribution = predict(doc.tokens)
            pairs.append((doc.category, argmax_category(distribution, categories)))
        else:
            excluded += 1
    matrix, metrics = confusion_and_metrics(pairs, categories)

    return EvaluationReport(
        rows=rows,
        confusion=matrix,
        metrics=metrics,
        total_score=sum(r.score for r in rows),
        scored_test_docs=len(pairs),
        excluded_test_docs=excluded,
        train_size=train_size,
        test_size=len(test_docs),
    )


def evaluate_terms(model: NaiveBayesModel, terms: list[SearchTerm],
                   split: SplitSpec, corpus: Corpus) -> EvaluationReport:
    """Evaluate a term-trained Naive Bayes model on the TEST side of a split.

    Per matched word: the likelihood-argmax category (the word's own
    evidence, priors excluded), how many test documents contain it, how
    often those documents' gold label agrees, and the resulting score.
    Document-level predictions cover test documents containing at least
    one feature word; the rest are excluded and counted separately.
    """
    union = matched_words(expand_terms(terms, train_vocabulary(corpus, split)))
    if model.feature_words is None or set(model.feature_words) != union:
        raise ModelFeatureMismatch("terms do not expand to the model's feature set")
    categories = model.categories
    predicted_of = {}
    for word in union:
        likelihoods = {c: model.word_likelihood(word, i) for i, c in enumerate(categories)}
        predicted_of[word] = argmax_category(likelihoods, categories)
    return _assemble(lambda tokens: predict_nb(model, tokens), predicted_of,
                     terms, union, split, corpus, categories)


def evaluate_terms_logreg(model: LogRegModel, terms: list[SearchTerm],
                          split: SplitSpec, corpus: Corpus) -> EvaluationReport:
    """Same report shape as evaluate_terms, with per-word predictions taken
    from each feature's highest-weight category."""
    union = matched_words(expand_terms(terms, train_vocabulary(corpus, split)))
    if set(model.feature_words) != union:
        raise ModelFeatureMismatch("terms do not expand to the model's feature set")
    predicted_of = model.top_category_per_feature()
    return _assemble(lambda tokens: predict_logreg(model, tokens), predicted_of,
                     terms, union, split, corpus, model.categories)


def run_pipeline(documents: list[Document], categories: list[str],
                 terms: list[SearchTerm], split: SplitSpec,
                 alpha: float = 1.0, algorithm: str = "nb",
                 logreg_params: LogRegParams | None = None) -> EvaluationReport:
    """Expand terms over the TRAIN vocabulary, train, and evaluate.

    The one code path behind both the HTTP run endpoint and the headless
    CLI evaluation, so the two produce identical reports for identical
    inputs.
    """
    corpus_view = Corpus(id=0, name="pool", categories=list(categories),
                         documents=documents)
    train_docs = [d for d in documents if split.assignment.get(d.id) == TRAIN]
    union = matched_words(expand_terms(terms, train_vocabulary(corpus_view, split)))
    if not union:
        raise NoFeaturesMatched("no pattern matched the training vocabulary")
    if algorithm == "nb":
        model = train_nb(train_docs, categories, feature_words=union, alpha=alpha)
        return evaluate_terms(model, terms, split, corpus_view)
    if algorithm == "logreg":
        lr_model = train_logreg(train_docs, categories, sorted(union),
                                logreg_params or LogRegParams())
        return evaluate_terms_logreg(lr_model, terms, split, corpus_view)
    raise ValueError(f"unknown algorithm {algorithm!r}")
