"""Multinomial Naive Bayes with Laplace smoothing and incremental updates.

Models are immutable values: train_nb and update_nb return new models, so
folding update_nb over documents equals batch training exactly (integer
counts commute).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..corpus import Document
from ..errors import EmptyTrainingSet, NoFeaturesMatched, UnknownCategory


@dataclass
class NaiveBayesModel:
    categories: list[str]
    word_counts: dict[str, list[int]]  # word -> per-category token counts
    category_token_totals: list[int]
    category_doc_counts: list[int]
    alpha: float = 1.0
    feature_words: frozenset[str] | None = None  # None means all words count

    @property
    def vocabulary_size(self) -> int:
        return len(self.word_counts)

    def counted(self, token: str) -> bool:
        """Whether this token contributes to counts under the feature set."""
        if self.feature_words is None:
            return True
        return token in self.feature_words

    def word_likelihood(self, word: str, cat_index: int) -> float:
        """Smoothed P(word | category)."""
        counts = self.word_counts.get(word)
        count = counts[cat_index] if counts else 0
        total = self.category_token_totals[cat_index]
        return (count + self.alpha) / (total + self.alpha * self.vocabulary_size)

    def prior(self) -> list[float]:
        """Document-count prior; uniform while the model is empty."""
        total = sum(self.category_doc_counts)
        if total == 0:
            return [1.0 / len(self.categories)] * len(self.categories)
        return [n / total for n in self.category_doc_counts]

    def to_state(self) -> dict:
        return {
            "version": 1,
            "categories": list(self.categories),
            "alpha": self.alpha,
            "word_counts": {w: list(c) for w, c in sorted(self.word_counts.items())},
            "category_token_totals": list(self.category_token_totals),
            "category_doc_counts": list(self.category_doc_counts),
            "feature_words": sorted(self.feature_words) if self.feature_words is not None else None,
        }

    @classmethod
    def from_state(cls, state: dict) -> "NaiveBayesModel":
        features = state["feature_words"]
        return cls(
            categories=list(state["categories"]),
            word_counts={w: list(c) for w, c in state["word_counts"].items()},
            category_token_totals=list(state["category_token_totals"]),
            category_doc_counts=list(state["category_doc_counts"]),
            alpha=state["alpha"],
            feature_words=frozenset(features) if features is not None else None,
        )


def empty_model(categories: list[str], alpha: float = 1.0,
                feature_words: set[str] | None = None) -> NaiveBayesModel:
    k = len(categories)
    return NaiveBayesModel(
        categories=list(categories),
        word_counts={},
        category_token_totals=[0] * k,
        category_doc_counts=[0] * k,
        alpha=alpha,
        feature_words=frozenset(feature_words) if feature_words is not None else None,
    )


def update_nb(model: NaiveBayesModel, tokens: list[str], category: str) -> NaiveBayesModel:
    """Return a new model with one more labeled document counted in."""
    if category not in model.categories:
        raise UnknownCategory(f"{category!r} is not one of {model.categories}")
    cat_index = model.categories.index(category)
    k = len(model.categories)

    word_counts = {w: list(c) for w, c in model.word_counts.items()}
    token_totals = list(model.category_token_totals)
    doc_counts = list(model.category_doc_counts)

    for token in tokens:
        if not model.counted(token):
            continue
        if token not in word_counts:
            word_counts[token] = [0] * k
        word_counts[token][cat_index] += 1
        token_totals[cat_index] += 1
    doc_counts[cat_index] += 1

    return NaiveBayesModel(
        categories=list(model.categories),
        word_counts=word_counts,
        category_token_totals=token_totals,
        category_doc_counts=doc_counts,
        alpha=model.alpha,
        feature_words=model.feature_words,
    )


def train_nb(train_docs: list[Document], categories: list[str],
             feature_words: set[str] | None = None,
             alpha: float = 1.0) -> NaiveBayesModel:
    """Batch-train from labeled documents (multinomial token counts)."""
    if not train_docs:
        raise EmptyTrainingSet("no training documents")
    for doc in train_docs:
        if doc.category not in categories:
            raise UnknownCategory(f"document {doc.id} has category {doc.category!r}")
    model = empty_model(categories, alpha=alpha, feature_words=feature_words)
    for doc in train_docs:
        model = update_nb(model, doc.tokens, doc.category)
    if feature_words is not None and not model.word_counts:
        raise NoFeaturesMatched(
            "no training token matched the feature set")
    return model


def predict_nb(model: NaiveBayesModel, tokens: list[str]) -> dict[str, float]:
    """Posterior distribution over categories for a token list.

    Tokens outside the feature set (or unseen in training when no feature
    set is fixed) are skipped; with nothing scoreable the prior comes back.
    Computed in log space and normalized with log-sum-exp.
    """
    prior = model.prior()
    log_post = [math.log(p) if p > 0 else -math.inf for p in prior]
    for token in tokens:
        if model.feature_words is not None:
            if token not in model.feature_words:
                continue
        elif token not in model.word_counts:
            continue
        for i in range(len(model.categories)):
            if log_post[i] > -math.inf:
                log_post[i] += math.log(model.word_likelihood(token, i))
    peak = max(log_post)
    if peak == -math.inf:
        # all-prior-zero categories only; nothing to normalize against
        raise EmptyTrainingSet("model has no prior mass")
    weights = [math.exp(lp - peak) for lp in log_post]
    total = sum(weights)
    return {c: w / total for c, w in zip(model.categories, weights)}


def argmax_category(distribution: dict[str, float], categories: list[str]) -> str:
    """First category (in list order) attaining the maximum probability."""
    best = categories[0]
    for c in categories[1:]:
        if distribution[c] > distribution[best]:
            best = c
    return best


@dataclass
class WordStat:
    word: str
    total_count: int
    counts: dict[str, int]
    predictiveness: dict[str, Fraction]


def word_stats(model: NaiveBayesModel, sort_by: str = "count") -> list[WordStat]:
    """Per-word frequency and smoothed per-category predictiveness rows.

    predictiveness(w, c) = (count(w,c) + alpha) / sum_c'(count(w,c') + alpha).
    sort_by "count" orders by total frequency descending, "predictiveness"
    by the strongest category affinity descending; ties fall back to the
    word for a stable order.
    """
    alpha = Fraction(str(model.alpha))
    rows = []
    for word, counts in model.word_counts.items():
        denom = sum(Fraction(c) + alpha for c in counts)
        predictiveness = {
            cat: (Fraction(counts[i]) + alpha) / denom
            for i, cat in enumerate(model.categories)
        }
        rows.append(WordStat(
            word=word,
            total_count=sum(counts),
            counts={cat: counts[i] for i, cat in enumerate(model.categories)},
            predictiveness=predictiveness,
        ))
    if sort_by == "predictiveness":
        rows.sort(key=lambda r: (-max(r.predictiveness.values()), r.word))
    else:
        rows.sort(key=lambda r: (-r.total_count, r.word))
    return rows
