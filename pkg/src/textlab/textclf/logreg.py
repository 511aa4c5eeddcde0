"""Multinomial logistic regression on bag-of-words counts.

Batch gradient descent on L2-regularized cross-entropy, zero-initialized
weights, fixed epoch count. Biases are not regularized, so in the
large-lambda limit predictions collapse to the class priors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus import Document
from ..errors import DivergenceDetected, EmptyTrainingSet, NoFeaturesMatched, UnknownCategory


@dataclass
class LogRegParams:
    learning_rate: float = 0.1
    l2_lambda: float = 0.01
    epochs: int = 500
    seed: int = 0


@dataclass
class LogRegModel:
    categories: list[str]
    feature_words: list[str]  # ordered; columns of the weight matrix
    weights: np.ndarray  # shape (n_categories, n_features)
    bias: np.ndarray  # shape (n_categories,)
    params: LogRegParams
    loss_history: list[float] = field(default_factory=list)

    def feature_vector(self, tokens: list[str]) -> np.ndarray:
        index = {w: j for j, w in enumerate(self.feature_words)}
        x = np.zeros(len(self.feature_words))
        for token in tokens:
            j = index.get(token)
            if j is not None:
                x[j] += 1.0
        return x

    def top_category_per_feature(self) -> dict[str, str]:
        """Each feature's highest-weight category (ties to category order)."""
        return {
            word: self.categories[int(np.argmax(self.weights[:, j]))]
            for j, word in enumerate(self.feature_words)
        }

    def to_state(self) -> dict:
        return {
            "version": 1,
            "categories": list(self.categories),
            "feature_words": list(self.feature_words),
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "params": {
                "learning_rate": self.params.learning_rate,
                "l2_lambda": self.params.l2_lambda,
                "epochs": self.params.epochs,
                "seed": self.params.seed,
            },
        }


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def loss_and_gradients(weights: np.ndarray, bias: np.ndarray,
                       x: np.ndarray, y: np.ndarray,
                       l2_lambda: float) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy plus (lambda/2)*||W||^2, with analytic gradients.

    x: (m, n_features) counts; y: (m,) category indices. Returns
    (loss, dW, db). Kept separate from the training loop so finite
    differences can check the gradients directly.
    """
    m = x.shape[0]
    probs = softmax(x @ weights.T + bias)
    onehot = np.zeros_like(probs)
    onehot[np.arange(m), y] = 1.0
    with np.errstate(divide="ignore"):  # log(0) -> inf loss, caught as divergence
        log_likelihood = np.log(probs[np.arange(m), y])
    loss = -log_likelihood.mean() + 0.5 * l2_lambda * float((weights ** 2).sum())
    delta = probs - onehot
    grad_w = delta.T @ x / m + l2_lambda * weights
    grad_b = delta.mean(axis=0)
    return float(loss), grad_w, grad_b


def design_matrix(train_docs: list[Document], categories: list[str],
                  feature_words: list[str]) -> tuple[np.ndarray, np.ndarray]:
    index = {w: j for j, w in enumerate(feature_words)}
    cat_index = {c: i for i, c in enumerate(categories)}
    x = np.zeros((len(train_docs), len(feature_words)))
    y = np.zeros(len(train_docs), dtype=int)
    for i, doc in enumerate(train_docs):
        if doc.category not in cat_index:
            raise UnknownCategory(f"document {doc.id} has category {doc.category!r}")
        y[i] = cat_index[doc.category]
        for token in doc.tokens:
            j = index.get(token)
            if j is not None:
                x[i, j] += 1.0
    return x, y


def train_logreg(train_docs: list[Document], categories: list[str],
                 feature_words: list[str],
                 params: LogRegParams | None = None) -> LogRegModel:
    if not train_docs:
        raise EmptyTrainingSet("no training documents")
    if not feature_words:
        raise NoFeaturesMatched("empty feature word list")
    params = params or LogRegParams()

    features = sorted(feature_words)
    x, y = design_matrix(train_docs, categories, features)
    if not x.any():
        raise NoFeaturesMatched("no training token matched the feature set")

    weights = np.zeros((len(categories), len(features)))
    bias = np.zeros(len(categories))
    history = []
    for _ in range(params.epochs):
        loss, grad_w, grad_b = loss_and_gradients(weights, bias, x, y, params.l2_lambda)
        if not np.isfinite(loss):
            raise DivergenceDetected(f"loss became {loss}")
        history.append(loss)
        weights = weights - params.learning_rate * grad_w
        bias = bias - params.learning_rate * grad_b
    if not (np.isfinite(weights).all() and np.isfinite(bias).all()):
        raise DivergenceDetected("non-finite parameters after training")

    return LogRegModel(categories=list(categories), feature_words=features,
                       weights=weights, bias=bias, params=params,
                       loss_history=history)


def predict_logreg(model: LogRegModel, tokens: list[str]) -> dict[str, float]:
    """softmax(W x + b) over the model's categories; sums to 1."""
    scores = model.weights @ model.feature_vector(tokens) + model.bias
    probs = softmax(scores)
    return {c: float(p) for c, p in zip(model.categories, probs)}
