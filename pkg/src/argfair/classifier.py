"""Binary classifiers producing '+'/'-' labels for individuals.

Three interchangeable label sources feed the auditor: a small logistic
regression trained here on one-hot encoded categoricals, predictions loaded
from an external file (any model), and the fixed synthetic-bias rule that
simply reads the injected attribute. Downstream code sees only a
LabelAssignment, never a model.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from .dataset import NEGATIVE, POSITIVE
from .errors import (
    CoverageError,
    DegenerateTrainingError,
    DomainError,
    MissingAttributeError,
    ParseError,
    SchemaError,
)

BIAS_ATTRIBUTE = "bias-attr"


@dataclass(frozen=True)
class LabelAssignment:
    """Total map from dataset row index to '+'/'-'."""

    labels: dict
    provenance: str

    def __getitem__(self, index):
        return self.labels[index]

    def __len__(self):
        return len(self.labels)

    def validate(self, dataset):
        missing = [i for i in range(len(dataset)) if i not in self.labels]
        extra = [i for i in self.labels if not 0 <= i < len(dataset)]
        if missing or extra:
            raise CoverageError(
                f"assignment does not cover the dataset exactly "
                f"(missing rows {missing[:5]}{'...' if len(missing) > 5 else ''}, "
                f"extra rows {extra[:5]}{'...' if len(extra) > 5 else ''})"
            )
        return self


def labels_from_dataset(dataset):
    """Use the labels carried by the rows themselves (ground truth)."""
    labels = {}
    for i, row in enumerate(dataset):
        if row.label is None:
            raise CoverageError(f"row {i} carries no label")
        labels[i] = row.label
    return LabelAssignment(labels=labels, provenance="dataset-labels")


# ---------------------------------------------------------------------------
# logistic regression on one-hot encoded categoricals


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    epochs: int = 400
    l2: float = 1e-4
    seed: int = 0
    threshold: float = 0.5


@dataclass
class LogRegModel:
    """One coefficient per (attribute, value); unseen values encode to an
    all-zero block so prediction is total."""

    attributes: tuple
    encoding: dict
    weights: np.ndarray
    intercept: float
    threshold: float = 0.5

    def margin(self, individual):
        z = self.intercept
        for attr in self.attributes:
            col = self.encoding.get((attr, individual.values[attr]))
            if col is not None:
                z += self.weights[col]
        return z

    def save(self, path):
        doc = {
            "attributes": list(self.attributes),
            "encoding": [[a, v, c] for (a, v), c in sorted(self.encoding.items())],
            "weights": [float(w) for w in self.weights],
            "intercept": float(self.intercept),
            "threshold": self.threshold,
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            doc = json.load(fh)
        return cls(
            attributes=tuple(doc["attributes"]),
            encoding={(a, v): c for a, v, c in doc["encoding"]},
            weights=np.array(doc["weights"]),
            intercept=doc["intercept"],
            threshold=doc["threshold"],
        )


def build_encoding(schema):
    """Column index for every declared (attribute, value) pair, full dummy
    set with no reference category dropped."""
    encoding = {}
    for attr in schema.attributes:
        domain = schema.domains.get(attr)
        if domain is None:
            raise SchemaError(f"attribute {attr!r} is numeric; bin before training")
        for value in sorted(domain):
            encoding[(attr, value)] = len(encoding)
    return encoding


def _design_matrix(dataset, encoding, attributes):
    X = np.zeros((len(dataset), len(encoding)))
    for i, row in enumerate(dataset):
        for attr in attributes:
            col = encoding.get((attr, row.values[attr]))
            if col is not None:
                X[i, col] = 1.0
    return X


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_loss(weights, intercept, X, y, l2=0.0):
    p = sigmoid(X @ weights + intercept)
    p = np.clip(p, 1e-12, 1 - 1e-12)
    data_term = -np.mean(y * np.log(p) + (1 - y) * np.log(1 - p))
    return data_term + 0.5 * l2 * float(weights @ weights)


def log_loss_grad(weights, intercept, X, y, l2=0.0):
    """Analytic gradient of ``log_loss`` in (weights, intercept)."""
    residual = sigmoid(X @ weights + intercept) - y
    grad_w = X.T @ residual / len(y) + l2 * weights
    grad_b = float(np.mean(residual))
    return grad_w, grad_b


def train_logreg(train, hyper=TrainConfig()):
    """Full-batch gradient descent for a fixed number of epochs.

    Deterministic given the seed: initial weights are the only random
    draw. Requires labelled rows of both classes.
    """
    if len(train) == 0:
        raise DegenerateTrainingError("empty training set")
    assignment = labels_from_dataset(train)
    y = np.array([1.0 if assignment[i] == POSITIVE else 0.0 for i in range(len(train))])
    if len(set(y)) < 2:
        raise DegenerateTrainingError("training rows all share one class")

    encoding = build_encoding(train.schema)
    X = _design_matrix(train, encoding, train.schema.attributes)

    rng = np.random.default_rng(hyper.seed)
    weights = rng.normal(0.0, 0.01, size=len(encoding))
    intercept = 0.0
    for _ in range(hyper.epochs):
        grad_w, grad_b = log_loss_grad(weights, intercept, X, y, hyper.l2)
        weights -= hyper.learning_rate * grad_w
        intercept -= hyper.learning_rate * grad_b

    if not np.all(np.isfinite(weights)):
        raise DegenerateTrainingError("diverged: non-finite coefficients")
    return LogRegModel(
        attributes=train.schema.attributes,
        encoding=encoding,
        weights=weights,
        intercept=intercept,
        threshold=hyper.threshold,
    )


def predict(model, individual):
    """'+' iff the predicted probability reaches the model threshold."""
    return POSITIVE if sigmoid(model.margin(individual)) >= model.threshold else NEGATIVE


def predict_dataset(model, dataset):
    labels = {i: predict(model, row) for i, row in enumerate(dataset)}
    return LabelAssignment(labels=labels, provenance="trained-model")


def evaluate_model(model, dataset):
    """Accuracy and positive-class F1 against the rows' own labels."""
    truth = labels_from_dataset(dataset)
    predicted = predict_dataset(model, dataset)
    tp = fp = fn = correct = 0
    for i in range(len(dataset)):
        p, t = predicted[i], truth[i]
        correct += p == t
        tp += p == POSITIVE and t == POSITIVE
        fp += p == POSITIVE and t == NEGATIVE
        fn += p == NEGATIVE and t == POSITIVE
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {"accuracy": correct / len(dataset), "f1": f1}


# ---------------------------------------------------------------------------
# fixed synthetic-bias classifier


def fixed_bias_classifier(individual):
    """'+' iff the injected bias attribute is 1."""
    if BIAS_ATTRIBUTE not in individual.values:
        raise MissingAttributeError(f"individual lacks {BIAS_ATTRIBUTE!r}")
    value = individual.values[BIAS_ATTRIBUTE]
    if value not in ("0", "1"):
        raise DomainError(BIAS_ATTRIBUTE, value)
    return POSITIVE if value == "1" else NEGATIVE


def fixed_bias_assignment(dataset):
    labels = {i: fixed_bias_classifier(row) for i, row in enumerate(dataset)}
    return LabelAssignment(labels=labels, provenance="fixed-bias")


# ---------------------------------------------------------------------------
# external predictions


_LABEL_ALIASES = {"+": POSITIVE, "-": NEGATIVE, "1": POSITIVE, "0": NEGATIVE}


def load_predictions(path, dataset):
    """Two-column file (row_index, label) covering every dataset row once.

    Labels may be '+'/'-' or '1'/'0'. A header row is allowed.
    """
    labels = {}
    with open(path, newline="") as fh:
        for lineno, record in enumerate(csv.reader(fh)):
            if not record or (lineno == 0 and record[0].strip().lower() in ("row_index", "index", "row")):
                continue
            if len(record) != 2:
                raise ParseError(f"{path}: line {lineno + 1}: expected 'row_index,label'")
            idx_text, label_text = record[0].strip(), record[1].strip()
            try:
                index = int(idx_text)
            except ValueError:
                raise ParseError(f"{path}: line {lineno + 1}: bad row index {idx_text!r}") from None
            if label_text not in _LABEL_ALIASES:
                raise ParseError(f"{path}: line {lineno + 1}: bad label {label_text!r}")
            if index in labels:
                raise CoverageError(f"{path}: duplicate prediction for row {index}")
            labels[index] = _LABEL_ALIASES[label_text]
    assignment = LabelAssignment(labels=labels, provenance="external-file")
    assignment.validate(dataset)
    return assignment


def save_predictions(assignment, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row_index", "label"])
        for index in sorted(assignment.labels):
            writer.writerow([index, assignment.labels[index]])
