"""Training orchestration, scoring, classification and evaluation metrics."""

from dataclasses import dataclass

import numpy as np

from .datasets import LabeledDataset, one_hot_targets
from .errors import EmptyTestSet, IncompatibleModels, NonFinite, ShapeMismatch
from .kernels import ThetaOperator
from .preprocess import PreprocessSpec, apply_steps
from .solvers import solve

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Model:
    """Everything needed to score new inputs: kernel spec, regularization,
    preprocessing chain, the preprocessed training support and the solved
    weight matrix (row 0 biases, rows 1..N dual weights)."""

    kernel: object
    gamma: float
    preprocess: PreprocessSpec
    train_samples: np.ndarray  # preprocessed, (N, M)
    weights: np.ndarray        # (N+1, K)
    num_classes: int
    raw_dim: int               # feature length before preprocessing

    def __post_init__(self):
        if self.weights.shape != (self.train_samples.shape[0] + 1, self.num_classes):
            raise ShapeMismatch("weights must be (N+1) x K")

    def operator(self):
        return ThetaOperator(
            self.train_samples, self.kernel, self.gamma, dtype=self.train_samples.dtype
        )


@dataclass(frozen=True)
class EvaluationReport:
    error_rate: float                 # fraction in [0, 1]
    confusion_counts: np.ndarray      # (K, K) ints, rows = true class
    confusion_percent: np.ndarray     # rows scaled to 100 (zero rows stay zero)
    misclassified_indices: np.ndarray


def train(data, kernel, gamma, preprocess, cfg, eval_data=None, batch_size=4096):
    """Preprocess, build the implicit system, run the configured solver.

    When eval_data is given, its kernel block against the training support is
    precomputed once and the solver's trace records the test error every
    cfg.eval_every iterations.
    """
    x = apply_steps(preprocess, data.samples).astype(cfg.np_dtype)
    z = one_hot_targets(data.labels, data.num_classes)
    op = ThetaOperator(x, kernel, gamma, dtype=cfg.np_dtype)

    eval_hook = None
    if eval_data is not None:
        x_eval = apply_steps(preprocess, eval_data.samples).astype(cfg.np_dtype)
        psi = op.test_block(x_eval)
        labels_eval = eval_data.labels

        def eval_hook(t, w):
            scores = psi @ w[1:] + w[0]
            return float(np.mean(np.argmax(scores, axis=1) != labels_eval))

    w, trace = solve(op, z, cfg, eval_hook)
    model = Model(
        kernel=kernel,
        gamma=gamma,
        preprocess=preprocess,
        train_samples=x,
        weights=w,
        num_classes=data.num_classes,
        raw_dim=data.m,
    )
    return model, trace


def decision_scores(model, x, batch_size=4096):
    """Linear class scores h_j(x) = sum_n Omega(x, x_n) a_nj + b_j."""
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[1] != model.raw_dim:
        raise ShapeMismatch(f"expected raw feature length {model.raw_dim}")
    xp = apply_steps(model.preprocess, x).astype(model.train_samples.dtype)
    op = model.operator()
    a = model.weights[1:]
    b = model.weights[0]
    out = np.empty((xp.shape[0], model.num_classes), dtype=model.weights.dtype)
    for start in range(0, xp.shape[0], batch_size):
        psi = op.test_block(xp[start : start + batch_size])
        out[start : start + psi.shape[0]] = psi @ a + b
    return out


def predict(model, x, batch_size=4096):
    """Class of maximum score per row; ties break toward the smallest index."""
    return np.argmax(decision_scores(model, x, batch_size), axis=1)


def softmax_probabilities(scores):
    """Max-shifted softmax over the last axis; presentation layer only."""
    scores = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise NonFinite("scores contain NaN/Inf")
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def average_models(models):
    """Element-wise mean of the weights of compatible models.

    All members must share the kernel, gamma, preprocessing chain and the
    training support; only the averaged weights and biases need be kept.
    """
    if not models:
        raise IncompatibleModels("need at least one model")
    first = models[0]
    for m in models[1:]:
        if (
            m.kernel != first.kernel
            or m.gamma != first.gamma
            or m.preprocess != first.preprocess
            or m.num_classes != first.num_classes
            or m.raw_dim != first.raw_dim
            or not np.array_equal(m.train_samples, first.train_samples)
        ):
            raise IncompatibleModels("models differ in kernel/gamma/preprocess/support")
    mean_w = np.mean([m.weights for m in models], axis=0).astype(first.weights.dtype)
    return Model(
        kernel=first.kernel,
        gamma=first.gamma,
        preprocess=first.preprocess,
        train_samples=first.train_samples,
        weights=mean_w,
        num_classes=first.num_classes,
        raw_dim=first.raw_dim,
    )


def evaluate(model, data, batch_size=4096):
    """Error rate and true-vs-predicted confusion over a labeled test set."""
    if data.n < 1:
        raise EmptyTestSet("no test samples")
    preds = predict(model, data.samples, batch_size)
    k = model.num_classes
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (data.labels, preds), 1)
    row_totals = counts.sum(axis=1)
    percent = np.zeros((k, k))
    nonzero = row_totals > 0
    percent[nonzero] = 100.0 * counts[nonzero] / row_totals[nonzero, None]
    wrong = np.flatnonzero(preds != data.labels)
    return EvaluationReport(
        error_rate=float(wrong.size / data.n),
        confusion_counts=counts,
        confusion_percent=percent,
        misclassified_indices=wrong,
    )
