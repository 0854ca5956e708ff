"""Linear SVM with hinge loss, trained in the dual by coordinate descent.

Primal problem, with z_i the feature vector extended by a constant
bias_scale component (bias_scale = 0 trains without a bias term):

    minimize  0.5 * ||u||^2  +  C * sum_i max(0, 1 - y_i * (u . z_i))

The dual has one variable per example, alpha_i in [0, C]. Each pass
visits the active coordinates in a freshly seeded random order and
performs the exact single-coordinate minimization; variables pinned at
a bound whose gradient moves them further out are shrunk from the
active set using the previous pass's violation bounds. Training stops
when the largest projected-gradient violation over a full pass of the
complete (unshrunk) set falls below the tolerance.

Given identical inputs and seed the solver is bitwise deterministic,
and negating every label exactly negates the learned weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import BagLabel
from .dist import DistParams
from .errors import DimMismatch, LengthMismatch, NonFinite, SingleClass

__all__ = [
    "SvmConfig",
    "LinearModel",
    "TrainState",
    "train",
    "train_with_state",
    "decision_value",
    "decision_values",
    "predict",
    "predict_many",
    "primal_objective",
]


@dataclass(frozen=True)
class SvmConfig:
    """Trainer hyperparameters.

    c trades margin against hinge violations; tolerance bounds the
    maximal projected-gradient violation at convergence; bias_scale is
    the value of the appended constant feature (0 disables the bias);
    seed drives the per-pass coordinate permutation.
    """

    c: float = 1.0
    tolerance: float = 0.1
    max_passes: int = 1000
    bias_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c!r}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be >= 1, got {self.max_passes!r}")
        if self.bias_scale < 0:
            raise ValueError(f"bias_scale must be >= 0, got {self.bias_scale!r}")


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Trained separator: decision value is weights . x + bias * bias_scale.

    ref_fingerprint, params and normalize record the feature space the
    model was trained in (empty / None for a model trained on raw
    vectors); prediction against differently fingerprinted references
    must be refused.
    """

    weights: np.ndarray
    bias: float
    bias_scale: float = 1.0
    ref_fingerprint: str = ""
    params: DistParams | None = None
    normalize: str = "block"

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("weights must be a 1-d vector")
        if not np.isfinite(w).all() or not np.isfinite(self.bias):
            raise NonFinite("model weights and bias must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    @property
    def dim(self) -> int:
        return self.weights.shape[0]


@dataclass
class TrainState:
    """Solver diagnostics returned by train_with_state."""

    alpha: np.ndarray
    passes: int
    converged: bool
    max_violation: float
    dual_objective: float


def _as_matrix(features) -> np.ndarray:
    try:
        x = np.asarray(features, dtype=np.float64)
    except ValueError as exc:
        raise DimMismatch(f"feature vectors have unequal lengths: {exc}") from None
    if x.ndim != 2:
        raise DimMismatch(f"expected a 2-d feature matrix, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise NonFinite("features contain NaN or infinite values")
    return x


def _as_labels(labels, n: int) -> np.ndarray:
    y = np.asarray([float(BagLabel(int(l))) for l in labels], dtype=np.float64)
    if y.shape[0] != n:
        raise LengthMismatch(f"{n} feature vectors but {y.shape[0]} labels")
    if (y > 0).all() or (y < 0).all():
        raise SingleClass("training data must contain both classes")
    return y


def _augment(x: np.ndarray, bias_scale: float) -> np.ndarray:
    if bias_scale > 0:
        return np.hstack([x, np.full((x.shape[0], 1), bias_scale)])
    return x


def _dual_objective(alpha: np.ndarray, w: np.ndarray) -> float:
    # lower-bound form: sum(alpha) - 0.5 ||w||^2, nondecreasing across passes
    return float(alpha.sum() - 0.5 * (w @ w))


def _solve_dual(x: np.ndarray, y: np.ndarray, c: float, tol: float,
                max_passes: int, rng: np.random.Generator):
    n = x.shape[0]
    alpha = np.zeros(n)
    w = np.zeros(x.shape[1])
    q_diag = np.einsum("ij,ij->i", x, x)
    active = np.arange(n)
    upper_bound = np.inf   # shrink alpha==0 coordinates with gradient above this
    lower_bound = -np.inf  # shrink alpha==C coordinates with gradient below this
    converged = False
    passes = 0
    violation = np.inf
    if __debug__:
        prev_dual = -np.inf
    while passes < max_passes:
        passes += 1
        rng.shuffle(active)
        pg_max = -np.inf
        pg_min = np.inf
        violation = 0.0
        keep = np.ones(active.shape[0], dtype=bool)
        for pos in range(active.shape[0]):
            i = active[pos]
            yi = y[i]
            g = yi * (w @ x[i]) - 1.0
            a_i = alpha[i]
            pg = 0.0
            if a_i == 0.0:
                if g > upper_bound:
                    keep[pos] = False
                    continue
                if g < 0.0:
                    pg = g
            elif a_i == c:
                if g < lower_bound:
                    keep[pos] = False
                    continue
                if g > 0.0:
                    pg = g
            else:
                pg = g
            if pg > pg_max:
                pg_max = pg
            if pg < pg_min:
                pg_min = pg
            apg = abs(pg)
            if apg > violation:
                violation = apg
            if apg > 1e-14:
                q = q_diag[i]
                if q > 0.0:
                    a_new = a_i - g / q
                    if a_new < 0.0:
                        a_new = 0.0
                    elif a_new > c:
                        a_new = c
                else:
                    # zero feature vector: the dual is linear in this coordinate
                    a_new = c if g < 0.0 else 0.0
                if a_new != a_i:
                    w += (a_new - a_i) * yi * x[i]
                    alpha[i] = a_new
        if not keep.all():
            active = active[keep]
        if __debug__:
            dual = _dual_objective(alpha, w)
            assert dual >= prev_dual - 1e-8 * max(1.0, abs(dual)), (
                f"dual objective decreased: {prev_dual} -> {dual}"
            )
            prev_dual = dual
        if violation <= tol:
            if active.shape[0] == n:
                converged = True
                break
            # optimal on the shrunk set only: restore everything and
            # take at least one full pass before shrinking again
            active = np.arange(n)
            upper_bound = np.inf
            lower_bound = -np.inf
            continue
        upper_bound = pg_max if pg_max > 0.0 else np.inf
        lower_bound = pg_min if pg_min < 0.0 else -np.inf
    return alpha, w, passes, converged, violation


def train_with_state(features, labels, cfg: SvmConfig = SvmConfig(), *,
                     ref_fingerprint: str = "", params: DistParams | None = None,
                     normalize: str = "block") -> tuple[LinearModel, TrainState]:
    """train() plus solver diagnostics (dual variables, pass count, violation)."""
    x = _as_matrix(features)
    y = _as_labels(labels, x.shape[0])
    xa = _augment(x, cfg.bias_scale)
    rng = np.random.default_rng(cfg.seed % (1 << 64))
    alpha, w_aug, passes, converged, violation = _solve_dual(
        xa, y, cfg.c, cfg.tolerance, cfg.max_passes, rng
    )
    if cfg.bias_scale > 0:
        weights, bias = w_aug[:-1], float(w_aug[-1])
    else:
        weights, bias = w_aug, 0.0
    model = LinearModel(
        weights=weights,
        bias=bias,
        bias_scale=cfg.bias_scale,
        ref_fingerprint=ref_fingerprint,
        params=params,
        normalize=normalize,
    )
    state = TrainState(
        alpha=alpha,
        passes=passes,
        converged=converged,
        max_violation=float(violation),
        dual_objective=_dual_objective(alpha, w_aug),
    )
    return model, state


def train(features, labels, cfg: SvmConfig = SvmConfig(), *,
          ref_fingerprint: str = "", params: DistParams | None = None,
          normalize: str = "block") -> LinearModel:
    """Fit the linear separator; deterministic given inputs and cfg.seed."""
    model, _ = train_with_state(
        features, labels, cfg,
        ref_fingerprint=ref_fingerprint, params=params, normalize=normalize,
    )
    return model


def _check_feature(model: LinearModel, feature: np.ndarray) -> np.ndarray:
    feature = np.asarray(feature, dtype=np.float64)
    if feature.ndim != 1 or feature.shape[0] != model.dim:
        raise DimMismatch(
            f"feature length {feature.shape} does not match model dimension {model.dim}"
        )
    return feature


def decision_value(model: LinearModel, feature) -> float:
    """Signed distance proxy: weights . x + bias * bias_scale."""
    feature = _check_feature(model, feature)
    return float(model.weights @ feature + model.bias * model.bias_scale)


def decision_values(model: LinearModel, features) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.dim:
        raise DimMismatch(
            f"feature matrix shape {x.shape} does not match model dimension {model.dim}"
        )
    return x @ model.weights + model.bias * model.bias_scale


def predict(model: LinearModel, feature) -> BagLabel:
    """Predicted label; a decision value of exactly zero resolves to +1."""
    value = decision_value(model, feature)
    return BagLabel.POSITIVE if value >= 0.0 else BagLabel.NEGATIVE


def predict_many(model: LinearModel, features) -> list[BagLabel]:
    values = decision_values(model, features)
    return [BagLabel.POSITIVE if v >= 0.0 else BagLabel.NEGATIVE for v in values]


def primal_objective(model: LinearModel, features, labels, c: float) -> float:
    """Value of the training objective at this model (bias weight regularized
    whenever the bias feature is enabled)."""
    x = _as_matrix(features)
    y = np.asarray([float(BagLabel(int(l))) for l in labels], dtype=np.float64)
    margins = y * decision_values(model, x)
    hinge = np.maximum(0.0, 1.0 - margins).sum()
    reg = model.weights @ model.weights
    if model.bias_scale > 0:
        reg += model.bias * model.bias
    return float(0.5 * reg + c * hinge)
