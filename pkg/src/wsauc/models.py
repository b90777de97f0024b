"""Scoring models: linear and one-hidden-layer tanh networks.

A model maps a feature vector to a real score; training mutates the flat
parameter vector in place. Linear models have no bias term because ranking
metrics are invariant to a constant score shift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .validation import as_feature_matrix, check_positive_int

LINEAR = "linear"
MLP1 = "mlp1"


@dataclass
class Model:
    architecture: str
    dim: int
    params: np.ndarray
    hidden_width: int = 0

    def __post_init__(self):
        if self.architecture not in (LINEAR, MLP1):
            raise InputError(f"unknown architecture {self.architecture!r}")
        self.dim = check_positive_int(self.dim, "dim")
        self.params = np.asarray(self.params, dtype=np.float64).ravel()
        expected = n_params(self.architecture, self.dim, self.hidden_width)
        if self.params.size != expected:
            raise InputError(
                f"params length {self.params.size} does not match "
                f"{self.architecture} with dim={self.dim}"
                + (f", hidden_width={self.hidden_width}" if self.architecture == MLP1 else "")
            )

    def copy(self) -> "Model":
        return Model(self.architecture, self.dim, self.params.copy(), self.hidden_width)


def n_params(architecture: str, dim: int, hidden_width: int = 0) -> int:
    if architecture == LINEAR:
        return dim
    if architecture == MLP1:
        h = check_positive_int(hidden_width, "hidden_width")
        return h * dim + 2 * h  # W1 (h*d) + b1 (h) + w2 (h)
    raise InputError(f"unknown architecture {architecture!r}")


def init_model(architecture: str, dim: int, hidden_width: int, rng: np.random.Generator) -> Model:
    """Parameters uniform in [-1/sqrt(d), 1/sqrt(d)] drawn from the run seed."""
    bound = 1.0 / np.sqrt(dim)
    p = n_params(architecture, dim, hidden_width)
    params = rng.uniform(-bound, bound, size=p)
    return Model(architecture, dim, params, hidden_width if architecture == MLP1 else 0)


def _unpack_mlp1(model: Model):
    h, d = model.hidden_width, model.dim
    w1 = model.params[: h * d].reshape(h, d)
    b1 = model.params[h * d : h * d + h]
    w2 = model.params[h * d + h :]
    return w1, b1, w2


def score_batch(model: Model, x) -> np.ndarray:
    """Scores for a batch of feature rows; shape (n,)."""
    x = as_feature_matrix(x)
    if x.shape[1] != model.dim:
        raise InputError(f"feature dimension {x.shape[1]} != model dim {model.dim}")
    if model.architecture == LINEAR:
        return x @ model.params
    w1, b1, w2 = _unpack_mlp1(model)
    return np.tanh(x @ w1.T + b1) @ w2


def score(model: Model, x) -> float:
    """Score of a single instance."""
    return float(score_batch(model, np.atleast_2d(np.asarray(x, dtype=np.float64)))[0])


def score_grad(model: Model, x) -> np.ndarray:
    """Gradient of score(model, x) with respect to the flat parameter vector."""
    return score_grad_batch(model, np.atleast_2d(np.asarray(x, dtype=np.float64)))[0]


def score_grad_batch(model: Model, x) -> np.ndarray:
    """Per-row parameter Jacobian, shape (n, n_params)."""
    x = as_feature_matrix(x)
    if x.shape[1] != model.dim:
        raise InputError(f"feature dimension {x.shape[1]} != model dim {model.dim}")
    if model.architecture == LINEAR:
        return x.copy()
    w1, b1, w2 = _unpack_mlp1(model)
    hmat = np.tanh(x @ w1.T + b1)           # (n, h)
    dact = (1.0 - hmat * hmat) * w2         # (n, h): dscore/d(preact)
    n = x.shape[0]
    jac = np.empty((n, model.params.size))
    jac[:, : w1.size] = (dact[:, :, None] * x[:, None, :]).reshape(n, w1.size)
    jac[:, w1.size : w1.size + b1.size] = dact
    jac[:, w1.size + b1.size :] = hmat
    return jac


def weighted_grad_sum(model: Model, x: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """sum_i weights[i] * score_grad(model, x[i]) without materializing Jacobians.

    Used by the pairwise batch gradient where only row/column-weighted sums of
    per-instance Jacobians are needed.
    """
    if model.architecture == LINEAR:
        return weights @ x
    w1, b1, w2 = _unpack_mlp1(model)
    hmat = np.tanh(x @ w1.T + b1)
    dact = (1.0 - hmat * hmat) * w2
    wd = dact * weights[:, None]            # (n, h)
    out = np.empty(model.params.size)
    out[: w1.size] = (wd.T @ x).ravel()
    out[w1.size : w1.size + b1.size] = wd.sum(axis=0)
    out[w1.size + b1.size :] = weights @ hmat
    return out
