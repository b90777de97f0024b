"""Surrogate losses for pairwise ranking margins.

All losses act on the score margin z = f(x) - f(x'). The zero-one loss scores
1 for a reversed pair, 0 for a correct pair and tie_value (default 0.5) for a
tie; the differentiable kinds upper-bound it on the margin ranges used for
training and are monotonically nonincreasing there, which the trimming
equivalence relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, UnsupportedLossError

ZERO_ONE = "zero_one"
SQUARED = "squared"
LOGISTIC = "logistic"
HINGE = "hinge"

KINDS = (ZERO_ONE, SQUARED, LOGISTIC, HINGE)
DIFFERENTIABLE_KINDS = (SQUARED, LOGISTIC, HINGE)


@dataclass(frozen=True)
class SurrogateLoss:
    """Tagged loss choice; tie_value is only consulted by the zero-one kind."""

    kind: str = SQUARED
    tie_value: float = 0.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown loss kind {self.kind!r}; expected one of {KINDS}")

    @property
    def differentiable(self) -> bool:
        return self.kind != ZERO_ONE


def loss_value(loss: SurrogateLoss, z):
    """Evaluate the loss at margin z (scalar or array).

    zero_one -> 1 if z < 0, tie_value if z == 0, 0 if z > 0
    squared  -> (1 - z)^2
    logistic -> ln(1 + exp(-z))
    hinge    -> max(0, 1 - z)
    """
    z = _checked(z)
    if loss.kind == ZERO_ONE:
        out = np.where(z < 0.0, 1.0, np.where(z > 0.0, 0.0, loss.tie_value))
    elif loss.kind == SQUARED:
        out = np.square(1.0 - z)
    elif loss.kind == LOGISTIC:
        out = np.logaddexp(0.0, -z)
    else:
        out = np.maximum(0.0, 1.0 - z)
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def loss_grad(loss: SurrogateLoss, z):
    """Derivative d loss / dz; hinge uses the zero subgradient at its kink z = 1."""
    if not loss.differentiable:
        raise UnsupportedLossError("zero_one loss has no gradient")
    z = _checked(z)
    if loss.kind == SQUARED:
        out = -2.0 * (1.0 - z)
    elif loss.kind == LOGISTIC:
        # -sigmoid(-z), written so exp never sees a positive argument
        e = np.exp(-np.abs(z))
        out = np.where(z >= 0.0, -e / (1.0 + e), -1.0 / (1.0 + e))
    else:
        out = np.where(z < 1.0, -1.0, 0.0)
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def _checked(z):
    arr = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InputError("loss margin contains non-finite values")
    return arr
