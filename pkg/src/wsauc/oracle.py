"""Independent brute-force reference implementations for tests and `verify`.

Everything here is deliberately naive: plain Python loops, math-module
scalars, sequential summation, and no reuse of the vectorized code paths it
is meant to check. Keep it that way; a shared helper would turn an
equivalence test into a tautology.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError, UnsupportedLossError
from .losses import SurrogateLoss
from .models import Model

_MONOTONE_KINDS = ("zero_one", "squared", "logistic", "hinge")


def _loss_scalar(kind: str, tie_value: float, z: float) -> float:
    if kind == "zero_one":
        if z < 0.0:
            return 1.0
        if z > 0.0:
            return 0.0
        return tie_value
    if kind == "squared":
        return (1.0 - z) * (1.0 - z)
    if kind == "logistic":
        if z < -700.0:
            return -z
        return math.log1p(math.exp(-z))
    if kind == "hinge":
        return max(0.0, 1.0 - z)
    raise UnsupportedLossError(f"unknown loss kind {kind!r}")


def straight_line_score(model: Model, x) -> float:
    """Forward pass re-derived from the parameter layout, scalar arithmetic only."""
    xs = [float(v) for v in np.asarray(x).ravel()]
    ps = [float(v) for v in model.params]
    d = model.dim
    if len(xs) != d:
        raise InputError("dimension mismatch")
    if model.architecture == "linear":
        total = 0.0
        for i in range(d):
            total += ps[i] * xs[i]
        return total
    h = model.hidden_width
    total = 0.0
    for j in range(h):
        pre = ps[h * d + j]  # hidden bias
        for i in range(d):
            pre += ps[j * d + i] * xs[i]
        total += ps[h * d + h + j] * math.tanh(pre)
    return total


def _features_of(obj) -> np.ndarray:
    feats = getattr(obj, "features", obj)
    return np.asarray(feats, dtype=np.float64)


def naive_pair_risk(xa, xb, model: Model, loss: SurrogateLoss) -> float:
    """O(mn) double loop over ordered pairs, sequential left-to-right sum."""
    fa, fb = _features_of(xa), _features_of(xb)
    if fa.shape[0] == 0 or fb.shape[0] == 0:
        raise InputError("sets must be non-empty")
    sa = [straight_line_score(model, row) for row in fa]
    sb = [straight_line_score(model, row) for row in fb]
    total = 0.0
    for s in sa:
        for t in sb:
            total += _loss_scalar(loss.kind, loss.tie_value, s - t)
    return total / (len(sa) * len(sb))


def naive_auc(pos_scores, neg_scores) -> float:
    pos = [float(v) for v in np.asarray(pos_scores).ravel()]
    neg = [float(v) for v in np.asarray(neg_scores).ravel()]
    if not pos or not neg:
        raise InputError("both score lists must be non-empty")
    wins = 0.0
    for s in pos:
        for t in neg:
            if s > t:
                wins += 1.0
            elif s == t:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def _top_indices(values, k: int):
    """Indices of the k largest values, ties favoring the earlier index."""
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    return sorted(order[:k])


def _bottom_indices(values, k: int):
    order = sorted(range(len(values)), key=lambda i: (values[i], i))
    return sorted(order[:k])


def naive_rpauc(pos_scores, neg_scores, alpha: float, beta: float) -> float:
    """Trim by hand (top (1-beta) positives, bottom (1-alpha) negatives with
    floor counts) then 1 - mean zero-one loss over the kept pairs."""
    pos = [float(v) for v in np.asarray(pos_scores).ravel()]
    neg = [float(v) for v in np.asarray(neg_scores).ravel()]
    kp = int(math.floor((1.0 - beta) * len(pos) + 1e-9))
    kn = int(math.floor((1.0 - alpha) * len(neg) + 1e-9))
    if kp < 1 or kn < 1:
        raise InputError("trimming empties a side")
    kept_pos = [pos[i] for i in _top_indices(pos, kp)]
    kept_neg = [neg[i] for i in _bottom_indices(neg, kn)]
    total = 0.0
    for s in kept_pos:
        for t in kept_neg:
            total += _loss_scalar("zero_one", 0.5, s - t)
    return 1.0 - total / (kp * kn)


def naive_tpauc(pos_scores, neg_scores, alpha: float, beta: float) -> float:
    """Hardest-instance selection: bottom (1-beta) positives vs top alpha
    negatives, then plain pair counting."""
    pos = [float(v) for v in np.asarray(pos_scores).ravel()]
    neg = [float(v) for v in np.asarray(neg_scores).ravel()]
    kp = int(math.floor((1.0 - beta) * len(pos) + 1e-9))
    kn = int(math.floor(alpha * len(neg) + 1e-9))
    if kp < 1 or kn < 1:
        raise InputError("selection empties a side")
    kept_pos = [pos[i] for i in _bottom_indices(pos, kp)]
    kept_neg = [neg[i] for i in _top_indices(neg, kn)]
    return naive_auc(kept_pos, kept_neg)


def naive_opauc(pos_scores, neg_scores, alpha: float, beta: float) -> float:
    """Restricted ROC area by explicit threshold sweep and clipped trapezoids."""
    pos = [float(v) for v in np.asarray(pos_scores).ravel()]
    neg = [float(v) for v in np.asarray(neg_scores).ravel()]
    if not (0.0 <= alpha < beta <= 1.0):
        raise InputError("invalid FPR range")
    thresholds = sorted(set(pos) | set(neg), reverse=True)
    points = [(0.0, 0.0)]
    for u in thresholds:
        tp = sum(1 for s in pos if s >= u)
        fp = sum(1 for t in neg if t >= u)
        points.append((fp / len(neg), tp / len(pos)))
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        lo, hi = max(x0, alpha), min(x1, beta)
        if hi <= lo or x1 == x0:
            continue
        y_lo = y0 + (y1 - y0) * (lo - x0) / (x1 - x0)
        y_hi = y0 + (y1 - y0) * (hi - x0) / (x1 - x0)
        area += (hi - lo) * (y_lo + y_hi) / 2.0
    return area / (beta - alpha)


def exhaustive_trim_equiv(xa, xb, model: Model, loss: SurrogateLoss,
                          alpha: float, beta: float, tol: float = 1e-12) -> bool:
    """Check that the score-trimmed pairwise risk equals the risk after
    removing the instances with the largest mean pair losses.

    Selection here sorts the instance losses directly (not the scores); the
    equivalence is the defining property of the reversed-partial-AUC
    objective for monotone losses.
    """
    if not isinstance(loss, SurrogateLoss) or loss.kind not in _MONOTONE_KINDS:
        raise UnsupportedLossError("only the built-in monotone losses are supported")
    from .trainer import rpauc_empirical_risk  # the implementation under test

    fa, fb = _features_of(xa), _features_of(xb)
    sa = [straight_line_score(model, row) for row in fa]
    sb = [straight_line_score(model, row) for row in fb]
    loss_a = [
        sum(_loss_scalar(loss.kind, loss.tie_value, s - t) for t in sb) / len(sb)
        for s in sa
    ]
    loss_b = [
        sum(_loss_scalar(loss.kind, loss.tie_value, s - t) for s in sa) / len(sa)
        for t in sb
    ]
    drop_a = int(math.ceil(beta * len(sa) - 1e-9))
    drop_b = int(math.ceil(alpha * len(sb) - 1e-9))
    keep_a = [i for i in range(len(sa)) if i not in set(_top_indices(loss_a, drop_a))]
    keep_b = [j for j in range(len(sb)) if j not in set(_top_indices(loss_b, drop_b))]
    if not keep_a or not keep_b:
        raise InputError("removal empties a side")
    total = 0.0
    for i in keep_a:
        for j in keep_b:
            total += _loss_scalar(loss.kind, loss.tie_value, sa[i] - sb[j])
    removed_risk = total / (len(keep_a) * len(keep_b))
    trimmed = rpauc_empirical_risk(xa, xb, model, loss, alpha, beta).value
    return abs(removed_risk - trimmed) <= tol


def fd_gradient(model: Model, eval_fn, h: float) -> np.ndarray:
    """Central finite differences of eval_fn(model) per parameter coordinate."""
    if not h > 0.0:
        raise InputError("h must be positive")
    work = model.copy()
    base = work.params.copy()
    out = np.empty(base.size)
    for i in range(base.size):
        work.params[:] = base
        work.params[i] = base[i] + h
        f_plus = float(eval_fn(work))
        work.params[i] = base[i] - h
        f_minus = float(eval_fn(work))
        out[i] = (f_plus - f_minus) / (2.0 * h)
    return out


def mc_variance(estimator_fn, pop, sizes, rounds: int, seed: int) -> float:
    """Sample variance of estimator_fn over independent redraws.

    sizes is a sequence of (theta, n) mixture components; each round draws one
    feature array per entry from theta * p_P + (1 - theta) * p_N and passes
    them to estimator_fn positionally.
    """
    if rounds < 100:
        raise InputError("rounds must be >= 100")
    rng = np.random.default_rng(seed)
    values = []
    for _ in range(rounds):
        draws = []
        for theta, n in sizes:
            take_pos = rng.random(n) < theta
            feats = np.empty((n, pop.dim))
            n_pos = int(take_pos.sum())
            if n_pos:
                feats[take_pos] = rng.multivariate_normal(
                    pop.mean_pos, pop.cov_pos, size=n_pos, method="cholesky")
            if n - n_pos:
                feats[~take_pos] = rng.multivariate_normal(
                    pop.mean_neg, pop.cov_neg, size=n - n_pos, method="cholesky")
            draws.append(feats)
        values.append(float(estimator_fn(*draws)))
    return float(np.var(values, ddof=1))
