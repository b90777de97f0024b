"""Exact ranking metrics from scores: AUC, one-way and two-way partial AUC,
and the reversed two-way partial AUC used as the robust training objective.

All four share the tie convention of the zero-one ranking loss with tie value
0.5 (a tied pair counts half). AUC is computed from fractional ranks, which
equals pair enumeration exactly; the partial variants select score quantiles
with floor counts and stable index order at tied boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InputError
from .validation import as_score_vector, floor_count


@dataclass(frozen=True)
class ScorePair:
    """Scores of the positive-role and negative-role instances under one model."""

    pos_scores: np.ndarray
    neg_scores: np.ndarray

    def __post_init__(self):
        pos = as_score_vector(self.pos_scores, "pos_scores")
        neg = as_score_vector(self.neg_scores, "neg_scores")
        pos.setflags(write=False)
        neg.setflags(write=False)
        object.__setattr__(self, "pos_scores", pos)
        object.__setattr__(self, "neg_scores", neg)

    def swapped(self) -> "ScorePair":
        return ScorePair(self.neg_scores, self.pos_scores)


def _fractional_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks, ties sharing the mean rank of their block (exact halves)."""
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    high = np.cumsum(counts)
    avg = (high - counts + 1 + high) / 2.0
    return avg[inverse]


def auc_exact(sp: ScorePair) -> float:
    """Probability that a random positive outscores a random negative, ties at half.

    Mann-Whitney rank form; identical to enumerating all m*n ordered pairs.
    """
    m, n = sp.pos_scores.size, sp.neg_scores.size
    ranks = _fractional_ranks(np.concatenate([sp.pos_scores, sp.neg_scores]))
    wins = ranks[:m].sum() - m * (m + 1) / 2.0
    return wins / (m * n)


def _keep_top(scores: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k highest scores, boundary ties broken by original index,
    returned in original order."""
    order = np.argsort(-scores, kind="stable")
    return np.sort(order[:k])


def _keep_bottom(scores: np.ndarray, k: int) -> np.ndarray:
    order = np.argsort(scores, kind="stable")
    return np.sort(order[:k])


def _roc_vertices(sp: ScorePair):
    """ROC polyline vertices from (0,0) to (1,1), one per distinct score,
    descending threshold. Tied scores shared by both classes produce diagonal
    segments, i.e. half credit under trapezoidal area."""
    pos_sorted = np.sort(sp.pos_scores)
    neg_sorted = np.sort(sp.neg_scores)
    thresholds = np.unique(np.concatenate([pos_sorted, neg_sorted]))[::-1]
    m, n = pos_sorted.size, neg_sorted.size
    tp = m - np.searchsorted(pos_sorted, thresholds, side="left")
    fp = n - np.searchsorted(neg_sorted, thresholds, side="left")
    fpr = np.concatenate([[0.0], fp / n])
    tpr = np.concatenate([[0.0], tp / m])
    return fpr, tpr


def opauc_eval(sp: ScorePair, alpha: float, beta: float) -> float:
    """One-way partial AUC: area under the empirical ROC over FPR in
    [alpha, beta], normalized by the range width."""
    alpha, beta = float(alpha), float(beta)
    if not (0.0 <= alpha < beta <= 1.0):
        raise InputError(f"need 0 <= alpha < beta <= 1, got [{alpha}, {beta}]")
    fpr, tpr = _roc_vertices(sp)
    area = 0.0
    for i in range(fpr.size - 1):
        x0, x1 = fpr[i], fpr[i + 1]
        if x1 <= alpha or x0 >= beta or x1 == x0:
            continue
        lo, hi = max(x0, alpha), min(x1, beta)
        slope = (tpr[i + 1] - tpr[i]) / (x1 - x0)
        ylo = tpr[i] + slope * (lo - x0)
        yhi = tpr[i] + slope * (hi - x0)
        area += (hi - lo) * (ylo + yhi) / 2.0
    return area / (beta - alpha)


def tpauc_eval(sp: ScorePair, alpha: float, beta: float) -> float:
    """Two-way partial AUC over the region FPR <= alpha, TPR >= beta.

    Pairwise convention: ranking accuracy over the hardest instances, the
    bottom floor((1-beta)*m) positives against the top floor(alpha*n)
    negatives.
    """
    alpha, beta = float(alpha), float(beta)
    if not (0.0 < alpha <= 1.0):
        raise InputError(f"alpha must be in (0, 1], got {alpha}")
    if not (0.0 <= beta < 1.0):
        raise InputError(f"beta must be in [0, 1), got {beta}")
    m, n = sp.pos_scores.size, sp.neg_scores.size
    kp = floor_count(1.0 - beta, m)
    kn = floor_count(alpha, n)
    if kp < 1 or kn < 1:
        raise DegenerateInputError(
            f"selection empties a side: kept {kp} positives, {kn} negatives"
        )
    kept = ScorePair(
        sp.pos_scores[_keep_bottom(sp.pos_scores, kp)],
        sp.neg_scores[_keep_top(sp.neg_scores, kn)],
    )
    return auc_exact(kept)


def rpauc_trim_indices(pos_scores, neg_scores, alpha: float, beta: float):
    """Kept index sets for the reversed partial AUC: top floor((1-beta)*m)
    positives and bottom floor((1-alpha)*n) negatives, stable at ties."""
    pos_scores = as_score_vector(pos_scores, "pos_scores")
    neg_scores = as_score_vector(neg_scores, "neg_scores")
    alpha, beta = float(alpha), float(beta)
    if not (0.0 <= alpha < 1.0 and 0.0 <= beta < 1.0):
        raise InputError(f"alpha and beta must be in [0, 1), got ({alpha}, {beta})")
    kp = floor_count(1.0 - beta, pos_scores.size)
    kn = floor_count(1.0 - alpha, neg_scores.size)
    if kp < 1:
        raise DegenerateInputError(f"beta={beta} trims away every positive")
    if kn < 1:
        raise DegenerateInputError(f"alpha={alpha} trims away every negative")
    return _keep_top(pos_scores, kp), _keep_bottom(neg_scores, kn)


def rpauc_eval(sp: ScorePair, alpha: float, beta: float) -> float:
    """Reversed two-way partial AUC: one minus the mean zero-one ranking loss
    over the kept pairs after discarding the bottom-beta positives and
    top-alpha negatives by score. rpauc_eval(sp, 0, 0) == auc_exact(sp)."""
    ip, inn = rpauc_trim_indices(sp.pos_scores, sp.neg_scores, alpha, beta)
    return auc_exact(ScorePair(sp.pos_scores[ip], sp.neg_scores[inn]))
