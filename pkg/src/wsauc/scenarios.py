"""Synthetic populations and weak-supervision corruption.

Gaussian class-conditional populations stand in for real benchmarks at desk
scale; finite-support discrete populations allow probability-weighted pair
enumeration, which turns the distribution-level risk identities into exact
(machine-precision) checks instead of Monte-Carlo ones.

Every generator is deterministic given its seed and records the realized
contamination of its outputs, so the mixture coefficients can be verified
against counts rather than against the requested rates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import InstanceSet, MixtureSpec, Role
from .errors import DegenerateInputError, InputError
from .losses import SurrogateLoss, loss_value
from .models import Model, score_batch
from .validation import (
    as_feature_matrix,
    ceil_count,
    check_fraction,
    check_positive_int,
    floor_count,
)


@dataclass(frozen=True)
class PopulationSpec:
    """Two Gaussian class conditionals plus the positive class prior."""

    mean_pos: np.ndarray
    cov_pos: np.ndarray
    mean_neg: np.ndarray
    cov_neg: np.ndarray
    pi_pos: float = 0.5

    def __post_init__(self):
        mp = np.asarray(self.mean_pos, dtype=np.float64).ravel()
        mn = np.asarray(self.mean_neg, dtype=np.float64).ravel()
        if mp.size != mn.size or mp.size == 0:
            raise InputError("class means must share a positive dimension")
        cp = _check_cov(self.cov_pos, mp.size, "cov_pos")
        cn = _check_cov(self.cov_neg, mp.size, "cov_neg")
        if not 0.0 < self.pi_pos < 1.0:
            raise InputError(f"pi_pos must be in (0, 1), got {self.pi_pos}")
        for name, arr in (("mean_pos", mp), ("cov_pos", cp), ("mean_neg", mn), ("cov_neg", cn)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.mean_pos.size


def _check_cov(cov, dim: int, name: str) -> np.ndarray:
    arr = np.asarray(cov, dtype=np.float64)
    if arr.ndim == 0:
        arr = float(arr) * np.eye(dim)
    if arr.shape != (dim, dim):
        raise InputError(f"{name} must be {dim}x{dim} or a scalar")
    if not np.allclose(arr, arr.T, atol=1e-12):
        raise InputError(f"{name} must be symmetric")
    try:
        np.linalg.cholesky(arr)
    except np.linalg.LinAlgError:
        raise InputError(f"{name} must be positive definite") from None
    return arr


def _draw(pop: PopulationSpec, positive: bool, n: int, rng: np.random.Generator) -> np.ndarray:
    mean = pop.mean_pos if positive else pop.mean_neg
    cov = pop.cov_pos if positive else pop.cov_neg
    return rng.multivariate_normal(mean, cov, size=n, method="cholesky")


def sample_clean(pop: PopulationSpec, n_p: int, n_n: int, seed: int) -> tuple[InstanceSet, InstanceSet]:
    """Draw labeled samples from the two class conditionals."""
    check_positive_int(n_p, "n_p")
    check_positive_int(n_n, "n_n")
    rng = np.random.default_rng(seed)
    xp = InstanceSet(_draw(pop, True, n_p, rng), Role.P)
    xn = InstanceSet(_draw(pop, False, n_n, rng), Role.N)
    return xp, xn


def sample_contaminated(pop: PopulationSpec, theta: float, n: int,
                        rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw n points from theta * p_P + (1 - theta) * p_N; also return the
    latent component indicator (True where the point came from p_P)."""
    check_fraction(theta, "theta")
    check_positive_int(n, "n")
    is_pos = rng.random(n) < theta
    out = np.empty((n, pop.dim))
    n_pos = int(is_pos.sum())
    if n_pos:
        out[is_pos] = _draw(pop, True, n_pos, rng)
    if n - n_pos:
        out[~is_pos] = _draw(pop, False, n - n_pos, rng)
    return out, is_pos


@dataclass(frozen=True)
class NoisySplit:
    noisy_pos: InstanceSet
    noisy_neg: InstanceSet
    mixture: MixtureSpec
    eta_pos_realized: float   # wrong-class fraction inside noisy_pos
    eta_neg_realized: float   # wrong-class fraction inside noisy_neg

    def coefficient_a(self) -> float:
        """Attenuation from the label-noise row: a = 1 - eta_P - eta_N."""
        return 1.0 - self.eta_pos_realized - self.eta_neg_realized


def corrupt_noisy(xp: InstanceSet, xn: InstanceSet, eta_p: float, eta_n: float,
                  seed: int) -> NoisySplit:
    """Flip each instance's label independently (positives with probability
    eta_p, negatives with eta_n) and regroup by the observed label."""
    check_fraction(eta_p, "eta_p", closed_high=False)
    check_fraction(eta_n, "eta_n", closed_high=False)
    if eta_p >= 0.5 or eta_n >= 0.5:
        raise InputError("per-class noise rates must be below 0.5")
    if eta_p + eta_n >= 0.5:
        warnings.warn("eta_p + eta_n >= 0.5: consistency holds only through the "
                      "general mixture form", stacklevel=2)
    rng = np.random.default_rng(seed)
    flip_p = rng.random(len(xp)) < eta_p
    flip_n = rng.random(len(xn)) < eta_n
    pos_feats = np.concatenate([xp.features[~flip_p], xn.features[flip_n]])
    neg_feats = np.concatenate([xn.features[~flip_n], xp.features[flip_p]])
    if pos_feats.shape[0] == 0 or neg_feats.shape[0] == 0:
        raise DegenerateInputError("label flipping emptied one of the noisy sets")
    eta_pos = int(flip_n.sum()) / pos_feats.shape[0]
    eta_neg = int(flip_p.sum()) / neg_feats.shape[0]
    theta_a = 1.0 - eta_pos
    theta_b = eta_neg
    if theta_a <= theta_b:
        raise DegenerateInputError(
            f"realized contamination inverted the sets (theta_a={theta_a}, theta_b={theta_b})"
        )
    return NoisySplit(
        InstanceSet(pos_feats, Role.NOISY_P),
        InstanceSet(neg_feats, Role.NOISY_N),
        MixtureSpec(theta_a, theta_b),
        eta_pos,
        eta_neg,
    )


@dataclass(frozen=True)
class PuSplit:
    labeled_pos: InstanceSet
    unlabeled: InstanceSet
    mixture: MixtureSpec
    pi_pos_realized: float
    pi_neg_realized: float

    def coefficient_a(self) -> float:
        """Positive-unlabeled row: a = pi_N."""
        return self.pi_neg_realized


def make_pu(xp: InstanceSet, xn: InstanceSet, label_ratio: float, seed: int) -> PuSplit:
    """Keep a label_ratio fraction of the positives as labeled; pool the rest
    with all negatives into a shuffled unlabeled set."""
    check_fraction(label_ratio, "label_ratio", closed_low=False)
    rng = np.random.default_rng(seed)
    n_lab = floor_count(label_ratio, len(xp))
    if n_lab < 1:
        raise InputError(f"label_ratio={label_ratio} labels zero positives")
    perm = rng.permutation(len(xp))
    labeled = xp.features[np.sort(perm[:n_lab])]
    rest = xp.features[np.sort(perm[n_lab:])]
    pool = np.concatenate([rest, xn.features])
    if pool.shape[0] == 0:
        raise DegenerateInputError("unlabeled pool is empty")
    pool = pool[rng.permutation(pool.shape[0])]
    pi_pos = rest.shape[0] / pool.shape[0]
    pi_neg = 1.0 - pi_pos
    return PuSplit(
        InstanceSet(labeled, Role.P),
        InstanceSet(pool, Role.U),
        MixtureSpec(1.0, pi_pos),
        pi_pos,
        pi_neg,
    )


@dataclass(frozen=True)
class SslSplit:
    labeled_pos: InstanceSet
    labeled_neg: InstanceSet
    unlabeled: InstanceSet
    pi_pos_realized: float


def make_ssl(xp: InstanceSet, xn: InstanceSet, label_ratio: float, seed: int) -> SslSplit:
    """Label a label_ratio fraction of each class; pool the rest, shuffled."""
    check_fraction(label_ratio, "label_ratio", closed_low=False)
    rng = np.random.default_rng(seed)
    n_lab_p = floor_count(label_ratio, len(xp))
    n_lab_n = floor_count(label_ratio, len(xn))
    if n_lab_p < 1 or n_lab_n < 1:
        raise InputError(f"label_ratio={label_ratio} labels zero instances of a class")
    perm_p = rng.permutation(len(xp))
    perm_n = rng.permutation(len(xn))
    rest_p = xp.features[np.sort(perm_p[n_lab_p:])]
    rest_n = xn.features[np.sort(perm_n[n_lab_n:])]
    pool = np.concatenate([rest_p, rest_n])
    if pool.shape[0] == 0:
        raise DegenerateInputError("unlabeled pool is empty")
    pool = pool[rng.permutation(pool.shape[0])]
    return SslSplit(
        InstanceSet(xp.features[np.sort(perm_p[:n_lab_p])], Role.P),
        InstanceSet(xn.features[np.sort(perm_n[:n_lab_n])], Role.N),
        InstanceSet(pool, Role.U),
        rest_p.shape[0] / pool.shape[0],
    )


@dataclass(frozen=True)
class MilData:
    pos_bags: tuple[np.ndarray, ...]
    neg_bags: tuple[np.ndarray, ...]
    union_pos: InstanceSet
    union_neg: InstanceSet
    mixture: MixtureSpec
    witness_per_bag: int
    eta_pos_realized: float   # negative fraction inside the positive-bag union

    def coefficient_a(self) -> float:
        """Bag-union row: a = 1 - eta_P."""
        return 1.0 - self.eta_pos_realized


def make_mil(xp: InstanceSet, xn: InstanceSet, n_pos_bags: int, n_neg_bags: int,
             bag_size: int, witness_rate: float, seed: int) -> MilData:
    """Build bags: every positive bag gets ceil(witness_rate * bag_size) >= 1
    positives topped up with negatives; negative bags are purely negative.
    Instances are consumed without replacement."""
    check_positive_int(n_pos_bags, "n_pos_bags")
    check_positive_int(n_neg_bags, "n_neg_bags")
    check_positive_int(bag_size, "bag_size")
    check_fraction(witness_rate, "witness_rate", closed_low=False)
    witnesses = max(1, ceil_count(witness_rate, bag_size))
    if witnesses > bag_size:
        witnesses = bag_size
    need_pos = n_pos_bags * witnesses
    need_neg = n_pos_bags * (bag_size - witnesses) + n_neg_bags * bag_size
    if need_pos > len(xp) or need_neg > len(xn):
        raise InputError(
            f"insufficient instances: need {need_pos} positives and {need_neg} "
            f"negatives, have {len(xp)} and {len(xn)}"
        )
    rng = np.random.default_rng(seed)
    pos_pool = xp.features[rng.permutation(len(xp))]
    neg_pool = xn.features[rng.permutation(len(xn))]
    pos_bags, neg_bags = [], []
    p_at = n_at = 0
    for _ in range(n_pos_bags):
        members = np.concatenate([
            pos_pool[p_at : p_at + witnesses],
            neg_pool[n_at : n_at + bag_size - witnesses],
        ])
        pos_bags.append(members[rng.permutation(bag_size)])
        p_at += witnesses
        n_at += bag_size - witnesses
    for _ in range(n_neg_bags):
        neg_bags.append(neg_pool[n_at : n_at + bag_size].copy())
        n_at += bag_size
    union_pos = np.concatenate(pos_bags)
    union_neg = np.concatenate(neg_bags)
    ids_pos = np.repeat(np.arange(n_pos_bags), bag_size)
    ids_neg = np.repeat(np.arange(n_pos_bags, n_pos_bags + n_neg_bags), bag_size)
    eta_pos = (n_pos_bags * (bag_size - witnesses)) / union_pos.shape[0]
    return MilData(
        tuple(pos_bags),
        tuple(neg_bags),
        InstanceSet(union_pos, Role.BAG_POSITIVE, ids_pos),
        InstanceSet(union_neg, Role.BAG_NEGATIVE, ids_neg),
        MixtureSpec(1.0 - eta_pos, 0.0),
        witnesses,
        eta_pos,
    )


@dataclass(frozen=True)
class DiscretePopulation:
    """Class conditionals with shared finite support, for exact enumeration."""

    support: np.ndarray
    pos_weights: np.ndarray
    neg_weights: np.ndarray

    def __post_init__(self):
        sup = as_feature_matrix(self.support, "support")
        pw = _check_weights(self.pos_weights, sup.shape[0], "pos_weights")
        nw = _check_weights(self.neg_weights, sup.shape[0], "neg_weights")
        for name, arr in (("support", sup), ("pos_weights", pw), ("neg_weights", nw)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def mixture_weights(self, theta: float) -> np.ndarray:
        return theta * self.pos_weights + (1.0 - theta) * self.neg_weights


def _check_weights(w, k: int, name: str) -> np.ndarray:
    arr = np.asarray(w, dtype=np.float64).ravel()
    if arr.size != k:
        raise InputError(f"{name} must match the support size {k}")
    if np.any(arr < 0.0):
        raise InputError(f"{name} must be nonnegative")
    total = arr.sum()
    if not np.isclose(total, 1.0, atol=1e-9):
        raise InputError(f"{name} must sum to 1, got {total}")
    return arr


def weighted_pair_risk(scores: np.ndarray, wa: np.ndarray, wb: np.ndarray,
                       loss: SurrogateLoss) -> float:
    """Probability-weighted double sum of the pair loss over a shared support."""
    lmat = loss_value(loss, scores[:, None] - scores[None, :])
    return float(wa @ lmat @ wb)


def enumerate_exact_risk(pop: DiscretePopulation, mixture: MixtureSpec,
                         scorer: Model, loss: SurrogateLoss) -> tuple[float, float]:
    """Exact (r_ab, r_pn) for the contaminated pair (theta_a, theta_b mixtures)
    and the clean pair, by enumeration over the support."""
    scores = score_batch(scorer, pop.support)
    wa = pop.mixture_weights(mixture.theta_a)
    wb = pop.mixture_weights(mixture.theta_b)
    r_ab = weighted_pair_risk(scores, wa, wb, loss)
    r_pn = weighted_pair_risk(scores, pop.pos_weights, pop.neg_weights, loss)
    return r_ab, r_pn
