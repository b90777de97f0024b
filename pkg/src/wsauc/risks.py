"""Empirical pairwise ranking risks for clean and contaminated instance sets.

The central fact: the pairwise zero-one risk over two sets drawn from
mixtures of the positive and negative distributions with proportions
theta_a > theta_b is an affine image of the clean risk,

    R_AB = a * R_PN + (1 - a) / 2,      a = theta_a - theta_b,

so minimizing the contaminated risk minimizes the clean one, and the clean
value can be recovered by inverting the affine map. The positive-unlabeled,
bag-union and label-noise risks are instances with the Table coefficients
a = pi_N, a = 1 - eta_P and a = 1 - eta_P - eta_N respectively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import InstanceSet, MixtureSpec, Role
from .errors import DegenerateInputError, InputError
from .losses import SurrogateLoss, loss_value
from .models import Model, score_batch
from .validation import check_fraction

_PAIR_TAGS = {
    (Role.P, Role.N): "pn",
    (Role.NOISY_P, Role.NOISY_N): "noisy_pn",
    (Role.P, Role.U): "pu",
    (Role.U, Role.N): "un",
    (Role.NOISY_P, Role.U): "noisy_pu",
    (Role.U, Role.NOISY_N): "noisy_un",
    (Role.BAG_POSITIVE, Role.BAG_NEGATIVE): "mil",
}


@dataclass(frozen=True)
class RiskValue:
    value: float
    pair_count: int
    scenario: str


@dataclass(frozen=True)
class GammaEstimate:
    """Variance components of the gamma-mixed risk and the optimal weight.

    gamma_star is the raw minimizer psi_pnu / (psi_pnu - psi_pn);
    gamma_recommended clamps it to [0, 1] for use as a training weight.
    """

    psi_pn: float
    psi_pnu: float
    gamma_star: float
    gamma_recommended: float


def loss_matrix(xa: InstanceSet, xb: InstanceSet, model: Model, loss: SurrogateLoss) -> np.ndarray:
    """Surrogate loss of every ordered pair (row from xa, column from xb)."""
    sa = score_batch(model, xa.features)
    sb = score_batch(model, xb.features)
    return loss_value(loss, sa[:, None] - sb[None, :])


def pairwise_risk(xa: InstanceSet, xb: InstanceSet, model: Model, loss: SurrogateLoss) -> RiskValue:
    """Mean loss over all |xa| * |xb| ordered pairs."""
    mat = loss_matrix(xa, xb, model, loss)
    tag = _PAIR_TAGS.get((xa.role, xb.role), f"{xa.role.value}-{xb.role.value}")
    return RiskValue(float(mat.mean()), mat.size, tag)


def recover_true_risk(r_ab: float, spec: MixtureSpec) -> float:
    """Invert the affine contamination map: (r_ab - b) / a."""
    if spec.a <= 0.0:
        raise InputError("mixture coefficient a must be positive")
    return (float(r_ab) - spec.b) / spec.a


def pu_risk(xp: InstanceSet, xu: InstanceSet, model: Model, loss: SurrogateLoss) -> RiskValue:
    """Positive-vs-unlabeled risk, i.e. treating the unlabeled pool as negatives."""
    out = pairwise_risk(xp, xu, model, loss)
    return RiskValue(out.value, out.pair_count, "pu")


def _pnu_combination(xp, xn, xu, model, loss, gamma, scenario):
    gamma = check_fraction(gamma, "gamma")
    r_pn = pairwise_risk(xp, xn, model, loss)
    if gamma == 1.0:
        return RiskValue(r_pn.value, r_pn.pair_count, scenario)
    if xu is None:
        raise InputError("an unlabeled set is required when gamma < 1")
    r_pu = pairwise_risk(xp, xu, model, loss)
    r_un = pairwise_risk(xu, xn, model, loss)
    value = gamma * r_pn.value + (1.0 - gamma) * (r_pu.value + r_un.value - 0.5)
    pairs = r_pn.pair_count + r_pu.pair_count + r_un.pair_count
    return RiskValue(float(value), pairs, scenario)


def pnu_risk(xp: InstanceSet, xn: InstanceSet, xu: InstanceSet | None,
             model: Model, loss: SurrogateLoss, gamma: float) -> RiskValue:
    """gamma-weighted mix of the labeled-pair risk with the unbiased
    unlabeled combination R_PU + R_UN - 1/2 (the -1/2 keeps the estimate
    unbiased; it is constant in the model)."""
    return _pnu_combination(xp, xn, xu, model, loss, gamma, "pnu")


def noisy_pnu_risk(xpt: InstanceSet, xnt: InstanceSet, xu: InstanceSet | None,
                   model: Model, loss: SurrogateLoss, gamma: float) -> RiskValue:
    """Same combination over noisy labeled sets; attenuated by a = 1 - eta_P - eta_N."""
    return _pnu_combination(xpt, xnt, xu, model, loss, gamma, "noisy_pnu")


def gamma_star_formula(psi_pn: float, psi_pnu: float) -> float:
    """Minimizer of gamma^2 * psi_pn + 2 gamma (1 - gamma) * psi_pnu."""
    denom = psi_pnu - psi_pn
    if denom == 0.0:
        raise DegenerateInputError("psi_pnu equals psi_pn; gamma* is undefined")
    return psi_pnu / denom + 0.0  # normalize -0.0


def _psi_terms(lpn: np.ndarray, lpu: np.ndarray, lun: np.ndarray):
    n_p, n_n = lpn.shape
    r_pn, r_pu, r_un = lpn.mean(), lpu.mean(), lun.mean()
    sigma2_pn = lpn.var()
    # Hájek pairing: covariances couple losses sharing an instance of the
    # labeled sets; terms of order 1/n_U are dropped (n_U -> infinity).
    tau_pn_pu = float(np.mean(lpn.mean(axis=1) * lpu.mean(axis=1)) - r_pn * r_pu)
    tau_pn_un = float(np.mean(lpn.mean(axis=0) * lun.mean(axis=0)) - r_pn * r_un)
    psi_pn = float(sigma2_pn) / (n_p * n_n)
    psi_pnu = tau_pn_pu / n_p + tau_pn_un / n_n
    return psi_pn, psi_pnu, float(sigma2_pn)


def variance_optimal_gamma(xpt: InstanceSet, xnt: InstanceSet, xu: InstanceSet,
                           model: Model, loss: SurrogateLoss,
                           bootstrap_rounds: int = 0, seed: int = 0) -> GammaEstimate:
    """Estimate the variance-minimizing mixing weight for a fixed model.

    Plug-in moments of the pairwise loss matrices give psi_pn (variance of the
    labeled-pair risk) and psi_pnu (shared-instance covariance terms); the
    optimal weight is psi_pnu / (psi_pnu - psi_pn). With bootstrap_rounds > 0
    the psi terms are averaged over that many seeded bootstrap resamples.
    """
    lpn = loss_matrix(xpt, xnt, model, loss)
    lpu = loss_matrix(xpt, xu, model, loss)
    lun = loss_matrix(xu, xnt, model, loss)
    psi_pn, psi_pnu, sigma2 = _psi_terms(lpn, lpu, lun)
    if sigma2 == 0.0:
        raise DegenerateInputError("all pair losses are equal; variance is degenerate")
    if bootstrap_rounds > 0:
        rng = np.random.default_rng(seed)
        acc_pn, acc_pnu = [], []
        for _ in range(bootstrap_rounds):
            ip = rng.integers(0, lpn.shape[0], size=lpn.shape[0])
            inn = rng.integers(0, lpn.shape[1], size=lpn.shape[1])
            iu = rng.integers(0, lpu.shape[1], size=lpu.shape[1])
            p1, p2, _ = _psi_terms(lpn[np.ix_(ip, inn)], lpu[np.ix_(ip, iu)],
                                   lun[np.ix_(iu, inn)])
            acc_pn.append(p1)
            acc_pnu.append(p2)
        psi_pn = float(np.mean(acc_pn))
        psi_pnu = float(np.mean(acc_pnu))
    gstar = gamma_star_formula(psi_pn, psi_pnu)
    return GammaEstimate(psi_pn, psi_pnu, gstar, float(min(max(gstar, 0.0), 1.0)))
