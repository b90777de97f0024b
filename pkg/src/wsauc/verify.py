"""Seeded identity suites behind the `verify` CLI command.

Each suite checks one distribution-level identity by exact enumeration over
random finite-support populations and reports the worst violation together
with a reproducible counterexample description.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import MixtureSpec
from .errors import DegenerateInputError
from .losses import SurrogateLoss
from .models import Model, init_model, score_batch
from .oracle import exhaustive_trim_equiv
from .risks import gamma_star_formula, recover_true_risk
from .scenarios import DiscretePopulation, enumerate_exact_risk, weighted_pair_risk

ZERO_ONE = SurrogateLoss("zero_one", tie_value=0.5)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checks: int
    max_error: float
    counterexample: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"{status} {self.name}: {self.checks} checks, max error {self.max_error:.3e}"
        if self.counterexample:
            msg += f" [{self.counterexample}]"
        return msg


def _expected_bias(a: float) -> float:
    """Bias term of the unified contaminated risk; kept as a seam for
    mutation testing of the verify command."""
    return (1.0 - a) / 2.0


def _random_population(rng: np.random.Generator, max_support: int = 20) -> DiscretePopulation:
    k = int(rng.integers(2, max_support + 1))
    dim = int(rng.integers(1, 4))
    support = rng.normal(size=(k, dim))
    if rng.random() < 0.3:
        support = np.round(support)  # force score ties to exercise the tie credit
    pw = rng.random(k) + 1e-3
    nw = rng.random(k) + 1e-3
    return DiscretePopulation(support, pw / pw.sum(), nw / nw.sum())


def _random_scorer(rng: np.random.Generator, dim: int) -> Model:
    roll = rng.random()
    if roll < 0.15:
        return Model("linear", dim, np.zeros(dim))  # all ties
    if roll < 0.55:
        return Model("linear", dim, rng.normal(size=dim))
    width = int(rng.integers(2, 6))
    return init_model("mlp1", dim, width, rng)


def _random_mixture(rng: np.random.Generator) -> MixtureSpec:
    theta_b = float(rng.uniform(0.0, 0.9))
    theta_a = float(rng.uniform(theta_b + 0.05, 1.0))
    return MixtureSpec(theta_a, theta_b)


def affine_identity_suite(draws: int = 100, seed: int = 0, tol: float = 1e-12) -> SuiteResult:
    """Contaminated risk is the affine image a * R_PN + (1 - a)/2, exactly."""
    rng = np.random.default_rng(seed)
    worst, where = 0.0, None
    for i in range(draws):
        pop = _random_population(rng)
        mix = _random_mixture(rng)
        scorer = _random_scorer(rng, pop.support.shape[1])
        r_ab, r_pn = enumerate_exact_risk(pop, mix, scorer, ZERO_ONE)
        err = abs(r_ab - (mix.a * r_pn + _expected_bias(mix.a)))
        if err > worst:
            worst, where = err, f"draw {i}: theta_a={mix.theta_a:.6f}, theta_b={mix.theta_b:.6f}"
    passed = worst <= tol
    return SuiteResult("unified-risk-identity", passed, draws, worst,
                       None if passed else where)


def argmin_suite(draws: int = 50, candidates: int = 10, seed: int = 1,
                 band: float = 1e-12) -> SuiteResult:
    """Minimizers of the contaminated risk minimize the clean risk."""
    rng = np.random.default_rng(seed)
    failures = 0
    where = None
    for i in range(draws):
        pop = _random_population(rng)
        mix = _random_mixture(rng)
        scorers = [_random_scorer(rng, pop.support.shape[1]) for _ in range(candidates)]
        r_ab = np.empty(candidates)
        r_pn = np.empty(candidates)
        for j, scorer in enumerate(scorers):
            r_ab[j], r_pn[j] = enumerate_exact_risk(pop, mix, scorer, ZERO_ONE)
        set_ab = set(np.flatnonzero(r_ab <= r_ab.min() + band).tolist())
        set_pn = set(np.flatnonzero(r_pn <= r_pn.min() + band).tolist())
        if set_ab != set_pn:
            failures += 1
            where = where or f"draw {i}: argmin {sorted(set_ab)} vs {sorted(set_pn)}"
    return SuiteResult("argmin-consistency", failures == 0, draws, float(failures), where)


_ETA_GRID = [(ep / 10.0, en / 10.0) for ep in range(1, 5) for en in range(1, 5)]


def unlabeled_sum_suite(draws: int = 100, seed: int = 2, tol: float = 1e-12,
               recover_tol: float = 1e-10) -> SuiteResult:
    """R_PU + R_UN - 1/2 = R_PN, and its label-noise variant recovered through
    the affine inverse with a = 1 - eta_P - eta_N."""
    rng = np.random.default_rng(seed)
    worst, where = 0.0, None
    for i in range(draws):
        pop = _random_population(rng)
        scorer = _random_scorer(rng, pop.support.shape[1])
        scores = score_batch(scorer, pop.support)
        pi_pos = float(rng.uniform(0.05, 0.95))
        wu = pop.mixture_weights(pi_pos)
        r_pu = weighted_pair_risk(scores, pop.pos_weights, wu, ZERO_ONE)
        r_un = weighted_pair_risk(scores, wu, pop.neg_weights, ZERO_ONE)
        r_pn = weighted_pair_risk(scores, pop.pos_weights, pop.neg_weights, ZERO_ONE)
        err = abs((r_pu + r_un - 0.5) - r_pn)
        if err > worst:
            worst, where = err, f"draw {i}: clean identity, pi_pos={pi_pos:.4f}"
        if worst > tol:
            break

        eta_p, eta_n = _ETA_GRID[i % len(_ETA_GRID)]
        wpt = pop.mixture_weights(1.0 - eta_p)
        wnt = pop.mixture_weights(eta_n)
        r_ptu = weighted_pair_risk(scores, wpt, wu, ZERO_ONE)
        r_unt = weighted_pair_risk(scores, wu, wnt, ZERO_ONE)
        recovered = recover_true_risk(r_ptu + r_unt - 0.5,
                                      MixtureSpec(1.0 - eta_p, eta_n))
        err2 = abs(recovered - r_pn)
        scaled = err2 * (tol / recover_tol)  # report on the tighter scale
        if scaled > worst:
            worst, where = scaled, f"draw {i}: noisy recovery, eta=({eta_p}, {eta_n})"
    passed = worst <= tol
    return SuiteResult("unlabeled-sum-identity", passed, draws, worst,
                       None if passed else where)


def trimming_suite(draws: int = 100, seed: int = 3) -> SuiteResult:
    """Score trimming equals top-instance-loss removal for monotone losses."""
    from .data import InstanceSet, Role

    rng = np.random.default_rng(seed)
    losses = [SurrogateLoss("squared"), SurrogateLoss("logistic"), SurrogateLoss("hinge")]
    failures, where = 0, None
    for i in range(draws):
        m = int(rng.integers(2, 21))
        n = int(rng.integers(2, 21))
        dim = int(rng.integers(1, 4))
        xa = InstanceSet(rng.uniform(-1.0, 1.0, size=(m, dim)), Role.P)
        xb = InstanceSet(rng.uniform(-1.0, 1.0, size=(n, dim)), Role.N)
        # scores stay within [-0.5, 0.5] so squared loss is nonincreasing on
        # every realized margin
        model = Model("linear", dim, rng.uniform(-0.5 / dim, 0.5 / dim, size=dim))
        alpha = float(rng.uniform(0.0, (n - 1) / n))
        beta = float(rng.uniform(0.0, (m - 1) / m))
        loss = losses[i % len(losses)]
        if not exhaustive_trim_equiv(xa, xb, model, loss, alpha, beta):
            failures += 1
            where = where or f"draw {i}: m={m}, n={n}, alpha={alpha:.4f}, beta={beta:.4f}, {loss.kind}"
    return SuiteResult("trimming-equivalence", failures == 0, draws, float(failures), where)


def gamma_formula_suite(seed: int = 4) -> SuiteResult:
    """gamma* solves its defining stationarity equation
    2 gamma (psi_pn - psi_pnu) + 2 psi_pnu = 0."""
    rng = np.random.default_rng(seed)
    checks = 0
    worst, where = 0.0, None
    if gamma_star_formula(1.0, 0.0) != 0.0:
        return SuiteResult("gamma-star-formula", False, 1, 1.0, "psi_pnu=0 should give 0")
    checks += 1
    if gamma_star_formula(1.0, 2.0) != 2.0:
        return SuiteResult("gamma-star-formula", False, 2, 1.0, "psi_pnu=2*psi_pn should give 2")
    checks += 1
    try:
        gamma_star_formula(1.0, 1.0)
        return SuiteResult("gamma-star-formula", False, 3, 1.0, "equal psis must be degenerate")
    except DegenerateInputError:
        checks += 1
    for i in range(50):
        psi_pn = float(rng.uniform(-2.0, 2.0))
        psi_pnu = float(rng.uniform(-2.0, 2.0))
        if abs(psi_pnu - psi_pn) < 1e-3:
            continue
        gstar = gamma_star_formula(psi_pn, psi_pnu)
        residual = abs(2.0 * gstar * (psi_pn - psi_pnu) + 2.0 * psi_pnu)
        checks += 1
        if residual > worst:
            worst, where = residual, f"draw {i}: psi_pn={psi_pn:.4f}, psi_pnu={psi_pnu:.4f}"
    passed = worst <= 1e-12
    return SuiteResult("gamma-star-formula", passed, checks, worst,
                       None if passed else where)


def run_all(seed: int = 0) -> list[SuiteResult]:
    return [
        affine_identity_suite(seed=seed),
        argmin_suite(seed=seed + 1),
        unlabeled_sum_suite(seed=seed + 2),
        trimming_suite(seed=seed + 3),
        gamma_formula_suite(seed=seed + 4),
    ]
