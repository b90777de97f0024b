"""Paired robustness sweep: plain AUC training versus trimmed training
across a grid of contamination levels, mirrored on synthetic Gaussians.

For each grid cell (theta_a, 1 - theta_b) and repeat, the same seeds drive
two runs that differ only in the trim fractions (0, 0) versus the cell's
contamination, and both are scored on clean held-out data. The negative
class covariance is deliberately unequal to the positive one: with equal
isotropic covariances the population-optimal linear ranking direction is
unchanged by contamination and the comparison degenerates into sampling
noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import InstanceSet, Role
from .errors import ConfigError
from .losses import SurrogateLoss
from .metrics import ScorePair, auc_exact
from .models import score_batch
from .scenarios import PopulationSpec, sample_contaminated
from .trainer import PairTerm, TrainConfig, train
from .validation import floor_count

DEFAULT_GRID = [0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 1.00]


def default_population() -> PopulationSpec:
    """Best linear-ranker AUC just under 0.95; unequal covariances on purpose."""
    return PopulationSpec(
        mean_pos=[0.891, 0.429],
        cov_pos=[[1.0, 0.0], [0.0, 0.6]],
        mean_neg=[-0.891, -0.429],
        cov_neg=[[1.6, -1.0], [-1.0, 1.4]],
    )


@dataclass
class SweepConfig:
    grid: list[float] = field(default_factory=lambda: list(DEFAULT_GRID))
    repeats: int = 10
    n_pool: int = 4000
    train_fraction: float = 0.05
    n_test: int = 2000
    base_seed: int = 0
    trim_mode: str = "matched"       # matched -> (alpha, beta) = (theta_b, 1 - theta_a)
    alpha_fixed: float = 0.2
    beta_fixed: float = 0.2
    surrogate: str = "squared"
    architecture: str = "linear"
    hidden_width: int = 8
    outer_rounds: int = 30
    inner_rounds: int = 10
    batch_a: int = 32
    batch_b: int = 32
    learning_rate: float = 0.05
    warmup_rounds: int = 6
    population: PopulationSpec = field(default_factory=default_population)

    def __post_init__(self):
        if not self.grid:
            raise ConfigError("sweep grid is empty")
        if min(self.grid) <= 0.5 or max(self.grid) > 1.0:
            raise ConfigError("grid values must lie in (0.5, 1.0] so that theta_a > theta_b")
        if self.trim_mode not in ("matched", "fixed"):
            raise ConfigError("trim_mode must be 'matched' or 'fixed'")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")


def _train_auc(features_a, features_b, test_pos, test_neg, alpha, beta,
               cfg: SweepConfig, train_seed: int) -> float:
    datasets = {
        Role.P: InstanceSet(features_a, Role.P),
        Role.N: InstanceSet(features_b, Role.N),
    }
    tc = TrainConfig(
        alpha=alpha,
        beta=beta,
        outer_rounds=cfg.outer_rounds,
        inner_rounds=cfg.inner_rounds,
        batch_a=cfg.batch_a,
        batch_b=cfg.batch_b,
        learning_rate=cfg.learning_rate,
        seed=train_seed,
        loss=SurrogateLoss(cfg.surrogate),
        pair_plan=[PairTerm(Role.P, Role.N, 1.0)],
        architecture=cfg.architecture,
        hidden_width=cfg.hidden_width,
        warmup_rounds=cfg.warmup_rounds,
    )
    model, _ = train(datasets, tc)
    return auc_exact(ScorePair(score_batch(model, test_pos), score_batch(model, test_neg)))


def run_cell(cfg: SweepConfig, theta_a: float, theta_b: float, cell_index: int):
    """Per-repeat (plain AUC, trimmed AUC) pairs for one grid cell."""
    if cfg.trim_mode == "matched":
        alpha, beta = theta_b, 1.0 - theta_a
    else:
        alpha, beta = cfg.alpha_fixed, cfg.beta_fixed
    n_train = max(2, floor_count(cfg.train_fraction, cfg.n_pool))
    pairs = []
    for rep in range(cfg.repeats):
        seq = np.random.SeedSequence((cfg.base_seed, cell_index, rep))
        data_seed, train_seed = (int(s) for s in seq.generate_state(2))
        rng = np.random.default_rng(data_seed)
        pool_a, _ = sample_contaminated(cfg.population, theta_a, cfg.n_pool, rng)
        pool_b, _ = sample_contaminated(cfg.population, theta_b, cfg.n_pool, rng)
        test_pos, _ = sample_contaminated(cfg.population, 1.0, cfg.n_test, rng)
        test_neg, _ = sample_contaminated(cfg.population, 0.0, cfg.n_test, rng)
        feats_a, feats_b = pool_a[:n_train], pool_b[:n_train]
        auc_plain = _train_auc(feats_a, feats_b, test_pos, test_neg, 0.0, 0.0, cfg, train_seed)
        auc_trim = _train_auc(feats_a, feats_b, test_pos, test_neg, alpha, beta, cfg, train_seed)
        pairs.append((auc_plain, auc_trim))
    return alpha, beta, pairs


def run_sweep(cfg: SweepConfig) -> list[dict]:
    """One row per grid cell with mean/std test AUC for both objectives."""
    rows = []
    cell_index = 0
    for theta_a in cfg.grid:
        for one_minus_theta_b in cfg.grid:
            theta_b = 1.0 - one_minus_theta_b
            alpha, beta, pairs = run_cell(cfg, theta_a, theta_b, cell_index)
            plain = np.array([p for p, _ in pairs])
            trimmed = np.array([q for _, q in pairs])
            delta = trimmed - plain
            rows.append({
                "theta_a": theta_a,
                "one_minus_theta_b": one_minus_theta_b,
                "alpha": alpha,
                "beta": beta,
                "auc_plain_mean": float(plain.mean()),
                "auc_plain_std": float(plain.std(ddof=1)) if len(plain) > 1 else 0.0,
                "auc_rpauc_mean": float(trimmed.mean()),
                "auc_rpauc_std": float(trimmed.std(ddof=1)) if len(trimmed) > 1 else 0.0,
                "delta_mean": float(delta.mean()),
                "delta_std": float(delta.std(ddof=1)) if len(delta) > 1 else 0.0,
            })
            cell_index += 1
    return rows


def sweep_table(rows: list[dict]) -> str:
    cols = ["theta_a", "one_minus_theta_b", "alpha", "beta",
            "auc_plain_mean", "auc_plain_std", "auc_rpauc_mean", "auc_rpauc_std",
            "delta_mean", "delta_std"]
    lines = ["\t".join(cols)]
    for row in rows:
        lines.append("\t".join(repr(float(row[c])) for c in cols))
    return "\n".join(lines) + "\n"
