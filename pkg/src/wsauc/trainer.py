"""Robust pairwise AUC training with periodic score-based trimming.

Each outer round re-trims every set pair with the current model (keep the
top (1-beta) fraction of the A side and the bottom (1-alpha) fraction of the
B side by score, i.e. minimize the reversed-partial-AUC surrogate risk), then
runs inner rounds of mini-batch pairwise gradient steps on the kept pools.
For monotone losses this equals removing the instances with the largest mean
pair losses, the sample-selection view of robust training. Multi-pair plans
(labeled pair plus unlabeled cross pairs) realize the gamma-weighted
semi-supervised risk through per-pair step weights.

Updates are plain constant-rate SGD so runs stay bit-reproducible; a
different optimizer would slot in at the single parameter-update line in
train().
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .data import InstanceSet, Role
from .errors import InputError, NumericalError, UnsupportedLossError
from .losses import SurrogateLoss, loss_grad, loss_value
from .metrics import rpauc_trim_indices
from .models import Model, init_model, score_batch, weighted_grad_sum
from .risks import RiskValue, pairwise_risk
from .validation import (
    as_feature_matrix,
    check_fraction,
    check_positive_int,
    floor_count,
)


class PairTerm(NamedTuple):
    role_a: Role
    role_b: Role
    weight: float


SCENARIOS = ("clean", "noisy", "pu", "mil", "ssl", "ssl_noisy")


def pair_plan_for_scenario(scenario: str, gamma: float = 0.45) -> list[PairTerm]:
    """Set pairs and step weights realizing each supervision scenario's risk."""
    gamma = check_fraction(gamma, "gamma")
    if scenario == "clean":
        return [PairTerm(Role.P, Role.N, 1.0)]
    if scenario == "noisy":
        return [PairTerm(Role.NOISY_P, Role.NOISY_N, 1.0)]
    if scenario == "pu":
        return [PairTerm(Role.P, Role.U, 1.0)]
    if scenario == "mil":
        return [PairTerm(Role.BAG_POSITIVE, Role.BAG_NEGATIVE, 1.0)]
    if scenario in ("ssl", "ssl_noisy"):
        p = Role.P if scenario == "ssl" else Role.NOISY_P
        n = Role.N if scenario == "ssl" else Role.NOISY_N
        total = gamma + 2.0 * (1.0 - gamma)
        terms = [
            PairTerm(p, n, gamma / total),
            PairTerm(p, Role.U, (1.0 - gamma) / total),
            PairTerm(Role.U, n, (1.0 - gamma) / total),
        ]
        return [t for t in terms if t.weight > 0.0]
    raise InputError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")


@dataclass
class TrainConfig:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.45
    outer_rounds: int = 50
    inner_rounds: int = 20
    batch_a: int = 64
    batch_b: int = 64
    learning_rate: float = 0.01
    seed: int = 0
    loss: SurrogateLoss = field(default_factory=SurrogateLoss)
    pair_plan: Sequence[PairTerm] = ()
    architecture: str = "linear"
    hidden_width: int = 32
    trim_cadence: str = "outer"
    warmup_rounds: int = 0

    def __post_init__(self):
        check_fraction(self.alpha, "alpha", closed_high=False)
        check_fraction(self.beta, "beta", closed_high=False)
        check_fraction(self.gamma, "gamma")
        check_positive_int(self.outer_rounds, "outer_rounds")
        check_positive_int(self.inner_rounds, "inner_rounds")
        check_positive_int(self.batch_a, "batch_a")
        check_positive_int(self.batch_b, "batch_b")
        if not self.learning_rate > 0.0:
            raise InputError("learning_rate must be positive")
        if not self.loss.differentiable:
            raise UnsupportedLossError("training requires a differentiable loss")
        if not self.pair_plan:
            raise InputError("pair_plan must not be empty")
        total = sum(t.weight for t in self.pair_plan)
        if abs(total - 1.0) > 1e-9:
            raise InputError(f"pair_plan weights must sum to 1, got {total}")
        if self.trim_cadence not in ("outer", "inner"):
            raise InputError("trim_cadence must be 'outer' or 'inner'")
        if self.warmup_rounds < 0:
            raise InputError("warmup_rounds must be >= 0")


class StepRecord(NamedTuple):
    t: int
    k: int
    pair: int
    batch_risk: float


class TrimRecord(NamedTuple):
    t: int
    k: int
    pair: int
    kept_a: int
    kept_b: int
    rpauc_risk: float
    wall_time_s: float


@dataclass
class TrainTrace:
    steps: list[StepRecord] = field(default_factory=list)
    trims: list[TrimRecord] = field(default_factory=list)
    wall_time_s: float = 0.0

    def summary(self) -> dict:
        """Deterministic digest (no wall-clock fields)."""
        last_trims = {}
        for rec in self.trims:
            last_trims[rec.pair] = rec
        return {
            "steps": len(self.steps),
            "trims": len(self.trims),
            "final_batch_risk": self.steps[-1].batch_risk if self.steps else None,
            "final_rpauc_risk": {
                str(p): r.rpauc_risk for p, r in sorted(last_trims.items())
            },
            "final_kept_sizes": {
                str(p): [r.kept_a, r.kept_b] for p, r in sorted(last_trims.items())
            },
        }


def instance_loss(x_index: int, side: str, xa: InstanceSet, xb: InstanceSet,
                  model: Model, loss: SurrogateLoss) -> float:
    """Mean pair loss of one instance against the full opposite set.

    For nonincreasing losses this is monotone in the instance's score, so
    ranking by instance loss and ranking by score select the same instances.
    """
    sa = score_batch(model, xa.features)
    sb = score_batch(model, xb.features)
    if side == "A":
        if not 0 <= x_index < len(xa):
            raise InputError(f"index {x_index} out of range for side A")
        return float(np.mean(loss_value(loss, sa[x_index] - sb)))
    if side == "B":
        if not 0 <= x_index < len(xb):
            raise InputError(f"index {x_index} out of range for side B")
        return float(np.mean(loss_value(loss, sa - sb[x_index])))
    raise InputError(f"side must be 'A' or 'B', got {side!r}")


def trim_sets(xa: InstanceSet, xb: InstanceSet, model: Model,
              alpha: float, beta: float) -> tuple[InstanceSet, InstanceSet]:
    """Keep the floor((1-beta)|A|) highest-scoring A instances and the
    floor((1-alpha)|B|) lowest-scoring B instances, stable at score ties."""
    sa = score_batch(model, xa.features)
    sb = score_batch(model, xb.features)
    ia, ib = rpauc_trim_indices(sa, sb, alpha, beta)
    return xa.take(ia), xb.take(ib)


def rpauc_empirical_risk(xa: InstanceSet, xb: InstanceSet, model: Model,
                         loss: SurrogateLoss, alpha: float, beta: float) -> RiskValue:
    """Pairwise surrogate risk over the trimmed sets (the training objective)."""
    ka, kb = trim_sets(xa, xb, model, alpha, beta)
    return pairwise_risk(ka, kb, model, loss)


def _pair_grad_and_risk(batch_a: np.ndarray, batch_b: np.ndarray,
                        model: Model, loss: SurrogateLoss):
    sa = score_batch(model, batch_a)
    sb = score_batch(model, batch_b)
    z = sa[:, None] - sb[None, :]
    g = loss_grad(loss, z)
    scale = 1.0 / z.size
    grad = scale * (
        weighted_grad_sum(model, batch_a, g.sum(axis=1))
        - weighted_grad_sum(model, batch_b, g.sum(axis=0))
    )
    return grad, float(np.mean(loss_value(loss, z)))


def batch_grad(batch_a, batch_b, model: Model, loss: SurrogateLoss) -> np.ndarray:
    """Gradient of the mean pairwise surrogate loss over the Cartesian pairs
    of the two batches with respect to the model parameters."""
    if not loss.differentiable:
        raise UnsupportedLossError("batch_grad requires a differentiable loss")
    a = as_feature_matrix(batch_a, "batch_a")
    b = as_feature_matrix(batch_b, "batch_b")
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise InputError("batches must be non-empty")
    grad, _ = _pair_grad_and_risk(a, b, model, loss)
    return grad


def bag_score(model: Model, bag) -> float:
    """Bag-level score: maximum of the member instance scores."""
    feats = as_feature_matrix(bag, "bag")
    if feats.shape[0] == 0:
        raise InputError("bag must be non-empty")
    return float(np.max(score_batch(model, feats)))


def _validate_plan(datasets: dict[Role, InstanceSet], config: TrainConfig) -> int:
    dims = set()
    for term in config.pair_plan:
        for role in (term.role_a, term.role_b):
            if role not in datasets:
                raise InputError(f"pair_plan needs role {role.value} but it was not provided")
            dims.add(datasets[role].dim)
        if floor_count(1.0 - config.beta, len(datasets[term.role_a])) < 1:
            raise InputError(f"beta={config.beta} trims away all of {term.role_a.value}")
        if floor_count(1.0 - config.alpha, len(datasets[term.role_b])) < 1:
            raise InputError(f"alpha={config.alpha} trims away all of {term.role_b.value}")
    if len(dims) != 1:
        raise InputError(f"inconsistent feature dimensions across sets: {sorted(dims)}")
    return dims.pop()


def train(datasets: dict[Role, InstanceSet], config: TrainConfig) -> tuple[Model, TrainTrace]:
    """Run the trim-then-descend loop and return the trained model and trace.

    Deterministic given the config seed: the generator stream is consumed by
    the parameter init and then by one pair of batch draws per
    (outer, inner, pair) step, in that order.
    """
    dim = _validate_plan(datasets, config)
    rng = np.random.default_rng(config.seed)
    model = init_model(config.architecture, dim, config.hidden_width, rng)
    trace = TrainTrace()
    started = time.perf_counter()

    def do_trim(t: int, k: int) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        # Selection by an untrained model can lock onto a reversed ranking,
        # so the first warmup_rounds outer rounds train on the full sets.
        warm = t < config.warmup_rounds
        kept = {}
        for idx, term in enumerate(config.pair_plan):
            tick = time.perf_counter()
            ka, kb = trim_sets(datasets[term.role_a], datasets[term.role_b],
                               model,
                               0.0 if warm else config.alpha,
                               0.0 if warm else config.beta)
            risk = pairwise_risk(ka, kb, model, config.loss).value
            trace.trims.append(TrimRecord(t, k, idx, len(ka), len(kb), risk,
                                          time.perf_counter() - tick))
            kept[idx] = (ka.features, kb.features)
        return kept

    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(config.outer_rounds):
            if config.trim_cadence == "outer":
                kept = do_trim(t, 0)
            for k in range(config.inner_rounds):
                if config.trim_cadence == "inner":
                    kept = do_trim(t, k)
                for idx, term in enumerate(config.pair_plan):
                    feats_a, feats_b = kept[idx]
                    ia = rng.choice(feats_a.shape[0],
                                    size=min(config.batch_a, feats_a.shape[0]),
                                    replace=False)
                    ib = rng.choice(feats_b.shape[0],
                                    size=min(config.batch_b, feats_b.shape[0]),
                                    replace=False)
                    grad, risk = _pair_grad_and_risk(feats_a[ia], feats_b[ib],
                                                     model, config.loss)
                    if not np.isfinite(risk):
                        raise NumericalError(f"training diverged: non-finite batch risk in round {t}")
                    model.params -= config.learning_rate * term.weight * grad
                    trace.steps.append(StepRecord(t, k, idx, risk))
            if not np.all(np.isfinite(model.params)):
                raise NumericalError(f"training diverged: non-finite parameters after round {t}")
        # closing record so the trace's final risks reflect the returned model
        do_trim(config.outer_rounds, 0)

    trace.wall_time_s = time.perf_counter() - started
    return model, trace
