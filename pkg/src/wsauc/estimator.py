"""Scikit-learn style front end for the weakly supervised AUC trainer."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .data import InstanceSet, Role
from .errors import InputError
from .losses import SurrogateLoss
from .metrics import ScorePair, auc_exact
from .models import score_batch
from .trainer import SCENARIOS, TrainConfig, bag_score, pair_plan_for_scenario, train
from .validation import as_feature_matrix


def datasets_from_labels(scenario: str, x: np.ndarray, y: np.ndarray,
                         bag_ids=None) -> dict[Role, InstanceSet]:
    """Group feature rows into role-tagged sets from {-1, 0, +1} labels."""
    y = np.asarray(y).ravel()
    if y.shape[0] != x.shape[0]:
        raise InputError("X and y must have the same length")
    labels = set(np.unique(y).tolist())
    if not labels <= {-1, 0, 1}:
        raise InputError(f"labels must be in {{-1, 0, +1}}, got {sorted(labels)}")

    def subset(mask, role, with_bags=False):
        if not mask.any():
            raise InputError(f"scenario {scenario!r} needs instances for role {role.value}")
        ids = None
        if with_bags:
            if bag_ids is None:
                raise InputError("mil scenario requires bag_ids")
            ids = np.asarray(bag_ids).ravel()[mask]
        return InstanceSet(x[mask], role, ids)

    if scenario == "clean":
        return {Role.P: subset(y == 1, Role.P), Role.N: subset(y == -1, Role.N)}
    if scenario == "noisy":
        return {Role.NOISY_P: subset(y == 1, Role.NOISY_P),
                Role.NOISY_N: subset(y == -1, Role.NOISY_N)}
    if scenario == "pu":
        return {Role.P: subset(y == 1, Role.P), Role.U: subset(y == 0, Role.U)}
    if scenario == "ssl":
        return {Role.P: subset(y == 1, Role.P), Role.N: subset(y == -1, Role.N),
                Role.U: subset(y == 0, Role.U)}
    if scenario == "ssl_noisy":
        return {Role.NOISY_P: subset(y == 1, Role.NOISY_P),
                Role.NOISY_N: subset(y == -1, Role.NOISY_N),
                Role.U: subset(y == 0, Role.U)}
    if scenario == "mil":
        return {Role.BAG_POSITIVE: subset(y == 1, Role.BAG_POSITIVE, with_bags=True),
                Role.BAG_NEGATIVE: subset(y == -1, Role.BAG_NEGATIVE, with_bags=True)}
    raise InputError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")


class WSAUCRanker(BaseEstimator):
    """Bipartite ranker trained on weakly supervised labels.

    Labels in y encode the supervision: +1 and -1 are the (possibly noisy)
    labeled classes, 0 marks unlabeled instances. Which roles are expected is
    set by `scenario`:

    - "clean":     +1 / -1 labeled instances
    - "noisy":     +1 / -1 labels that may be flipped; trimming (alpha, beta)
                   discards the suspected flips each round
    - "pu":        +1 labeled positives and 0 unlabeled
    - "ssl":       +1 / -1 / 0, mixed with weight gamma
    - "ssl_noisy": as ssl with noisy labels
    - "mil":       +1 / -1 bag labels per instance plus bag_ids in fit

    After fitting, `decision_function` returns ranking scores (higher means
    more positive) and `score` the AUC against clean +1/-1 labels.
    """

    def __init__(self, scenario="clean", surrogate="squared", architecture="linear",
                 hidden_width=32, alpha=0.0, beta=0.0, gamma=0.45,
                 outer_rounds=50, inner_rounds=20, batch_a=64, batch_b=64,
                 learning_rate=0.01, trim_cadence="outer", warmup_rounds=0,
                 random_state=0):
        self.scenario = scenario
        self.surrogate = surrogate
        self.architecture = architecture
        self.hidden_width = hidden_width
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        self.outer_rounds = outer_rounds
        self.inner_rounds = inner_rounds
        self.batch_a = batch_a
        self.batch_b = batch_b
        self.learning_rate = learning_rate
        self.trim_cadence = trim_cadence
        self.warmup_rounds = warmup_rounds
        self.random_state = random_state

    def fit(self, X, y, bag_ids=None):
        x = as_feature_matrix(X)
        datasets = datasets_from_labels(self.scenario, x, y, bag_ids)
        config = TrainConfig(
            alpha=self.alpha,
            beta=self.beta,
            gamma=self.gamma,
            outer_rounds=self.outer_rounds,
            inner_rounds=self.inner_rounds,
            batch_a=self.batch_a,
            batch_b=self.batch_b,
            learning_rate=self.learning_rate,
            seed=self.random_state,
            loss=SurrogateLoss(self.surrogate),
            pair_plan=pair_plan_for_scenario(self.scenario, self.gamma),
            architecture=self.architecture,
            hidden_width=self.hidden_width,
            trim_cadence=self.trim_cadence,
            warmup_rounds=self.warmup_rounds,
        )
        self.model_, self.trace_ = train(datasets, config)
        self.n_features_in_ = x.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("this WSAUCRanker instance is not fitted yet")

    def decision_function(self, X) -> np.ndarray:
        self._check_fitted()
        return score_batch(self.model_, as_feature_matrix(X))

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0.0, 1, -1)

    def score(self, X, y) -> float:
        """AUC of the decision scores against clean +1/-1 labels."""
        scores = self.decision_function(X)
        y = np.asarray(y).ravel()
        return auc_exact(ScorePair(scores[y == 1], scores[y == -1]))

    def bag_decision_function(self, X, bag_ids) -> tuple[np.ndarray, np.ndarray]:
        """Max instance score per bag; returns (unique bag ids, bag scores)."""
        self._check_fitted()
        x = as_feature_matrix(X)
        ids = np.asarray(bag_ids).ravel()
        uniq = np.unique(ids)
        scores = np.array([bag_score(self.model_, x[ids == b]) for b in uniq])
        return uniq, scores
