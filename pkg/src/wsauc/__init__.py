"""Weakly supervised AUC optimization toolkit.

Pairwise AUC risk estimators for contaminated, positive-unlabeled, bag-level
and semi-supervised data, the affine risk correction and variance-optimal
mixing weight, ranking metrics (AUC and partial variants), and a robust
trainer that trims suspected contaminants each round.
"""

from .data import InstanceSet, MixtureSpec, Role
from .errors import (
    ConfigError,
    DataError,
    DegenerateInputError,
    InputError,
    NumericalError,
    UnsupportedLossError,
    WsaucError,
)
from .estimator import WSAUCRanker, datasets_from_labels
from .losses import SurrogateLoss, loss_grad, loss_value
from .metrics import ScorePair, auc_exact, opauc_eval, rpauc_eval, tpauc_eval
from .models import Model, init_model, score, score_batch, score_grad
from .risks import (
    GammaEstimate,
    RiskValue,
    gamma_star_formula,
    noisy_pnu_risk,
    pairwise_risk,
    pnu_risk,
    pu_risk,
    recover_true_risk,
    variance_optimal_gamma,
)
from .scenarios import (
    DiscretePopulation,
    PopulationSpec,
    corrupt_noisy,
    enumerate_exact_risk,
    make_mil,
    make_pu,
    make_ssl,
    sample_clean,
)
from .trainer import (
    PairTerm,
    TrainConfig,
    TrainTrace,
    bag_score,
    batch_grad,
    instance_loss,
    pair_plan_for_scenario,
    rpauc_empirical_risk,
    train,
    trim_sets,
)

__version__ = "0.1.0"

__all__ = [
    "InstanceSet", "MixtureSpec", "Role", "SurrogateLoss", "Model", "ScorePair",
    "WSAUCRanker", "datasets_from_labels",
    "loss_value", "loss_grad", "score", "score_batch", "score_grad", "init_model",
    "auc_exact", "opauc_eval", "tpauc_eval", "rpauc_eval",
    "RiskValue", "GammaEstimate", "pairwise_risk", "recover_true_risk",
    "pu_risk", "pnu_risk", "noisy_pnu_risk", "variance_optimal_gamma",
    "gamma_star_formula",
    "PopulationSpec", "DiscretePopulation", "sample_clean", "corrupt_noisy",
    "make_pu", "make_ssl", "make_mil", "enumerate_exact_risk",
    "PairTerm", "TrainConfig", "TrainTrace", "pair_plan_for_scenario",
    "instance_loss", "trim_sets", "rpauc_empirical_risk", "batch_grad",
    "train", "bag_score",
    "WsaucError", "ConfigError", "InputError", "DataError",
    "DegenerateInputError", "UnsupportedLossError", "NumericalError",
]
