"""Role-tagged instance collections and mixture bookkeeping."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .validation import as_feature_matrix


class Role(str, enum.Enum):
    P = "P"
    N = "N"
    U = "U"
    NOISY_P = "NoisyP"
    NOISY_N = "NoisyN"
    BAG_POSITIVE = "BagPositive"
    BAG_NEGATIVE = "BagNegative"


BAG_ROLES = (Role.BAG_POSITIVE, Role.BAG_NEGATIVE)


@dataclass(frozen=True)
class InstanceSet:
    """Ordered, immutable set of feature rows sharing a supervision role.

    bag_ids must be present exactly for bag roles and cover every row.
    """

    features: np.ndarray
    role: Role
    bag_ids: np.ndarray | None = None

    def __post_init__(self):
        feats = as_feature_matrix(self.features, "features")
        if feats.shape[0] == 0:
            raise InputError(f"instance set with role {self.role.value} is empty")
        feats = feats.copy()
        feats.setflags(write=False)
        object.__setattr__(self, "features", feats)
        role = Role(self.role)
        object.__setattr__(self, "role", role)
        if role in BAG_ROLES:
            if self.bag_ids is None:
                raise InputError(f"role {role.value} requires bag_ids")
            ids = np.asarray(self.bag_ids, dtype=np.int64).ravel()
            if ids.size != feats.shape[0]:
                raise InputError("bag_ids must cover every instance")
            ids = ids.copy()
            ids.setflags(write=False)
            object.__setattr__(self, "bag_ids", ids)
        elif self.bag_ids is not None:
            raise InputError(f"role {role.value} does not take bag_ids")

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def take(self, indices) -> "InstanceSet":
        idx = np.asarray(indices, dtype=np.int64)
        bag = self.bag_ids[idx] if self.bag_ids is not None else None
        return InstanceSet(self.features[idx], self.role, bag)


@dataclass(frozen=True)
class MixtureSpec:
    """Contamination proportions of two sets sampled from mixtures of the
    positive and negative distributions, theta_a > theta_b by convention.

    a = theta_a - theta_b is the attenuation of the true ranking risk and
    b = (1 - a)/2 the induced bias: contaminated risk = a * true risk + b.
    """

    theta_a: float
    theta_b: float

    def __post_init__(self):
        ta, tb = float(self.theta_a), float(self.theta_b)
        if not (0.0 <= tb < ta <= 1.0):
            raise InputError(
                f"need 0 <= theta_b < theta_a <= 1, got theta_a={ta}, theta_b={tb}"
            )
        object.__setattr__(self, "theta_a", ta)
        object.__setattr__(self, "theta_b", tb)

    @property
    def a(self) -> float:
        return self.theta_a - self.theta_b

    @property
    def b(self) -> float:
        return (1.0 - self.a) / 2.0
