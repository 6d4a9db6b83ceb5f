"""
RPCASuite: A Zincwarecode package.

License
-------
This program and the accompanying materials are made available under the terms
of the Eclipse Public License v2.0 which accompanies this distribution, and is
available at https://www.eclipse.org/legal/epl-v20.html

SPDX-License-Identifier: EPL-2.0

Copyright Contributors to the Zincwarecode Project.

Summary
-------
Problem instances Y = X* + S* and the corruption models that produce them.
"""
import enum
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from rpcasuite.solver.losses import validate_mask
from rpcasuite.tensor import RankTriple, as_tensor3
from rpcasuite.utils.exceptions import ConfigurationError, ShapeMismatchError

CONSISTENCY_TOLERANCE = 1e-12


class SparsityKind(enum.Enum):
    """How corrupted entries are placed."""

    BERNOULLI = "bernoulli"
    PER_FIBER = "per-fiber"


@dataclass(frozen=True)
class SparsityModel:
    """
    Corruption placement.

    Attributes
    ----------
    kind : SparsityKind
            BERNOULLI corrupts every entry independently with probability alpha.
            PER_FIBER corrupts exactly floor(alpha * n_mode) entries of every
            mode-`mode` fiber.
    alpha : float
            Corruption level in [0, 1).
    mode : int
            Fiber mode of the PER_FIBER model.
    """

    kind: SparsityKind
    alpha: float
    mode: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", SparsityKind(self.kind))
        if not 0.0 <= self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.mode not in (1, 2, 3):
            raise ConfigurationError(f"Fiber mode must be 1, 2 or 3, got {self.mode}")

    @classmethod
    def entrywise(cls, alpha: float) -> "SparsityModel":
        return cls(SparsityKind.BERNOULLI, alpha)

    @classmethod
    def per_fiber(cls, alpha: float, mode: int = 1) -> "SparsityModel":
        return cls(SparsityKind.PER_FIBER, alpha, mode)

    def describe(self) -> str:
        if self.kind is SparsityKind.BERNOULLI:
            return self.kind.value
        return f"{self.kind.value}:{self.mode}"


@dataclass(frozen=True)
class InstanceMeta:
    """Generator settings of a synthetic instance."""

    n: int
    rank: int
    alpha: float
    kappa: float
    seed: int
    theta: float = 0.0
    model: str = SparsityKind.BERNOULLI.value

    def as_dict(self) -> dict:
        return asdict(self)


def mask_from_support(sparse: np.ndarray) -> np.ndarray:
    """Binary foreground mask marking the nonzero entries of a sparse tensor."""
    return (np.asarray(sparse) != 0.0).astype(np.float64)


@dataclass(frozen=True)
class RpcaInstance:
    """
    Observation with optional labels.

    Attributes
    ----------
    observation : np.ndarray
            Observed tensor Y.
    rank : RankTriple
            Multilinear rank to recover.
    low_rank : np.ndarray, optional
            Ground truth X*.
    sparse : np.ndarray, optional
            Ground truth corruption S*.
    mask : np.ndarray, optional
            Binary foreground mask.
    meta : InstanceMeta, optional
            Generator settings for synthetic instances.
    """

    observation: np.ndarray
    rank: RankTriple
    low_rank: Optional[np.ndarray] = None
    sparse: Optional[np.ndarray] = None
    mask: Optional[np.ndarray] = None
    meta: Optional[InstanceMeta] = None

    def __post_init__(self):
        observation = as_tensor3(self.observation, "observation")
        object.__setattr__(self, "observation", observation)
        object.__setattr__(self, "rank", RankTriple.from_value(self.rank))
        self.rank.validate_for(observation.shape)
        for name in ("low_rank", "sparse"):
            value = getattr(self, name)
            if value is not None:
                value = as_tensor3(value, name)
                if value.shape != observation.shape:
                    raise ShapeMismatchError(f"{name} does not match the observation")
                object.__setattr__(self, name, value)
        if self.mask is not None:
            mask = validate_mask(as_tensor3(self.mask, "mask"))
            if mask.shape != observation.shape:
                raise ShapeMismatchError("mask does not match the observation")
            object.__setattr__(self, "mask", mask)
        if self.low_rank is not None and self.sparse is not None:
            gap = np.max(np.abs(observation - self.low_rank - self.sparse))
            if gap > CONSISTENCY_TOLERANCE * max(1.0, float(np.max(np.abs(observation)))):
                raise ShapeMismatchError(f"Y differs from X* + S* by {gap:.3e}")

    @property
    def shape(self):
        return self.observation.shape

    def with_mask(self, mask: Optional[np.ndarray] = None) -> "RpcaInstance":
        """
        Copy of the instance carrying a mask; defaults to the support of S*.
        """
        if mask is None:
            if self.sparse is None:
                raise ConfigurationError("A support mask needs the ground truth S*")
            mask = mask_from_support(self.sparse)
        return replace(self, mask=mask)

    def scaled(self, factor: float) -> "RpcaInstance":
        """Instance with every tensor multiplied by factor."""

        def _scale(value):
            return None if value is None else value * factor

        return replace(
            self,
            observation=self.observation * factor,
            low_rank=_scale(self.low_rank),
            sparse=_scale(self.sparse),
        )
