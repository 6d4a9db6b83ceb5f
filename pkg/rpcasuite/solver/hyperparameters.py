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
Parameter records of the ScaledGD solver.
"""
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from rpcasuite.tensor import RankTriple
from rpcasuite.utils.exceptions import ConfigurationError, InvalidHyperParametersError


@dataclass(frozen=True)
class HyperParams:
    """
    The four hyperparameters of the solver.

    Attributes
    ----------
    zeta0 : float
            Threshold used by the spectral initialization.
    zeta1 : float
            Threshold of the first iteration; later thresholds decay by rho.
    rho : float
            Threshold decay factor in (0, 1).
    eta : float
            Step size of the scaled gradient updates.
    """

    zeta0: float
    zeta1: float
    rho: float
    eta: float

    def __post_init__(self):
        values = self.as_array()
        if not np.all(np.isfinite(values)):
            raise InvalidHyperParametersError(f"Hyperparameters must be finite: {self}")
        if self.zeta0 <= 0 or self.zeta1 <= 0 or self.eta <= 0:
            raise InvalidHyperParametersError(
                f"zeta0, zeta1 and eta must be positive: {self}"
            )
        if not 0 < self.rho < 1:
            raise InvalidHyperParametersError(f"rho must lie in (0, 1): {self}")

    def as_array(self) -> np.ndarray:
        """Values in the order (zeta0, zeta1, rho, eta)."""
        return np.array([self.zeta0, self.zeta1, self.rho, self.eta], dtype=np.float64)

    def as_dict(self) -> dict:
        return {
            "zeta0": float(self.zeta0),
            "zeta1": float(self.zeta1),
            "rho": float(self.rho),
            "eta": float(self.eta),
        }

    def scaled(self, factor: float) -> "HyperParams":
        """Hyperparameters for data multiplied by factor (thresholds scale)."""
        return HyperParams(
            self.zeta0 * factor, self.zeta1 * factor, self.rho, self.eta
        )


@dataclass(frozen=True)
class SolverConfig:
    """
    Structural settings of an unrolled solve.

    Attributes
    ----------
    rank : RankTriple
            Multilinear rank of the low-rank estimate.
    iterations : int
            Number T of ScaledGD iterations after initialization.
    skip_full_rank_modes : bool
            If True, modes with r_k == n_k keep the identity as factor and are never
            updated.
    """

    rank: RankTriple
    iterations: int = 100
    skip_full_rank_modes: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rank", RankTriple.from_value(self.rank))
        if isinstance(self.iterations, bool) or int(self.iterations) != self.iterations:
            raise ConfigurationError(f"iterations must be an integer: {self.iterations}")
        if self.iterations < 0:
            raise ConfigurationError(f"iterations must be >= 0: {self.iterations}")
        object.__setattr__(self, "iterations", int(self.iterations))

    def skipped_modes(self, shape: Sequence[int]) -> Tuple[bool, bool, bool]:
        """Flags of the modes pinned to the identity for a tensor shape."""
        if not self.skip_full_rank_modes:
            return False, False, False
        return tuple(rank == size for rank, size in zip(self.rank, shape))

    def as_dict(self) -> dict:
        return {
            "rank": list(self.rank.as_tuple()),
            "iterations": self.iterations,
            "skip_full_rank_modes": self.skip_full_rank_modes,
        }
