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
Tucker factor container of the low-rank estimate.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from rpcasuite.tensor import RankTriple, multilinear_product
from rpcasuite.utils.exceptions import NonFiniteDataError, ShapeMismatchError


@dataclass(frozen=True)
class TuckerFactors:
    """
    Factorized estimate F = (U1, U2, U3, G).

    Attributes
    ----------
    u1, u2, u3 : np.ndarray
            Factor matrices of shape (n_k, r_k).
    core : np.ndarray
            Core tensor of shape (r1, r2, r3).
    """

    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    core: np.ndarray

    def __post_init__(self):
        for name in ("u1", "u2", "u3"):
            value = np.asarray(getattr(self, name), dtype=np.float64)
            if value.ndim != 2:
                raise ShapeMismatchError(f"{name} must be a matrix, got {value.shape}")
            object.__setattr__(self, name, value)
        core = np.asarray(self.core, dtype=np.float64)
        if core.ndim != 3:
            raise ShapeMismatchError(f"core must be third order, got {core.shape}")
        object.__setattr__(self, "core", core)
        columns = tuple(factor.shape[1] for factor in self.factors)
        if columns != core.shape:
            raise ShapeMismatchError(
                f"Factor widths {columns} do not match the core shape {core.shape}"
            )

    @property
    def factors(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.u1, self.u2, self.u3

    @property
    def rank(self) -> RankTriple:
        return RankTriple(*self.core.shape)

    @property
    def shape(self) -> Tuple[int, int, int]:
        """Shape of the reconstructed tensor."""
        return tuple(factor.shape[0] for factor in self.factors)

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(item)) for item in (*self.factors, self.core))

    def check_finite(self):
        if not self.is_finite():
            raise NonFiniteDataError("Tucker factors contain NaN or Inf entries")

    def reconstruct(self) -> np.ndarray:
        """Low-rank tensor (U1, U2, U3) . G."""
        return multilinear_product(self.u1, self.u2, self.u3, self.core)

    def scaled(self, factor: float) -> "TuckerFactors":
        """Factors of factor * reconstruct(); only the core is scaled."""
        return TuckerFactors(self.u1, self.u2, self.u3, self.core * factor)

    @classmethod
    def zeros(cls, shape: Sequence[int], rank) -> "TuckerFactors":
        """Factors reconstructing the zero tensor."""
        rank = RankTriple.from_value(rank)
        rank.validate_for(shape)
        factors = [np.eye(size, width) for size, width in zip(shape, rank)]
        return cls(*factors, np.zeros(rank.as_tuple()))
