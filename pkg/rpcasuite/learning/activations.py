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
Unconstrained parametrization of the solver hyperparameters.

    zeta0 = softplus(z0) * s0      zeta1 = softplus(z1) * s1
    eta   = softplus(e)            rho   = sigmoid(p)

s0 = linf_norm(Y) and s1 = s0 / 2 make the raw thresholds independent of the scale
of the data.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logit

from rpcasuite.solver.hyperparameters import HyperParams
from rpcasuite.tensor import linf_norm
from rpcasuite.utils.exceptions import DegenerateInputError, InvalidHyperParametersError

RAW_NAMES = ("z0", "z1", "p", "e")
TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class RawParams:
    """
    Pre-activation values (z0, z1, p, e) of (zeta0, zeta1, rho, eta).
    """

    z0: float
    z1: float
    p: float
    e: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.as_array())):
            raise InvalidHyperParametersError(f"Raw parameters must be finite: {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.z0, self.z1, self.p, self.e], dtype=np.float64)

    @classmethod
    def from_array(cls, values) -> "RawParams":
        z0, z1, p, e = (float(item) for item in values)
        return cls(z0, z1, p, e)

    def as_dict(self) -> dict:
        return dict(zip(RAW_NAMES, (float(item) for item in self.as_array())))


@dataclass(frozen=True)
class ThresholdScale:
    """
    Data-derived scale constants of the thresholds.

    Attributes
    ----------
    s0 : float
            Scale of zeta0, the largest absolute entry of Y.
    s1 : float
            Scale of zeta1, s0 / 2.
    """

    s0: float = 1.0
    s1: float = 0.5

    def __post_init__(self):
        if not (self.s0 > 0 and self.s1 > 0) or not np.isfinite([self.s0, self.s1]).all():
            raise DegenerateInputError(f"Threshold scales must be positive: {self}")

    @classmethod
    def from_observation(cls, observation: np.ndarray) -> "ThresholdScale":
        s0 = linf_norm(observation)
        if s0 == 0.0:
            raise DegenerateInputError("Threshold scale is undefined for Y == 0")
        return cls(s0, s0 / 2.0)

    def as_dict(self) -> dict:
        return {"s0": float(self.s0), "s1": float(self.s1)}


def softplus(value):
    """log(1 + exp(x)) without overflow."""
    return np.logaddexp(0.0, value)


def inverse_softplus(value):
    """Inverse of :func:`softplus` for positive arguments."""
    value = np.asarray(value, dtype=np.float64)
    with np.errstate(divide="ignore"):
        small = np.log(np.expm1(np.minimum(value, 20.0)))
    large = value + np.log1p(-np.exp(-value))
    return np.where(value < 20.0, small, large)


def _positive(value: float) -> float:
    return float(max(value, TINY))


def activate(raw: RawParams, scale: ThresholdScale = ThresholdScale()) -> HyperParams:
    """
    Map raw parameters to admissible hyperparameters.

    Parameters
    ----------
    raw : RawParams
            Unconstrained parameters.
    scale : ThresholdScale
            Threshold scale constants, by default (1, 0.5).

    Returns
    -------
    HyperParams
            Hyperparameters with zeta0, zeta1, eta > 0 and 0 < rho < 1 for every
            finite input; saturated values are moved to the nearest admissible float.
    """
    rho = float(expit(raw.p))
    rho = min(max(rho, np.nextafter(0.0, 1.0)), np.nextafter(1.0, 0.0))
    return HyperParams(
        zeta0=_positive(softplus(raw.z0) * scale.s0),
        zeta1=_positive(softplus(raw.z1) * scale.s1),
        rho=rho,
        eta=_positive(softplus(raw.e)),
    )


def invert_activation(
    hyper_parameters: HyperParams, scale: ThresholdScale = ThresholdScale()
) -> RawParams:
    """
    Raw parameters that :func:`activate` maps onto the given hyperparameters.
    """
    values = (
        inverse_softplus(hyper_parameters.zeta0 / scale.s0),
        inverse_softplus(hyper_parameters.zeta1 / scale.s1),
        logit(hyper_parameters.rho),
        inverse_softplus(hyper_parameters.eta),
    )
    if not np.all(np.isfinite(values)):
        raise InvalidHyperParametersError(
            f"{hyper_parameters} lies on the boundary of the activation range"
        )
    return RawParams.from_array(values)


DEFAULT_HYPER_PARAMS = HyperParams(zeta0=0.6, zeta1=0.3, rho=0.95, eta=0.5)


def default_raw_params() -> RawParams:
    """
    Raw start giving zeta0 = 0.6 linf(Y), zeta1 = 0.3 linf(Y), rho = 0.95, eta = 0.5.
    """
    return invert_activation(DEFAULT_HYPER_PARAMS, ThresholdScale())
