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
Training losses of the low-rank estimate.

* SSL: ||Y - X||_1 / ||Y||_F^2, needs only the observation.
* SL: ||X* - X||_F^2 / ||X*||_F^2, needs the ground truth.
* SM: squared relative error on the background of a binary foreground mask.

Every function takes either TuckerFactors or an already reconstructed tensor.
"""
from __future__ import annotations

import enum
from typing import TYPE_CHECKING, Union

import numpy as np

from rpcasuite.solver.factors import TuckerFactors
from rpcasuite.tensor import fro_norm, l1_norm
from rpcasuite.utils.exceptions import (
    ConfigurationError,
    DegenerateInputError,
    MaskValidationError,
    MissingLabelError,
    ShapeMismatchError,
)

if TYPE_CHECKING:
    from rpcasuite.datagen.instance import RpcaInstance

Estimate = Union[TuckerFactors, np.ndarray]


class LossType(enum.Enum):
    """Loss used to judge an unrolled solve."""

    SSL = "ssl"
    SL = "sl"
    SM = "sm"

    @classmethod
    def from_value(cls, value: Union[str, "LossType"]) -> "LossType":
        if isinstance(value, LossType):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigurationError(
                f"Unknown loss {value!r}; choose one of {[item.value for item in cls]}"
            )


def _low_rank(estimate: Estimate, shape) -> np.ndarray:
    low_rank = estimate.reconstruct() if isinstance(estimate, TuckerFactors) else estimate
    low_rank = np.asarray(low_rank, dtype=np.float64)
    if low_rank.shape != tuple(shape):
        raise ShapeMismatchError(
            f"Estimate of shape {low_rank.shape} does not match data shape {shape}"
        )
    return low_rank


def validate_mask(mask: np.ndarray) -> np.ndarray:
    """Return the mask as float64 after checking that all entries are 0 or 1."""
    mask = np.asarray(mask, dtype=np.float64)
    if not np.all((mask == 0.0) | (mask == 1.0)):
        raise MaskValidationError("Mask entries must be 0 or 1")
    return mask


def loss_ssl(observation: np.ndarray, estimate: Estimate) -> float:
    """
    Self-supervised loss ||Y - X||_1 / ||Y||_F^2.

    Parameters
    ----------
    observation : np.ndarray
            Observed tensor Y.
    estimate : TuckerFactors or np.ndarray
            Low-rank estimate.

    Returns
    -------
    loss : float
    """
    denominator = fro_norm(observation) ** 2
    if denominator == 0.0:
        raise DegenerateInputError("The self-supervised loss is undefined for Y == 0")
    low_rank = _low_rank(estimate, np.shape(observation))
    return l1_norm(observation - low_rank) / denominator


def loss_sl(ground_truth: np.ndarray, estimate: Estimate) -> float:
    """
    Supervised loss ||X* - X||_F^2 / ||X*||_F^2.
    """
    denominator = fro_norm(ground_truth) ** 2
    if denominator == 0.0:
        raise DegenerateInputError("The supervised loss is undefined for X* == 0")
    low_rank = _low_rank(estimate, np.shape(ground_truth))
    return fro_norm(ground_truth - low_rank) ** 2 / denominator


def loss_sm(observation: np.ndarray, mask: np.ndarray, estimate: Estimate) -> float:
    """
    Masked loss on the background (mask == 0) of the observation.

    Parameters
    ----------
    observation : np.ndarray
            Observed tensor Y.
    mask : np.ndarray
            Binary foreground mask, same shape as Y.
    estimate : TuckerFactors or np.ndarray
            Low-rank estimate.

    Returns
    -------
    loss : float
            ||(Y - X) * (1 - M)||_F^2 / ||Y * (1 - M)||_F^2
    """
    mask = validate_mask(mask)
    if mask.shape != np.shape(observation):
        raise ShapeMismatchError(
            f"Mask shape {mask.shape} does not match data shape {np.shape(observation)}"
        )
    background = 1.0 - mask
    denominator = fro_norm(observation * background) ** 2
    if denominator == 0.0:
        raise DegenerateInputError("The masked loss needs a nonzero background")
    low_rank = _low_rank(estimate, np.shape(observation))
    return fro_norm((observation - low_rank) * background) ** 2 / denominator


def check_labels(kind: LossType, instance: "RpcaInstance"):
    """Raise a MissingLabelError if the instance cannot be scored with the loss."""
    kind = LossType.from_value(kind)
    if kind is LossType.SL and instance.low_rank is None:
        raise MissingLabelError("The supervised loss needs the ground truth X*")
    if kind is LossType.SM and instance.mask is None:
        raise MissingLabelError("The masked loss needs a foreground mask")


def evaluate_loss(kind: LossType, instance: "RpcaInstance", estimate: Estimate) -> float:
    """
    Score an estimate of an instance with the requested loss.
    """
    kind = LossType.from_value(kind)
    check_labels(kind, instance)
    if kind is LossType.SSL:
        return loss_ssl(instance.observation, estimate)
    if kind is LossType.SL:
        return loss_sl(instance.low_rank, estimate)
    return loss_sm(instance.observation, instance.mask, estimate)
