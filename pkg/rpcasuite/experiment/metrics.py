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
Recovery metrics reported by the experiments.
"""
from typing import Union

import numpy as np

from rpcasuite.solver.factors import TuckerFactors
from rpcasuite.solver.losses import loss_sm
from rpcasuite.tensor import fro_norm
from rpcasuite.utils.exceptions import DegenerateInputError

Estimate = Union[TuckerFactors, np.ndarray]


def relative_error(ground_truth: np.ndarray, estimate: Estimate) -> float:
    """
    Relative recovery error ||X* - X||_F / ||X*||_F.

    Parameters
    ----------
    ground_truth : np.ndarray
            Planted low-rank tensor X*.
    estimate : TuckerFactors or np.ndarray
            Recovered factors or their reconstruction.

    Returns
    -------
    error : float
            The square root of the supervised loss of the estimate.
    """
    norm = fro_norm(ground_truth)
    if norm == 0.0:
        raise DegenerateInputError("The relative error is undefined for X* == 0")
    if isinstance(estimate, TuckerFactors):
        estimate = estimate.reconstruct()
    return fro_norm(np.asarray(ground_truth) - estimate) / norm


def masked_error(observation: np.ndarray, mask: np.ndarray, estimate: Estimate) -> float:
    """Square root of the masked loss; the score of the video experiments."""
    return float(np.sqrt(loss_sm(observation, mask, estimate)))


def percent_change(before: float, after: float) -> float:
    """
    Change from before to after in percent of before.

    A warm value of 1 tuned to 1.05 is a change of +5 %.
    """
    if before == 0.0:
        raise DegenerateInputError("Percent change is undefined for a zero reference")
    return 100.0 * (after - before) / before
