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
"""
from rpcasuite.solver.losses import LossType, loss_sl, loss_sm, loss_ssl

from .activations import (
    RawParams,
    ThresholdScale,
    activate,
    default_raw_params,
    invert_activation,
)
from .hyper_gradient import (
    GradientMethod,
    TrainConfig,
    hyper_gradient,
    unrolled_loss,
    value_and_hyper_gradient,
)
from .trainer import Adam, FinetuneResult, TrainResult, finetune, train

__all__ = [
    "LossType",
    "loss_sl",
    "loss_sm",
    "loss_ssl",
    "RawParams",
    "ThresholdScale",
    "activate",
    "default_raw_params",
    "invert_activation",
    "GradientMethod",
    "TrainConfig",
    "hyper_gradient",
    "unrolled_loss",
    "value_and_hyper_gradient",
    "Adam",
    "FinetuneResult",
    "TrainResult",
    "finetune",
    "train",
]
