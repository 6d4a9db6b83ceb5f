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
from .factors import TuckerFactors
from .hyperparameters import HyperParams, SolverConfig
from .losses import LossType, evaluate_loss, loss_sl, loss_sm, loss_ssl
from .scaled_gd import (
    IterationRecord,
    SolveTrace,
    schedule,
    shrink,
    solve,
    spectral_init,
    step,
)

__all__ = [
    "TuckerFactors",
    "HyperParams",
    "SolverConfig",
    "LossType",
    "evaluate_loss",
    "loss_sl",
    "loss_sm",
    "loss_ssl",
    "IterationRecord",
    "SolveTrace",
    "schedule",
    "shrink",
    "solve",
    "spectral_init",
    "step",
]
