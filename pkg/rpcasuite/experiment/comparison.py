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
Comparisons between the learned and the black-box hyperparameter choices.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from rpcasuite.datagen.instance import RpcaInstance
from rpcasuite.experiment.metrics import masked_error
from rpcasuite.learning.activations import RawParams, ThresholdScale, activate
from rpcasuite.learning.hyper_gradient import TrainConfig
from rpcasuite.learning.trainer import finetune, train
from rpcasuite.solver.hyperparameters import SolverConfig
from rpcasuite.solver.losses import LossType, check_labels
from rpcasuite.solver.scaled_gd import solve
from rpcasuite.tuning.baseline import SearchSpace, tune

log = logging.getLogger(__name__)

# one base solve plus eight probes per central-difference step
EVALUATIONS_PER_STEP = 9


@dataclass(frozen=True)
class EfficiencyResult:
    """
    Solver evaluations both tuners need on one instance.

    Attributes
    ----------
    target : float
            Best self-supervised loss the baseline found within its budget.
    baseline_evaluations : int
            Budget of the baseline.
    finetune_evaluations : int or None
            Solver evaluations after which the fine tuner first recorded a loss
            <= target; None if it never did.
    """

    target: float
    baseline_evaluations: int
    finetune_evaluations: Optional[int]

    @property
    def reached(self) -> bool:
        return self.finetune_evaluations is not None


def efficiency(
    instance: RpcaInstance,
    config: SolverConfig,
    warm: RawParams,
    space: SearchSpace = SearchSpace(budget=250),
    train_config: Optional[TrainConfig] = None,
    seed: int = 0,
) -> EfficiencyResult:
    """
    Count the solver evaluations fine tuning needs to match the baseline.

    Both tuners minimize the self-supervised loss of the same instance; every
    training step of the fine tuner is charged with its nine solves.
    """
    tuning = tune(instance, config, space, seed=seed)
    if train_config is None:
        train_config = TrainConfig.finetune_defaults()
    training = finetune(instance, config, train_config, warm=warm).training

    best_so_far = np.fmin.accumulate(training.losses)
    reached = np.flatnonzero(best_so_far <= tuning.best_loss)
    evaluations = (
        None if reached.size == 0 else EVALUATIONS_PER_STEP * int(reached[0]) + 1
    )
    log.info(
        f"Baseline best loss {tuning.best_loss:.6e} after {space.budget} evaluations,"
        f" fine tuning reached it after {evaluations} evaluations"
    )
    return EfficiencyResult(tuning.best_loss, space.budget, evaluations)


@dataclass(frozen=True)
class ParityResult:
    """
    Masked errors of self-supervised and supervised training per instance.

    Attributes
    ----------
    errors : pd.DataFrame
            Columns instance, ssl and sl.
    ssl_params, sl_params : RawParams
            The two trained parameter sets.
    """

    errors: pd.DataFrame
    ssl_params: RawParams
    sl_params: RawParams

    def fraction_within(self, factor: float = 2.0) -> float:
        """Share of instances whose two masked errors differ by at most factor."""
        ssl, sl = self.errors["ssl"].to_numpy(), self.errors["sl"].to_numpy()
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.maximum(ssl, sl) / np.minimum(ssl, sl)
        within = (ratio <= factor) | (ssl == sl)
        return float(np.mean(within))


def masked_parity(
    training_instances: Sequence[RpcaInstance],
    test_instances: Sequence[RpcaInstance],
    config: SolverConfig,
    train_config: TrainConfig = TrainConfig(),
) -> ParityResult:
    """
    Train once with the self-supervised and once with the supervised loss and score
    both on the background of masked test instances.

    Parameters
    ----------
    training_instances : sequence of RpcaInstance
            Instances with ground truth.
    test_instances : sequence of RpcaInstance
            Instances carrying a foreground mask.
    config : SolverConfig
            Unrolled solver settings.
    train_config : TrainConfig
            Settings of both training runs.
    """
    for instance in test_instances:
        check_labels(LossType.SM, instance)
    ssl_params = train(training_instances, config, LossType.SSL, train_config).params
    sl_params = train(training_instances, config, LossType.SL, train_config).params

    rows = []
    for index, instance in enumerate(test_instances):
        scale = ThresholdScale.from_observation(instance.observation)
        row = {"instance": index}
        for name, params in (("ssl", ssl_params), ("sl", sl_params)):
            trace = solve(instance.observation, config, activate(params, scale))
            row[name] = masked_error(instance.observation, instance.mask, trace.factors)
        rows.append(row)
    return ParityResult(pd.DataFrame(rows), ssl_params, sl_params)
