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
Training of the four raw parameters of the unrolled solver.

train runs Adam on one instance per step and returns the iterate with the lowest
recorded loss. finetune adapts parameters to a single observation with the
self-supervised loss and then solves it once more.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from rpcasuite.datagen.instance import RpcaInstance
from rpcasuite.learning.activations import (
    RawParams,
    ThresholdScale,
    activate,
    default_raw_params,
)
from rpcasuite.learning.hyper_gradient import TrainConfig, value_and_hyper_gradient
from rpcasuite.solver.hyperparameters import HyperParams, SolverConfig
from rpcasuite.solver.losses import LossType, check_labels
from rpcasuite.solver.scaled_gd import SolveTrace, solve
from rpcasuite.utils.config import config as runtime_config
from rpcasuite.utils.exceptions import (
    ConfigurationError,
    GradientUnavailableError,
    TrainingAbortedError,
)

log = logging.getLogger(__name__)

Dataset = Union[Sequence[RpcaInstance], Callable[[int], RpcaInstance]]

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8
MAX_SKIPPED_FRACTION = 0.5


@dataclass
class Adam:
    """
    Adam moment averaging on a parameter vector.
    """

    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    epsilon: float = ADAM_EPSILON
    first_moment: Optional[np.ndarray] = None
    second_moment: Optional[np.ndarray] = None
    count: int = 0

    def update(self, params: np.ndarray, gradient: np.ndarray, step_size: float):
        """
        Return params moved against the gradient.

        Parameters
        ----------
        params : np.ndarray
                Current parameters.
        gradient : np.ndarray
                Gradient at params.
        step_size : float
                Step size of this update.
        """
        if self.first_moment is None:
            self.first_moment = np.zeros_like(params)
            self.second_moment = np.zeros_like(params)
        self.count += 1
        self.first_moment = self.beta1 * self.first_moment + (1 - self.beta1) * gradient
        self.second_moment = (
            self.beta2 * self.second_moment + (1 - self.beta2) * gradient**2
        )
        first = self.first_moment / (1 - self.beta1**self.count)
        second = self.second_moment / (1 - self.beta2**self.count)
        return params - step_size * first / (np.sqrt(second) + self.epsilon)


@dataclass(frozen=True)
class TrainingRecord:
    """One row of the training log; loss is NaN for skipped steps."""

    step: int
    loss: float
    hyper_parameters: HyperParams
    raw: RawParams
    step_size: float
    skipped: bool = False

    def as_row(self) -> dict:
        row = {"step": self.step, "loss": self.loss}
        row.update(self.hyper_parameters.as_dict())
        row["step_size"] = self.step_size
        row.update(self.raw.as_dict())
        return row


@dataclass
class TrainResult:
    """
    Outcome of :func:`train`.

    Attributes
    ----------
    params : RawParams
            Iterate with the lowest recorded loss.
    log : list
            TrainingRecord per performed step.
    best_loss : float
            Loss recorded for params.
    best_step : int
            Step at which params was evaluated.
    """

    params: RawParams
    log: List[TrainingRecord] = field(default_factory=list)
    best_loss: float = np.inf
    best_step: int = -1

    @property
    def losses(self) -> np.ndarray:
        return np.array([record.loss for record in self.log])

    @property
    def skipped_steps(self) -> int:
        return sum(record.skipped for record in self.log)

    def to_dataframe(self) -> pd.DataFrame:
        """Training log as (step, loss, zeta0, zeta1, rho, eta, step_size, raw...)."""
        return pd.DataFrame([record.as_row() for record in self.log])


@dataclass
class FinetuneResult:
    """
    Outcome of :func:`finetune`.

    Attributes
    ----------
    params : RawParams
            Fine-tuned raw parameters.
    hyper_parameters : HyperParams
            Their activation on the instance.
    trace : SolveTrace
            Solve with the fine-tuned hyperparameters.
    training : TrainResult
            The per-instance training run.
    """

    params: RawParams
    hyper_parameters: HyperParams
    trace: SolveTrace
    training: TrainResult

    @property
    def evaluations(self) -> int:
        """Solver runs spent by the fine tuning (nine per gradient step, plus one)."""
        return 9 * len(self.training.log) + 1


def _instance_source(dataset: Dataset, kind: LossType) -> Callable[[int], RpcaInstance]:
    if callable(dataset):
        return dataset
    instances = list(dataset)
    if len(instances) == 0:
        raise ConfigurationError("The training dataset is empty")
    for instance in instances:
        check_labels(kind, instance)
    return lambda step: instances[step % len(instances)]


def _stalled(best_history: List[float], train_config: TrainConfig) -> bool:
    patience = train_config.patience
    if patience == 0 or len(best_history) <= patience:
        return False
    before, now = best_history[-patience - 1], best_history[-1]
    if not np.isfinite(before):
        return False
    improvement = (before - now) / max(abs(before), np.finfo(float).tiny)
    return improvement < train_config.early_stop_tolerance


def train(
    dataset: Dataset,
    config: SolverConfig,
    kind: LossType,
    train_config: TrainConfig = TrainConfig(),
    init: Optional[RawParams] = None,
) -> TrainResult:
    """
    Learn raw parameters by gradient descent through the unrolled solver.

    Parameters
    ----------
    dataset : sequence of RpcaInstance or callable
            Instances cycled over the steps, or a function returning the instance
            of a step.
    config : SolverConfig
            Unrolled solver settings.
    kind : LossType
            Training loss.
    train_config : TrainConfig
            Optimizer, estimator and stopping settings.
    init : RawParams, optional
            Starting point, by default :func:`default_raw_params`.

    Returns
    -------
    TrainResult
            Best iterate and the training log.

    Raises
    ------
    TrainingAbortedError
            If more than half of the steps had to be skipped.
    """
    kind = LossType.from_value(kind)
    source = _instance_source(dataset, kind)
    params = default_raw_params() if init is None else init
    result = TrainResult(params=params)
    optimizer = Adam()
    skipped = 0
    best_history = []

    for step in tqdm(
        range(train_config.steps),
        ncols=70,
        desc=f"Training ({kind.value})",
        disable=not runtime_config.progress_bars,
    ):
        instance = source(step)
        check_labels(kind, instance)
        step_size = train_config.step_size(step)
        hyper_parameters = activate(
            params, ThresholdScale.from_observation(instance.observation)
        )
        try:
            loss, gradient = value_and_hyper_gradient(
                instance, config, params, kind, train_config
            )
        except GradientUnavailableError as err:
            skipped += 1
            log.warning(f"Skipping training step {step} ({err.probe}): {err}")
            result.log.append(
                TrainingRecord(step, np.nan, hyper_parameters, params, step_size, True)
            )
            if skipped > MAX_SKIPPED_FRACTION * train_config.steps:
                raise TrainingAbortedError(
                    f"{skipped} of {train_config.steps} training steps were skipped"
                ) from err
            best_history.append(result.best_loss)
            continue

        result.log.append(
            TrainingRecord(step, loss, hyper_parameters, params, step_size)
        )
        if loss < result.best_loss:
            result.params, result.best_loss, result.best_step = params, loss, step
        best_history.append(result.best_loss)
        if _stalled(best_history, train_config):
            log.info(f"Early stopping after {step + 1} steps")
            break

        params = RawParams.from_array(
            optimizer.update(params.as_array(), gradient, step_size)
        )

    log.info(
        f"Training finished: best {kind.value} loss {result.best_loss:.6e} at step"
        f" {result.best_step}, {result.skipped_steps} skipped"
    )
    return result


def finetune(
    instance: RpcaInstance,
    config: SolverConfig,
    train_config: Optional[TrainConfig] = None,
    warm: Optional[RawParams] = None,
) -> FinetuneResult:
    """
    Adapt parameters to one observation with the self-supervised loss.

    Parameters
    ----------
    instance : RpcaInstance
            Observation to fine tune on; no labels are needed.
    config : SolverConfig
            Unrolled solver settings.
    train_config : TrainConfig, optional
            Defaults to :meth:`TrainConfig.finetune_defaults`.
    warm : RawParams, optional
            Warm start, e.g. parameters from supervised training.

    Returns
    -------
    FinetuneResult
            The selected parameters never have a higher recorded loss than the warm
            start.
    """
    if train_config is None:
        train_config = TrainConfig.finetune_defaults()
    training = train([instance], config, LossType.SSL, train_config, warm)
    hyper_parameters = activate(
        training.params, ThresholdScale.from_observation(instance.observation)
    )
    trace = solve(
        instance.observation,
        config,
        hyper_parameters,
        ground_truth=instance.low_rank,
    )
    return FinetuneResult(training.params, hyper_parameters, trace, training)
