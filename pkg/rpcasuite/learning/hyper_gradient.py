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
Gradient of a loss of the unrolled solver with respect to the raw parameters.

The default estimator uses central differences in raw space: eight probe solves
around the base point. Only zeta0 enters the spectral initialization, so the
probes share at most three initializations.
"""
import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from rpcasuite.datagen.instance import RpcaInstance
from rpcasuite.learning.activations import (
    RAW_NAMES,
    RawParams,
    ThresholdScale,
    activate,
)
from rpcasuite.solver.factors import TuckerFactors
from rpcasuite.solver.hyperparameters import HyperParams, SolverConfig
from rpcasuite.solver.losses import LossType, check_labels, evaluate_loss
from rpcasuite.solver.scaled_gd import solve, spectral_init
from rpcasuite.utils.exceptions import (
    ConfigurationError,
    ConvergenceError,
    GradientUnavailableError,
    SolverDivergenceError,
)

log = logging.getLogger(__name__)


class GradientMethod(enum.Enum):
    """Estimator of the hyper-gradient."""

    CENTRAL_DIFF = "central-diff"
    FORWARD_DUAL = "forward-dual"


@dataclass(frozen=True)
class TrainConfig:
    """
    Settings of training and fine tuning.

    Attributes
    ----------
    steps : int
            Number of gradient steps.
    learning_rate : float
            Base step size of the optimizer.
    lr_decay : float
            Multiplicative step size decay in (0, 1].
    decay_interval : int
            Number of steps between two decays.
    gradient_method : GradientMethod
            Hyper-gradient estimator.
    fd_step : float
            Central difference step in raw space.
    early_stop_tolerance : float
            Minimal relative loss improvement over the patience window.
    patience : int
            Early stopping window; 0 disables early stopping.
    seed : int
            Seed of generated training instances.
    workers : int
            Threads evaluating the finite difference probes.
    """

    steps: int = 1000
    learning_rate: float = 0.05
    lr_decay: float = 0.95
    decay_interval: int = 50
    gradient_method: GradientMethod = GradientMethod.CENTRAL_DIFF
    fd_step: float = 1e-3
    early_stop_tolerance: float = 1e-6
    patience: int = 0
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "gradient_method", GradientMethod(self.gradient_method))
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigurationError(f"steps must be a positive integer: {self.steps}")
        if not 0 < self.lr_decay <= 1:
            raise ConfigurationError(f"lr_decay must lie in (0, 1]: {self.lr_decay}")
        if self.decay_interval < 1:
            raise ConfigurationError("decay_interval must be >= 1")
        if not self.fd_step > 0:
            raise ConfigurationError(f"fd_step must be positive: {self.fd_step}")
        if self.learning_rate < 0:
            raise ConfigurationError("learning_rate must be >= 0")
        if self.patience < 0 or self.early_stop_tolerance < 0:
            raise ConfigurationError("patience and early_stop_tolerance must be >= 0")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")

    @classmethod
    def finetune_defaults(cls, **kwargs) -> "TrainConfig":
        """Per-instance fine tuning: 500 steps with early stopping."""
        settings = dict(steps=500, patience=50)
        settings.update(kwargs)
        return cls(**settings)

    def step_size(self, step: int) -> float:
        return self.learning_rate * self.lr_decay ** (step // self.decay_interval)

    def as_dict(self) -> dict:
        settings = dict(self.__dict__)
        settings["gradient_method"] = self.gradient_method.value
        return settings


def unrolled_loss(
    instance: RpcaInstance,
    config: SolverConfig,
    raw: RawParams,
    kind: LossType,
    scale: Optional[ThresholdScale] = None,
    initial_factors: Optional[TuckerFactors] = None,
) -> float:
    """
    Loss of the estimate after T iterations run with activate(raw).
    """
    if scale is None:
        scale = ThresholdScale.from_observation(instance.observation)
    hyper_parameters = activate(raw, scale)
    trace = solve(
        instance.observation,
        config,
        hyper_parameters,
        initial_factors=initial_factors,
    )
    return evaluate_loss(kind, instance, trace.low_rank)


def _probe_points(raw: RawParams, step: float) -> List[Tuple[str, RawParams]]:
    base = raw.as_array()
    points = [("base", raw)]
    for index, name in enumerate(RAW_NAMES):
        for sign, suffix in ((1.0, "+"), (-1.0, "-")):
            shifted = base.copy()
            shifted[index] += sign * step
            points.append((f"{name}{suffix}", RawParams.from_array(shifted)))
    return points


def _initializations(
    instance: RpcaInstance,
    config: SolverConfig,
    points: List[Tuple[str, RawParams]],
    scale: ThresholdScale,
) -> Dict[float, TuckerFactors]:
    cache = {}
    for name, raw in points:
        hyper_parameters: HyperParams = activate(raw, scale)
        if hyper_parameters.zeta0 in cache:
            continue
        try:
            cache[hyper_parameters.zeta0] = spectral_init(
                instance.observation, config, hyper_parameters
            )
        except ConvergenceError as err:
            raise GradientUnavailableError(
                f"Initialization failed at probe {name}: {err}", probe=name
            ) from err
    return cache


def value_and_hyper_gradient(
    instance: RpcaInstance,
    config: SolverConfig,
    raw: RawParams,
    kind: LossType,
    train_config: TrainConfig = TrainConfig(),
) -> Tuple[float, np.ndarray]:
    """
    Loss at raw and its gradient with respect to (z0, z1, p, e).

    Parameters
    ----------
    instance : RpcaInstance
            Instance carrying the labels the loss needs.
    config : SolverConfig
            Unrolled solver settings.
    raw : RawParams
            Point of evaluation.
    kind : LossType
            Loss of the final estimate.
    train_config : TrainConfig
            Estimator, finite difference step and worker count.

    Returns
    -------
    value : float
            Loss at raw.
    gradient : np.ndarray
            Four partial derivatives in the order (z0, z1, p, e).

    Raises
    ------
    GradientUnavailableError
            If the solver diverges at the base point or any probe.
    """
    kind = LossType.from_value(kind)
    check_labels(kind, instance)
    if train_config.gradient_method is GradientMethod.FORWARD_DUAL:
        from rpcasuite.learning.forward_mode import forward_value_and_gradient

        return forward_value_and_gradient(instance, config, raw, kind)

    scale = ThresholdScale.from_observation(instance.observation)
    step = train_config.fd_step
    points = _probe_points(raw, step)
    initializations = _initializations(instance, config, points, scale)

    def _evaluate(point: Tuple[str, RawParams]) -> float:
        name, probe = point
        zeta0 = activate(probe, scale).zeta0
        try:
            return unrolled_loss(
                instance, config, probe, kind, scale, initializations[zeta0]
            )
        except (SolverDivergenceError, ConvergenceError) as err:
            raise GradientUnavailableError(
                f"Solver failed at probe {name}: {err}", probe=name
            ) from err

    if train_config.workers > 1:
        with ThreadPoolExecutor(max_workers=train_config.workers) as executor:
            values = list(executor.map(_evaluate, points))
    else:
        values = [_evaluate(point) for point in points]

    probes = np.asarray(values[1:]).reshape(len(RAW_NAMES), 2)
    gradient = (probes[:, 0] - probes[:, 1]) / (2.0 * step)
    return values[0], gradient


def hyper_gradient(
    instance: RpcaInstance,
    config: SolverConfig,
    raw: RawParams,
    kind: LossType,
    train_config: TrainConfig = TrainConfig(),
) -> np.ndarray:
    """
    Gradient of the unrolled loss with respect to the raw parameters.

    See :func:`value_and_hyper_gradient`.
    """
    return value_and_hyper_gradient(instance, config, raw, kind, train_config)[1]
