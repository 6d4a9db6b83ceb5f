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
Black-box baseline minimizing the self-supervised loss of one instance.

The search runs in the unit cube. Thresholds and step size are mapped
logarithmically onto their bounds, rho linearly. A scrambled Halton sequence covers
the first 60 % of the budget; the rest perturbs the best point with Gaussian steps
whose width shrinks by 0.7 after every improvement.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.stats import qmc
from tqdm import tqdm

from rpcasuite.datagen.instance import RpcaInstance
from rpcasuite.datagen.synthetic import make_generator
from rpcasuite.solver.hyperparameters import HyperParams, SolverConfig
from rpcasuite.solver.scaled_gd import solve
from rpcasuite.tensor import linf_norm
from rpcasuite.utils.config import config as runtime_config
from rpcasuite.utils.exceptions import (
    AllEvaluationsDivergedError,
    ConvergenceError,
    DegenerateInputError,
    InvalidSearchSpaceError,
    SolverDivergenceError,
)

log = logging.getLogger(__name__)

TUNER_ROLE = 6
Bounds = Tuple[float, float]


@dataclass(frozen=True)
class SearchSpace:
    """
    Bounds and budget of the baseline search.

    Attributes
    ----------
    zeta0_bounds, zeta1_bounds : tuple
            Threshold bounds relative to linf_norm(Y).
    rho_bounds : tuple
            Bounds of the decay factor.
    eta_bounds : tuple
            Bounds of the step size.
    budget : int
            Number of solver evaluations.
    exploration_fraction : float
            Share of the budget spent on quasi-random sampling.
    initial_sigma : float
            Width of the first local perturbation in unit-cube coordinates.
    sigma_decay : float
            Width factor applied after every improvement.
    """

    zeta0_bounds: Bounds = (1e-4, 2.0)
    zeta1_bounds: Bounds = (1e-4, 2.0)
    rho_bounds: Bounds = (0.5, 0.999)
    eta_bounds: Bounds = (0.05, 1.5)
    budget: int = 500
    exploration_fraction: float = 0.6
    initial_sigma: float = 0.1
    sigma_decay: float = 0.7

    def __post_init__(self):
        for name in ("zeta0_bounds", "zeta1_bounds", "rho_bounds", "eta_bounds"):
            lower, upper = getattr(self, name)
            if not 0 < lower < upper:
                raise InvalidSearchSpaceError(f"{name} must satisfy 0 < lower < upper")
            object.__setattr__(self, name, (float(lower), float(upper)))
        lower, upper = self.rho_bounds
        if upper >= 1:
            raise InvalidSearchSpaceError("rho must stay below 1")
        if int(self.budget) != self.budget or self.budget < 1:
            raise InvalidSearchSpaceError(f"budget must be >= 1, got {self.budget}")
        if not 0 < self.exploration_fraction <= 1:
            raise InvalidSearchSpaceError("exploration_fraction must lie in (0, 1]")

    @property
    def exploration_budget(self) -> int:
        return max(1, int(np.ceil(self.exploration_fraction * self.budget)))

    def to_hyper_params(self, point: np.ndarray, scale: float) -> HyperParams:
        """
        Map a unit-cube point (zeta0, zeta1, rho, eta) onto hyperparameters.
        """
        point = np.clip(np.asarray(point, dtype=np.float64), 0.0, 1.0)

        def _log_map(value, bounds):
            lower, upper = np.log(bounds[0]), np.log(bounds[1])
            return float(np.exp(lower + value * (upper - lower)))

        rho_lower, rho_upper = self.rho_bounds
        return HyperParams(
            zeta0=_log_map(point[0], self.zeta0_bounds) * scale,
            zeta1=_log_map(point[1], self.zeta1_bounds) * scale,
            rho=rho_lower + float(point[2]) * (rho_upper - rho_lower),
            eta=_log_map(point[3], self.eta_bounds),
        )

    def to_unit(self, hyper_parameters: HyperParams, scale: float) -> np.ndarray:
        """Inverse of :meth:`to_hyper_params`, clipped to the cube."""

        def _log_unmap(value, bounds):
            lower, upper = np.log(bounds[0]), np.log(bounds[1])
            return (np.log(value) - lower) / (upper - lower)

        rho_lower, rho_upper = self.rho_bounds
        point = np.array(
            [
                _log_unmap(hyper_parameters.zeta0 / scale, self.zeta0_bounds),
                _log_unmap(hyper_parameters.zeta1 / scale, self.zeta1_bounds),
                (hyper_parameters.rho - rho_lower) / (rho_upper - rho_lower),
                _log_unmap(hyper_parameters.eta, self.eta_bounds),
            ]
        )
        return np.clip(point, 0.0, 1.0)


@dataclass(frozen=True)
class Evaluation:
    """One solver evaluation of the search; loss is +inf if the solve diverged."""

    index: int
    phase: str
    hyper_parameters: HyperParams
    loss: float

    def as_row(self) -> dict:
        row = {"evaluation": self.index, "phase": self.phase}
        row.update(self.hyper_parameters.as_dict())
        row["loss"] = self.loss
        return row


@dataclass
class TuningResult:
    """
    Outcome of :func:`tune`.

    Attributes
    ----------
    best : HyperParams
            Point with the lowest loss.
    best_loss : float
            Self-supervised loss at best.
    evaluations : list
            Every evaluation in order.
    """

    best: HyperParams
    best_loss: float
    evaluations: List[Evaluation] = field(default_factory=list)

    @property
    def losses(self) -> np.ndarray:
        return np.array([item.loss for item in self.evaluations])

    @property
    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate(self.losses)

    def evaluations_to_reach(self, target: float) -> Optional[int]:
        """Number of evaluations after which the best loss is <= target."""
        reached = np.flatnonzero(self.best_so_far <= target)
        return None if reached.size == 0 else int(reached[0]) + 1

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame([item.as_row() for item in self.evaluations])


def _ssl_after_solve(
    instance: RpcaInstance, config: SolverConfig, hyper_parameters: HyperParams
) -> float:
    try:
        return solve(instance.observation, config, hyper_parameters).final_loss
    except (SolverDivergenceError, ConvergenceError) as err:
        log.debug(f"Evaluation at {hyper_parameters} diverged: {err}")
        return np.inf


def tune(
    instance: RpcaInstance,
    config: SolverConfig,
    space: SearchSpace = SearchSpace(),
    seed: int = 0,
    warm_start: Optional[HyperParams] = None,
    workers: int = 1,
) -> TuningResult:
    """
    Search hyperparameters minimizing the self-supervised loss of one instance.

    Parameters
    ----------
    instance : RpcaInstance
            Instance to tune on; only the observation is used.
    config : SolverConfig
            Unrolled solver settings.
    space : SearchSpace
            Bounds and budget.
    seed : int
            Seed of the Halton scrambling and the local perturbations.
    warm_start : HyperParams, optional
            Point evaluated first; it counts against the budget.
    workers : int
            Threads for the quasi-random phase.

    Returns
    -------
    TuningResult

    Raises
    ------
    AllEvaluationsDivergedError
            If no evaluation produced a finite loss.
    """
    scale = linf_norm(instance.observation)
    if scale == 0.0:
        raise DegenerateInputError("Cannot tune thresholds for Y == 0")

    evaluations: List[Evaluation] = []
    points: List[np.ndarray] = []

    def _record(point: np.ndarray, phase: str, loss: float, hyper_parameters=None):
        if hyper_parameters is None:
            hyper_parameters = space.to_hyper_params(point, scale)
        evaluations.append(Evaluation(len(evaluations), phase, hyper_parameters, loss))
        points.append(point)

    progress = tqdm(
        total=space.budget,
        ncols=70,
        desc="Baseline tuning",
        disable=not runtime_config.progress_bars,
    )

    exploration = space.exploration_budget
    if warm_start is not None:
        warm_point = space.to_unit(warm_start, scale)
        _record(
            warm_point,
            "warm-start",
            _ssl_after_solve(instance, config, warm_start),
            warm_start,
        )
        progress.update(1)
        exploration -= 1

    if exploration > 0:
        sampler = qmc.Halton(d=4, scramble=True, seed=seed)
        samples = sampler.random(exploration)

        def _explore(point):
            return _ssl_after_solve(
                instance, config, space.to_hyper_params(point, scale)
            )

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                losses = list(executor.map(_explore, samples))
        else:
            losses = []
            for point in samples:
                losses.append(_explore(point))
                progress.update(1)
        for point, loss in zip(samples, losses):
            _record(point, "explore", loss)
        if workers > 1:
            progress.update(len(samples))

    generator = make_generator(seed, TUNER_ROLE)
    best_index = int(np.argmin([item.loss for item in evaluations]))
    sigma = space.initial_sigma
    while len(evaluations) < space.budget:
        best_point = points[best_index]
        candidate = np.clip(best_point + sigma * generator.standard_normal(4), 0.0, 1.0)
        loss = _ssl_after_solve(instance, config, space.to_hyper_params(candidate, scale))
        _record(candidate, "refine", loss)
        progress.update(1)
        if loss < evaluations[best_index].loss:
            best_index = len(evaluations) - 1
            sigma *= space.sigma_decay
    progress.close()

    best = evaluations[best_index]
    if not np.isfinite(best.loss):
        raise AllEvaluationsDivergedError(
            f"All {len(evaluations)} baseline evaluations diverged"
        )
    log.info(
        f"Baseline tuning finished: best loss {best.loss:.6e} after"
        f" {len(evaluations)} evaluations"
    )
    return TuningResult(best.hyper_parameters, best.loss, evaluations)
