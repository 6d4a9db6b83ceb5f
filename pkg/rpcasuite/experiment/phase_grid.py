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
Phase-transition grids over corruption level and rank.

Every (alpha, r) cell draws `trials` seeded instances, recovers them with the
selected method and records the mean relative recovery error. Cells are computed
in a process pool and gathered by index, so the report does not depend on the
scheduling.
"""
from __future__ import annotations

import enum
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from rpcasuite.datagen.instance import RpcaInstance, SparsityKind
from rpcasuite.datagen.synthetic import gen_instance
from rpcasuite.file_io.parameter_files import write_csv
from rpcasuite.learning.activations import (
    RawParams,
    ThresholdScale,
    activate,
    default_raw_params,
)
from rpcasuite.learning.hyper_gradient import TrainConfig
from rpcasuite.learning.trainer import finetune, train
from rpcasuite.solver.hyperparameters import SolverConfig
from rpcasuite.solver.losses import LossType
from rpcasuite.solver.scaled_gd import solve
from rpcasuite.tuning.baseline import SearchSpace, tune
from rpcasuite.utils.config import config as runtime_config
from rpcasuite.utils.exceptions import InvalidExperimentSpecError, NumericalFailure
from rpcasuite.utils.meta_functions import get_machine_properties, timeit
from rpcasuite.visualizer.heatmap import render_heatmap

if TYPE_CHECKING:
    from rpcasuite.project import Project

log = logging.getLogger(__name__)

TEST_ROLE = 0
TRAIN_ROLE = 1
TUNER_ROLE = 2
HEATMAP_FLOOR = 1e-16


class Method(enum.Enum):
    """Ways of choosing the hyperparameters of a grid cell."""

    BASELINE = "baseline"
    SUPERVISED = "supervised"
    SUPERVISED_FINETUNE = "supervised+finetune"
    SSL_ONLY = "ssl-only"
    FIXED = "fixed"

    @property
    def trains_supervised(self) -> bool:
        return self in (Method.SUPERVISED, Method.SUPERVISED_FINETUNE)

    @property
    def finetunes(self) -> bool:
        return self in (Method.SUPERVISED_FINETUNE, Method.SSL_ONLY)


def cell_seed(seed: int, alpha: float, rank: int, role: int, index: int) -> int:
    """
    Seed of the index-th instance of a cell.

    The seed depends on the cell coordinates rather than on the position in the
    grid, so a cell gives the same instances in every grid containing it.
    """
    entropy = [int(seed), int(round(alpha * 10_000)), int(rank), int(role), int(index)]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def _without_workers(settings: dict) -> dict:
    return {key: value for key, value in settings.items() if key != "workers"}


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Settings of a phase grid.

    Attributes
    ----------
    alphas : tuple of float
            Corruption levels, the rows of the grid.
    ranks : tuple of int
            Multilinear ranks (r, r, r), the columns of the grid.
    n : int
            Size of every mode.
    kappa : float
            Condition number of the planted tensors.
    trials : int
            Instances per cell.
    iterations : int
            Solver iterations T.
    method : Method
            How the hyperparameters are chosen.
    seed : int
            Root seed of all instances.
    model : SparsityKind
            Corruption model of the instances.
    training : TrainConfig
            Supervised training of the learned methods, once per cell on fresh
            instances.
    finetuning : TrainConfig
            Per-instance self-supervised fine tuning.
    search : SearchSpace
            Bounds and budget of the baseline.
    fixed : RawParams
            Parameters of the FIXED method.
    workers : int
            Processes computing cells in parallel.
    output_dir : str, optional
            Directory of the CSV and SVG outputs.
    """

    alphas: Tuple[float, ...]
    ranks: Tuple[int, ...]
    n: int = 30
    kappa: float = 5.0
    trials: int = 1
    iterations: int = 100
    method: Method = Method.SUPERVISED_FINETUNE
    seed: int = 0
    model: SparsityKind = SparsityKind.BERNOULLI
    training: TrainConfig = field(default_factory=TrainConfig)
    finetuning: TrainConfig = field(default_factory=TrainConfig.finetune_defaults)
    search: SearchSpace = field(default_factory=SearchSpace)
    fixed: RawParams = field(default_factory=default_raw_params)
    workers: int = 1
    output_dir: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(item) for item in self.alphas))
        object.__setattr__(self, "ranks", tuple(int(item) for item in self.ranks))
        try:
            object.__setattr__(self, "method", Method(self.method))
            object.__setattr__(self, "model", SparsityKind(self.model))
        except ValueError as err:
            raise InvalidExperimentSpecError(str(err)) from err
        if len(self.alphas) == 0 or len(self.ranks) == 0:
            raise InvalidExperimentSpecError("The alpha and rank grids must be nonempty")
        if any(not 0.0 <= alpha < 1.0 for alpha in self.alphas):
            raise InvalidExperimentSpecError(f"alphas must lie in [0, 1): {self.alphas}")
        if any(not 1 <= rank <= self.n for rank in self.ranks):
            raise InvalidExperimentSpecError(
                f"ranks must lie in [1, n={self.n}]: {self.ranks}"
            )
        if self.trials < 1:
            raise InvalidExperimentSpecError(f"trials must be >= 1, got {self.trials}")
        if self.iterations < 1 or self.seed < 0 or self.workers < 1:
            raise InvalidExperimentSpecError(
                "iterations and workers must be >= 1 and seed >= 0"
            )

    @property
    def coordinates(self) -> List[Tuple[float, int]]:
        """Cells in row-major order (alpha outer, rank inner)."""
        return [(alpha, rank) for alpha in self.alphas for rank in self.ranks]

    def cell_arguments(self, alpha: float, rank: int) -> dict:
        """Everything the result of one cell depends on."""
        arguments = {
            "alpha": float(alpha),
            "rank": int(rank),
            "n": self.n,
            "kappa": self.kappa,
            "trials": self.trials,
            "iterations": self.iterations,
            "seed": self.seed,
            "model": self.model.value,
        }
        if self.method.trains_supervised:
            arguments["training"] = _without_workers(self.training.as_dict())
        if self.method.finetunes:
            arguments["finetuning"] = _without_workers(self.finetuning.as_dict())
        if self.method is Method.BASELINE:
            arguments["search"] = asdict(self.search)
        if self.method is Method.FIXED:
            arguments["fixed"] = self.fixed.as_dict()
        return arguments


@dataclass(frozen=True)
class CellResult:
    """Trial errors of one cell; failed trials are +inf."""

    alpha: float
    rank: int
    errors: Tuple[float, ...]
    cached: bool = False

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.errors))


def _instance(spec: ExperimentSpec, alpha: float, rank: int, role: int, index: int):
    return gen_instance(
        spec.n,
        rank,
        alpha,
        kappa=spec.kappa,
        model=spec.model,
        seed=cell_seed(spec.seed, alpha, rank, role, index),
    )


def _start_params(
    spec: ExperimentSpec, alpha: float, rank: int, config: SolverConfig
) -> Optional[RawParams]:
    if spec.method.trains_supervised:

        def dataset(step: int) -> RpcaInstance:
            return _instance(spec, alpha, rank, TRAIN_ROLE, step)

        return train(dataset, config, LossType.SL, spec.training).params
    if spec.method is Method.FIXED:
        return spec.fixed
    if spec.method is Method.SSL_ONLY:
        return default_raw_params()
    return None


def _trial_error(
    spec: ExperimentSpec,
    instance: RpcaInstance,
    config: SolverConfig,
    params: Optional[RawParams],
    tuner_seed: int,
) -> float:
    if spec.method is Method.BASELINE:
        hyper_parameters = tune(instance, config, spec.search, seed=tuner_seed).best
    elif spec.method.finetunes:
        return finetune(instance, config, spec.finetuning, warm=params).trace.final_error
    else:
        hyper_parameters = activate(
            params, ThresholdScale.from_observation(instance.observation)
        )
    trace = solve(
        instance.observation, config, hyper_parameters, ground_truth=instance.low_rank
    )
    return trace.final_error


def run_cell(spec: ExperimentSpec, alpha: float, rank: int) -> CellResult:
    """
    Compute one cell of the grid.

    Numerical failures never propagate: a failed trial is recorded as +inf, and a
    failed training run marks every trial of the cell as failed.
    """
    config = SolverConfig(rank=rank, iterations=spec.iterations)
    try:
        params = _start_params(spec, alpha, rank, config)
    except NumericalFailure as err:
        log.warning(f"Training failed in cell alpha={alpha}, r={rank}: {err}")
        return CellResult(alpha, rank, (np.inf,) * spec.trials)

    errors = []
    for index in range(spec.trials):
        try:
            instance = _instance(spec, alpha, rank, TEST_ROLE, index)
            tuner_seed = cell_seed(spec.seed, alpha, rank, TUNER_ROLE, index)
            errors.append(float(_trial_error(spec, instance, config, params, tuner_seed)))
        except NumericalFailure as err:
            log.warning(f"Trial {index} of cell alpha={alpha}, r={rank} failed: {err}")
            errors.append(np.inf)
    cell = CellResult(alpha, rank, tuple(errors))
    log.debug(f"Cell alpha={alpha}, r={rank}: mean error {cell.mean_error:.3e}")
    return cell


def _quiet_worker():
    runtime_config.progress_bars = False


@dataclass
class GridReport:
    """
    Result of :func:`phase_grid`.

    Attributes
    ----------
    spec : ExperimentSpec
            Settings of the grid.
    cells : list
            CellResult per cell in the order of ``spec.coordinates``.
    """

    spec: ExperimentSpec
    cells: List[CellResult]

    def cell(self, alpha: float, rank: int) -> CellResult:
        for cell in self.cells:
            if cell.alpha == float(alpha) and cell.rank == int(rank):
                return cell
        raise KeyError(f"No cell alpha={alpha}, r={rank} in the grid")

    def error_matrix(self) -> np.ndarray:
        """Mean errors of shape (len(alphas), len(ranks))."""
        errors = np.array([cell.mean_error for cell in self.cells])
        return errors.reshape(len(self.spec.alphas), len(self.spec.ranks))

    def log_error_matrix(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log10(self.error_matrix())

    def to_dataframe(self) -> pd.DataFrame:
        """log10 mean errors, rows alpha, columns r."""
        return pd.DataFrame(
            self.log_error_matrix(),
            index=pd.Index(self.spec.alphas, name="alpha"),
            columns=[str(rank) for rank in self.spec.ranks],
        )

    def cells_dataframe(self) -> pd.DataFrame:
        """One row per cell with the error of every trial."""
        rows = []
        for cell in self.cells:
            row = {"alpha": cell.alpha, "rank": cell.rank, "mean_error": cell.mean_error}
            row.update({f"trial_{k}": error for k, error in enumerate(cell.errors)})
            rows.append(row)
        return pd.DataFrame(rows)

    def write(self, project: Project, prefix: str = "phase_grid") -> Dict[str, str]:
        """
        Write the CSV matrix, the per-cell CSV and the SVG heatmap.

        Returns
        -------
        outputs : dict
                Written file names by kind.
        """
        matrix_path = project.path(f"{prefix}.csv")
        cells_path = project.path(f"{prefix}_cells.csv")
        heatmap_path = project.path(f"{prefix}.svg")
        write_csv(self.to_dataframe(), matrix_path, index=True)
        write_csv(self.cells_dataframe(), cells_path)
        # exact recoveries are drawn at the floor
        render_heatmap(
            np.log10(np.maximum(self.error_matrix(), HEATMAP_FLOOR)),
            self.spec.alphas,
            self.spec.ranks,
            heatmap_path,
            title=f"log10 mean relative error ({self.spec.method.value})",
        )
        return {
            "matrix": matrix_path.name,
            "cells": cells_path.name,
            "heatmap": heatmap_path.name,
        }


@timeit
def phase_grid(
    spec: ExperimentSpec, project: Optional[Project] = None, use_cache: bool = True
) -> GridReport:
    """
    Run a phase-transition grid.

    Parameters
    ----------
    spec : ExperimentSpec
            Grid settings.
    project : Project, optional
            Output directory. If given, cells are looked up in and stored to its
            database; see :meth:`GridReport.write` for the reports.
    use_cache : bool
            Reuse stored cells with identical arguments.

    Returns
    -------
    GridReport
            One cell per (alpha, r) combination; failed cells carry +inf.
    """
    coordinates = spec.coordinates
    cells: List[Optional[CellResult]] = [None] * len(coordinates)
    pending = []
    for index, (alpha, rank) in enumerate(coordinates):
        if project is not None and use_cache:
            stored = project.get_cell(
                spec.method.value, spec.cell_arguments(alpha, rank)
            )
            if stored is not None:
                cells[index] = CellResult(
                    alpha, rank, tuple(stored.errors["errors"]), cached=True
                )
                continue
        pending.append(index)
    log.info(
        f"Phase grid ({spec.method.value}): {len(pending)} of {len(coordinates)} cells"
        " to compute"
    )

    alphas = [coordinates[index][0] for index in pending]
    ranks = [coordinates[index][1] for index in pending]
    progress = dict(
        total=len(pending),
        ncols=70,
        desc="Phase grid",
        disable=not runtime_config.progress_bars,
    )
    workers = min(spec.workers, len(pending), get_machine_properties()["cpu"] or 1)
    if workers < spec.workers:
        log.debug(f"Running {workers} of {spec.workers} requested grid workers")
    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_quiet_worker
        ) as executor:
            computed = list(
                tqdm(
                    executor.map(run_cell, [spec] * len(pending), alphas, ranks),
                    **progress,
                )
            )
    else:
        computed = [
            run_cell(spec, alpha, rank)
            for alpha, rank in tqdm(zip(alphas, ranks), **progress)
        ]

    for index, cell in zip(pending, computed):
        cells[index] = cell
        if project is not None:
            project.save_cell(
                spec.method.value,
                spec.cell_arguments(cell.alpha, cell.rank),
                cell.alpha,
                cell.rank,
                cell.errors,
                cell.mean_error,
            )

    report = GridReport(spec, cells)
    failed = sum(not np.isfinite(cell.mean_error) for cell in cells)
    if failed:
        log.warning(f"{failed} of {len(cells)} grid cells contain failed trials")
    return report
