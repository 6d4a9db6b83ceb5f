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
Run configuration: defaults, config files, overrides and the records built from them.

A config file is YAML (JSON files are read verbatim). Its sections are merged over
the defaults, then "--set section.key=value" pairs, then explicit command line
flags; the last one wins.
"""
import copy
import logging
import pathlib
from typing import Any, Dict, Iterable, Optional, Union

import yaml

from rpcasuite.experiment.phase_grid import ExperimentSpec
from rpcasuite.learning.hyper_gradient import TrainConfig
from rpcasuite.solver.hyperparameters import SolverConfig
from rpcasuite.tuning.baseline import SearchSpace
from rpcasuite.utils.exceptions import ConfigurationError

log = logging.getLogger(__name__)

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "solver": {
        "rank": None,
        "iterations": 100,
        "skip_full_rank_modes": False,
    },
    "training": {
        "loss": "sl",
        "steps": 1000,
        "learning_rate": 0.05,
        "lr_decay": 0.95,
        "decay_interval": 50,
        "gradient_method": "central-diff",
        "fd_step": 1e-3,
        "early_stop_tolerance": 1e-6,
        "patience": 0,
        "seed": 0,
        "workers": 1,
        "finetune_steps": 500,
        "finetune_patience": 50,
    },
    "search": {
        "zeta0_bounds": [1e-4, 2.0],
        "zeta1_bounds": [1e-4, 2.0],
        "rho_bounds": [0.5, 0.999],
        "eta_bounds": [0.05, 1.5],
        "budget": 500,
        "exploration_fraction": 0.6,
        "initial_sigma": 0.1,
        "sigma_decay": 0.7,
        "seed": 0,
        "workers": 1,
    },
    "experiment": {
        "alphas": [0.0, 0.2, 0.4, 0.6],
        "ranks": [2, 4, 6],
        "trials": 1,
        "method": "supervised+finetune",
        "seed": 0,
        "workers": 1,
        "use_cache": True,
        "instances": 20,
        "min_reduction": 0.9,
    },
    "data": {
        "n": 30,
        "rank": 3,
        "alpha": 0.2,
        "kappa": 5.0,
        "model": "bernoulli",
        "fiber_mode": 1,
        "seed": 0,
        "count": 1,
        "with_mask": False,
    },
    "output": {
        "dir": "rpcasuite_output",
        "plot": False,
        "progress_bars": True,
    },
}

PathLike = Union[str, pathlib.Path]


def default_config() -> dict:
    return copy.deepcopy(DEFAULTS)


def _merge(base: dict, override: dict, where: str = "") -> dict:
    for key, value in override.items():
        location = f"{where}{key}"
        if key not in base:
            raise ConfigurationError(f"Unknown configuration key '{location}'")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigurationError(f"'{location}' must be a mapping")
            _merge(base[key], value, f"{location}.")
        else:
            base[key] = value
    return base


def load_run_config(path: PathLike) -> dict:
    """
    Read a YAML or JSON config file.

    Returns
    -------
    dict
            The raw file content, an empty dict for an empty file.
    """
    path = pathlib.Path(path)
    try:
        content = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as err:
        raise ConfigurationError(f"Cannot read the config file {path}: {err}") from err
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigurationError(f"{path} must hold a mapping of sections")
    return content


def parse_assignment(assignment: str) -> dict:
    """
    Turn "section.key=value" into {"section": {"key": value}}.

    The value is parsed as YAML, so numbers, booleans and lists keep their type.
    """
    name, separator, text = assignment.partition("=")
    if not separator or "." not in name:
        raise ConfigurationError(
            f"Overrides must look like section.key=value, got '{assignment}'"
        )
    section, key = name.split(".", 1)
    try:
        value = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ConfigurationError(f"Cannot parse the value of '{name}': {err}") from err
    return {section: {key: value}}


def resolve_config(
    path: Optional[PathLike] = None,
    assignments: Iterable[str] = (),
    flags: Optional[dict] = None,
) -> dict:
    """
    Merge defaults, config file, assignments and flags in that order.

    Parameters
    ----------
    path : str or pathlib.Path, optional
            Config file.
    assignments : iterable of str
            "section.key=value" overrides.
    flags : dict, optional
            {section: {key: value}} from explicit command line flags; None values
            are ignored.

    Returns
    -------
    dict
            The resolved configuration.
    """
    config = default_config()
    if path is not None:
        _merge(config, load_run_config(path))
    for assignment in assignments:
        _merge(config, parse_assignment(assignment))
    for section, values in (flags or {}).items():
        given = {key: value for key, value in values.items() if value is not None}
        _merge(config, {section: given})
    return config


def solver_config(config: dict, rank=None) -> SolverConfig:
    """Solver settings; rank falls back to solver.rank, then to data.rank."""
    section = config["solver"]
    if rank is None:
        rank = section["rank"] if section["rank"] is not None else config["data"]["rank"]
    return SolverConfig(
        rank=rank,
        iterations=section["iterations"],
        skip_full_rank_modes=bool(section["skip_full_rank_modes"]),
    )


def _train_settings(section: dict) -> dict:
    return {
        key: section[key]
        for key in (
            "learning_rate",
            "lr_decay",
            "decay_interval",
            "gradient_method",
            "fd_step",
            "early_stop_tolerance",
            "seed",
            "workers",
        )
    }


def train_config(config: dict) -> TrainConfig:
    section = config["training"]
    return TrainConfig(
        steps=section["steps"], patience=section["patience"], **_train_settings(section)
    )


def finetune_config(config: dict) -> TrainConfig:
    section = config["training"]
    return TrainConfig(
        steps=section["finetune_steps"],
        patience=section["finetune_patience"],
        **_train_settings(section),
    )


def search_space(config: dict) -> SearchSpace:
    section = config["search"]
    return SearchSpace(
        zeta0_bounds=tuple(section["zeta0_bounds"]),
        zeta1_bounds=tuple(section["zeta1_bounds"]),
        rho_bounds=tuple(section["rho_bounds"]),
        eta_bounds=tuple(section["eta_bounds"]),
        budget=section["budget"],
        exploration_fraction=section["exploration_fraction"],
        initial_sigma=section["initial_sigma"],
        sigma_decay=section["sigma_decay"],
    )


def experiment_spec(config: dict) -> ExperimentSpec:
    section, data = config["experiment"], config["data"]
    return ExperimentSpec(
        alphas=tuple(section["alphas"]),
        ranks=tuple(section["ranks"]),
        n=data["n"],
        kappa=data["kappa"],
        trials=section["trials"],
        iterations=config["solver"]["iterations"],
        method=section["method"],
        seed=section["seed"],
        model=data["model"],
        training=train_config(config),
        finetuning=finetune_config(config),
        search=search_space(config),
        workers=section["workers"],
        output_dir=str(config["output"]["dir"]),
    )
