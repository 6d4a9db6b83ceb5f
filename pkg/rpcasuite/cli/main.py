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
Command line entry point ``rpcasuite``.

Exit codes: 0 success, 2 configuration error, 3 data format error, 4 numerical
failure.
"""
import argparse
import logging
import pathlib
import sys
from typing import Callable, Dict, List, Optional

import pandas as pd

from rpcasuite.cli.run_config import (
    experiment_spec,
    finetune_config,
    resolve_config,
    search_space,
    solver_config,
    train_config,
)
from rpcasuite.datagen.instance import RpcaInstance
from rpcasuite.datagen.synthetic import gen_instance
from rpcasuite.experiment.phase_grid import phase_grid
from rpcasuite.experiment.sensitivity import sensitivity_report
from rpcasuite.file_io.frame_stack import read_frame_stack
from rpcasuite.file_io.parameter_files import (
    load_parameters,
    save_parameters,
    write_csv,
    write_json,
)
from rpcasuite.file_io.tns3_files import read_tensor, write_tensor
from rpcasuite.learning.activations import (
    RawParams,
    ThresholdScale,
    activate,
    default_raw_params,
    invert_activation,
)
from rpcasuite.learning.trainer import finetune, train
from rpcasuite.project import Project
from rpcasuite.solver.losses import LossType
from rpcasuite.solver.scaled_gd import solve
from rpcasuite.tuning.baseline import tune
from rpcasuite.utils.config import config as runtime_config
from rpcasuite.utils.exceptions import (
    ConfigurationError,
    DataFormatError,
    NumericalFailure,
)
from rpcasuite.visualizer.d2_data_visualization import plot_trace, plot_training

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIGURATION = 2
EXIT_DATA_FORMAT = 3
EXIT_NUMERICAL = 4

# flags are stored as "<section>__<key>" and merged over the config file
SECTION_SEPARATOR = "__"


def _float_list(text: str) -> List[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _int_list(text: str) -> List[int]:
    return [int(item) for item in text.split(",") if item.strip()]


def _rank(text: str):
    values = _int_list(text)
    return values[0] if len(values) == 1 else values


def _add_data_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--n", dest="data__n", type=int, help="Size of every mode.")
    parser.add_argument("--rank", dest="data__rank", type=int, help="Planted rank.")
    parser.add_argument("--alpha", dest="data__alpha", type=float, help="Corruption.")
    parser.add_argument("--kappa", dest="data__kappa", type=float)
    parser.add_argument(
        "--model", dest="data__model", choices=["bernoulli", "per-fiber"]
    )
    parser.add_argument("--seed", dest="data__seed", type=int)


def _add_solver_flags(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--solver-rank",
        dest="solver__rank",
        type=_rank,
        help="Rank r or r1,r2,r3 of the estimate.",
    )
    parser.add_argument("--iterations", dest="solver__iterations", type=int)


def _add_training_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--steps", dest="training__steps", type=int)
    parser.add_argument("--finetune-steps", dest="training__finetune_steps", type=int)
    parser.add_argument("--learning-rate", dest="training__learning_rate", type=float)
    parser.add_argument(
        "--gradient-method",
        dest="training__gradient_method",
        choices=["central-diff", "forward-dual"],
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpcasuite",
        description="Tensor robust PCA with learned hyperparameters.",
    )
    parser.add_argument("--config", type=pathlib.Path, help="YAML or JSON run config.")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="Override one config value; may be repeated.",
    )
    parser.add_argument("--output", dest="output__dir", help="Output directory.")
    parser.add_argument(
        "--plot", dest="output__plot", action="store_true", default=None
    )
    parser.add_argument(
        "--no-progress",
        dest="output__progress_bars",
        action="store_false",
        default=None,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    datagen = commands.add_parser("datagen", help="Write synthetic instances.")
    _add_data_flags(datagen)
    datagen.add_argument("--count", dest="data__count", type=int)
    datagen.add_argument(
        "--with-mask", dest="data__with_mask", action="store_true", default=None
    )

    solve_parser = commands.add_parser("solve", help="Run the solver on a tensor.")
    solve_parser.add_argument("--input", type=pathlib.Path, required=True)
    solve_parser.add_argument("--params", type=pathlib.Path)
    solve_parser.add_argument("--ground-truth", type=pathlib.Path)
    _add_solver_flags(solve_parser)

    train_parser = commands.add_parser("train", help="Learn hyperparameters.")
    _add_data_flags(train_parser)
    _add_solver_flags(train_parser)
    _add_training_flags(train_parser)
    train_parser.add_argument(
        "--loss", dest="training__loss", choices=[kind.value for kind in LossType]
    )
    train_parser.add_argument("--init", type=pathlib.Path)

    finetune_parser = commands.add_parser(
        "finetune", help="Adapt hyperparameters to one observation."
    )
    finetune_parser.add_argument("--input", type=pathlib.Path, required=True)
    finetune_parser.add_argument("--params", type=pathlib.Path)
    finetune_parser.add_argument("--ground-truth", type=pathlib.Path)
    _add_solver_flags(finetune_parser)
    _add_training_flags(finetune_parser)

    tune_parser = commands.add_parser(
        "tune-baseline", help="Black-box search on one observation."
    )
    tune_parser.add_argument("--input", type=pathlib.Path, required=True)
    tune_parser.add_argument("--ground-truth", type=pathlib.Path)
    tune_parser.add_argument("--warm-start", type=pathlib.Path)
    tune_parser.add_argument("--budget", dest="search__budget", type=int)
    tune_parser.add_argument("--search-seed", dest="search__seed", type=int)
    _add_solver_flags(tune_parser)

    grid = commands.add_parser("phase-grid", help="Phase-transition grid.")
    grid.add_argument("--alphas", dest="experiment__alphas", type=_float_list)
    grid.add_argument("--ranks", dest="experiment__ranks", type=_int_list)
    grid.add_argument(
        "--method",
        dest="experiment__method",
        choices=["baseline", "supervised", "supervised+finetune", "ssl-only", "fixed"],
    )
    grid.add_argument("--trials", dest="experiment__trials", type=int)
    grid.add_argument("--workers", dest="experiment__workers", type=int)
    grid.add_argument(
        "--no-cache",
        dest="experiment__use_cache",
        action="store_false",
        default=None,
    )
    grid.add_argument("--n", dest="data__n", type=int)
    grid.add_argument("--iterations", dest="solver__iterations", type=int)
    _add_training_flags(grid)

    sensitivity = commands.add_parser(
        "sensitivity", help="Quartiles of the fine tuning parameter changes."
    )
    _add_data_flags(sensitivity)
    _add_solver_flags(sensitivity)
    _add_training_flags(sensitivity)
    sensitivity.add_argument("--instances", dest="experiment__instances", type=int)
    sensitivity.add_argument("--params", type=pathlib.Path)

    convert = commands.add_parser("convert", help="PGM frame directory to TNS3.")
    convert.add_argument("--frames", type=pathlib.Path, required=True)
    convert.add_argument("--pattern", default="*.pgm")
    convert.add_argument("--mask", action="store_true")
    convert.add_argument("--to", dest="target", type=pathlib.Path, required=True)
    return parser


def _flags(args: argparse.Namespace) -> Dict[str, dict]:
    flags: Dict[str, dict] = {}
    for name, value in vars(args).items():
        if SECTION_SEPARATOR in name:
            section, key = name.split(SECTION_SEPARATOR, 1)
            flags.setdefault(section, {})[key] = value
    return flags


def _warm_start(path: Optional[pathlib.Path]) -> RawParams:
    return default_raw_params() if path is None else load_parameters(path).raw


def _observation(args, config: dict) -> RpcaInstance:
    observation = read_tensor(args.input)
    ground_truth = None
    if getattr(args, "ground_truth", None) is not None:
        ground_truth = read_tensor(args.ground_truth)
    return RpcaInstance(
        observation=observation,
        rank=solver_config(config).rank,
        low_rank=ground_truth,
    )


def _synthetic(config: dict, index: int, with_mask: bool = False) -> RpcaInstance:
    data = config["data"]
    return gen_instance(
        data["n"],
        data["rank"],
        data["alpha"],
        kappa=data["kappa"],
        model=data["model"],
        seed=data["seed"] + index,
        fiber_mode=data["fiber_mode"],
        with_mask=with_mask or data["with_mask"],
    )


def _write_solution(project: Project, trace, outputs: dict, config: dict):
    write_csv(trace.to_dataframe(), project.path("trace.csv"))
    write_tensor(project.path("low_rank.tns3"), trace.low_rank)
    write_tensor(project.path("sparse.tns3"), trace.sparse)
    outputs.update(
        trace="trace.csv",
        low_rank="low_rank.tns3",
        sparse="sparse.tns3",
        final_loss=trace.final_loss,
        final_error=trace.final_error,
    )
    if config["output"]["plot"]:
        outputs["plot"] = plot_trace(trace, "trace", project.output_dir).name


def run_datagen(args, config: dict, project: Project, outputs: dict):
    rows = []
    for index in range(config["data"]["count"]):
        instance = _synthetic(config, index)
        stem = f"instance_{index:03d}"
        write_tensor(project.path(f"{stem}_observation.tns3"), instance.observation)
        write_tensor(project.path(f"{stem}_low_rank.tns3"), instance.low_rank)
        write_tensor(project.path(f"{stem}_sparse.tns3"), instance.sparse)
        if instance.mask is not None:
            write_tensor(project.path(f"{stem}_mask.tns3"), instance.mask)
        write_json(instance.meta.as_dict(), project.path(f"{stem}.json"))
        row = {"instance": stem}
        row.update(instance.meta.as_dict())
        rows.append(row)
    write_csv(pd.DataFrame(rows), project.path("instances.csv"))
    outputs.update(instances="instances.csv", count=len(rows))


def run_solve(args, config: dict, project: Project, outputs: dict):
    instance = _observation(args, config)
    scale = ThresholdScale.from_observation(instance.observation)
    if args.params is None:
        hyper_parameters = activate(default_raw_params(), scale)
    else:
        hyper_parameters = activate(load_parameters(args.params).raw, scale)
    trace = solve(
        instance.observation,
        solver_config(config),
        hyper_parameters,
        ground_truth=instance.low_rank,
    )
    _write_solution(project, trace, outputs, config)
    log.info(f"Final self-supervised loss {trace.final_loss:.6e}")


def run_train(args, config: dict, project: Project, outputs: dict):
    kind = LossType.from_value(config["training"]["loss"])
    settings = train_config(config)

    def dataset(step: int) -> RpcaInstance:
        return _synthetic(config, step, with_mask=kind is LossType.SM)

    log.info(
        f"Training on fresh instances from seed {config['data']['seed']}, one per step,"
        f" with the {kind.value} loss"
    )
    result = train(
        dataset, solver_config(config), kind, settings, _warm_start(args.init)
    )
    # every training instance has its own scale, readers rescale per observation
    save_parameters(project.path("params.json"), result.params, ThresholdScale())
    write_csv(result.to_dataframe(), project.path("training_log.csv"))
    outputs.update(
        params="params.json",
        threshold_scale="per-instance",
        training_log="training_log.csv",
        best_loss=result.best_loss,
        skipped_steps=result.skipped_steps,
    )
    if config["output"]["plot"]:
        outputs["plot"] = plot_training(result, "training", project.output_dir).name


def run_finetune(args, config: dict, project: Project, outputs: dict):
    instance = _observation(args, config)
    result = finetune(
        instance,
        solver_config(config),
        finetune_config(config),
        warm=_warm_start(args.params),
    )
    scale = ThresholdScale.from_observation(instance.observation)
    save_parameters(project.path("params.json"), result.params, scale)
    write_csv(result.training.to_dataframe(), project.path("training_log.csv"))
    outputs.update(params="params.json", training_log="training_log.csv")
    _write_solution(project, result.trace, outputs, config)


def run_tune_baseline(args, config: dict, project: Project, outputs: dict):
    instance = _observation(args, config)
    scale = ThresholdScale.from_observation(instance.observation)
    warm = None
    if args.warm_start is not None:
        warm = activate(load_parameters(args.warm_start).raw, scale)
    settings = solver_config(config)
    result = tune(
        instance,
        settings,
        search_space(config),
        seed=config["search"]["seed"],
        warm_start=warm,
        workers=config["search"]["workers"],
    )
    write_csv(result.to_dataframe(), project.path("tuning.csv"))
    save_parameters(
        project.path("params.json"), invert_activation(result.best, scale), scale
    )
    outputs.update(tuning="tuning.csv", params="params.json", best_loss=result.best_loss)
    trace = solve(
        instance.observation, settings, result.best, ground_truth=instance.low_rank
    )
    _write_solution(project, trace, outputs, config)


def run_phase_grid(args, config: dict, project: Project, outputs: dict):
    report = phase_grid(
        experiment_spec(config), project, use_cache=config["experiment"]["use_cache"]
    )
    outputs.update(report.write(project))
    outputs["cached_cells"] = sum(cell.cached for cell in report.cells)


def run_sensitivity(args, config: dict, project: Project, outputs: dict):
    count = config["experiment"]["instances"]
    instances = [_synthetic(config, index) for index in range(count)]
    report = sensitivity_report(
        instances,
        solver_config(config),
        _warm_start(args.params),
        finetune_config(config),
        min_reduction=config["experiment"]["min_reduction"],
    )
    write_csv(report.instances, project.path("sensitivity_instances.csv"))
    write_csv(report.quartiles, project.path("sensitivity_quartiles.csv"), index=True)
    outputs.update(
        instances="sensitivity_instances.csv",
        quartiles="sensitivity_quartiles.csv",
        status=report.status,
        ordering_holds=report.ordering_holds,
    )


def run_convert(args, config: dict, project: Project, outputs: dict):
    tensor = read_frame_stack(args.frames, args.pattern, binarize=args.mask)
    write_tensor(args.target, tensor)
    outputs.update(tensor=str(args.target), shape=list(tensor.shape))


COMMANDS: Dict[str, Callable] = {
    "datagen": run_datagen,
    "solve": run_solve,
    "train": run_train,
    "finetune": run_finetune,
    "tune-baseline": run_tune_baseline,
    "phase-grid": run_phase_grid,
    "sensitivity": run_sensitivity,
    "convert": run_convert,
}


def _execute(args: argparse.Namespace) -> int:
    config = resolve_config(args.config, args.set, _flags(args))
    runtime_config.progress_bars = bool(config["output"]["progress_bars"])
    project = Project(config["output"]["dir"])
    try:
        project.echo_config(config)
        project.write_environment_report()
        with project.record(args.command, config) as outputs:
            COMMANDS[args.command](args, config, project, outputs)
    finally:
        project.detach_file_logger()
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns
    -------
    int
            The process exit code.
    """
    args = build_parser().parse_args(argv)
    try:
        return _execute(args)
    except ConfigurationError as err:
        log.error(f"Configuration error: {err}")
        return EXIT_CONFIGURATION
    except DataFormatError as err:
        log.error(f"Data format error: {err}")
        return EXIT_DATA_FORMAT
    except NumericalFailure as err:
        log.error(f"Numerical failure: {err}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
