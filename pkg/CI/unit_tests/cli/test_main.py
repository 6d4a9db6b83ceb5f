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
Test the command line entry point.
"""
import importlib
import json
import os
from pathlib import Path
from tempfile import TemporaryDirectory

import cv2
import numpy as np
import pandas as pd
import pytest

import rpcasuite
from rpcasuite.cli import main
from rpcasuite.file_io import load_parameters, read_tensor
from rpcasuite.utils.exceptions import SolverDivergenceError

main_module = importlib.import_module("rpcasuite.cli.main")

cwd = os.getcwd()

SMALL_DATA = ["--n", "6", "--rank", "2", "--alpha", "0.1"]


@pytest.fixture(autouse=True)
def prepare_env():
    """Prepare temporary environment"""
    temp_dir = TemporaryDirectory()
    os.chdir(temp_dir.name)

    yield

    os.chdir(cwd)
    temp_dir.cleanup()


@pytest.fixture()
def instances():
    """Two small synthetic instances in the data directory."""
    code = main(
        ["--output", "data", "--no-progress", "datagen", *SMALL_DATA, "--count", "2"]
    )
    assert code == 0
    return Path("data")


def _runs(directory: str):
    project = rpcasuite.Project(directory)
    project.detach_file_logger()
    return project.runs


def test_datagen(instances):
    for index in range(2):
        for part in ("observation", "low_rank", "sparse"):
            assert (instances / f"instance_{index:03d}_{part}.tns3").exists()
    assert not (instances / "instance_000_mask.tns3").exists()

    table = pd.read_csv(instances / "instances.csv")
    assert list(table["instance"]) == ["instance_000", "instance_001"]

    observation = read_tensor(instances / "instance_000_observation.tns3")
    low_rank = read_tensor(instances / "instance_000_low_rank.tns3")
    sparse = read_tensor(instances / "instance_000_sparse.tns3")
    assert observation.shape == (6, 6, 6)
    np.testing.assert_allclose(observation, low_rank + sparse, atol=1e-12)

    meta = json.loads((instances / "instance_001.json").read_text())
    assert set(meta) == set(table.columns) - {"instance"}
    assert (meta["n"], meta["rank"], meta["alpha"], meta["kappa"]) == (6, 2, 0.1, 5.0)
    assert meta["seed"] == 1
    assert meta["model"] == "bernoulli"
    assert meta["theta"] > 0

    resolved = json.loads((instances / "resolved_config.json").read_text())
    assert resolved["data"]["n"] == 6
    assert (instances / "environment.txt").exists()

    runs = _runs("data")
    assert runs[0].command == "datagen"
    assert runs[0].status == "finished"
    assert runs[0].outputs["count"] == 2


def test_datagen_with_mask():
    code = main(["--output", "masked", "--no-progress", "datagen", *SMALL_DATA])
    assert code == 0
    assert not Path("masked/instance_000_mask.tns3").exists()

    code = main(
        ["--output", "masked", "--no-progress", "datagen", *SMALL_DATA, "--with-mask"]
    )
    assert code == 0
    mask = read_tensor("masked/instance_000_mask.tns3")
    assert set(np.unique(mask)) <= {0.0, 1.0}


def test_solve(instances):
    code = main(
        [
            "--output",
            "solved",
            "--no-progress",
            "solve",
            "--input",
            str(instances / "instance_000_observation.tns3"),
            "--ground-truth",
            str(instances / "instance_000_low_rank.tns3"),
            "--solver-rank",
            "2",
            "--iterations",
            "5",
        ]
    )
    assert code == 0
    trace = pd.read_csv("solved/trace.csv")
    assert list(trace.columns) == ["iteration", "loss", "error", "threshold"]
    assert len(trace) == 6
    assert np.all(np.isfinite(trace["error"]))
    assert read_tensor("solved/low_rank.tns3").shape == (6, 6, 6)
    assert read_tensor("solved/sparse.tns3").shape == (6, 6, 6)


def test_solve_without_ground_truth(instances):
    code = main(
        [
            "--output",
            "solved",
            "--no-progress",
            "solve",
            "--input",
            str(instances / "instance_000_observation.tns3"),
            "--iterations",
            "3",
        ]
    )
    assert code == 0
    trace = pd.read_csv("solved/trace.csv")
    assert trace["error"].isna().all()


def test_unknown_key_exits_with_configuration_code():
    code = main(["--set", "solver.bogus=1", "datagen"])
    assert code == 2


def test_unknown_scale_entry_exits_with_configuration_code(instances):
    content = {"zeta0": 1.0, "zeta1": 0.5, "rho": 0.9, "eta": 0.5}
    content["scale"] = {"s0": 1.0, "s2": 0.5}
    Path("params.json").write_text(json.dumps(content))
    code = main(
        [
            "--output",
            "out",
            "--no-progress",
            "solve",
            "--input",
            str(instances / "instance_000_observation.tns3"),
            "--params",
            "params.json",
        ]
    )
    assert code == 2


def test_bad_tensor_file_exits_with_data_code():
    Path("bad.tns3").write_bytes(b"XXXX" + bytes(40))
    code = main(["--output", "out", "--no-progress", "solve", "--input", "bad.tns3"])
    assert code == 3
    assert _runs("out")[0].status == "failed"


def test_divergence_exits_with_numerical_code(instances, monkeypatch):
    def diverging_solve(*args, **kwargs):
        raise SolverDivergenceError("diverged", iteration=0)

    monkeypatch.setattr(main_module, "solve", diverging_solve)
    code = main(
        [
            "--output",
            "out",
            "--no-progress",
            "solve",
            "--input",
            str(instances / "instance_000_observation.tns3"),
        ]
    )
    assert code == 4


def test_train_and_finetune(instances):
    code = main(
        [
            "--output",
            "trained",
            "--no-progress",
            "train",
            *SMALL_DATA,
            "--iterations",
            "3",
            "--steps",
            "2",
        ]
    )
    assert code == 0
    assert len(pd.read_csv("trained/training_log.csv")) == 2
    learned = load_parameters("trained/params.json")
    assert learned.raw is not None
    assert learned.scale.as_dict() == {"s0": 1.0, "s1": 0.5}
    assert _runs("trained")[0].outputs["threshold_scale"] == "per-instance"

    code = main(
        [
            "--output",
            "finetuned",
            "--no-progress",
            "finetune",
            "--input",
            str(instances / "instance_001_observation.tns3"),
            "--params",
            "trained/params.json",
            "--solver-rank",
            "2",
            "--iterations",
            "3",
            "--finetune-steps",
            "2",
        ]
    )
    assert code == 0
    for name in ("params.json", "training_log.csv", "trace.csv", "low_rank.tns3"):
        assert Path("finetuned", name).exists()


def test_tune_baseline(instances):
    code = main(
        [
            "--output",
            "tuned",
            "--no-progress",
            "tune-baseline",
            "--input",
            str(instances / "instance_000_observation.tns3"),
            "--ground-truth",
            str(instances / "instance_000_low_rank.tns3"),
            "--solver-rank",
            "2",
            "--iterations",
            "3",
            "--budget",
            "6",
        ]
    )
    assert code == 0
    assert len(pd.read_csv("tuned/tuning.csv")) == 6
    assert load_parameters("tuned/params.json").hyper_parameters is not None
    assert Path("tuned/trace.csv").exists()


def test_phase_grid_uses_cache():
    arguments = [
        "--output",
        "grid",
        "--no-progress",
        "phase-grid",
        "--method",
        "fixed",
        "--alphas",
        "0,0.1",
        "--ranks",
        "2",
        "--n",
        "6",
        "--iterations",
        "3",
    ]
    assert main(arguments) == 0
    assert main(arguments) == 0

    matrix = pd.read_csv("grid/phase_grid.csv")
    assert list(matrix["alpha"]) == [0.0, 0.1]
    assert list(matrix.columns) == ["alpha", "2"]
    assert Path("grid/phase_grid.svg").exists()
    assert len(pd.read_csv("grid/phase_grid_cells.csv")) == 2

    first, second = _runs("grid")
    assert first.outputs["cached_cells"] == 0
    assert second.outputs["cached_cells"] == 2


def test_sensitivity():
    code = main(
        [
            "--output",
            "sens",
            "--no-progress",
            "sensitivity",
            *SMALL_DATA,
            "--iterations",
            "3",
            "--finetune-steps",
            "2",
            "--instances",
            "4",
        ]
    )
    assert code == 0
    assert len(pd.read_csv("sens/sensitivity_instances.csv")) == 4
    assert Path("sens/sensitivity_quartiles.csv").exists()


def test_convert(tmp_path):
    frames = tmp_path / "frames"
    frames.mkdir()
    for index in range(3):
        cv2.imwrite(str(frames / f"f{index}.pgm"), np.full((4, 5), 50 * index, np.uint8))

    code = main(
        [
            "--output",
            "out",
            "--no-progress",
            "convert",
            "--frames",
            str(frames),
            "--to",
            "video.tns3",
        ]
    )
    assert code == 0
    video = read_tensor("video.tns3")
    assert video.shape == (4, 5, 3)
    np.testing.assert_array_equal(video[0, 0], [0.0, 50.0, 100.0])

