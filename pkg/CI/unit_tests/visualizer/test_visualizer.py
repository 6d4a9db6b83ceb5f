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
Test the visualizers.
"""
import numpy as np
import pytest

from rpcasuite.datagen import gen_instance
from rpcasuite.learning import TrainConfig, train
from rpcasuite.solver import HyperParams, SolverConfig, solve
from rpcasuite.utils.config import config as runtime_config
from rpcasuite.visualizer import plot_trace, plot_training, render_heatmap


def test_heatmap_is_deterministic(tmp_path):
    """Identical inputs give byte-identical SVG files; failed cells are allowed."""
    values = np.array([[-12.0, -3.5], [np.inf, -0.2], [-8.0, np.nan]])
    first = render_heatmap(values, [0.0, 0.2, 0.4], [2, 4], tmp_path / "a.svg")
    second = render_heatmap(values, [0.0, 0.2, 0.4], [2, 4], tmp_path / "b.svg")
    assert first.read_bytes() == second.read_bytes()
    assert b"<svg" in first.read_bytes()


def test_heatmap_shape_check(tmp_path):
    with pytest.raises(ValueError):
        render_heatmap(np.zeros((2, 2)), [0.0], [2, 4], tmp_path / "a.svg")


def test_bokeh_reports(tmp_path):
    runtime_config.progress_bars = False
    instance = gen_instance(8, 2, 0.1, seed=0)
    config = SolverConfig(rank=2, iterations=4)
    trace = solve(instance.observation, config, HyperParams(0.1, 0.05, 0.9, 0.5))
    assert plot_trace(trace, "trace", tmp_path).exists()

    result = train([instance], config, "sl", TrainConfig(steps=2))
    assert plot_training(result, "training", tmp_path).exists()
    runtime_config.progress_bars = True
