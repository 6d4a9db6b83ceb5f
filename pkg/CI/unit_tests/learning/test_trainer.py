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
Test the training loops.
"""
import unittest

import numpy as np
import pytest

from rpcasuite.datagen import RpcaInstance, gen_instance
from rpcasuite.learning import (
    Adam,
    RawParams,
    TrainConfig,
    default_raw_params,
    finetune,
    train,
)
from rpcasuite.solver import LossType, SolverConfig
from rpcasuite.utils.config import config as runtime_config
from rpcasuite.utils.exceptions import ConfigurationError, MissingLabelError


@pytest.fixture(autouse=True)
def quiet_progress_bars():
    runtime_config.progress_bars = False
    yield
    runtime_config.progress_bars = True


@pytest.fixture(scope="module")
def instances():
    return [gen_instance(8, 2, 0.1, seed=seed) for seed in range(2)]


class TestAdam(unittest.TestCase):
    """
    A test class for the Adam update.
    """

    def test_first_step(self):
        """
        Test the first Adam update.

        Returns
        -------
        assert that the first step moves every entry by the step size.
        """
        params = np.array([1.0, -2.0, 0.5])
        gradient = np.array([3.0, -0.5, 1e-3])
        updated = Adam().update(params, gradient, 0.1)
        np.testing.assert_allclose(updated, params - 0.1 * np.sign(gradient), rtol=1e-4)


def test_train_log(instances):
    """Every step is logged with its activated hyperparameters."""
    config = SolverConfig(rank=2, iterations=4)
    result = train(instances, config, LossType.SL, TrainConfig(steps=3))
    frame = result.to_dataframe()
    assert len(result.log) == 3
    assert list(frame.columns[:7]) == [
        "step",
        "loss",
        "zeta0",
        "zeta1",
        "rho",
        "eta",
        "step_size",
    ]
    assert result.skipped_steps == 0
    assert result.best_loss == np.min(result.losses)
    assert result.log[result.best_step].raw == result.params


def test_zero_learning_rate_keeps_start(instances):
    """Without a step size the parameters stay at the start and training stops early."""
    config = SolverConfig(rank=2, iterations=3)
    init = RawParams(0.1, -0.2, 2.5, 0.0)
    train_config = TrainConfig(steps=20, learning_rate=0.0, patience=2)
    result = train(instances[:1], config, LossType.SSL, train_config, init=init)
    assert len(result.log) == 3
    assert all(record.raw == init for record in result.log)
    assert result.params == init
    assert result.best_step == 0


def test_dataset_callable():
    """A callable dataset is asked for the instance of every step."""
    requested = []

    def source(step):
        requested.append(step)
        return gen_instance(8, 2, 0.1, seed=100 + step)

    train(source, SolverConfig(rank=2, iterations=2), "sl", TrainConfig(steps=2))
    assert requested == [0, 1]


def test_dataset_checks(instances):
    config = SolverConfig(rank=2, iterations=2)
    with pytest.raises(ConfigurationError):
        train([], config, "sl")
    unlabeled = RpcaInstance(instances[0].observation, 2)
    with pytest.raises(MissingLabelError):
        train([unlabeled], config, "sl", TrainConfig(steps=1))


def test_finetune_never_worse_than_warm_start(instances):
    instance = RpcaInstance(instances[1].observation, 2)
    config = SolverConfig(rank=2, iterations=5)
    warm = default_raw_params()
    result = finetune(instance, config, TrainConfig.finetune_defaults(steps=4), warm=warm)
    assert result.training.best_loss <= result.training.losses[0]
    assert result.evaluations == 9 * len(result.training.log) + 1
    assert result.trace.final_error is None
    assert len(result.trace) == 6
