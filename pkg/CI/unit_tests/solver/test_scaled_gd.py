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
Test the ScaledGD solver module.
"""
import unittest

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpcasuite.datagen import gen_instance, gen_low_rank, make_generator
from rpcasuite.solver import (
    HyperParams,
    SolverConfig,
    TuckerFactors,
    schedule,
    shrink,
    solve,
    spectral_init,
    step,
)
from rpcasuite.solver.scaled_gd import breve_matrix, residual_gradients, residual_loss
from rpcasuite.tensor import linf_norm, matricize
from rpcasuite.utils.exceptions import (
    InvalidHyperParametersError,
    NegativeThresholdError,
    RankOutOfRangeError,
    SolverDivergenceError,
)
from rpcasuite.utils.testing import central_difference


def _random_factors(seed: int = 0, shape=(4, 5, 3), rank=(2, 3, 2)) -> TuckerFactors:
    generator = np.random.default_rng(seed)
    factors = [generator.standard_normal((n, r)) for n, r in zip(shape, rank)]
    return TuckerFactors(*factors, generator.standard_normal(rank))


class TestShrinkAndSchedule(unittest.TestCase):
    """
    A test class for the soft thresholding and the threshold schedule.
    """

    def test_shrink(self):
        """
        Test the shrink method.

        Returns
        -------
        assert the soft-thresholded values and that a zero threshold is the identity.
        """
        values = np.array([-3.0, -0.5, 0.0, 0.5, 2.0])
        np.testing.assert_array_equal(shrink(values, 1.0), [-2.0, 0.0, 0.0, 0.0, 1.0])
        np.testing.assert_array_equal(shrink(values, 0.0), values)
        with self.assertRaises(NegativeThresholdError):
            shrink(values, -0.1)

    def test_schedule(self):
        """
        Test the schedule method.

        Returns
        -------
        assert zeta0 at t = 0 and a geometric decay starting at zeta1.
        """
        hyper_parameters = HyperParams(zeta0=2.0, zeta1=1.0, rho=0.5, eta=0.1)
        self.assertEqual(schedule(hyper_parameters, 0), 2.0)
        self.assertEqual(schedule(hyper_parameters, 1), 1.0)
        self.assertEqual(schedule(hyper_parameters, 3), 0.25)

    def test_invalid_hyper_parameters(self):
        """
        Test the HyperParams validation.

        Returns
        -------
        assert that non-positive thresholds and rho outside (0, 1) are rejected.
        """
        with self.assertRaises(InvalidHyperParametersError):
            HyperParams(zeta0=0.0, zeta1=1.0, rho=0.5, eta=0.1)
        with self.assertRaises(InvalidHyperParametersError):
            HyperParams(zeta0=1.0, zeta1=1.0, rho=1.0, eta=0.1)
        with self.assertRaises(InvalidHyperParametersError):
            HyperParams(zeta0=1.0, zeta1=np.nan, rho=0.5, eta=0.1)

    def test_scaled_hyper_parameters(self):
        """
        Test the HyperParams.scaled method.

        Returns
        -------
        assert that only the thresholds are scaled.
        """
        scaled = HyperParams(1.0, 0.5, 0.9, 0.3).scaled(4.0)
        self.assertEqual(
            scaled.as_dict(), {"zeta0": 4.0, "zeta1": 2.0, "rho": 0.9, "eta": 0.3}
        )


@settings(max_examples=50, deadline=None)
@given(
    values=st.lists(
        st.floats(min_value=-1e3, max_value=1e3, allow_nan=False), min_size=1, max_size=30
    ),
    threshold=st.floats(min_value=0.0, max_value=10.0),
    factor=st.sampled_from([0.25, 0.5, 2.0, 8.0]),
)
def test_shrink_properties(values, threshold, factor):
    """Soft thresholding is homogeneous and only moves entries towards zero."""
    values = np.array(values)
    shrunk = shrink(values, threshold)

    assert np.all(np.abs(shrunk) <= np.abs(values))
    assert np.sum(np.abs(shrunk)) <= np.sum(np.abs(values))
    kept = shrunk != 0
    assert np.all(np.abs(values[kept]) > threshold)
    np.testing.assert_array_equal(np.sign(shrunk[kept]), np.sign(values[kept]))
    np.testing.assert_allclose(
        shrink(factor * values, factor * threshold),
        factor * shrunk,
        rtol=1e-12,
        atol=1e-300,
    )
    np.testing.assert_array_equal(shrink(values, 0.0), values)


def test_residual_gradients_match_finite_differences():
    """Analytic factor and core gradients agree with central differences."""
    factors = _random_factors()
    generator = np.random.default_rng(7)
    observation = generator.standard_normal(factors.shape)
    sparse = shrink(generator.standard_normal(factors.shape), 1.0)
    factor_gradients, core_gradient = residual_gradients(observation, factors, sparse)

    items = list(factors.factors) + [factors.core]
    for index, analytic in enumerate(list(factor_gradients) + [core_gradient]):

        def loss(value, index=index):
            updated = list(items)
            updated[index] = value
            return residual_loss(observation, TuckerFactors(*updated), sparse)

        numeric = central_difference(loss, items[index])
        np.testing.assert_allclose(analytic, numeric, rtol=1e-6, atol=1e-6)


def test_breve_matrix_gives_factor_gradient():
    """M_k(R) Ub_k reproduces the factor gradients computed with mode products."""
    factors = _random_factors(seed=3)
    observation = np.random.default_rng(4).standard_normal(factors.shape)
    sparse = np.zeros(factors.shape)
    residual = factors.reconstruct() - observation
    factor_gradients, _ = residual_gradients(observation, factors, sparse)
    for mode in (1, 2, 3):
        np.testing.assert_allclose(
            factor_gradients[mode - 1],
            matricize(residual, mode) @ breve_matrix(factors, mode),
            atol=1e-12,
        )


def test_step_keeps_exact_fixed_point():
    """Factors that explain the observation exactly are a fixed point of a step."""
    factors = _random_factors(seed=5, shape=(6, 5, 4), rank=(2, 2, 2))
    observation = factors.reconstruct()
    config = SolverConfig(rank=(2, 2, 2), iterations=1)
    hyper_parameters = HyperParams(zeta0=1.0, zeta1=0.5, rho=0.9, eta=0.5)
    new_factors, sparse = step(observation, factors, hyper_parameters, 0, config)
    np.testing.assert_array_equal(sparse, np.zeros_like(observation))
    before = (*factors.factors, factors.core)
    after = (*new_factors.factors, new_factors.core)
    for old, new in zip(before, after):
        np.testing.assert_array_equal(old, new)


def test_spectral_init_is_orthonormal():
    instance = gen_instance(12, 2, 0.1, seed=2)
    config = SolverConfig(rank=2, iterations=0)
    scale = linf_norm(instance.observation)
    hyper_parameters = HyperParams(1.0, 0.5, 0.9, 0.5).scaled(scale)
    factors = spectral_init(instance.observation, config, hyper_parameters)
    for factor in factors.factors:
        np.testing.assert_allclose(factor.T @ factor, np.eye(2), atol=1e-12)


def test_spectral_init_threshold_extremes():
    """A threshold above every entry gives the raw HOSVD, a tiny one the zero tensor."""
    instance = gen_instance(8, 2, 0.0, kappa=3.0, seed=5)
    observation = instance.observation
    config = SolverConfig(rank=2, iterations=0)
    largest = linf_norm(observation)

    raw = spectral_init(observation, config, HyperParams(largest, largest, 0.9, 0.5))
    np.testing.assert_allclose(
        raw.reconstruct(), observation, atol=1e-9 * np.linalg.norm(observation)
    )
    clipped = spectral_init(observation, config, HyperParams(1e-12, 1e-12, 0.9, 0.5))
    assert linf_norm(clipped.reconstruct()) <= 1e-10


def test_skip_full_rank_modes():
    """Modes with r_k == n_k keep the identity factor."""
    instance = gen_instance(5, 2, 0.0, seed=1)
    observation = instance.observation[:, :, :2]
    config = SolverConfig(rank=(2, 2, 2), iterations=3, skip_full_rank_modes=True)
    assert config.skipped_modes(observation.shape) == (False, False, True)
    trace = solve(observation, config, HyperParams(1.0, 0.5, 0.9, 0.5))
    np.testing.assert_array_equal(trace.factors.u3, np.eye(2))


def test_solve_trace_layout():
    """A solve with T iterations records T + 1 rows with matching thresholds."""
    instance = gen_instance(10, 2, 0.1, seed=4)
    config = SolverConfig(rank=2, iterations=5)
    scale = linf_norm(instance.observation)
    hyper_parameters = HyperParams(scale, 0.3 * scale, 0.85, 0.4)
    trace = solve(instance.observation, config, hyper_parameters, instance.low_rank)

    assert len(trace) == 6
    assert [record.iteration for record in trace.records] == list(range(6))
    np.testing.assert_allclose(
        trace.thresholds, [schedule(hyper_parameters, t) for t in range(6)]
    )
    frame = trace.to_dataframe()
    assert list(frame.columns) == ["iteration", "loss", "error", "threshold"]
    assert trace.low_rank.shape == instance.shape
    assert trace.final_error == trace.errors[-1]


def test_solve_without_iterations_returns_initialization():
    instance = gen_instance(8, 2, 0.0, seed=0)
    config = SolverConfig(rank=2, iterations=0)
    hyper_parameters = HyperParams(1.0, 0.5, 0.9, 0.5)
    trace = solve(instance.observation, config, hyper_parameters)
    initial = spectral_init(instance.observation, config, hyper_parameters)
    assert len(trace) == 1
    np.testing.assert_array_equal(trace.low_rank, initial.reconstruct())
    assert trace.final_error is None


def test_scale_equivariance():
    """Scaling Y and the thresholds by c scales every iterate by c."""
    instance = gen_instance(10, 2, 0.1, seed=6)
    config = SolverConfig(rank=2, iterations=10)
    scale = linf_norm(instance.observation)
    hyper_parameters = HyperParams(scale, 0.3 * scale, 0.85, 0.4)
    factor = 4.0
    scaled_observation = factor * instance.observation
    scaled_hyper_parameters = hyper_parameters.scaled(factor)
    tolerance = dict(rtol=1e-10, atol=1e-10 * factor * scale)

    factors = spectral_init(instance.observation, config, hyper_parameters)
    scaled_factors = spectral_init(scaled_observation, config, scaled_hyper_parameters)
    for iteration in range(config.iterations + 1):
        if iteration > 0:
            factors, sparse = step(
                instance.observation, factors, hyper_parameters, iteration - 1, config
            )
            scaled_factors, scaled_sparse = step(
                scaled_observation,
                scaled_factors,
                scaled_hyper_parameters,
                iteration - 1,
                config,
            )
            np.testing.assert_allclose(scaled_sparse, factor * sparse, **tolerance)
        for old, new in zip(factors.factors, scaled_factors.factors):
            np.testing.assert_allclose(new, old, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(
            scaled_factors.core, factor * factors.core, **tolerance
        )
        np.testing.assert_allclose(
            scaled_factors.reconstruct(), factor * factors.reconstruct(), **tolerance
        )

    trace = solve(instance.observation, config, hyper_parameters, instance.low_rank)
    scaled_instance = instance.scaled(factor)
    scaled_trace = solve(
        scaled_instance.observation,
        config,
        scaled_hyper_parameters,
        scaled_instance.low_rank,
    )
    np.testing.assert_allclose(scaled_trace.errors, trace.errors, rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(scaled_trace.losses, trace.losses / factor, rtol=1e-10)


def test_spectral_init_beats_raw_hosvd():
    """Clipping large corruptions before the HOSVD gives a closer initial estimate."""
    low_rank, _ = gen_low_rank(20, 2, 1.0, seed=3)
    ceiling = linf_norm(low_rank)
    generator = make_generator(3, 9)
    support = generator.random(low_rank.shape) < 0.05
    signs = np.where(generator.random(low_rank.shape) < 0.5, -1.0, 1.0)
    observation = low_rank + np.where(support, 5.0 * ceiling * signs, 0.0)
    config = SolverConfig(rank=2, iterations=0)

    clipped = spectral_init(
        observation, config, HyperParams(ceiling, 0.5 * ceiling, 0.9, 0.5)
    )
    # a threshold at the largest entry leaves Y itself to the HOSVD
    largest = linf_norm(observation)
    raw = spectral_init(observation, config, HyperParams(largest, largest, 0.9, 0.5))

    def distance(factors):
        return np.linalg.norm(factors.reconstruct() - low_rank) / np.linalg.norm(low_rank)

    assert distance(clipped) < distance(raw)


def test_singular_gram_is_reported():
    """A factor without full column rank stops the solve with a partial trace."""
    instance = gen_instance(6, 2, 0.1, seed=8)
    factors = TuckerFactors(
        np.zeros((6, 2)), np.eye(6, 2), np.eye(6, 2), np.ones((2, 2, 2))
    )
    config = SolverConfig(rank=2, iterations=3)
    hyper_parameters = HyperParams(1.0, 0.5, 0.9, 0.5)
    with pytest.raises(SolverDivergenceError) as info:
        solve(instance.observation, config, hyper_parameters, initial_factors=factors)
    assert info.value.iteration == 0
    assert len(info.value.trace) == 1


def test_rank_out_of_range():
    observation = np.ones((3, 3, 3))
    with pytest.raises(RankOutOfRangeError):
        solve(observation, SolverConfig(rank=4), HyperParams(1.0, 0.5, 0.9, 0.5))
