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
Test the synthetic instance generator.
"""
import unittest

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpcasuite.datagen import (
    RpcaInstance,
    SparsityModel,
    gen_instance,
    gen_low_rank,
    gen_sparse,
    random_orthonormal,
    superdiagonal_core,
)
from rpcasuite.tensor import l1_norm, matricize
from rpcasuite.utils.exceptions import ConfigurationError, ShapeMismatchError


class TestSynthetic(unittest.TestCase):
    """
    A test class for the synthetic data generator.
    """

    def test_reproducible(self):
        """
        Test the gen_instance method for reproducibility.

        Returns
        -------
        assert that equal seeds give bitwise equal instances and other seeds do not.
        """
        first = gen_instance(8, 2, 0.3, seed=11)
        second = gen_instance(8, 2, 0.3, seed=11)
        np.testing.assert_array_equal(first.observation, second.observation)
        np.testing.assert_array_equal(first.sparse, second.sparse)
        other = gen_instance(8, 2, 0.3, seed=12)
        self.assertFalse(np.array_equal(first.observation, other.observation))

    def test_instance_consistency(self):
        """
        Test that Y = X* + S* and the metadata.

        Returns
        -------
        assert the decomposition and the corruption magnitude.
        """
        instance = gen_instance(10, 3, 0.2, kappa=5.0, seed=1)
        np.testing.assert_array_equal(
            instance.observation, instance.low_rank + instance.sparse
        )
        theta = l1_norm(instance.low_rank) / 10**3
        self.assertAlmostEqual(instance.meta.theta, theta)
        self.assertLessEqual(np.max(np.abs(instance.sparse)), theta)
        self.assertEqual(instance.meta.as_dict()["model"], "bernoulli")

    def test_low_rank_structure(self):
        """
        Test the gen_low_rank method.

        Returns
        -------
        assert multilinear rank r and condition number kappa of every unfolding.
        """
        low_rank, factors = gen_low_rank(9, 3, 4.0, seed=5)
        for mode in (1, 2, 3):
            singular_values = np.linalg.svd(matricize(low_rank, mode), compute_uv=False)
            self.assertLess(singular_values[3], 1e-12)
            self.assertAlmostEqual(singular_values[0] / singular_values[2], 4.0)
        np.testing.assert_allclose(factors.reconstruct(), low_rank, atol=1e-15)

    def test_superdiagonal_core(self):
        """
        Test the superdiagonal_core method.

        Returns
        -------
        assert the geometric diagonal and the rank-one special case.
        """
        core = superdiagonal_core(3, 9.0)
        np.testing.assert_allclose(np.diag(core[:, :, 0]), [1.0, 0.0, 0.0])
        self.assertAlmostEqual(core[1, 1, 1], 1.0 / 3.0)
        self.assertAlmostEqual(core[2, 2, 2], 1.0 / 9.0)
        np.testing.assert_array_equal(superdiagonal_core(1, 1.0), np.ones((1, 1, 1)))
        np.testing.assert_array_equal(superdiagonal_core(1, 5.0), np.ones((1, 1, 1)))
        with self.assertRaises(ConfigurationError):
            superdiagonal_core(2, 0.5)

    def test_rank_one_instance(self):
        """
        Test gen_instance with r = 1 and the default kappa.

        Returns
        -------
        assert a rank-one ground truth with unit Frobenius norm.
        """
        instance = gen_instance(6, 1, 0.1, seed=0)
        self.assertEqual(instance.meta.kappa, 5.0)
        self.assertAlmostEqual(np.linalg.norm(instance.low_rank), 1.0)
        singular_values = np.linalg.svd(matricize(instance.low_rank, 1), compute_uv=False)
        self.assertLess(singular_values[1], 1e-12)

    def test_invalid_alpha(self):
        """
        Test the alpha range check.

        Returns
        -------
        assert that alpha outside [0, 1) is rejected.
        """
        for alpha in (-0.1, 1.0):
            with self.assertRaises(ConfigurationError):
                gen_instance(5, 2, alpha)

    def test_with_mask(self):
        """
        Test the with_mask method.

        Returns
        -------
        assert that the mask marks the support of S*.
        """
        instance = gen_instance(6, 2, 0.3, seed=2, with_mask=True)
        np.testing.assert_array_equal(instance.mask, instance.sparse != 0)
        self.assertIsNone(RpcaInstance(instance.observation, 2).mask)

    def test_inconsistent_instance(self):
        """
        Test the RpcaInstance validation.

        Returns
        -------
        assert that Y != X* + S* is rejected.
        """
        instance = gen_instance(5, 2, 0.2, seed=0)
        with self.assertRaises(ShapeMismatchError):
            RpcaInstance(
                instance.observation + 1.0,
                2,
                low_rank=instance.low_rank,
                sparse=instance.sparse,
            )


def test_random_orthonormal():
    matrix = random_orthonormal(12, 4, seed=3)
    np.testing.assert_allclose(matrix.T @ matrix, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("mode", [1, 2, 3])
def test_per_fiber_count(mode):
    """Every fiber of the chosen mode holds floor(alpha * n) corruptions."""
    shape = (6, 7, 8)
    model = SparsityModel.per_fiber(0.5, mode)
    sparse = gen_sparse(shape, model, theta=1.0, seed=4)
    counts = np.count_nonzero(sparse, axis=mode - 1)
    np.testing.assert_array_equal(counts, np.full(counts.shape, shape[mode - 1] // 2))


@settings(max_examples=25, deadline=None)
@given(
    alpha=st.floats(min_value=0.0, max_value=0.95),
    seed=st.integers(min_value=0, max_value=2**32),
)
def test_bernoulli_support_bounds(alpha, seed):
    """Corruptions stay within (-theta, theta) and zero alpha corrupts nothing."""
    sparse = gen_sparse((5, 5, 5), SparsityModel.entrywise(alpha), 0.25, seed)
    assert np.all(np.abs(sparse) <= 0.25)
    if alpha == 0.0:
        assert not np.any(sparse)
