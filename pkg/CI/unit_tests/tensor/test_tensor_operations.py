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
Test the tensor operations module.
"""
import unittest

import numpy as np
import pytest

from rpcasuite.tensor import (
    RankTriple,
    as_tensor3,
    fold,
    fro_norm,
    inner,
    kronecker,
    l1_norm,
    linf_norm,
    matricize,
    mode_product,
    multilinear_product,
)
from rpcasuite.utils.exceptions import (
    InvalidModeError,
    NonFiniteDataError,
    RankOutOfRangeError,
    ShapeMismatchError,
)


@pytest.fixture()
def tucker():
    generator = np.random.default_rng(42)
    factors = [generator.standard_normal((n, r)) for n, r in ((5, 2), (4, 3), (6, 2))]
    core = generator.standard_normal((2, 3, 2))
    return factors, core


class TestTensorOperations(unittest.TestCase):
    """
    A test class for the tensor operations module.
    """

    def setUp(self):
        self.tensor = np.arange(24, dtype=np.float64).reshape(2, 3, 4)

    def test_matricize_shape(self):
        """
        Test the matricize method.

        Returns
        -------
        assert that the mode-k unfolding has n_k rows.
        """
        self.assertEqual(matricize(self.tensor, 1).shape, (2, 12))
        self.assertEqual(matricize(self.tensor, 2).shape, (3, 8))
        self.assertEqual(matricize(self.tensor, 3).shape, (4, 6))

    def test_matricize_ordering(self):
        """
        Test the column ordering of the unfoldings.

        Returns
        -------
        assert that the earlier remaining mode varies fastest along the columns.
        """
        n1, n2, n3 = self.tensor.shape
        m1, m2, m3 = (matricize(self.tensor, mode) for mode in (1, 2, 3))
        for i1 in range(n1):
            for i2 in range(n2):
                for i3 in range(n3):
                    value = self.tensor[i1, i2, i3]
                    self.assertEqual(m1[i1, i2 + n2 * i3], value)
                    self.assertEqual(m2[i2, i1 + n1 * i3], value)
                    self.assertEqual(m3[i3, i1 + n1 * i2], value)

    def test_fold_round_trip(self):
        """
        Test the fold method.

        Returns
        -------
        assert that folding an unfolding returns the tensor bitwise.
        """
        tensor = np.random.default_rng(0).standard_normal((3, 5, 2))
        for mode in (1, 2, 3):
            np.testing.assert_array_equal(
                fold(matricize(tensor, mode), mode, tensor.shape), tensor
            )

    def test_fold_rejects_wrong_size(self):
        """
        Test the fold method with an incompatible matrix.

        Returns
        -------
        assert that a ShapeMismatchError is raised.
        """
        with self.assertRaises(ShapeMismatchError):
            fold(np.zeros((2, 11)), 1, (2, 3, 4))

    def test_invalid_mode(self):
        """
        Test mode validation.

        Returns
        -------
        assert that modes outside {1, 2, 3} raise an InvalidModeError.
        """
        for mode in (0, 4, -1):
            with self.assertRaises(InvalidModeError):
                matricize(self.tensor, mode)
        with self.assertRaises(InvalidModeError):
            mode_product(self.tensor, np.eye(2), 0)

    def test_norms(self):
        """
        Test the norm and inner product helpers.

        Returns
        -------
        assert the values on a tensor with known entries.
        """
        tensor = np.zeros((2, 2, 2))
        tensor[0, 0, 0] = 3.0
        tensor[1, 1, 1] = -4.0
        self.assertEqual(fro_norm(tensor), 5.0)
        self.assertEqual(l1_norm(tensor), 7.0)
        self.assertEqual(linf_norm(tensor), 4.0)
        self.assertEqual(inner(tensor, tensor), 25.0)
        with self.assertRaises(ShapeMismatchError):
            inner(tensor, np.zeros((2, 2, 3)))

    def test_as_tensor3(self):
        """
        Test the as_tensor3 method.

        Returns
        -------
        assert that wrong dimensions and non-finite entries are rejected.
        """
        self.assertEqual(as_tensor3([[[1]]]).dtype, np.float64)
        with self.assertRaises(ShapeMismatchError):
            as_tensor3(np.zeros((2, 2)))
        with self.assertRaises(NonFiniteDataError):
            as_tensor3(np.full((2, 2, 2), np.nan))

    def test_rank_triple(self):
        """
        Test the RankTriple class.

        Returns
        -------
        assert 1-based access, scalar broadcasting and range checks.
        """
        rank = RankTriple.from_value((1, 2, 3))
        self.assertEqual(rank[1], 1)
        self.assertEqual(rank[3], 3)
        self.assertEqual(RankTriple.from_value(2).as_tuple(), (2, 2, 2))
        with self.assertRaises(RankOutOfRangeError):
            RankTriple(0, 1, 1)
        with self.assertRaises(RankOutOfRangeError):
            RankTriple.from_value((1, 2))
        with self.assertRaises(RankOutOfRangeError):
            rank.validate_for((4, 4, 2))


def test_mode_product_unfolding(tucker):
    """The mode-k unfolding of T x_k A equals A M_k(T)."""
    _, core = tucker
    matrix = np.random.default_rng(1).standard_normal((7, 3))
    product = mode_product(core, matrix, 2)
    assert product.shape == (2, 7, 2)
    np.testing.assert_allclose(
        matricize(product, 2), matrix @ matricize(core, 2), rtol=1e-13, atol=1e-13
    )


def test_matricized_tucker_identity(tucker):
    """M_k((U1, U2, U3) . G) = U_k M_k(G) (U_c kron U_d)^T with c > d."""
    (u1, u2, u3), core = tucker
    tensor = multilinear_product(u1, u2, u3, core)
    expected = {
        1: u1 @ matricize(core, 1) @ kronecker(u3, u2).T,
        2: u2 @ matricize(core, 2) @ kronecker(u3, u1).T,
        3: u3 @ matricize(core, 3) @ kronecker(u2, u1).T,
    }
    for mode, matrix in expected.items():
        np.testing.assert_allclose(matricize(tensor, mode), matrix, atol=1e-12)


def test_multilinear_product_identity_factors():
    """Identity factors reproduce the core."""
    core = np.random.default_rng(3).standard_normal((2, 3, 4))
    np.testing.assert_array_equal(
        multilinear_product(np.eye(2), np.eye(3), np.eye(4), core), core
    )


def test_kronecker_blocks():
    """Block (i, j) of a kron b is a[i, j] * b."""
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    b = np.array([[0.0, 1.0], [1.0, 0.0]])
    product = kronecker(a, b)
    assert product.shape == (4, 4)
    np.testing.assert_array_equal(product[2:, :2], 3.0 * b)
