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
Test the recovery losses.
"""
import unittest

import numpy as np

from rpcasuite.datagen import gen_instance
from rpcasuite.solver import LossType, evaluate_loss, loss_sl, loss_sm, loss_ssl
from rpcasuite.utils.exceptions import (
    ConfigurationError,
    DegenerateInputError,
    MaskValidationError,
    MissingLabelError,
    ShapeMismatchError,
)


class TestLosses(unittest.TestCase):
    """
    A test class for the loss functions.
    """

    def setUp(self):
        self.observation = np.zeros((2, 2, 2))
        self.observation[0, 0, 0] = 2.0
        self.observation[1, 1, 1] = 1.0

    def test_loss_ssl(self):
        """
        Test the loss_ssl method.

        Returns
        -------
        assert ||Y - X||_1 / ||Y||_F^2 on a hand computed example.
        """
        estimate = np.zeros((2, 2, 2))
        estimate[0, 0, 0] = 1.0
        self.assertAlmostEqual(loss_ssl(self.observation, estimate), 2.0 / 5.0)
        self.assertEqual(loss_ssl(self.observation, self.observation), 0.0)

    def test_loss_sl(self):
        """
        Test the loss_sl method.

        Returns
        -------
        assert that the zero estimate has loss one.
        """
        self.assertEqual(loss_sl(self.observation, np.zeros((2, 2, 2))), 1.0)

    def test_loss_sm(self):
        """
        Test the loss_sm method.

        Returns
        -------
        assert that masked entries are ignored.
        """
        mask = np.zeros((2, 2, 2))
        mask[0, 0, 0] = 1.0
        estimate = self.observation.copy()
        estimate[0, 0, 0] = 100.0
        self.assertEqual(loss_sm(self.observation, mask, estimate), 0.0)
        estimate[1, 1, 1] = 0.0
        self.assertEqual(loss_sm(self.observation, mask, estimate), 1.0)
        with self.assertRaises(MaskValidationError):
            loss_sm(self.observation, 0.5 * np.ones((2, 2, 2)), estimate)
        with self.assertRaises(DegenerateInputError):
            loss_sm(self.observation, np.ones((2, 2, 2)), estimate)

    def test_degenerate_and_mismatched(self):
        """
        Test the guards of the losses.

        Returns
        -------
        assert the errors for a zero observation and a mismatched estimate.
        """
        with self.assertRaises(DegenerateInputError):
            loss_ssl(np.zeros((2, 2, 2)), np.zeros((2, 2, 2)))
        with self.assertRaises(ShapeMismatchError):
            loss_sl(self.observation, np.zeros((2, 2, 3)))

    def test_evaluate_loss(self):
        """
        Test the evaluate_loss method.

        Returns
        -------
        assert dispatch by name and the label checks.
        """
        instance = gen_instance(6, 2, 0.2, seed=3)
        estimate = instance.low_rank
        self.assertEqual(evaluate_loss("sl", instance, estimate), 0.0)
        self.assertEqual(
            evaluate_loss(LossType.SSL, instance, estimate),
            loss_ssl(instance.observation, estimate),
        )
        with self.assertRaises(MissingLabelError):
            evaluate_loss("sm", instance, estimate)
        self.assertEqual(evaluate_loss("sm", instance.with_mask(), estimate), 0.0)
        with self.assertRaises(ConfigurationError):
            LossType.from_value("l2")
