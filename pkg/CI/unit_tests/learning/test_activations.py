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
Test the parameter activations.
"""
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from rpcasuite.learning.activations import (
    DEFAULT_HYPER_PARAMS,
    RawParams,
    ThresholdScale,
    activate,
    default_raw_params,
    inverse_softplus,
    invert_activation,
    softplus,
)
from rpcasuite.utils.exceptions import DegenerateInputError, InvalidHyperParametersError


class TestActivations(unittest.TestCase):
    """
    A test class for the activation module.
    """

    def test_default_raw_params(self):
        """
        Test the default_raw_params method.

        Returns
        -------
        assert that the default start activates to (0.6, 0.3, 0.95, 0.5).
        """
        activated = activate(default_raw_params())
        np.testing.assert_allclose(
            activated.as_array(), DEFAULT_HYPER_PARAMS.as_array(), rtol=1e-12
        )

    def test_threshold_scale(self):
        """
        Test the ThresholdScale.from_observation method.

        Returns
        -------
        assert s0 = linf(Y), s1 = s0 / 2 and that a zero observation is rejected.
        """
        observation = np.zeros((2, 2, 2))
        observation[1, 0, 1] = -3.0
        scale = ThresholdScale.from_observation(observation)
        self.assertEqual(scale.as_dict(), {"s0": 3.0, "s1": 1.5})
        activated = activate(default_raw_params(), scale)
        self.assertAlmostEqual(activated.zeta0, 1.8)
        self.assertAlmostEqual(activated.zeta1, 0.9)
        with self.assertRaises(DegenerateInputError):
            ThresholdScale.from_observation(np.zeros((2, 2, 2)))

    def test_saturation(self):
        """
        Test activate with extreme raw values.

        Returns
        -------
        assert that the activated values stay admissible.
        """
        activated = activate(RawParams(-800.0, -800.0, 800.0, -800.0))
        self.assertGreater(activated.zeta0, 0.0)
        self.assertGreater(activated.eta, 0.0)
        self.assertLess(activated.rho, 1.0)
        activated = activate(RawParams(800.0, 800.0, -800.0, 800.0))
        self.assertGreater(activated.rho, 0.0)
        self.assertEqual(activated.zeta0, 800.0)

    def test_non_finite_raw(self):
        """
        Test the RawParams validation.

        Returns
        -------
        assert that NaN is rejected.
        """
        with self.assertRaises(InvalidHyperParametersError):
            RawParams(0.0, np.nan, 0.0, 0.0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=-15.0, max_value=15.0), min_size=4, max_size=4))
def test_invert_activation(values):
    """Inverting the activation recovers the raw parameters."""
    raw = RawParams.from_array(values)
    scale = ThresholdScale(2.0, 1.0)
    recovered = invert_activation(activate(raw, scale), scale)
    np.testing.assert_allclose(recovered.as_array(), raw.as_array(), atol=1e-6)


def test_inverse_softplus_large_values():
    values = np.array([1e-3, 1.0, 19.9, 20.0, 50.0, 700.0])
    np.testing.assert_allclose(softplus(inverse_softplus(values)), values, rtol=1e-12)
