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
Helpers shared by the test suite.
"""
from typing import Callable

import numpy as np


def assertDeepAlmostEqual(expected, actual, *args, **kwargs):
    """
    Assert that two nested structures have almost equal contents.

    Lists, dicts and tuples are compared recursively, numeric values with
    numpy.testing.assert_array_almost_equal and everything else with ==.
    Additional arguments are passed on, e.g. decimal=.
    """
    if isinstance(expected, (int, float, complex, np.ndarray, list, tuple)):
        np.testing.assert_array_almost_equal(expected, actual, *args, **kwargs)
    elif isinstance(expected, dict):
        assert set(expected) == set(actual)
        for key in expected:
            assertDeepAlmostEqual(expected[key], actual[key], *args, **kwargs)
    else:
        assert expected == actual


def central_difference(
    function: Callable[[np.ndarray], float], point: np.ndarray, step: float = 1e-6
) -> np.ndarray:
    """
    Central finite-difference gradient of a scalar function.

    Parameters
    ----------
    function : Callable
            Maps an array of the shape of point to a float.
    point : np.ndarray
            Evaluation point.
    step : float
            Perturbation of every entry.

    Returns
    -------
    gradient : np.ndarray
            Array of the shape of point.
    """
    point = np.asarray(point, dtype=np.float64)
    gradient = np.zeros_like(point)
    for index in np.ndindex(point.shape):
        forward = point.copy()
        backward = point.copy()
        forward[index] += step
        backward[index] -= step
        gradient[index] = (function(forward) - function(backward)) / (2 * step)
    return gradient
