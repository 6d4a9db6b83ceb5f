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
"""
from __future__ import annotations

import abc

import numpy as np


class TensorSource(abc.ABC):
    """
    Class to handle reading a third-order tensor from disk.
    Output is a validated float64 array that the solver and the learners consume.
    """

    _tensor: np.ndarray = None

    @abc.abstractmethod
    def __str__(self):
        """
        Return a unique string representing this TensorSource (the absolute file path,
        for example)
        """
        raise NotImplementedError("Tensor sources must implement a string")

    @abc.abstractmethod
    def _read(self) -> np.ndarray:
        """
        Load the tensor. Implementations raise a DataFormatError subclass for
        malformed input.
        """
        raise NotImplementedError("Tensor sources must implement data loading")

    @property
    def tensor(self) -> np.ndarray:
        if self._tensor is None:
            self._tensor = self._read()
        return self._tensor
