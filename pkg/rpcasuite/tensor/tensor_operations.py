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
Dense third-order tensor algebra.

Tensors are float64 numpy arrays with ndim == 3 stored row-major. Mode indices are
1-based throughout the package. The column order of a mode-k unfolding is fixed here
once: the remaining modes are enumerated in increasing order with the earlier mode
varying fastest, so that

    matricize(X, 1) == U1 @ matricize(G, 1) @ kronecker(U3, U2).T

holds for X = multilinear_product(U1, U2, U3, G) (analogously (U3, U1) for mode 2
and (U2, U1) for mode 3).
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple, Union

import numpy as np

from rpcasuite.utils.exceptions import (
    InvalidModeError,
    NonFiniteDataError,
    RankOutOfRangeError,
    ShapeMismatchError,
)

log = logging.getLogger(__name__)

MODES = (1, 2, 3)


def _check_mode(mode: int) -> int:
    """Return the zero-based axis of a 1-based mode index."""
    if isinstance(mode, bool) or mode not in MODES:
        raise InvalidModeError(f"Mode must be one of {MODES}, got {mode!r}")
    return int(mode) - 1


def as_tensor3(array, name: str = "tensor") -> np.ndarray:
    """
    Validate and convert an array-like into a third-order float64 tensor.

    Parameters
    ----------
    array : array_like
            Data to convert.
    name : str
            Name used in error messages.

    Returns
    -------
    tensor : np.ndarray
            C-contiguous float64 array with three dimensions.
    """
    tensor = np.ascontiguousarray(array, dtype=np.float64)
    if tensor.ndim != 3:
        raise ShapeMismatchError(
            f"{name} must have three dimensions, got shape {tensor.shape}"
        )
    if min(tensor.shape) < 1:
        raise ShapeMismatchError(f"{name} has an empty dimension: {tensor.shape}")
    if not np.all(np.isfinite(tensor)):
        raise NonFiniteDataError(f"{name} contains NaN or Inf entries")
    return tensor


@dataclass(frozen=True)
class RankTriple:
    """
    Multilinear rank (r1, r2, r3) of a third-order tensor.

    Attributes
    ----------
    r1, r2, r3 : int
            Rank along each mode.
    """

    r1: int
    r2: int
    r3: int

    def __post_init__(self):
        for value in self:
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise RankOutOfRangeError(f"Ranks must be positive integers: {self}")

    @classmethod
    def from_value(cls, value: Union[int, Sequence[int], "RankTriple"]) -> "RankTriple":
        """
        Build a rank triple from a scalar (used for every mode) or a sequence.
        """
        if isinstance(value, RankTriple):
            return value
        if np.isscalar(value):
            return cls(int(value), int(value), int(value))
        values = tuple(int(item) for item in value)
        if len(values) != 3:
            raise RankOutOfRangeError(f"A rank triple needs three entries, got {value}")
        return cls(*values)

    def __iter__(self) -> Iterator[int]:
        return iter((self.r1, self.r2, self.r3))

    def __getitem__(self, mode: int) -> int:
        """Rank of a 1-based mode."""
        return self.as_tuple()[_check_mode(mode)]

    def as_tuple(self) -> Tuple[int, int, int]:
        return self.r1, self.r2, self.r3

    def validate_for(self, shape: Sequence[int]):
        """
        Check 1 <= r_k <= n_k for a tensor shape.

        Raises
        ------
        RankOutOfRangeError
                If any rank exceeds the matching dimension.
        """
        if len(shape) != 3:
            raise ShapeMismatchError(f"Expected a third-order shape, got {shape}")
        for rank, size in zip(self, shape):
            if rank > size:
                raise RankOutOfRangeError(
                    f"Rank {self.as_tuple()} is not compatible with dims {tuple(shape)}"
                )


def matricize(tensor: np.ndarray, mode: int) -> np.ndarray:
    """
    Unfold a tensor along a mode.

    Parameters
    ----------
    tensor : np.ndarray
            Third-order tensor of shape (n1, n2, n3).
    mode : int
            Mode index in {1, 2, 3}.

    Returns
    -------
    matrix : np.ndarray
            Matrix of shape (n_k, product of the other two dims).
    """
    axis = _check_mode(mode)
    tensor = np.asarray(tensor)
    if tensor.ndim != 3:
        raise ShapeMismatchError(f"Expected a third-order tensor, got {tensor.shape}")
    moved = np.moveaxis(tensor, axis, 0)
    return np.reshape(moved, (tensor.shape[axis], -1), order="F")


def fold(matrix: np.ndarray, mode: int, dims: Sequence[int]) -> np.ndarray:
    """
    Inverse of :func:`matricize`.

    Parameters
    ----------
    matrix : np.ndarray
            Unfolded tensor of shape (n_k, product of the other dims).
    mode : int
            Mode along which the matrix was unfolded.
    dims : tuple
            Shape (n1, n2, n3) of the folded tensor.

    Returns
    -------
    tensor : np.ndarray
    """
    axis = _check_mode(mode)
    dims = tuple(int(item) for item in dims)
    matrix = np.asarray(matrix)
    if len(dims) != 3:
        raise ShapeMismatchError(f"dims must have three entries, got {dims}")
    others = tuple(dims[i] for i in range(3) if i != axis)
    if matrix.shape != (dims[axis], others[0] * others[1]):
        raise ShapeMismatchError(
            f"Matrix of shape {matrix.shape} cannot be folded along mode {mode} into"
            f" {dims}"
        )
    moved = np.reshape(matrix, (dims[axis],) + others, order="F")
    return np.ascontiguousarray(np.moveaxis(moved, 0, axis))


def kronecker(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Kronecker product of two matrices; block (i, j) equals a[i, j] * b.
    """
    return np.kron(np.atleast_2d(a), np.atleast_2d(b))


def mode_product(tensor: np.ndarray, matrix: np.ndarray, mode: int) -> np.ndarray:
    """
    Multiply a tensor by a matrix along one mode.

    Parameters
    ----------
    tensor : np.ndarray
            Tensor with size n_k along the mode.
    matrix : np.ndarray
            Matrix of shape (m, n_k).
    mode : int
            Mode in {1, 2, 3}.

    Returns
    -------
    product : np.ndarray
            Tensor whose mode-k size is m and whose mode-k unfolding equals
            matrix @ matricize(tensor, k).
    """
    axis = _check_mode(mode)
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] != tensor.shape[axis]:
        raise ShapeMismatchError(
            f"Cannot multiply a matrix of shape {matrix.shape} into mode {mode} of a"
            f" tensor with shape {tensor.shape}"
        )
    product = np.tensordot(matrix, tensor, axes=(1, axis))
    return np.ascontiguousarray(np.moveaxis(product, 0, axis))


def multilinear_product(
    u1: np.ndarray, u2: np.ndarray, u3: np.ndarray, core: np.ndarray
) -> np.ndarray:
    """
    Tucker reconstruction (U1, U2, U3) . G as three sequential mode products.

    Parameters
    ----------
    u1, u2, u3 : np.ndarray
            Factor matrices of shape (n_k, r_k).
    core : np.ndarray
            Core tensor of shape (r1, r2, r3).

    Returns
    -------
    tensor : np.ndarray
            Tensor of shape (n1, n2, n3).
    """
    core = np.asarray(core, dtype=np.float64)
    if core.ndim != 3:
        raise ShapeMismatchError(f"Core must be third order, got shape {core.shape}")
    result = core
    for mode, factor in zip(MODES, (u1, u2, u3)):
        result = mode_product(result, factor, mode)
    return result


def _check_same_shape(a: np.ndarray, b: np.ndarray):
    if np.shape(a) != np.shape(b):
        raise ShapeMismatchError(
            f"Tensor shapes do not match: {np.shape(a)} vs {np.shape(b)}"
        )


def inner(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of the entrywise products of two tensors of equal shape."""
    _check_same_shape(a, b)
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    return float(np.vdot(a, b))


def fro_norm(tensor: np.ndarray) -> float:
    """Frobenius norm."""
    flat = np.ravel(tensor)
    return float(np.sqrt(np.dot(flat, flat)))


def l1_norm(tensor: np.ndarray) -> float:
    """Sum of absolute values."""
    return float(np.sum(np.abs(tensor)))


def linf_norm(tensor: np.ndarray) -> float:
    """Largest absolute value."""
    return float(np.max(np.abs(tensor))) if np.size(tensor) else 0.0
