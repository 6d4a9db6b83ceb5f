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
Dense linear algebra kernels used by the solver.

* top_singular_vectors: leading left singular vectors through a Jacobi
  eigendecomposition of the smaller Gram matrix.
* spd_inverse: inverse of the small Gram matrices of the scaled updates.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from rpcasuite.utils.exceptions import (
    ConvergenceError,
    IllConditionedError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    RankOutOfRangeError,
    ShapeMismatchError,
)

log = logging.getLogger(__name__)

JACOBI_MAX_SWEEPS = 100
JACOBI_TOLERANCE = 1e-12
SYMMETRY_TOLERANCE = 1e-10
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class ThinSVD:
    """
    Truncated left singular system.

    Attributes
    ----------
    U : np.ndarray
            (n, r) matrix with orthonormal columns.
    singular_values : np.ndarray
            r nonnegative values in nonincreasing order.
    """

    U: np.ndarray
    singular_values: np.ndarray


def _round_robin(size: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """
    Parallel ordering of all index pairs of a size x size matrix.

    Every round holds disjoint pairs so their rotations commute and can be applied
    at once. Odd sizes are padded with a dummy index that is dropped.
    """
    players = list(range(size)) + ([-1] if size % 2 else [])
    count = len(players)
    rounds = []
    for _ in range(count - 1):
        pairs = [(players[i], players[count - 1 - i]) for i in range(count // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p >= 0 and q >= 0]
        rounds.append(
            (
                np.array([p for p, _ in pairs], dtype=int),
                np.array([q for _, q in pairs], dtype=int),
            )
        )
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_diagonal_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix - np.diag(np.diag(matrix))))


def jacobi_eigh(
    matrix: np.ndarray,
    tolerance: float = JACOBI_TOLERANCE,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    matrix : np.ndarray
            Symmetric (n, n) matrix.
    tolerance : float
            Sweeps stop once the off-diagonal Frobenius norm is below
            tolerance * ||matrix||_F.
    max_sweeps : int
            Sweep cap; exceeding it raises a ConvergenceError.

    Returns
    -------
    eigenvalues : np.ndarray
            Unsorted eigenvalues (diagonal of the rotated matrix).
    eigenvectors : np.ndarray
            Orthogonal matrix whose columns are the matching eigenvectors.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatchError(f"Expected a square matrix, got shape {a.shape}")
    a = 0.5 * (a + a.T)
    size = a.shape[0]
    v = np.eye(size)
    scale = float(np.linalg.norm(a))
    if scale == 0.0 or size == 1:
        return np.diag(a).copy(), v

    rounds = _round_robin(size)
    for sweep in range(max_sweeps + 1):
        if _off_diagonal_norm(a) <= tolerance * scale:
            log.debug(f"Jacobi eigensolver converged after {sweep} sweeps")
            return np.diag(a).copy(), v
        if sweep == max_sweeps:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            sign = np.where(theta >= 0.0, 1.0, -1.0)
            with np.errstate(over="ignore"):
                t = np.where(
                    np.abs(theta) > 1e150,
                    0.5 / theta,
                    sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0)),
                )
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            # A <- A J
            col_p, col_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * col_p - s * col_q
            a[:, q] = s * col_p + c * col_q
            # A <- J^T A
            row_p, row_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * row_p - s[:, None] * row_q
            a[q, :] = s[:, None] * row_p + c[:, None] * row_q
            # V <- V J
            vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vec_p - s * vec_q
            v[:, q] = s * vec_p + c * vec_q

    raise ConvergenceError(
        f"Jacobi eigensolver did not converge within {max_sweeps} sweeps"
    )


def _fix_signs(matrix: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of every column positive."""
    if matrix.size == 0:
        return matrix
    rows = np.argmax(np.abs(matrix), axis=0)
    signs = np.sign(matrix[rows, np.arange(matrix.shape[1])])
    signs[signs == 0] = 1.0
    return matrix * signs


def _complete_basis(basis: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """Replace the flagged columns by standard basis vectors orthogonal to the rest."""
    basis = basis.copy()
    basis[:, missing] = 0.0
    rows = basis.shape[0]
    candidate = 0
    for column in np.flatnonzero(missing):
        while candidate < rows:
            vector = np.zeros(rows)
            vector[candidate] = 1.0
            candidate += 1
            vector -= basis @ (basis.T @ vector)
            norm = np.linalg.norm(vector)
            if norm > 0.5:
                basis[:, column] = vector / norm
                break
    return basis


def top_singular_vectors(matrix: np.ndarray, rank: int) -> ThinSVD:
    """
    Leading left singular vectors of a matrix.

    Parameters
    ----------
    matrix : np.ndarray
            (rows, cols) matrix.
    rank : int
            Number of singular vectors, 1 <= rank <= min(rows, cols).

    Returns
    -------
    ThinSVD
            Singular vectors with the largest-magnitude entry of every column
            positive. Equal singular values keep their original column order.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ShapeMismatchError(f"Expected a matrix, got shape {matrix.shape}")
    rows, cols = matrix.shape
    if isinstance(rank, bool) or int(rank) != rank or not 1 <= rank <= min(rows, cols):
        raise RankOutOfRangeError(
            f"Rank {rank} out of range for a matrix of shape {matrix.shape}"
        )
    rank = int(rank)

    if rows <= cols:
        eigenvalues, eigenvectors = jacobi_eigh(matrix @ matrix.T)
        order = np.argsort(-eigenvalues, kind="stable")[:rank]
        sigma = np.sqrt(np.maximum(eigenvalues[order], 0.0))
        basis = eigenvectors[:, order]
    else:
        eigenvalues, eigenvectors = jacobi_eigh(matrix.T @ matrix)
        order = np.argsort(-eigenvalues, kind="stable")[:rank]
        sigma = np.sqrt(np.maximum(eigenvalues[order], 0.0))
        missing = sigma <= np.finfo(float).eps * max(sigma.max(initial=0.0), 1e-300)
        safe_sigma = np.where(missing, 1.0, sigma)
        basis = (matrix @ eigenvectors[:, order]) / safe_sigma
        if np.any(missing):
            basis = _complete_basis(basis, missing)
        basis, _ = np.linalg.qr(basis)

    return ThinSVD(U=_fix_signs(basis), singular_values=sigma)


def spd_inverse(matrix: np.ndarray) -> np.ndarray:
    """
    Inverse of a symmetric positive definite matrix.

    Parameters
    ----------
    matrix : np.ndarray
            Symmetric positive definite (r, r) matrix.

    Returns
    -------
    inverse : np.ndarray

    Raises
    ------
    NotSymmetricError
            If max|M - M^T| exceeds 1e-10 * max(1, max|M|).
    NotPositiveDefiniteError
            If the Cholesky factorization fails.
    IllConditionedError
            If the condition number exceeds 1e12. No regularization is applied.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeMismatchError(f"Expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NotPositiveDefiniteError("Matrix contains non-finite entries")
    magnitude = max(1.0, float(np.max(np.abs(matrix))))
    if np.max(np.abs(matrix - matrix.T)) > SYMMETRY_TOLERANCE * magnitude:
        raise NotSymmetricError("Matrix is not symmetric")
    try:
        factor = cho_factor(matrix, lower=True)
    except LinAlgError as err:
        raise NotPositiveDefiniteError(f"Cholesky factorization failed: {err}") from err
    condition = np.linalg.cond(matrix)
    if not condition <= CONDITION_LIMIT:
        raise IllConditionedError(f"Condition number {condition:.3e} exceeds 1e12")
    return cho_solve(factor, np.eye(matrix.shape[0]))
