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
Tensor robust PCA by scaled gradient descent on Tucker factors.

The solver separates Y into a low-rank part (U1, U2, U3) . G and a sparse part S.
It starts from a truncated HOSVD of Y - shrink(Y, zeta0) and then alternates

    S_{t+1} = shrink(Y - X_t, zeta_{t+1})
    U_k <- U_k - eta * grad_{U_k} L * (Ub_k^T Ub_k)^-1
    G   <- G - eta * (Ut_1, Ut_2, Ut_3) . grad_G L

with L(F, S) = 1/2 ||X + S - Y||_F^2, Ub_1 = (U3 kron U2) M1(G)^T (cyclic for the
other modes) and Ut_k = (U_k^T U_k)^-1. All updates of one step use the factors of
iteration t.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from rpcasuite.solver.factors import TuckerFactors
from rpcasuite.solver.hyperparameters import HyperParams, SolverConfig
from rpcasuite.solver.losses import loss_ssl
from rpcasuite.tensor import (
    as_tensor3,
    fro_norm,
    kronecker,
    matricize,
    mode_product,
    multilinear_product,
)
from rpcasuite.utils.exceptions import (
    DegenerateInputError,
    NegativeThresholdError,
    NumericalFailure,
    ShapeMismatchError,
    SolverDivergenceError,
)
from rpcasuite.utils.linalg import spd_inverse, top_singular_vectors

log = logging.getLogger(__name__)

MODES = (1, 2, 3)
DIVERGENCE_FACTOR = 1e6


@dataclass(frozen=True)
class IterationRecord:
    """
    State of one iteration of an unrolled solve.

    Attributes
    ----------
    iteration : int
            Iteration index t, 0 is the initialization.
    loss : float
            Self-supervised loss of F_t.
    error : float or None
            ||X* - X_t||_F / ||X*||_F if a ground truth was given.
    threshold : float
            Threshold zeta_t that produced S_t.
    """

    iteration: int
    loss: float
    error: Optional[float]
    threshold: float


@dataclass
class SolveTrace:
    """
    Per-iteration history of a solve and its final estimate.

    Attributes
    ----------
    records : list
            One IterationRecord per iteration t = 0..T.
    factors : TuckerFactors
            Final factors F_T (last finite factors for a partial trace).
    sparse : np.ndarray
            Final sparse estimate S_T.
    """

    records: List[IterationRecord] = field(default_factory=list)
    factors: Optional[TuckerFactors] = None
    sparse: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def losses(self) -> np.ndarray:
        return np.array([record.loss for record in self.records])

    @property
    def errors(self) -> np.ndarray:
        return np.array(
            [np.nan if record.error is None else record.error for record in self.records]
        )

    @property
    def thresholds(self) -> np.ndarray:
        return np.array([record.threshold for record in self.records])

    @property
    def final_loss(self) -> float:
        return self.records[-1].loss

    @property
    def final_error(self) -> Optional[float]:
        return self.records[-1].error

    @property
    def low_rank(self) -> np.ndarray:
        """Reconstruction of the final factors."""
        return self.factors.reconstruct()

    def to_dataframe(self) -> pd.DataFrame:
        """History as (iteration, loss, error, threshold)."""
        return pd.DataFrame(
            {
                "iteration": [record.iteration for record in self.records],
                "loss": self.losses,
                "error": self.errors,
                "threshold": self.thresholds,
            }
        )


def shrink(tensor: np.ndarray, zeta: float) -> np.ndarray:
    """
    Entrywise soft thresholding sgn(x) * max(0, |x| - zeta).

    Parameters
    ----------
    tensor : np.ndarray
            Input array.
    zeta : float
            Nonnegative threshold.

    Returns
    -------
    shrunk : np.ndarray
    """
    if not zeta >= 0:
        raise NegativeThresholdError(f"Shrinkage threshold must be >= 0, got {zeta}")
    tensor = np.asarray(tensor, dtype=np.float64)
    return np.sign(tensor) * np.maximum(np.abs(tensor) - zeta, 0.0)


def schedule(hyper_parameters: HyperParams, iteration: int) -> float:
    """
    Threshold zeta_t: zeta0 at t = 0, zeta1 * rho^(t - 1) afterwards.
    """
    if iteration < 0:
        raise ValueError(f"Iteration index must be >= 0, got {iteration}")
    if iteration == 0:
        return hyper_parameters.zeta0
    return hyper_parameters.zeta1 * hyper_parameters.rho ** (iteration - 1)


def _check_rank(observation: np.ndarray, config: SolverConfig):
    config.rank.validate_for(observation.shape)


def spectral_init(
    observation: np.ndarray, config: SolverConfig, hyper_parameters: HyperParams
) -> TuckerFactors:
    """
    Truncated HOSVD of Y - shrink(Y, zeta0).

    Parameters
    ----------
    observation : np.ndarray
            Observed tensor Y.
    config : SolverConfig
            Rank and mode skipping settings.
    hyper_parameters : HyperParams
            Only zeta0 is used.

    Returns
    -------
    TuckerFactors
            Orthonormal factors; skipped modes hold the identity.
    """
    observation = as_tensor3(observation, "observation")
    _check_rank(observation, config)
    cleaned = observation - shrink(observation, hyper_parameters.zeta0)
    skipped = config.skipped_modes(observation.shape)
    factors = []
    for mode, rank, skip in zip(MODES, config.rank, skipped):
        if skip:
            factors.append(np.eye(observation.shape[mode - 1]))
        else:
            factors.append(top_singular_vectors(matricize(cleaned, mode), rank).U)
    core = multilinear_product(*(factor.T for factor in factors), cleaned)
    return TuckerFactors(*factors, core)


def _project_except(tensor: np.ndarray, matrices, skip_mode: int) -> np.ndarray:
    """Apply matrices[j] along every mode j except skip_mode."""
    result = tensor
    for mode, matrix in zip(MODES, matrices):
        if mode != skip_mode:
            result = mode_product(result, matrix, mode)
    return result


def residual_loss(
    observation: np.ndarray, factors: TuckerFactors, sparse: np.ndarray
) -> float:
    """Least-squares objective 1/2 ||X + S - Y||_F^2 of the factor updates."""
    return 0.5 * fro_norm(factors.reconstruct() + sparse - observation) ** 2


def residual_gradients(
    observation: np.ndarray,
    factors: TuckerFactors,
    sparse: np.ndarray,
    low_rank: Optional[np.ndarray] = None,
) -> Tuple[Tuple[np.ndarray, np.ndarray, np.ndarray], np.ndarray]:
    """
    Gradients of :func:`residual_loss` with respect to the factors and the core.

    Returns
    -------
    factor_gradients : tuple
            M_k(R) Ub_k for k = 1, 2, 3, computed with mode products.
    core_gradient : np.ndarray
            (U1^T, U2^T, U3^T) . R
    """
    if low_rank is None:
        low_rank = factors.reconstruct()
    residual = low_rank + sparse - observation
    transposed = tuple(factor.T for factor in factors.factors)
    factor_gradients = tuple(
        matricize(_project_except(residual, transposed, mode), mode)
        @ matricize(factors.core, mode).T
        for mode in MODES
    )
    core_gradient = multilinear_product(*transposed, residual)
    return factor_gradients, core_gradient


def breve_matrix(factors: TuckerFactors, mode: int) -> np.ndarray:
    """
    Explicit Ub_k, e.g. (U3 kron U2) M1(G)^T for mode 1.

    Only meant for small factors; the solver works with mode products instead.
    """
    u1, u2, u3 = factors.factors
    pairs = {1: (u3, u2), 2: (u3, u1), 3: (u2, u1)}
    left, right = pairs[mode]
    return kronecker(left, right) @ matricize(factors.core, mode).T


def _breve_gram(factors: TuckerFactors, grams, mode: int) -> np.ndarray:
    """Ub_k^T Ub_k = M_k(G x_{j != k} U_j^T U_j) M_k(G)^T."""
    core = factors.core
    return matricize(_project_except(core, grams, mode), mode) @ matricize(core, mode).T


def step(
    observation: np.ndarray,
    factors: TuckerFactors,
    hyper_parameters: HyperParams,
    iteration: int,
    config: SolverConfig,
    low_rank: Optional[np.ndarray] = None,
) -> Tuple[TuckerFactors, np.ndarray]:
    """
    One ScaledGD iteration t -> t + 1.

    Parameters
    ----------
    observation : np.ndarray
            Observed tensor Y.
    factors : TuckerFactors
            Factors F_t.
    hyper_parameters : HyperParams
            Threshold schedule and step size.
    iteration : int
            Index t of the incoming factors.
    config : SolverConfig
            Rank and mode skipping settings.
    low_rank : np.ndarray, optional
            Reconstruction of F_t if already available.

    Returns
    -------
    factors : TuckerFactors
            Factors F_{t+1}.
    sparse : np.ndarray
            Sparse estimate S_{t+1}.

    Raises
    ------
    SolverDivergenceError
            If a Gram matrix cannot be inverted.
    """
    if low_rank is None:
        low_rank = factors.reconstruct()
    if low_rank.shape != observation.shape:
        raise ShapeMismatchError(
            f"Factors reconstruct {low_rank.shape}, data is {observation.shape}"
        )
    sparse = shrink(observation - low_rank, schedule(hyper_parameters, iteration + 1))
    factor_gradients, core_gradient = residual_gradients(
        observation, factors, sparse, low_rank
    )
    eta = hyper_parameters.eta
    skipped = config.skipped_modes(observation.shape)
    grams = tuple(factor.T @ factor for factor in factors.factors)

    try:
        new_factors = []
        inverse_grams = []
        for mode, factor, gradient, skip in zip(
            MODES, factors.factors, factor_gradients, skipped
        ):
            if skip:
                new_factors.append(factor)
                inverse_grams.append(np.eye(factor.shape[1]))
                continue
            preconditioner = spd_inverse(_breve_gram(factors, grams, mode))
            new_factors.append(factor - eta * gradient @ preconditioner)
            inverse_grams.append(spd_inverse(grams[mode - 1]))
    except NumericalFailure as err:
        raise SolverDivergenceError(
            f"Gram matrix inversion failed at iteration {iteration}: {err}",
            iteration=iteration,
        ) from err

    core = factors.core - eta * multilinear_product(*inverse_grams, core_gradient)
    return TuckerFactors(*new_factors, core), sparse


def _relative_error(ground_truth: np.ndarray, norm: float, low_rank: np.ndarray):
    return fro_norm(ground_truth - low_rank) / norm


def solve(
    observation: np.ndarray,
    config: SolverConfig,
    hyper_parameters: HyperParams,
    ground_truth: Optional[np.ndarray] = None,
    initial_factors: Optional[TuckerFactors] = None,
) -> SolveTrace:
    """
    Run the spectral initialization followed by T ScaledGD iterations.

    Parameters
    ----------
    observation : np.ndarray
            Observed tensor Y.
    config : SolverConfig
            Rank, iteration count and mode skipping.
    hyper_parameters : HyperParams
            Threshold schedule and step size.
    ground_truth : np.ndarray, optional
            Low-rank ground truth X*; enables the relative error column.
    initial_factors : TuckerFactors, optional
            Result of :func:`spectral_init` for the same Y, config and zeta0.

    Returns
    -------
    SolveTrace
            T + 1 records and the final estimate.

    Raises
    ------
    SolverDivergenceError
            If the self-supervised loss becomes non-finite or exceeds 1e6 times its
            initial value, or a Gram matrix cannot be inverted. The trace up to the
            failure is attached to the exception.
    """
    observation = as_tensor3(observation, "observation")
    truth_norm = None
    if ground_truth is not None:
        ground_truth = as_tensor3(ground_truth, "ground truth")
        if ground_truth.shape != observation.shape:
            raise ShapeMismatchError("Ground truth and observation shapes differ")
        truth_norm = fro_norm(ground_truth)
        if truth_norm == 0.0:
            raise DegenerateInputError("Relative error is undefined for X* == 0")

    if initial_factors is None:
        factors = spectral_init(observation, config, hyper_parameters)
    else:
        _check_rank(observation, config)
        if initial_factors.shape != observation.shape:
            raise ShapeMismatchError("Initial factors do not match the observation")
        factors = initial_factors

    trace = SolveTrace()
    sparse = shrink(observation, hyper_parameters.zeta0)
    low_rank = factors.reconstruct()
    initial_loss = None

    with np.errstate(over="ignore", invalid="ignore"):
        for iteration in range(config.iterations + 1):
            if iteration > 0:
                try:
                    new_factors, sparse = step(
                        observation,
                        factors,
                        hyper_parameters,
                        iteration - 1,
                        config,
                        low_rank=low_rank,
                    )
                except SolverDivergenceError as err:
                    err.trace = trace
                    raise
                new_low_rank = new_factors.reconstruct()
            else:
                new_factors, new_low_rank = factors, low_rank

            loss = loss_ssl(observation, new_low_rank)
            if initial_loss is None:
                initial_loss = loss
            if not np.isfinite(loss) or (
                initial_loss > 0 and loss > DIVERGENCE_FACTOR * initial_loss
            ):
                raise SolverDivergenceError(
                    f"Self-supervised loss diverged at iteration {iteration}"
                    f" ({loss:.3e}, initial {initial_loss:.3e})",
                    iteration=iteration,
                    trace=trace,
                )

            factors, low_rank = new_factors, new_low_rank
            error = None
            if ground_truth is not None:
                error = _relative_error(ground_truth, truth_norm, low_rank)
            trace.records.append(
                IterationRecord(
                    iteration=iteration,
                    loss=loss,
                    error=error,
                    threshold=schedule(hyper_parameters, iteration),
                )
            )
            trace.factors = factors
            trace.sparse = sparse
            log.debug(f"iteration {iteration}: loss {loss:.6e}, error {error}")

    return trace
