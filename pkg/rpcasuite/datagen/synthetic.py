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
Synthetic tensor RPCA instances.

The planted low-rank tensor has orthonormal Gaussian factors and a superdiagonal
core with entries kappa^(-(i - 1) / (r - 1)). Corruptions are uniform in
(-theta, theta) with theta = ||X*||_1 / n^3.

Every random draw comes from its own Philox stream keyed by (seed, role), so the
factors and the corruption of an instance do not depend on the order of calls.
"""
import logging
from typing import Sequence, Tuple, Union

import numpy as np

from rpcasuite.datagen.instance import (
    InstanceMeta,
    RpcaInstance,
    SparsityKind,
    SparsityModel,
    mask_from_support,
)
from rpcasuite.solver.factors import TuckerFactors
from rpcasuite.tensor import l1_norm, multilinear_product
from rpcasuite.utils.exceptions import ConfigurationError, RankOutOfRangeError

log = logging.getLogger(__name__)

# stream roles
FACTOR_ROLES = (1, 2, 3)
SUPPORT_ROLE = 4
VALUE_ROLE = 5
ORTHONORMAL_ROLE = 0

SeedLike = Union[int, np.random.Generator]


def make_generator(seed: int, role: int = 0) -> np.random.Generator:
    """
    Philox generator of one (seed, role) stream.

    Parameters
    ----------
    seed : int
            Nonnegative instance seed.
    role : int
            Code of the tensor role drawn from the stream.
    """
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ConfigurationError(f"Seeds must be nonnegative integers, got {seed!r}")
    sequence = np.random.SeedSequence([int(seed), role])
    return np.random.Generator(np.random.Philox(sequence))


def _as_generator(seed: SeedLike, role: int) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return make_generator(seed, role)


def random_orthonormal(n: int, r: int, seed: SeedLike) -> np.ndarray:
    """
    Orthonormalized i.i.d. Gaussian n x r matrix.

    Parameters
    ----------
    n : int
            Number of rows.
    r : int
            Number of columns, r <= n.
    seed : int or np.random.Generator
            Seed of the stream (or the generator itself).

    Returns
    -------
    matrix : np.ndarray
            Matrix with U^T U = I. The diagonal of the triangular factor is made
            positive so that the result is a deterministic function of the draw.
    """
    if not 1 <= r <= n:
        raise RankOutOfRangeError(f"Need 1 <= r <= n, got n={n}, r={r}")
    generator = _as_generator(seed, ORTHONORMAL_ROLE)
    gaussian = generator.standard_normal((n, r))
    q, upper = np.linalg.qr(gaussian)
    signs = np.sign(np.diag(upper))
    signs[signs == 0] = 1.0
    return q * signs


def superdiagonal_core(r: int, kappa: float) -> np.ndarray:
    """
    Core with [G]_iii = kappa^(-(i - 1) / (r - 1)) and zeros elsewhere.

    A rank-one core is the single value 1 whatever kappa is.
    """
    if kappa < 1:
        raise ConfigurationError(f"kappa must be >= 1, got {kappa}")
    if r == 1:
        diagonal = np.ones(1)
    else:
        diagonal = kappa ** (-np.arange(r) / (r - 1))
    core = np.zeros((r, r, r))
    core[np.arange(r), np.arange(r), np.arange(r)] = diagonal
    return core


def gen_low_rank(
    n: int, r: int, kappa: float, seed: int
) -> Tuple[np.ndarray, TuckerFactors]:
    """
    Planted low-rank tensor of multilinear rank (r, r, r).

    Parameters
    ----------
    n : int
            Size of every mode.
    r : int
            Rank of every mode.
    kappa : float
            Condition number of the unfoldings, >= 1.
    seed : int
            Instance seed.

    Returns
    -------
    low_rank : np.ndarray
            X* of shape (n, n, n).
    factors : TuckerFactors
            Its Tucker factors.
    """
    if not 1 <= r <= n:
        raise RankOutOfRangeError(f"Need 1 <= r <= n, got n={n}, r={r}")
    core = superdiagonal_core(r, kappa)
    factors = [
        random_orthonormal(n, r, make_generator(seed, role)) for role in FACTOR_ROLES
    ]
    tucker = TuckerFactors(*factors, core)
    return multilinear_product(*factors, core), tucker


def gen_sparse(
    shape: Sequence[int], model: SparsityModel, theta: float, seed: int
) -> np.ndarray:
    """
    Sparse corruption tensor.

    Parameters
    ----------
    shape : tuple
            Shape of the tensor.
    model : SparsityModel
            Placement of the corrupted entries.
    theta : float
            Values are uniform in [-theta, theta).
    seed : int
            Instance seed.

    Returns
    -------
    sparse : np.ndarray
    """
    if not theta >= 0:
        raise ConfigurationError(f"theta must be >= 0, got {theta}")
    shape = tuple(int(item) for item in shape)
    support_stream = make_generator(seed, SUPPORT_ROLE)
    value_stream = make_generator(seed, VALUE_ROLE)

    if model.kind is SparsityKind.BERNOULLI:
        support = support_stream.random(shape) < model.alpha
    else:
        axis = model.mode - 1
        count = int(np.floor(model.alpha * shape[axis]))
        keys = support_stream.random(shape)
        ranks = np.argsort(np.argsort(keys, axis=axis, kind="stable"), axis=axis)
        support = ranks < count

    values = value_stream.uniform(-theta, theta, size=shape)
    return np.where(support, values, 0.0)


def gen_instance(
    n: int,
    r: int,
    alpha: float,
    kappa: float = 5.0,
    model: Union[str, SparsityKind] = SparsityKind.BERNOULLI,
    seed: int = 0,
    fiber_mode: int = 1,
    with_mask: bool = False,
) -> RpcaInstance:
    """
    Synthetic instance Y = X* + S*.

    Parameters
    ----------
    n : int
            Size of every mode.
    r : int
            Rank of every mode.
    alpha : float
            Corruption level in [0, 1).
    kappa : float
            Condition number of the planted tensor.
    model : str or SparsityKind
            "bernoulli" (default) or "per-fiber".
    seed : int
            Instance seed.
    fiber_mode : int
            Fiber mode of the per-fiber model.
    with_mask : bool
            Attach the support of S* as foreground mask.

    Returns
    -------
    RpcaInstance
            Instance with the ground truth and the generator settings attached.
    """
    sparsity = SparsityModel(SparsityKind(model), alpha, fiber_mode)
    low_rank, _ = gen_low_rank(n, r, kappa, seed)
    theta = l1_norm(low_rank) / n**3
    sparse = gen_sparse(low_rank.shape, sparsity, theta, seed)
    observation = low_rank + sparse
    meta = InstanceMeta(
        n=n,
        rank=r,
        alpha=float(alpha),
        kappa=float(kappa),
        seed=int(seed),
        theta=float(theta),
        model=sparsity.describe(),
    )
    log.debug(f"Generated instance {meta}")
    return RpcaInstance(
        observation=observation,
        rank=r,
        low_rank=low_rank,
        sparse=sparse,
        mask=mask_from_support(sparse) if with_mask else None,
        meta=meta,
    )
