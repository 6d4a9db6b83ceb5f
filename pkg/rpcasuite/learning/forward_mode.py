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
Forward-mode hyper-gradient of the unrolled solver.

The iterations are replayed in TensorFlow under a ForwardAccumulator, one tangent per
raw parameter. The singular vectors of the spectral initialization and the support
pattern of the shrinkage are treated as locally constant, so the derivative with
respect to z0 only flows through the initial core.
"""
import logging
from typing import Tuple

import numpy as np
import tensorflow as tf

from rpcasuite.datagen.instance import RpcaInstance
from rpcasuite.learning.activations import RawParams, ThresholdScale, activate
from rpcasuite.solver.hyperparameters import SolverConfig
from rpcasuite.solver.losses import LossType, evaluate_loss
from rpcasuite.solver.scaled_gd import solve, spectral_init
from rpcasuite.utils.exceptions import (
    ConvergenceError,
    GradientUnavailableError,
    SolverDivergenceError,
)

log = logging.getLogger(__name__)

MODES = (1, 2, 3)


def _mode_product(tensor: tf.Tensor, matrix: tf.Tensor, mode: int) -> tf.Tensor:
    axis = mode - 1
    product = tf.tensordot(matrix, tensor, axes=[[1], [axis]])
    perm = list(range(1, axis + 1)) + [0] + list(range(axis + 1, 3))
    return tf.transpose(product, perm)


def _multilinear(matrices, tensor: tf.Tensor) -> tf.Tensor:
    for mode, matrix in zip(MODES, matrices):
        tensor = _mode_product(tensor, matrix, mode)
    return tensor


def _matricize(tensor: tf.Tensor, mode: int) -> tf.Tensor:
    """Same column order as rpcasuite.tensor.matricize (earlier mode fastest)."""
    axis = mode - 1
    others = [item for item in range(3) if item != axis]
    moved = tf.transpose(tensor, [axis] + others[::-1])
    return tf.reshape(moved, (int(tensor.shape[axis]), -1))


def _project_except(tensor, matrices, skip_mode):
    for mode, matrix in zip(MODES, matrices):
        if mode != skip_mode:
            tensor = _mode_product(tensor, matrix, mode)
    return tensor


def _shrink(tensor: tf.Tensor, zeta: tf.Tensor) -> tf.Tensor:
    return tf.sign(tensor) * tf.nn.relu(tf.abs(tensor) - zeta)


def _loss(kind: LossType, instance: RpcaInstance, low_rank: tf.Tensor) -> tf.Tensor:
    observation = tf.constant(instance.observation)
    if kind is LossType.SSL:
        return tf.reduce_sum(tf.abs(observation - low_rank)) / tf.reduce_sum(
            observation**2
        )
    if kind is LossType.SL:
        truth = tf.constant(instance.low_rank)
        return tf.reduce_sum((truth - low_rank) ** 2) / tf.reduce_sum(truth**2)
    background = tf.constant(1.0 - instance.mask)
    return tf.reduce_sum(((observation - low_rank) * background) ** 2) / tf.reduce_sum(
        (observation * background) ** 2
    )


def _unrolled(
    instance: RpcaInstance,
    config: SolverConfig,
    raw: tf.Tensor,
    scale: ThresholdScale,
    singular_vectors,
    kind: LossType,
) -> tf.Tensor:
    """Unrolled solve as a TensorFlow computation of the raw parameter vector."""
    observation = tf.constant(instance.observation)
    zeta0 = tf.math.softplus(raw[0]) * scale.s0
    zeta1 = tf.math.softplus(raw[1]) * scale.s1
    rho = tf.math.sigmoid(raw[2])
    eta = tf.math.softplus(raw[3])
    skipped = config.skipped_modes(instance.observation.shape)

    factors = [tf.constant(item) for item in singular_vectors]
    cleaned = observation - _shrink(observation, zeta0)
    core = _multilinear([tf.transpose(item) for item in factors], cleaned)

    for iteration in range(config.iterations):
        low_rank = _multilinear(factors, core)
        zeta = zeta1 * rho ** float(iteration)
        sparse = _shrink(observation - low_rank, zeta)
        residual = low_rank + sparse - observation
        transposed = [tf.transpose(item) for item in factors]
        grams = [tf.matmul(item, item, transpose_a=True) for item in factors]

        new_factors = []
        inverse_grams = []
        for mode, factor, skip in zip(MODES, factors, skipped):
            if skip:
                new_factors.append(factor)
                inverse_grams.append(tf.eye(factor.shape[1], dtype=tf.float64))
                continue
            core_unfolded = _matricize(core, mode)
            gradient = tf.matmul(
                _matricize(_project_except(residual, transposed, mode), mode),
                core_unfolded,
                transpose_b=True,
            )
            breve_gram = tf.matmul(
                _matricize(_project_except(core, grams, mode), mode),
                core_unfolded,
                transpose_b=True,
            )
            preconditioner = tf.linalg.inv(breve_gram)
            new_factors.append(factor - eta * tf.matmul(gradient, preconditioner))
            inverse_grams.append(tf.linalg.inv(grams[mode - 1]))

        core_gradient = _multilinear(transposed, residual)
        core = core - eta * _multilinear(inverse_grams, core_gradient)
        factors = new_factors

    return _loss(kind, instance, _multilinear(factors, core))


def forward_value_and_gradient(
    instance: RpcaInstance,
    config: SolverConfig,
    raw: RawParams,
    kind: LossType,
) -> Tuple[float, np.ndarray]:
    """
    Loss and forward-mode derivatives with respect to (z0, z1, p, e).

    Parameters
    ----------
    instance : RpcaInstance
            Instance carrying the labels the loss needs.
    config : SolverConfig
            Unrolled solver settings.
    raw : RawParams
            Point of evaluation.
    kind : LossType
            Loss of the final estimate.

    Returns
    -------
    value : float
            Loss computed by the numpy solver.
    gradient : np.ndarray
            Directional derivatives along the four raw coordinates.
    """
    scale = ThresholdScale.from_observation(instance.observation)
    hyper_parameters = activate(raw, scale)
    try:
        initial = spectral_init(instance.observation, config, hyper_parameters)
        trace = solve(
            instance.observation, config, hyper_parameters, initial_factors=initial
        )
    except (SolverDivergenceError, ConvergenceError) as err:
        raise GradientUnavailableError(
            f"Solver failed at the base point: {err}", probe="base"
        ) from err
    value = evaluate_loss(kind, instance, trace.low_rank)

    primal = tf.constant(raw.as_array(), dtype=tf.float64)
    gradient = np.zeros(4)
    for index in range(4):
        tangent = tf.one_hot(index, 4, dtype=tf.float64)
        with tf.autodiff.ForwardAccumulator(primals=primal, tangents=tangent) as acc:
            loss = _unrolled(instance, config, primal, scale, initial.factors, kind)
        derivative = acc.jvp(loss)
        gradient[index] = 0.0 if derivative is None else float(derivative.numpy())

    if not np.all(np.isfinite(gradient)):
        raise GradientUnavailableError("Forward-mode derivative is not finite", "base")
    log.debug(f"forward-mode gradient {gradient}")
    return value, gradient
