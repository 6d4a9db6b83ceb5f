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
Exceptions raised throughout RPCASuite.

The exceptions are grouped in three families. The command line maps each family
onto an exit code, library code only ever raises.
"""


class ConfigurationError(ValueError):
    """
    Thrown when a parameter, shape or run configuration is invalid.
    """

    pass


class DataFormatError(ValueError):
    """
    Thrown when a file or an array handed to RPCASuite is malformed.
    """

    pass


class NumericalFailure(ArithmeticError):
    """
    Thrown when a numerical kernel or an optimization loop cannot continue.
    """

    pass


# Configuration errors


class InvalidModeError(ConfigurationError):
    """
    Thrown when a tensor mode index is not one of 1, 2 or 3.
    """

    pass


class ShapeMismatchError(ConfigurationError):
    """
    Thrown when array dimensions are inconsistent with one another.
    """

    pass


class RankOutOfRangeError(ConfigurationError):
    """
    Thrown when a requested rank is not in 1 <= r <= n.
    """

    pass


class InvalidHyperParametersError(ConfigurationError):
    """
    Thrown when hyperparameters leave their admissible domain, e.g. rho outside (0, 1).
    """

    pass


class NegativeThresholdError(ConfigurationError):
    """
    Thrown when a shrinkage threshold is negative.
    """

    pass


class InvalidSearchSpaceError(ConfigurationError):
    """
    Thrown when a search space has empty bounds or a non-positive budget.
    """

    pass


class InvalidExperimentSpecError(ConfigurationError):
    """
    Thrown when an experiment specification has empty grids or an unknown method.
    """

    pass


class MissingLabelError(ConfigurationError):
    """
    Thrown when a loss requires ground truth or a mask that an instance does not carry.
    """

    pass


# Data format errors


class BadMagicError(DataFormatError):
    """
    Thrown when a tensor file does not start with the expected magic bytes.
    """

    pass


class UnsupportedVersionError(DataFormatError):
    """
    Thrown when a tensor file declares an unknown format version.
    """

    pass


class TruncatedPayloadError(DataFormatError):
    """
    Thrown when a tensor file is shorter than its header announces.
    """

    pass


class NonFiniteDataError(DataFormatError):
    """
    Thrown when tensor data contains NaN or Inf entries.
    """

    pass


class MaskValidationError(DataFormatError):
    """
    Thrown when a mask contains entries other than 0 and 1.
    """

    pass


class FrameStackError(DataFormatError):
    """
    Thrown when a directory of frames cannot be stacked into a tensor.
    """

    pass


# Numerical failures


class ConvergenceError(NumericalFailure):
    """
    Thrown when an iterative kernel exceeds its iteration cap.
    """

    pass


class NotSymmetricError(NumericalFailure):
    """
    Thrown when a matrix expected to be symmetric is not.
    """

    pass


class NotPositiveDefiniteError(NumericalFailure):
    """
    Thrown when a Cholesky factorization fails.
    """

    pass


class IllConditionedError(NumericalFailure):
    """
    Thrown when a Gram matrix is too badly conditioned to be inverted reliably.
    """

    pass


class DegenerateInputError(NumericalFailure):
    """
    Thrown when a normalizing quantity of the data is zero.
    """

    pass


class SolverDivergenceError(NumericalFailure):
    """
    Thrown when the ScaledGD iterations blow up.

    Attributes
    ----------
    iteration : int
            Iteration at which the failure was detected.
    trace : SolveTrace
            The trace recorded up to the failure point. May be None if the failure
            happened during initialization.
    """

    def __init__(self, message: str, iteration: int, trace=None):
        super().__init__(message)
        self.iteration = iteration
        self.trace = trace


class GradientUnavailableError(NumericalFailure):
    """
    Thrown when a hyper-gradient cannot be evaluated because a probe solve failed.

    Attributes
    ----------
    probe : str
            Human-readable name of the failing probe, e.g. "zeta1+".
    """

    def __init__(self, message: str, probe: str = "base"):
        super().__init__(message)
        self.probe = probe


class TrainingAbortedError(NumericalFailure):
    """
    Thrown when more than half of the training steps had to be skipped.
    """

    pass


class AllEvaluationsDivergedError(NumericalFailure):
    """
    Thrown when every evaluation of the baseline tuner diverged.
    """

    pass
