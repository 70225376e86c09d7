# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from typing import Optional


class RipeError(RuntimeError):
    """
    Base class for errors raised by estimation, simulation and I/O routines
    """


class InvalidModelError(RipeError):
    """
    Exception raised when a coherence model yields a covariance that cannot be
    factorized, even after diagonal jitter
    """


class DegenerateWindowError(RipeError):
    """
    Exception raised when an estimation window contains an all-zero
    acquisition or reference
    """


class UndefinedPhaseError(RipeError):
    """
    Exception raised when an interferogram average vanishes and its angle is
    undefined
    """


class SingularCovarianceError(RipeError):
    """
    Exception raised when the past-acquisition covariance used for reference
    weights cannot be inverted
    """


class SingularCoherenceError(RipeError):
    """
    Exception raised when the regularized EMI magnitude matrix cannot be
    inverted
    """


class UndefinedBiasError(RipeError):
    """
    Exception raised when residual phasors average to zero and the circular
    mean has no direction
    """


class MonteCarloError(RipeError):
    """
    Exception raised when too many Monte Carlo trials fail for a method
    """


class StackFormatError(RipeError):
    """
    Exception raised when a stack dump cannot be parsed
    """
    def __init__(self, message: str, offset: int):
        RipeError.__init__(self, f"{message} (byte offset {offset})")
        self.offset = offset


class StateFormatError(RipeError):
    """
    Exception raised when a persisted RipeState is malformed or belongs to a
    different estimator configuration
    """


class ConfigError(RipeError):
    """
    Exception raised for invalid run configuration
    """
    def __init__(self, message: str, line: Optional[int] = None,
                 source: Optional[str] = None):
        location = ""
        if source and line:
            location = f"{source}:{line}: "
        elif line:
            location = f"line {line}: "
        RipeError.__init__(self, f"{location}{message}")
        self.line = line
        self.source = source
