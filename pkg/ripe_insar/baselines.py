# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import warnings

import numpy as np
from ovos_utils import LOG
from scipy.linalg import LinAlgError, LinAlgWarning, eigh, inv

from ripe_insar.errors import SingularCoherenceError, UndefinedPhaseError
from ripe_insar.ripe import PhaseSeries, estimate_phase, \
    interferometric_coherence
from ripe_insar.schema.estimation import EmiConfig
from ripe_insar.simulator import SLCStack

EIGEN_RESIDUAL_TOLERANCE = 1e-8


def regularized_magnitude(sample_coh: np.ndarray,
                          config: EmiConfig) -> np.ndarray:
    """
    Element-wise coherence magnitude with a floor on small values and optional
    shrinkage toward the identity.
    """
    magnitude = np.maximum(np.abs(sample_coh), config.coherence_floor)
    np.fill_diagonal(magnitude, 1.0)
    if config.shrinkage:
        magnitude = (1.0 - config.shrinkage) * magnitude + \
            config.shrinkage * np.eye(magnitude.shape[0])
    return magnitude


def emi_phases(sample_coh: np.ndarray,
               config: EmiConfig = EmiConfig()) -> PhaseSeries:
    """
    Full-covariance phase linking: phases of the minimum eigenvector of
    inv(|C|) o C, referenced to the first acquisition. Shrinkage loads the
    diagonal of C itself, so a coherence matrix with more acquisitions than
    looks still gives a well-posed problem.
    @param sample_coh: N x N Hermitian sample coherence matrix
    @param config: EMI regularization
    @return: PhaseSeries with phases only
    """
    coh = np.asarray(sample_coh, dtype=np.complex128)
    if coh.ndim != 2 or coh.shape[0] != coh.shape[1] or coh.shape[0] < 2:
        raise ValueError(f"EMI needs an N x N coherence matrix with N >= 2, "
                         f"got {coh.shape}")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", LinAlgWarning)
            inverse = inv(regularized_magnitude(coh, config))
    except (LinAlgError, LinAlgWarning) as e:
        raise SingularCoherenceError(f"magnitude matrix not invertible: {e}")
    if not np.all(np.isfinite(inverse)):
        raise SingularCoherenceError("magnitude matrix inverse is not finite")

    if config.shrinkage:
        coh = (1.0 - config.shrinkage) * coh + \
            config.shrinkage * np.eye(coh.shape[0])
    weighted = inverse * coh
    weighted = (weighted + weighted.conj().T) / 2
    values, vectors = eigh(weighted, subset_by_index=[0, 0])
    value, vector = values[0], vectors[:, 0]
    residual = np.linalg.norm(weighted @ vector - value * vector)
    if residual > EIGEN_RESIDUAL_TOLERANCE * np.linalg.norm(weighted):
        raise SingularCoherenceError(f"eigenvector residual {residual:.3e} "
                                     f"exceeds tolerance")
    if vector[0] == 0:
        raise UndefinedPhaseError("EMI eigenvector vanishes at the first "
                                  "acquisition")
    phases = np.angle(vector * np.conj(vector[0]))
    phases[0] = 0.0
    phases = np.where(phases <= -np.pi, np.pi, phases)
    LOG.debug(f"EMI minimum eigenvalue {value:.6f}")
    return PhaseSeries(phases=phases)


def direct_interferogram_phase(stack: SLCStack, m: int, n: int) -> float:
    """
    Phase of the multilook interferogram between acquisitions m and n.
    @param stack: SLCStack
    @param m: reference acquisition, 1-based
    @param n: secondary acquisition, 1-based
    @return: phase in (-pi, pi]
    """
    for index in (m, n):
        if not 1 <= index <= stack.epochs:
            raise IndexError(f"acquisition {index} outside 1..{stack.epochs}")
    return estimate_phase(stack.samples[m - 1], stack.samples[n - 1])


def direct_phases(stack: SLCStack) -> PhaseSeries:
    """
    Direct interferograms of every acquisition with the first one.
    @param stack: SLCStack
    @return: PhaseSeries; short coherence is the direct interferogram
             coherence
    """
    first = stack.samples[0]
    phases = [direct_interferogram_phase(stack, 1, n)
              for n in range(1, stack.epochs + 1)]
    coherences = [interferometric_coherence(first, y) for y in stack.samples]
    return PhaseSeries(phases=phases, short_coherence=coherences,
                       times=stack.times)
