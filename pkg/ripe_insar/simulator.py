# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from dataclasses import dataclass

import numpy as np
from ovos_utils import LOG
from scipy.linalg import LinAlgError, cholesky

from ripe_insar.coherence_model import covariance_matrix
from ripe_insar.errors import DegenerateWindowError, InvalidModelError
from ripe_insar.schema.coherence import AcquisitionTimeline, \
    TemporalCoherenceModel

JITTER_START = 1e-12
JITTER_MAX = 1e-8
HERMITIAN_TOLERANCE = 1e-10


@dataclass
class SLCStack:
    """
    One multilook estimation window: N acquisitions (rows) by L looks
    (columns) of complex samples.
    """
    samples: np.ndarray
    timeline: AcquisitionTimeline

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 2:
            raise ValueError(f"samples must be 2-D, got shape "
                             f"{self.samples.shape}")
        if self.samples.shape[0] != len(self.timeline):
            raise ValueError(f"{self.samples.shape[0]} acquisitions but "
                             f"{len(self.timeline)} acquisition times")
        if self.samples.shape[1] < 1:
            raise ValueError("a stack needs at least one look")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("stack samples must be finite")

    @property
    def epochs(self) -> int:
        return self.samples.shape[0]

    @property
    def looks(self) -> int:
        return self.samples.shape[1]

    @property
    def times(self) -> np.ndarray:
        return np.asarray(self.timeline.times, dtype=float)


def derive_trial_seed(base_seed: int, trial_index: int) -> int:
    """
    Mix a base seed and a trial index into an independent 64-bit seed.
    The mixing is numpy's `SeedSequence` entropy hash over the pair
    (base_seed, trial_index), so trials can run in any order or in parallel
    and still draw reproducible streams.
    @param base_seed: non-negative run seed
    @param trial_index: non-negative trial number
    @return: 64-bit trial seed
    """
    sequence = np.random.SeedSequence([base_seed, trial_index])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def cholesky_lower(cov: np.ndarray) -> np.ndarray:
    """
    Lower-triangular factor C with C @ C^H == cov. Diagonal jitter starting at
    1e-12 and growing by 10x up to 1e-8 is added when the plain factorization
    fails.
    @param cov: Hermitian positive semidefinite matrix
    @return: complex lower-triangular ndarray
    """
    cov = np.asarray(cov, dtype=np.complex128)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise InvalidModelError(f"covariance must be square, got {cov.shape}")
    if not np.allclose(cov, cov.conj().T, rtol=0, atol=HERMITIAN_TOLERANCE):
        raise InvalidModelError("covariance is not Hermitian")
    jitter = 0.0
    identity = np.eye(cov.shape[0])
    while True:
        try:
            factor = cholesky(cov + jitter * identity, lower=True)
            if jitter:
                LOG.warning(f"Cholesky needed diagonal jitter {jitter:.0e}")
            return factor
        except LinAlgError:
            jitter = JITTER_START if not jitter else jitter * 10
            if jitter > JITTER_MAX * 1.0001:
                raise InvalidModelError(
                    f"covariance is not positive semidefinite "
                    f"(jitter up to {JITTER_MAX:.0e} failed)")


def circular_white_normal(shape, rng: np.random.Generator) -> np.ndarray:
    """
    Draw i.i.d. standard circular complex Gaussians (unit variance, each of
    the real and imaginary parts with variance 1/2).
    """
    return (rng.standard_normal(shape) +
            1j * rng.standard_normal(shape)) / np.sqrt(2)


def simulate_stack(model: TemporalCoherenceModel,
                   timeline: AcquisitionTimeline, looks: int,
                   seed: int) -> SLCStack:
    """
    Simulate a multilook window whose looks are independent draws with the
    model's temporal covariance.
    @param model: coherence model
    @param timeline: acquisition times
    @param looks: number of independent looks L
    @param seed: seed for numpy's default generator
    @return: SLCStack of shape (N, L)
    """
    if looks < 1:
        raise ValueError(f"looks must be >= 1, got {looks}")
    factor = cholesky_lower(covariance_matrix(model, timeline))
    rng = np.random.default_rng(seed)
    white = circular_white_normal((len(timeline), looks), rng)
    return SLCStack(samples=factor @ white, timeline=timeline)


def sample_coherence(stack: SLCStack) -> np.ndarray:
    """
    Normalized sample coherence matrix of a stack,
    sum(y_m * conj(y_n)) / sqrt(sum|y_m|^2 * sum|y_n|^2).
    @param stack: SLCStack
    @return: Hermitian complex ndarray of shape (N, N) with unit diagonal
    """
    samples = stack.samples
    power = np.sum(np.abs(samples) ** 2, axis=1)
    if np.any(power == 0):
        rows = np.flatnonzero(power == 0).tolist()
        raise DegenerateWindowError(f"acquisition rows {rows} are all zero")
    cross = samples @ samples.conj().T
    norm = np.sqrt(np.outer(power, power))
    coh = cross / norm
    np.fill_diagonal(coh, 1.0)
    coh = np.triu(coh) + np.triu(coh, 1).conj().T
    # Rounding can push rank-1 magnitudes a hair above one
    magnitude = np.abs(coh)
    over = magnitude > 1.0
    coh[over] /= magnitude[over]
    return coh
