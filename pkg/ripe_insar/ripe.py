# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import warnings

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from ovos_utils import LOG
from scipy.linalg import LinAlgError, LinAlgWarning, solve

from ripe_insar.coherence_model import coherence
from ripe_insar.errors import DegenerateWindowError, \
    SingularCovarianceError, UndefinedPhaseError
from ripe_insar.schema.coherence import TemporalCoherenceModel
from ripe_insar.schema.estimation import DEFAULT_SPACING_DAYS, RipeConfig, \
    StableMode
from ripe_insar.simulator import SLCStack

MIN_INNER_PRODUCT = 1e-300
IMAGINARY_WEIGHT_TOLERANCE = 1e-6

ArrayLike = Union[np.ndarray, Sequence[complex]]


def wrap_phase(phase):
    """
    Wrap phase(s) to the half-open interval (-pi, pi].
    @param phase: radians, scalar or ndarray
    @return: wrapped radians, same shape
    """
    phase = np.asarray(phase, dtype=float)
    inside = (phase > -np.pi) & (phase <= np.pi)
    wrapped = np.where(inside, phase,
                       np.pi - np.mod(np.pi - phase, 2 * np.pi))
    if wrapped.ndim == 0:
        return float(wrapped)
    return wrapped


def _angle(value: complex) -> float:
    angle = float(np.angle(value))
    # np.angle returns -pi for a negative real part with a -0.0 imaginary part
    return np.pi if angle <= -np.pi else angle


@dataclass
class WeightVector:
    """
    Real weights for a linear combination of the M most recent rephased
    acquisitions; index 0 is the most recent one.
    """
    w: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float).ravel()
        if self.w.size < 1:
            raise ValueError("a weight vector needs at least one entry")
        if not np.all(np.isfinite(self.w)):
            raise ValueError("weights must be finite")

    @property
    def M(self) -> int:
        return self.w.size

    def __len__(self) -> int:
        return self.w.size

    def normalized(self, R: np.ndarray) -> "WeightVector":
        """
        Scale these weights so that w^T R w == 1.
        @param R: covariance of the past acquisitions
        @return: normalized WeightVector
        """
        power = float(np.real(self.w @ np.asarray(R) @ self.w))
        return WeightVector(self.w / np.sqrt(power))

    @classmethod
    def exponential(cls, beta: float, M: int) -> "WeightVector":
        """
        Weights beta^0, beta^1, ... beta^(M-1), equivalent to the recursive
        running reference truncated to M acquisitions.
        """
        return cls(beta ** np.arange(M))


@dataclass
class RipeState:
    """
    Everything the recursive estimator remembers about one window. `z` and `s`
    are stored together with real gains; the references are `z_gain * z` and
    `s_gain * s`.
    """
    z: np.ndarray
    s: np.ndarray
    epoch: int = 1
    z_gain: float = 1.0
    s_gain: float = 1.0

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=np.complex128)
        self.s = np.asarray(self.s, dtype=np.complex128)
        if self.z.shape != self.s.shape or self.z.ndim != 1:
            raise ValueError(f"running and stable references must be equal "
                             f"length vectors ({self.z.shape} vs "
                             f"{self.s.shape})")
        if not (np.all(np.isfinite(self.z)) and np.all(np.isfinite(self.s))):
            raise ValueError("references must be finite")
        if self.epoch < 1:
            raise ValueError(f"epoch must be >= 1, got {self.epoch}")

    @property
    def looks(self) -> int:
        return self.z.size

    @property
    def running_reference(self) -> np.ndarray:
        return self.z_gain * self.z

    @property
    def stable_reference(self) -> np.ndarray:
        return self.s_gain * self.s


@dataclass
class PhaseSeries:
    """
    Estimated phases with per-epoch short- and long-term coherence. Estimators
    without one of the quality measures fill it with NaN.
    """
    phases: np.ndarray
    short_coherence: Optional[np.ndarray] = None
    long_coherence: Optional[np.ndarray] = None
    times: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        self.phases = np.asarray(self.phases, dtype=float)
        n = self.phases.size
        if self.short_coherence is None:
            self.short_coherence = np.full(n, np.nan)
        if self.long_coherence is None:
            self.long_coherence = np.full(n, np.nan)
        self.short_coherence = np.asarray(self.short_coherence, dtype=float)
        self.long_coherence = np.asarray(self.long_coherence, dtype=float)
        if self.times is not None:
            self.times = np.asarray(self.times, dtype=float)
        lengths = {self.short_coherence.size, self.long_coherence.size}
        if self.times is not None:
            lengths.add(self.times.size)
        if lengths != {n}:
            raise ValueError("phase and coherence series lengths differ")

    def __len__(self) -> int:
        return self.phases.size

    @property
    def mean_long_coherence(self) -> float:
        return float(np.mean(self.long_coherence))


def estimate_phase(reference: ArrayLike, y: ArrayLike) -> float:
    """
    Interferometric phase between a reference and an acquisition, the angle
    of sum(conj(reference) * y) over the looks.
    @param reference: complex L-vector
    @param y: complex L-vector
    @return: phase in (-pi, pi]
    """
    reference = np.asarray(reference, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if reference.shape != y.shape:
        raise ValueError(f"look count mismatch: {reference.shape} vs "
                         f"{y.shape}")
    inner = np.vdot(reference, y)
    if abs(inner) < MIN_INNER_PRODUCT:
        raise UndefinedPhaseError("interferogram average is zero")
    return _angle(inner)


def interferometric_coherence(reference: ArrayLike, y: ArrayLike) -> float:
    """
    Coherence magnitude of the interferogram between two L-vectors.
    @param reference: complex L-vector
    @param y: complex L-vector
    @return: value in [0, 1]
    """
    reference = np.asarray(reference, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if reference.shape != y.shape:
        raise ValueError(f"look count mismatch: {reference.shape} vs "
                         f"{y.shape}")
    power = np.vdot(reference, reference).real * np.vdot(y, y).real
    if power == 0:
        raise DegenerateWindowError("coherence of a zero-norm vector")
    return min(1.0, abs(np.vdot(reference, y)) / np.sqrt(power))


def _normalize(vector: np.ndarray, gain: float) -> Tuple[np.ndarray, float]:
    rms = float(np.sqrt(np.mean(np.abs(vector) ** 2)))
    if rms == 0:
        return vector, gain
    return vector / rms, gain * rms


def ripe_init(y1: ArrayLike, config: RipeConfig) -> RipeState:
    """
    Initialize the recursive estimator with the first acquisition.
    @param y1: complex L-vector of the first acquisition
    @param config: estimator configuration
    @return: RipeState at epoch 1
    """
    y1 = np.asarray(y1, dtype=np.complex128)
    if not np.any(y1):
        raise DegenerateWindowError("first acquisition is all zero")
    state = RipeState(z=y1.copy(), s=config.alpha * y1, epoch=1)
    if config.normalize:
        state.z, state.z_gain = _normalize(state.z, state.z_gain)
        state.s, state.s_gain = _normalize(state.s, state.s_gain)
    return state


def ripe_step(state: RipeState, y: ArrayLike, config: RipeConfig) -> \
        Tuple[RipeState, float, float, float]:
    """
    Ingest one acquisition: estimate its phase against the running reference,
    update the running reference, calibrate it against the stable reference
    and update the stable reference.
    @param state: current estimator state (not modified)
    @param y: complex L-vector of the new acquisition
    @param config: estimator configuration
    @return: new state, phase, short-term coherence, long-term coherence
    """
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != state.z.shape:
        raise ValueError(f"acquisition has {y.size} looks, state has "
                         f"{state.looks}")
    if config.beta is None:
        raise ValueError("beta is unset; resolve it with "
                         "RipeConfig.for_spacing")
    phase = estimate_phase(state.z, y)
    short = interferometric_coherence(state.z, y)
    long = interferometric_coherence(state.s, y)
    epoch = state.epoch + 1

    z = config.beta * state.z + y * np.exp(-1j * phase) / state.z_gain
    if config.calibrate and (epoch - 1) % config.calibration_cadence == 0:
        calibration = estimate_phase(state.s, z)
        z = z * np.exp(-1j * calibration)
        LOG.debug(f"epoch {epoch}: calibration phase {calibration:.6f}")

    s, s_gain = state.s, state.s_gain
    if config.stable_mode == StableMode.ACCUMULATE:
        s = s + (config.alpha * state.z_gain / s_gain) * z
    elif config.stable_mode == StableMode.SNAPSHOT and \
            epoch == config.snapshot_epoch:
        s, s_gain = config.alpha * z, state.z_gain

    z_gain = state.z_gain
    if config.normalize:
        z, z_gain = _normalize(z, z_gain)
        s, s_gain = _normalize(s, s_gain)
    new_state = RipeState(z=z, s=s, epoch=epoch, z_gain=z_gain,
                          s_gain=s_gain)
    return new_state, phase, short, long


class ProgressiveEstimator:
    """
    Stateful wrapper around `ripe_init`/`ripe_step` that collects the phase
    series of one window as acquisitions arrive. An unset beta is derived
    from `spacing_days`.
    """
    def __init__(self, config: RipeConfig,
                 state: Optional[RipeState] = None,
                 spacing_days: float = DEFAULT_SPACING_DAYS):
        self.config = config.for_spacing(spacing_days)
        self.state = state
        self._phases = []
        self._short = []
        self._long = []
        self._times = []

    @property
    def initialized(self) -> bool:
        return self.state is not None

    def ingest(self, y: ArrayLike, time: float = np.nan) -> \
            Tuple[float, float, float]:
        """
        Process the next acquisition.
        @param y: complex L-vector
        @param time: acquisition time in days
        @return: phase, short-term coherence, long-term coherence
        """
        if self.state is None:
            self.state = ripe_init(y, self.config)
            row = (0.0, 1.0, 1.0)
        else:
            self.state, *row = ripe_step(self.state, y, self.config)
            row = tuple(row)
        self._phases.append(row[0])
        self._short.append(row[1])
        self._long.append(row[2])
        self._times.append(time)
        return row

    @property
    def series(self) -> PhaseSeries:
        return PhaseSeries(phases=self._phases,
                           short_coherence=self._short,
                           long_coherence=self._long, times=self._times)


def run_ripe(stack: SLCStack, config: RipeConfig) -> PhaseSeries:
    """
    Run the recursive estimator over a whole stack.
    @param stack: SLCStack with at least two acquisitions
    @param config: estimator configuration
    @return: PhaseSeries with phase 0 at the first acquisition
    """
    if stack.epochs < 2:
        raise ValueError("recursive estimation needs at least 2 acquisitions")
    estimator = ProgressiveEstimator(config,
                                     spacing_days=stack.timeline.spacing)
    for y, time in zip(stack.samples, stack.times):
        estimator.ingest(y, time)
    return estimator.series


def _solve_real_weights(R: np.ndarray, rhs: np.ndarray) -> WeightVector:
    R = np.asarray(R, dtype=np.complex128)
    rhs = np.asarray(rhs, dtype=np.complex128).ravel()
    if R.ndim != 2 or R.shape[0] != R.shape[1] or R.shape[0] != rhs.size:
        raise ValueError(f"shape mismatch: R {R.shape}, r {rhs.shape}")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", LinAlgWarning)
            solution = solve(R, rhs, assume_a="her")
    except (LinAlgError, LinAlgWarning) as e:
        raise SingularCovarianceError(f"cannot invert past covariance: {e}")
    if not np.all(np.isfinite(solution)):
        raise SingularCovarianceError("past covariance solve is not finite")
    residual = np.linalg.norm(solution.imag)
    if residual > IMAGINARY_WEIGHT_TOLERANCE * np.linalg.norm(solution):
        LOG.warning(f"discarding imaginary weight component "
                    f"(norm {residual:.3e})")
    return WeightVector(solution.real)


def optimal_weights(R: np.ndarray, r: np.ndarray) -> WeightVector:
    """
    Coherence-maximizing weights w = R^-1 r for predicting a new acquisition
    from M rephased past ones. The Lagrange scale is dropped; use
    `WeightVector.normalized` for the w^T R w == 1 solution.
    @param R: M x M Hermitian covariance of the past acquisitions
    @param r: covariance between past acquisitions and the new one
    @return: real WeightVector
    """
    return _solve_real_weights(R, r)


def joint_optimal_weights(R: np.ndarray, r_y: np.ndarray,
                          r_s: np.ndarray) -> WeightVector:
    """
    Weights that jointly predict the new acquisition and the stable
    reference, w = R^-1 (r_y + r_s).
    @param R: M x M Hermitian covariance of the past acquisitions
    @param r_y: covariance with the new acquisition
    @param r_s: covariance with the (unit power) stable reference
    @return: real WeightVector
    """
    r_y = np.asarray(r_y, dtype=np.complex128).ravel()
    r_s = np.asarray(r_s, dtype=np.complex128).ravel()
    if r_y.shape != r_s.shape:
        raise ValueError(f"shape mismatch: r_y {r_y.shape}, r_s {r_s.shape}")
    return _solve_real_weights(R, r_y + r_s)


def build_weighted_reference(past: ArrayLike,
                             w: Union[WeightVector, ArrayLike]) -> np.ndarray:
    """
    Weighted sum of rephased past acquisitions, look by look.
    @param past: M x L complex array, most recent acquisition first
    @param w: M weights
    @return: complex L-vector
    """
    past = np.atleast_2d(np.asarray(past, dtype=np.complex128))
    weights = w.w if isinstance(w, WeightVector) else \
        np.asarray(w, dtype=float).ravel()
    if weights.size != past.shape[0]:
        raise ValueError(f"{weights.size} weights for {past.shape[0]} past "
                         f"acquisitions")
    return weights @ past


def model_weight_inputs(model: TemporalCoherenceModel, spacing_days: float,
                        M: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Effective (real) covariances for regularly sampled, rephased past
    acquisitions under a coherence model.
    @param model: coherence model
    @param spacing_days: repeat interval
    @param M: window length
    @return: R (M x M), r_y (M), r_s (M); index 0 is the most recent
    """
    lags = spacing_days * np.arange(1, M + 1)
    R = np.real(coherence(model, lags[None, :] - lags[:, None]))
    r_y = np.real(coherence(model, lags))
    r_s = np.full(M, np.sqrt(model.stable_amplitude))
    return R, r_y, r_s


def run_windowed(stack: SLCStack, weights: WeightVector) -> PhaseSeries:
    """
    Progressive estimation with an explicit reference built from the last M
    rephased acquisitions. Early epochs use the leading weights only.
    @param stack: SLCStack with at least two acquisitions
    @param weights: WeightVector, index 0 applied to the most recent epoch
    @return: PhaseSeries (no long-term coherence)
    """
    if stack.epochs < 2:
        raise ValueError("progressive estimation needs at least 2 "
                         "acquisitions")
    history = deque(maxlen=weights.M)
    history.appendleft(stack.samples[0])
    phases = [0.0]
    short = [1.0]
    for y in stack.samples[1:]:
        past = np.array(history)
        reference = build_weighted_reference(past, weights.w[:len(past)])
        phase = estimate_phase(reference, y)
        phases.append(phase)
        short.append(interferometric_coherence(reference, y))
        history.appendleft(y * np.exp(-1j * phase))
    return PhaseSeries(phases=phases, short_coherence=short,
                       times=stack.times)


def reliable_epochs(series: PhaseSeries, threshold: float) -> np.ndarray:
    """
    Flag epochs whose long-term coherence reaches a threshold.
    @param series: PhaseSeries from the recursive estimator
    @param threshold: minimum long-term coherence
    @return: boolean ndarray
    """
    return series.long_coherence >= threshold
