# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from ovos_utils import LOG

from ripe_insar.baselines import direct_phases, emi_phases
from ripe_insar.errors import MonteCarloError, RipeError, UndefinedBiasError
from ripe_insar.ripe import PhaseSeries, WeightVector, joint_optimal_weights, \
    model_weight_inputs, optimal_weights, run_ripe, run_windowed, wrap_phase
from ripe_insar.schema.evaluation import EstimatorSettings, Method, \
    SENTINEL1_WAVELENGTH_M
from ripe_insar.schema.simulation import SimulationConfig
from ripe_insar.simulator import SLCStack, derive_trial_seed, \
    sample_coherence, simulate_stack

MIN_RESULTANT = 1e-12
MAX_FAILURE_FRACTION = 0.01
DAYS_PER_YEAR = 365.25


def circular_bias(residuals, axis: Optional[int] = None):
    """
    Circular mean of phase residuals: the angle of the mean unit phasor.
    @param residuals: radians
    @param axis: axis to average over (all values if None)
    @return: bias in (-pi, pi], scalar or ndarray
    """
    residuals = np.asarray(residuals, dtype=float)
    if residuals.size == 0:
        raise ValueError("circular bias of an empty residual set")
    resultant = np.mean(np.exp(1j * residuals), axis=axis)
    if np.any(np.abs(resultant) < MIN_RESULTANT):
        raise UndefinedBiasError("residual phasors average to zero")
    bias = np.angle(resultant)
    bias = np.where(bias <= -np.pi, np.pi, bias)
    if bias.ndim == 0:
        return float(bias)
    return bias


def circular_std(residuals, axis: Optional[int] = None):
    """
    Standard deviation of residuals after removing the circular bias in the
    complex domain and wrapping.
    @param residuals: radians (at least two along `axis`)
    @param axis: axis to reduce over (all values if None)
    @return: standard deviation in radians, scalar or ndarray
    """
    residuals = np.asarray(residuals, dtype=float)
    count = residuals.size if axis is None else residuals.shape[axis]
    if count < 2:
        raise ValueError("circular std needs at least two residuals")
    bias = circular_bias(residuals, axis=axis)
    if axis is not None:
        bias = np.expand_dims(bias, axis)
    deviation = wrap_phase(residuals - bias)
    std = np.std(deviation, axis=axis)
    if np.ndim(std) == 0:
        return float(std)
    return std


def phase_to_displacement(phase, wavelength: float = SENTINEL1_WAVELENGTH_M):
    """
    Line-of-sight displacement for an interferometric phase.
    @param phase: radians
    @param wavelength: radar wavelength in meters
    @return: displacement in millimeters
    """
    if wavelength <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    displacement = 1000.0 * wavelength * np.asarray(phase, dtype=float) / \
        (4 * np.pi)
    if displacement.ndim == 0:
        return float(displacement)
    return displacement


@dataclass
class TrialResult:
    method: Method
    series: PhaseSeries
    trial_index: int
    seed: int


@dataclass
class BiasStdCurves:
    """
    Per-epoch circular bias and standard deviation of one method across
    Monte Carlo trials.
    """
    method: Method
    time_days: np.ndarray
    bias_rad: np.ndarray
    bias_mm: np.ndarray
    std_rad: np.ndarray
    std_mm: np.ndarray
    mean_short_coherence: np.ndarray
    mean_long_coherence: np.ndarray
    trials: int
    excluded: int = 0
    wavelength: float = SENTINEL1_WAVELENGTH_M

    def __len__(self) -> int:
        return self.time_days.size

    @property
    def unwrapped_bias_mm(self) -> np.ndarray:
        """
        Bias in mm with 2*pi jumps between consecutive epochs removed
        """
        return phase_to_displacement(np.unwrap(self.bias_rad),
                                     self.wavelength)

    def drift_mm_per_year(self, start_day: float, end_day: float) -> float:
        """
        Least-squares slope of the unwrapped bias over a day range.
        @param start_day: first day included
        @param end_day: last day included
        @return: slope in mm/yr
        """
        mask = (self.time_days >= start_day) & (self.time_days <= end_day)
        if np.count_nonzero(mask) < 2:
            raise ValueError(f"fewer than two epochs in days "
                             f"[{start_day}, {end_day}]")
        slope, _ = np.polyfit(self.time_days[mask],
                              self.unwrapped_bias_mm[mask], 1)
        return float(slope * DAYS_PER_YEAR)


@dataclass
class CurveAggregator:
    """
    Collects per-trial results keyed by trial index, so the curves do not
    depend on the order in which trials complete.
    """
    method: Method
    results: Dict[int, TrialResult] = field(default_factory=dict)
    failures: Dict[int, str] = field(default_factory=dict)

    def add(self, result: TrialResult):
        self.results[result.trial_index] = result

    def add_failure(self, trial_index: int, error: Exception):
        self.failures[trial_index] = repr(error)

    def merge(self, other: "CurveAggregator") -> "CurveAggregator":
        if other.method != self.method:
            raise ValueError(f"cannot merge {other.method} into "
                             f"{self.method}")
        merged = CurveAggregator(self.method, dict(self.results),
                                 dict(self.failures))
        merged.results.update(other.results)
        merged.failures.update(other.failures)
        return merged

    def finalize(self, times: np.ndarray, truth: np.ndarray,
                 wavelength: float) -> BiasStdCurves:
        total = len(self.results) + len(self.failures)
        if len(self.failures) > MAX_FAILURE_FRACTION * total:
            raise MonteCarloError(
                f"{self.method.value}: {len(self.failures)} of {total} trials "
                f"failed; first error: "
                f"{self.failures[min(self.failures)]}")
        if len(self.results) < 2:
            raise MonteCarloError(f"{self.method.value}: fewer than two "
                                  f"successful trials")
        ordered = [self.results[i] for i in sorted(self.results)]
        phases = np.stack([r.series.phases for r in ordered])
        residuals = wrap_phase(phases - truth[None, :])
        bias = circular_bias(residuals, axis=0)
        std = circular_std(residuals, axis=0)
        short = np.mean([r.series.short_coherence for r in ordered], axis=0)
        long = np.mean([r.series.long_coherence for r in ordered], axis=0)
        if self.failures:
            LOG.warning(f"{self.method.value}: excluded "
                        f"{len(self.failures)} failed trial(s)")
        return BiasStdCurves(method=self.method, time_days=np.asarray(times),
                             bias_rad=bias,
                             bias_mm=phase_to_displacement(bias, wavelength),
                             std_rad=std,
                             std_mm=phase_to_displacement(std, wavelength),
                             mean_short_coherence=short,
                             mean_long_coherence=long,
                             trials=len(ordered),
                             excluded=len(self.failures),
                             wavelength=wavelength)


def build_estimators(sim_config: SimulationConfig,
                     methods: Sequence[Method],
                     settings: EstimatorSettings) -> \
        Dict[Method, Callable[[SLCStack], PhaseSeries]]:
    """
    Resolve each requested method into a function of one stack.
    @param sim_config: simulation configuration (for model-based weights)
    @param methods: methods to run
    @param settings: per-method configuration
    @return: dict of Method to estimator callable
    """
    estimators = dict()
    ripe = settings.ripe.for_spacing(sim_config.spacing_days)
    for method in methods:
        if method == Method.RIPE_CALIBRATED:
            config = ripe.model_copy(update={"calibrate": True})
            estimators[method] = lambda stack, c=config: run_ripe(stack, c)
        elif method == Method.RIPE_UNCALIBRATED:
            config = ripe.model_copy(update={"calibrate": False})
            estimators[method] = lambda stack, c=config: run_ripe(stack, c)
        elif method == Method.EMI:
            estimators[method] = lambda stack: \
                emi_phases(sample_coherence(stack), settings.emi)
        elif method == Method.DIRECT:
            estimators[method] = direct_phases
        elif method in (Method.WINDOW, Method.WINDOW_JOINT):
            R, r_y, r_s = model_weight_inputs(sim_config.model,
                                              sim_config.spacing_days,
                                              settings.window)
            weights: WeightVector = optimal_weights(R, r_y) \
                if method == Method.WINDOW else \
                joint_optimal_weights(R, r_y, r_s)
            LOG.debug(f"{method.value} weights: {weights.w}")
            estimators[method] = lambda stack, w=weights: \
                run_windowed(stack, w)
        else:
            raise ValueError(f"Unsupported method: {method}")
    return estimators


def trial_seed(sim_config: SimulationConfig, trial_index: int) -> int:
    if sim_config.same_seed:
        return sim_config.base_seed
    return derive_trial_seed(sim_config.base_seed, trial_index)


def run_trial(sim_config: SimulationConfig,
              estimators: Dict[Method, Callable[[SLCStack], PhaseSeries]],
              trial_index: int) -> \
        Tuple[List[TrialResult], Dict[Method, Exception]]:
    """
    Simulate one stack and run every estimator on it.
    @return: successful results and per-method errors
    """
    seed = trial_seed(sim_config, trial_index)
    stack = simulate_stack(sim_config.simulated_model, sim_config.timeline,
                           sim_config.looks, seed)
    results, errors = list(), dict()
    for method, estimator in estimators.items():
        try:
            results.append(TrialResult(method=method, series=estimator(stack),
                                       trial_index=trial_index, seed=seed))
        except RipeError as e:
            LOG.exception(f"trial {trial_index} ({method.value}): {e}")
            errors[method] = e
    return results, errors


def run_monte_carlo(sim_config: SimulationConfig, methods: Sequence[Method],
                    settings: EstimatorSettings = EstimatorSettings(),
                    wavelength: float = SENTINEL1_WAVELENGTH_M,
                    workers: int = 1) -> List[BiasStdCurves]:
    """
    Estimate per-epoch bias and standard deviation of several estimators over
    independent simulated stacks.
    @param sim_config: coherence model, timeline, looks, trials and seed
    @param methods: estimators to evaluate
    @param settings: estimator configuration
    @param wavelength: radar wavelength in meters for mm conversion
    @param workers: concurrent trial threads
    @return: one BiasStdCurves per method, in the order requested
    """
    if sim_config.trials < 2:
        raise ValueError("a Monte Carlo run needs at least 2 trials")
    if sim_config.epochs < 2:
        raise ValueError("a Monte Carlo run needs at least 2 epochs")
    methods = list(dict.fromkeys(methods))
    estimators = build_estimators(sim_config, methods, settings)
    aggregators = {m: CurveAggregator(m) for m in methods}
    LOG.info(f"Monte Carlo: {sim_config.trials} trials, "
             f"{sim_config.epochs} epochs, {sim_config.looks} looks, "
             f"methods {[m.value for m in methods]}")

    def _run(trial_index: int):
        return trial_index, run_trial(sim_config, estimators, trial_index)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        for trial_index, (results, errors) in \
                executor.map(_run, range(sim_config.trials)):
            for result in results:
                aggregators[result.method].add(result)
            for method, error in errors.items():
                aggregators[method].add_failure(trial_index, error)

    times = np.asarray(sim_config.timeline.times)
    truth = wrap_phase(sim_config.deformation_rate * (times - times[0]))
    return [aggregators[m].finalize(times, truth, wavelength)
            for m in methods]
