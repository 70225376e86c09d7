# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from math import inf
from typing import Dict, Union

import numpy as np

from ripe_insar.schema.coherence import AcquisitionTimeline, \
    CoherenceComponent, TemporalCoherenceModel

SICILY_C_BAND = "sicily-c-band"

PRESETS: Dict[str, TemporalCoherenceModel] = {
    SICILY_C_BAND: TemporalCoherenceModel(
        components=[CoherenceComponent(amplitude=0.18, decay_time=11.0,
                                       phase_rate=0.03),
                    CoherenceComponent(amplitude=0.25, decay_time=50.0,
                                       phase_rate=0.002),
                    CoherenceComponent(amplitude=0.13, decay_time=inf,
                                       phase_rate=0.0)],
        nugget=0.44)
}


def get_preset(name: str) -> TemporalCoherenceModel:
    """
    Get a built-in coherence model by name.
    @param name: preset name (e.g. `sicily-c-band`)
    @return: TemporalCoherenceModel
    """
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"Unknown preset '{name}'. "
                       f"Valid presets: {', '.join(sorted(PRESETS))}")


def _evaluate(model: TemporalCoherenceModel, dt: np.ndarray) -> np.ndarray:
    dt = np.asarray(dt, dtype=float)
    gamma = np.zeros(dt.shape, dtype=complex)
    for component in model.components:
        gamma += component.amplitude * \
            np.exp(-np.abs(dt) / component.decay_time) * \
            np.exp(1j * component.phase_rate * dt)
    # Zero separation is pinned to unit coherence
    return np.where(dt == 0, 1.0 + 0j, gamma)


def coherence(model: TemporalCoherenceModel,
              dt: Union[float, np.ndarray]) -> Union[complex, np.ndarray]:
    """
    Evaluate the complex temporal coherence at separation(s) `dt`.
    The phase ramps use the signed separation, so that
    coherence(-dt) == conj(coherence(dt)).
    @param model: coherence model
    @param dt: temporal separation in days (scalar or array)
    @return: complex coherence, same shape as `dt`
    """
    gamma = _evaluate(model, dt)
    if gamma.ndim == 0:
        return complex(gamma)
    return gamma


def covariance_matrix(model: TemporalCoherenceModel,
                      timeline: AcquisitionTimeline) -> np.ndarray:
    """
    Build the N x N Hermitian coherence matrix with entries
    coherence(t_m - t_n).
    @param model: coherence model
    @param timeline: acquisition times
    @return: complex ndarray of shape (N, N)
    """
    times = np.asarray(timeline.times, dtype=float)
    gamma = _evaluate(model, times[:, None] - times[None, :])
    # Mirror the upper triangle so the result is exactly Hermitian
    return np.triu(gamma) + np.triu(gamma, 1).conj().T
