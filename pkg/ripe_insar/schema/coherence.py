# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from math import inf, isfinite
from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, \
    model_validator

AMPLITUDE_SUM_TOLERANCE = 1e-12


class CoherenceComponent(BaseModel):
    """
    One exponentially decaying term of a complex temporal coherence model.
    A component with infinite `decay_time` does not decorrelate.
    """
    amplitude: float = Field(ge=0.0, le=1.0)
    decay_time: float = Field(gt=0.0, description="days")
    phase_rate: float = Field(0.0, description="radians per day")

    model_config = ConfigDict(
        frozen=True, ser_json_inf_nan="constants",
        json_schema_extra={
            "examples": [{"amplitude": 0.18, "decay_time": 11,
                          "phase_rate": 0.03},
                         {"amplitude": 0.13, "decay_time": "Infinity",
                          "phase_rate": 0.0}]})

    @field_validator("decay_time", mode="before")
    @classmethod
    def _parse_infinite(cls, value):
        if value is None:
            return inf
        if isinstance(value, str) and value.strip().lower() in \
                ("inf", "infinity", "+inf"):
            return inf
        return value

    @property
    def stable(self) -> bool:
        return not isfinite(self.decay_time)


class TemporalCoherenceModel(BaseModel):
    """
    Stationary complex coherence as a function of temporal separation: a sum
    of components plus a nugget that only contributes at zero separation.
    """
    components: List[CoherenceComponent] = Field(default_factory=list)
    nugget: float = Field(0.0, ge=0.0, le=1.0)

    model_config = ConfigDict(
        frozen=True, ser_json_inf_nan="constants",
        json_schema_extra={
            "examples": [{
                "components": [
                    {"amplitude": 0.18, "decay_time": 11, "phase_rate": 0.03},
                    {"amplitude": 0.25, "decay_time": 50, "phase_rate": 0.002},
                    {"amplitude": 0.13, "decay_time": "Infinity",
                     "phase_rate": 0.0}],
                "nugget": 0.44}]})

    @model_validator(mode="after")
    def _check_amplitude_sum(self):
        total = sum(c.amplitude for c in self.components) + self.nugget
        if abs(total - 1.0) > AMPLITUDE_SUM_TOLERANCE:
            raise ValueError(f"component amplitudes plus nugget must sum to "
                             f"1 so that coherence(0) == 1 (got {total!r})")
        return self

    @property
    def stable_amplitude(self) -> float:
        """
        Total power fraction of non-decaying components
        """
        return sum(c.amplitude for c in self.components if c.stable)

    def with_deformation(self, rate: float) -> "TemporalCoherenceModel":
        """
        Get a copy of this model with a linear deformation phase ramp added to
        the non-decaying components.
        @param rate: deformation phase rate in radians per day
        @return: new TemporalCoherenceModel
        """
        components = [c.model_copy(update={"phase_rate": c.phase_rate + rate})
                      if c.stable else c for c in self.components]
        return TemporalCoherenceModel(components=components,
                                      nugget=self.nugget)


class AcquisitionTimeline(BaseModel):
    """
    Strictly increasing acquisition times, in days.
    """
    times: List[float] = Field(min_length=1)

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"examples": [{"times": [0, 6, 12, 18]}]})

    @field_validator("times")
    @classmethod
    def _check_increasing(cls, times: List[float]) -> List[float]:
        if not all(isfinite(t) for t in times):
            raise ValueError("acquisition times must be finite")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("acquisition times must be strictly increasing")
        return times

    @classmethod
    def regular(cls, epochs: int, spacing_days: float = 6.0,
                start: float = 0.0) -> "AcquisitionTimeline":
        """
        Build a regularly sampled timeline.
        @param epochs: number of acquisitions
        @param spacing_days: repeat interval in days
        @param start: time of the first acquisition in days
        @return: AcquisitionTimeline
        """
        return cls(times=[start + i * spacing_days for i in range(epochs)])

    def __len__(self) -> int:
        return len(self.times)

    @property
    def spacing(self) -> float:
        """
        Median repeat interval in days (0 for a single acquisition)
        """
        if len(self.times) < 2:
            return 0.0
        gaps = sorted(b - a for a, b in zip(self.times, self.times[1:]))
        return gaps[len(gaps) // 2]
