# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from enum import Enum
from math import exp
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

FASTEST_DECAY_DAYS = 11.0
DEFAULT_SPACING_DAYS = 6.0


class StableMode(str, Enum):
    """
    How the stable reference evolves after initialization
    """
    ACCUMULATE = "accumulate"
    FIRST = "first"
    SNAPSHOT = "snapshot"


def default_beta(spacing_days: float) -> float:
    """
    Forgetting factor matched to the fastest decorrelating component of the
    built-in preset.
    @param spacing_days: repeat interval of the acquisitions
    @return: beta in (0, 1)
    """
    return exp(-spacing_days / FASTEST_DECAY_DAYS)


class RipeConfig(BaseModel):
    beta: Optional[float] = Field(None, gt=0.0, lt=1.0)
    alpha: float = Field(1.0, gt=0.0)
    calibrate: bool = True
    accumulate_stable: bool = True
    stable_mode: Optional[StableMode] = None
    calibration_cadence: int = Field(1, ge=1)
    snapshot_epoch: int = Field(10, ge=1)
    normalize: bool = False

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "examples": [{"beta": 0.58, "alpha": 1.0, "calibrate": True,
                          "stable_mode": "accumulate"},
                         {"calibrate": False}]})

    @model_validator(mode="before")
    @classmethod
    def _resolve_stable_mode(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        mode = data.get("stable_mode")
        if mode is None:
            accumulate = data.get("accumulate_stable", True)
            data["stable_mode"] = StableMode.ACCUMULATE if accumulate \
                else StableMode.FIRST
        else:
            data["accumulate_stable"] = \
                StableMode(mode) == StableMode.ACCUMULATE
        return data

    def for_spacing(self, spacing_days: float) -> "RipeConfig":
        """
        Get this configuration with an unset beta resolved for a repeat
        interval. An explicit beta is kept.
        @param spacing_days: repeat interval of the acquisitions
        @return: RipeConfig with beta set
        """
        if self.beta is not None:
            return self
        if spacing_days <= 0:
            raise ValueError(f"spacing must be positive to derive beta, "
                             f"got {spacing_days}")
        return self.model_copy(update={"beta": default_beta(spacing_days)})


class EmiConfig(BaseModel):
    coherence_floor: float = Field(0.05, gt=0.0, lt=1.0)
    shrinkage: float = Field(0.05, ge=0.0, lt=1.0)

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"examples": [{"coherence_floor": 0.05,
                                         "shrinkage": 0.05}]})
