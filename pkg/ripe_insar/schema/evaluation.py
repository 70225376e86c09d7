# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from ripe_insar.schema.estimation import EmiConfig, RipeConfig

SENTINEL1_WAVELENGTH_M = 0.05546


class Method(str, Enum):
    RIPE_CALIBRATED = "ripe-calibrated"
    RIPE_UNCALIBRATED = "ripe-uncalibrated"
    EMI = "emi"
    DIRECT = "direct"
    WINDOW = "window"
    WINDOW_JOINT = "window-joint"


METHOD_ALIASES = {
    "ripe": Method.RIPE_CALIBRATED,
    "ripe-nocal": Method.RIPE_UNCALIBRATED,
    **{m.value: m for m in Method}
}


def parse_method(name: str) -> Method:
    """
    Resolve a method name or command-line alias.
    @param name: e.g. `ripe`, `ripe-nocal`, `emi`
    @return: Method
    """
    try:
        return METHOD_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"Unknown method '{name}'. Valid methods: "
                         f"{', '.join(METHOD_ALIASES)}")


class EstimatorSettings(BaseModel):
    """
    Per-method estimator configuration for a Monte Carlo run. The RIPE
    variants share `ripe` and differ only in calibration.
    """
    ripe: RipeConfig = RipeConfig()
    emi: EmiConfig = EmiConfig()
    window: int = Field(10, ge=1, description="past acquisitions used by the "
                                              "windowed estimators")

    model_config = ConfigDict(frozen=True)

