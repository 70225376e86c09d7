# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from math import isnan
from typing import List, Optional

from pydantic import BaseModel


def _finite_or_none(values) -> List[Optional[float]]:
    return [None if isnan(v) else float(v) for v in values]


class ComplexVectorResponse(BaseModel):
    real: List[float]
    imag: List[float]
    model_config = {
        "json_schema_extra": {
            "examples": [{"real": [1.0, 0.4725, 0.2216],
                          "imag": [0.0, 0.0528, 0.0111]}]}}


class ComplexMatrixResponse(BaseModel):
    real: List[List[float]]
    imag: List[List[float]]


class PhaseSeriesResponse(BaseModel):
    phases: List[float]
    short_coherence: List[Optional[float]]
    long_coherence: List[Optional[float]]
    times: Optional[List[float]] = None
    model_config = {
        "json_schema_extra": {
            "examples": [{"phases": [0.0, 0.012, -0.034],
                          "short_coherence": [1.0, 0.71, 0.69],
                          "long_coherence": [1.0, 0.66, 0.58],
                          "times": [0, 6, 12]}]}}

    @classmethod
    def from_series(cls, series) -> "PhaseSeriesResponse":
        times = None if series.times is None else \
            [float(t) for t in series.times]
        return cls(phases=[float(p) for p in series.phases],
                   short_coherence=_finite_or_none(series.short_coherence),
                   long_coherence=_finite_or_none(series.long_coherence),
                   times=times)


class CurveResponse(BaseModel):
    method: str
    time_days: List[float]
    bias_rad: List[float]
    bias_mm: List[float]
    std_rad: List[float]
    std_mm: List[float]
    mean_short_coherence: List[Optional[float]]
    mean_long_coherence: List[Optional[float]]
    trials: int
    excluded: int

    @classmethod
    def from_curves(cls, curves) -> "CurveResponse":
        return cls(method=curves.method.value,
                   time_days=curves.time_days.tolist(),
                   bias_rad=curves.bias_rad.tolist(),
                   bias_mm=curves.bias_mm.tolist(),
                   std_rad=curves.std_rad.tolist(),
                   std_mm=curves.std_mm.tolist(),
                   mean_short_coherence=_finite_or_none(
                       curves.mean_short_coherence),
                   mean_long_coherence=_finite_or_none(
                       curves.mean_long_coherence),
                   trials=curves.trials, excluded=curves.excluded)


class MonteCarloResponse(BaseModel):
    curves: List[CurveResponse]
