# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from typing import List

from pydantic import BaseModel, Field, model_validator

from ripe_insar.schema.coherence import TemporalCoherenceModel
from ripe_insar.schema.estimation import EmiConfig, RipeConfig
from ripe_insar.schema.evaluation import EstimatorSettings, Method, \
    SENTINEL1_WAVELENGTH_M
from ripe_insar.schema.simulation import SimulationConfig

_PRESET_EXAMPLE = {
    "components": [
        {"amplitude": 0.18, "decay_time": 11, "phase_rate": 0.03},
        {"amplitude": 0.25, "decay_time": 50, "phase_rate": 0.002},
        {"amplitude": 0.13, "decay_time": "Infinity", "phase_rate": 0.0}],
    "nugget": 0.44}


class CoherenceRequest(BaseModel):
    model: TemporalCoherenceModel
    dt: List[float] = Field(min_length=1, description="days")
    model_config = {
        "json_schema_extra": {
            "examples": [{"model": _PRESET_EXAMPLE, "dt": [0, 6, 50]}]}}


class CovarianceRequest(BaseModel):
    model: TemporalCoherenceModel
    times: List[float] = Field(min_length=1, description="days")
    model_config = {
        "json_schema_extra": {
            "examples": [{"model": _PRESET_EXAMPLE, "times": [0, 6, 12]}]}}


class StackPayload(BaseModel):
    """
    An N x L stack split into real and imaginary parts, rows by acquisition.
    """
    real: List[List[float]]
    imag: List[List[float]]
    times: List[float]

    @model_validator(mode="after")
    def _check_shape(self):
        rows = len(self.real)
        if rows != len(self.imag) or rows != len(self.times):
            raise ValueError("real, imag and times must have one row per "
                             "acquisition")
        widths = {len(r) for r in self.real} | {len(r) for r in self.imag}
        if len(widths) != 1 or widths == {0}:
            raise ValueError("every row needs the same, non-zero number of "
                             "looks")
        return self

    model_config = {
        "json_schema_extra": {
            "examples": [{"real": [[1.0, 0.5], [0.9, 0.6]],
                          "imag": [[0.0, 0.1], [0.2, 0.0]],
                          "times": [0, 6]}]}}


class RipeEstimateRequest(BaseModel):
    stack: StackPayload
    config: RipeConfig = RipeConfig()


class EmiEstimateRequest(BaseModel):
    stack: StackPayload
    config: EmiConfig = EmiConfig()


class MonteCarloRequest(BaseModel):
    simulation: SimulationConfig
    methods: List[Method] = Field(default_factory=lambda: [
        Method.RIPE_CALIBRATED, Method.RIPE_UNCALIBRATED, Method.EMI])
    settings: EstimatorSettings = EstimatorSettings()
    wavelength_m: float = Field(SENTINEL1_WAVELENGTH_M, gt=0.0)
    model_config = {
        "json_schema_extra": {
            "examples": [{
                "simulation": {"model": _PRESET_EXAMPLE, "epochs": 60,
                               "spacing_days": 6, "looks": 50, "trials": 20,
                               "base_seed": 0},
                "methods": ["ripe-calibrated", "emi"]}]}}
