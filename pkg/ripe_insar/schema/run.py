# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, \
    model_validator

from ripe_insar.coherence_model import PRESETS, SICILY_C_BAND, get_preset
from ripe_insar.schema.coherence import CoherenceComponent, \
    TemporalCoherenceModel
from ripe_insar.schema.estimation import EmiConfig, RipeConfig, StableMode, \
    default_beta
from ripe_insar.schema.evaluation import EstimatorSettings, Method, \
    SENTINEL1_WAVELENGTH_M, parse_method
from ripe_insar.schema.simulation import MAX_SEED, SimulationConfig


class RunConfig(BaseModel):
    """
    Everything needed to reproduce a simulation, estimation or Monte Carlo
    run. Either `preset` or `components` (plus `nugget`) defines the model.
    """
    preset: Optional[str] = None
    components: List[CoherenceComponent] = Field(default_factory=list)
    nugget: float = Field(0.0, ge=0.0, le=1.0)
    epochs: int = Field(220, ge=2)
    spacing_days: float = Field(6.0, gt=0.0)
    looks: int = Field(200, ge=1)
    trials: int = Field(500, ge=1)
    seed: int = Field(0, ge=0, le=MAX_SEED)
    same_seed: bool = False
    methods: List[Method] = Field(default_factory=lambda: [
        Method.RIPE_CALIBRATED, Method.RIPE_UNCALIBRATED, Method.EMI])
    beta: Optional[float] = Field(None, gt=0.0, lt=1.0)
    alpha: float = Field(1.0, gt=0.0)
    calibration_cadence: int = Field(1, ge=1)
    stable_mode: StableMode = StableMode.ACCUMULATE
    snapshot_epoch: int = Field(10, ge=1)
    normalize: bool = False
    emi_floor: float = Field(0.05, gt=0.0, lt=1.0)
    emi_shrinkage: float = Field(0.05, ge=0.0, lt=1.0)
    window: int = Field(10, ge=1)
    wavelength_m: float = Field(SENTINEL1_WAVELENGTH_M, gt=0.0)
    deformation_rate: float = 0.0
    workers: int = Field(1, ge=1)
    out: str = "ripe_output"

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    @field_validator("methods", mode="before")
    @classmethod
    def _parse_methods(cls, value):
        if isinstance(value, str):
            value = [v for v in value.split(",") if v.strip()]
        if not value:
            raise ValueError("at least one method is required")
        return [parse_method(v) if isinstance(v, str) else v for v in value]

    @field_validator("preset")
    @classmethod
    def _check_preset(cls, value):
        if value is not None and value not in PRESETS:
            raise ValueError(f"unknown preset '{value}'; valid presets: "
                             f"{', '.join(sorted(PRESETS))}")
        return value

    @model_validator(mode="after")
    def _check_model(self):
        if self.preset and self.components:
            raise ValueError("set either a preset or [component] blocks, "
                             "not both")
        self.coherence_model()
        return self

    def coherence_model(self) -> TemporalCoherenceModel:
        if self.components:
            return TemporalCoherenceModel(components=self.components,
                                          nugget=self.nugget)
        return get_preset(self.preset or SICILY_C_BAND)

    @property
    def resolved_beta(self) -> float:
        return self.beta if self.beta is not None else \
            default_beta(self.spacing_days)

    def ripe_config(self, calibrate: bool = True) -> RipeConfig:
        return RipeConfig(beta=self.resolved_beta, alpha=self.alpha,
                          calibrate=calibrate,
                          stable_mode=self.stable_mode,
                          calibration_cadence=self.calibration_cadence,
                          snapshot_epoch=self.snapshot_epoch,
                          normalize=self.normalize)

    def emi_config(self) -> EmiConfig:
        return EmiConfig(coherence_floor=self.emi_floor,
                         shrinkage=self.emi_shrinkage)

    def estimator_settings(self) -> EstimatorSettings:
        return EstimatorSettings(ripe=self.ripe_config(),
                                 emi=self.emi_config(), window=self.window)

    def simulation_config(self) -> SimulationConfig:
        return SimulationConfig(model=self.coherence_model(),
                                epochs=self.epochs,
                                spacing_days=self.spacing_days,
                                looks=self.looks, trials=self.trials,
                                base_seed=self.seed,
                                deformation_rate=self.deformation_rate,
                                same_seed=self.same_seed)
