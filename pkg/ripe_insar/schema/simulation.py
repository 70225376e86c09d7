# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from pydantic import BaseModel, ConfigDict, Field

from ripe_insar.schema.coherence import AcquisitionTimeline, \
    TemporalCoherenceModel

MAX_SEED = 2 ** 64 - 1


class SimulationConfig(BaseModel):
    model: TemporalCoherenceModel
    epochs: int = Field(220, ge=1)
    spacing_days: float = Field(6.0, gt=0.0)
    looks: int = Field(200, ge=1)
    trials: int = Field(500, ge=1)
    base_seed: int = Field(0, ge=0, le=MAX_SEED)
    deformation_rate: float = Field(0.0, description="radians per day")
    same_seed: bool = False

    model_config = ConfigDict(
        frozen=True, ser_json_inf_nan="constants",
        json_schema_extra={"examples": [{
            "model": {"components": [
                {"amplitude": 0.18, "decay_time": 11, "phase_rate": 0.03},
                {"amplitude": 0.25, "decay_time": 50, "phase_rate": 0.002},
                {"amplitude": 0.13, "decay_time": "Infinity",
                 "phase_rate": 0.0}], "nugget": 0.44},
            "epochs": 220, "spacing_days": 6, "looks": 200, "trials": 500,
            "base_seed": 0}]})

    @property
    def timeline(self) -> AcquisitionTimeline:
        return AcquisitionTimeline.regular(self.epochs, self.spacing_days)

    @property
    def simulated_model(self) -> TemporalCoherenceModel:
        """
        Coherence model used to draw stacks, including any injected
        deformation
        """
        if self.deformation_rate:
            return self.model.with_deformation(self.deformation_rate)
        return self.model
