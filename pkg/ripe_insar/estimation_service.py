# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import numpy as np

from fastapi import HTTPException
from ovos_utils import LOG
from pydantic import ValidationError

from ripe_insar.baselines import emi_phases
from ripe_insar.coherence_model import coherence, covariance_matrix
from ripe_insar.errors import RipeError
from ripe_insar.evaluation import run_monte_carlo
from ripe_insar.ripe import run_ripe
from ripe_insar.schema.api_requests import CoherenceRequest, \
    CovarianceRequest, EmiEstimateRequest, MonteCarloRequest, \
    RipeEstimateRequest, StackPayload
from ripe_insar.schema.api_responses import ComplexMatrixResponse, \
    ComplexVectorResponse, CurveResponse, MonteCarloResponse, \
    PhaseSeriesResponse
from ripe_insar.schema.coherence import AcquisitionTimeline
from ripe_insar.simulator import SLCStack, sample_coherence


class APIError(HTTPException):
    """
    Exception class representing estimation requests that cannot be served
    """


class EstimationService:
    def __init__(self, config: dict):
        self.max_trials = config.get("max_trials") or 200
        self.max_looks = config.get("max_looks") or 1000
        self.max_epochs = config.get("max_epochs") or 500
        self.workers = config.get("workers") or 1

    def _to_stack(self, payload: StackPayload) -> SLCStack:
        if len(payload.times) > self.max_epochs:
            raise APIError(status_code=413,
                           detail=f"Stack exceeds {self.max_epochs} epochs")
        if len(payload.real[0]) > self.max_looks:
            raise APIError(status_code=413,
                           detail=f"Stack exceeds {self.max_looks} looks")
        try:
            samples = np.asarray(payload.real) + 1j * np.asarray(payload.imag)
            return SLCStack(samples=samples,
                            timeline=AcquisitionTimeline(times=payload.times))
        except (ValidationError, ValueError) as e:
            raise APIError(status_code=422, detail=str(e))

    def evaluate_coherence(self, request: CoherenceRequest) -> \
            ComplexVectorResponse:
        gamma = np.atleast_1d(coherence(request.model, np.asarray(request.dt)))
        return ComplexVectorResponse(real=gamma.real.tolist(),
                                     imag=gamma.imag.tolist())

    def covariance(self, request: CovarianceRequest) -> ComplexMatrixResponse:
        if len(request.times) > self.max_epochs:
            raise APIError(status_code=413,
                           detail=f"Timeline exceeds {self.max_epochs} epochs")
        try:
            timeline = AcquisitionTimeline(times=request.times)
        except ValidationError as e:
            raise APIError(status_code=422, detail=str(e))
        cov = covariance_matrix(request.model, timeline)
        return ComplexMatrixResponse(real=cov.real.tolist(),
                                     imag=cov.imag.tolist())

    def estimate_ripe(self, request: RipeEstimateRequest) -> \
            PhaseSeriesResponse:
        stack = self._to_stack(request.stack)
        if stack.epochs < 2:
            raise APIError(status_code=422,
                           detail="Estimation needs at least 2 acquisitions")
        try:
            series = run_ripe(stack, request.config)
        except RipeError as e:
            raise APIError(status_code=422, detail=str(e))
        return PhaseSeriesResponse.from_series(series)

    def estimate_emi(self, request: EmiEstimateRequest) -> \
            PhaseSeriesResponse:
        stack = self._to_stack(request.stack)
        if stack.epochs < 2:
            raise APIError(status_code=422,
                           detail="Estimation needs at least 2 acquisitions")
        try:
            series = emi_phases(sample_coherence(stack), request.config)
        except RipeError as e:
            raise APIError(status_code=422, detail=str(e))
        series.times = stack.times
        return PhaseSeriesResponse.from_series(series)

    def monte_carlo(self, request: MonteCarloRequest) -> MonteCarloResponse:
        sim = request.simulation
        if sim.trials > self.max_trials:
            raise APIError(status_code=413,
                           detail=f"Requested {sim.trials} trials; this "
                                  f"server allows {self.max_trials}")
        if sim.looks > self.max_looks or sim.epochs > self.max_epochs:
            raise APIError(status_code=413,
                           detail="Requested stack size exceeds server limits")
        if sim.trials < 2 or sim.epochs < 2:
            raise APIError(status_code=422,
                           detail="Monte Carlo needs at least 2 trials and "
                                  "2 epochs")
        LOG.info(f"Monte Carlo request: {sim.trials} trials, "
                 f"{[m.value for m in request.methods]}")
        try:
            curves = run_monte_carlo(sim, request.methods, request.settings,
                                     request.wavelength_m, self.workers)
        except RipeError as e:
            raise APIError(status_code=422, detail=str(e))
        return MonteCarloResponse(curves=[CurveResponse.from_curves(c)
                                          for c in curves])
