# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from fastapi import APIRouter

from ripe_insar.app.dependencies import estimation_service
from ripe_insar.schema.api_requests import EmiEstimateRequest, \
    RipeEstimateRequest
from ripe_insar.schema.api_responses import PhaseSeriesResponse

estimate_route = APIRouter(prefix="/estimate", tags=["estimation"])


@estimate_route.post("/ripe")
def estimate_ripe(request: RipeEstimateRequest) -> PhaseSeriesResponse:
    return estimation_service.estimate_ripe(request)


@estimate_route.post("/emi")
def estimate_emi(request: EmiEstimateRequest) -> PhaseSeriesResponse:
    return estimation_service.estimate_emi(request)
