# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from fastapi import APIRouter

from ripe_insar.app.dependencies import estimation_service
from ripe_insar.schema.api_requests import CoherenceRequest, \
    CovarianceRequest
from ripe_insar.schema.api_responses import ComplexMatrixResponse, \
    ComplexVectorResponse

model_route = APIRouter(prefix="/model", tags=["model"])


@model_route.post("/coherence")
async def model_coherence(request: CoherenceRequest) -> ComplexVectorResponse:
    return estimation_service.evaluate_coherence(request)


@model_route.post("/covariance")
async def model_covariance(request: CovarianceRequest) -> \
        ComplexMatrixResponse:
    return estimation_service.covariance(request)
