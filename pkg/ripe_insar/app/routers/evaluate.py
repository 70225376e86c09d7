# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from fastapi import APIRouter

from ripe_insar.app.dependencies import estimation_service
from ripe_insar.schema.api_requests import MonteCarloRequest
from ripe_insar.schema.api_responses import MonteCarloResponse

evaluate_route = APIRouter(prefix="/evaluate", tags=["evaluation"])


@evaluate_route.post("/monte_carlo")
def evaluate_monte_carlo(request: MonteCarloRequest) -> MonteCarloResponse:
    """
    Run a bounded Monte Carlo study. Trial count, looks and epochs are limited
    by the server configuration (`max_trials`, `max_looks`, `max_epochs`).
    """
    return estimation_service.monte_carlo(request)
