# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from fastapi import FastAPI

from ripe_insar.app.routers.estimate import estimate_route
from ripe_insar.app.routers.evaluate import evaluate_route
from ripe_insar.app.routers.model import model_route
from ripe_insar.version import __version__


def create_app(config: dict):
    title = config.get('fastapi_title') or "RIPE: progressive InSAR phase " \
                                           "estimation"
    summary = config.get('fastapi_summary') or ""
    version = __version__
    app = FastAPI(title=title, summary=summary, version=version)
    app.include_router(model_route)
    app.include_router(estimate_route)
    app.include_router(evaluate_route)

    return app
