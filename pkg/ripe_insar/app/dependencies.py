# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

from ovos_config.config import Configuration

from ripe_insar.estimation_service import EstimationService

config = Configuration().get("ripe") or dict()
estimation_service = EstimationService(config)
