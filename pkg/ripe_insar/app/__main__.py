# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import uvicorn
from os import environ

environ.setdefault("OVOS_CONFIG_BASE_FOLDER", "ripe")
environ.setdefault("OVOS_CONFIG_FILENAME", "ripe.yaml")

from ovos_config.config import Configuration

from ripe_insar.app import create_app


def main():
    config = Configuration().get("ripe", {})
    app = create_app(config)
    uvicorn.run(app, host=config.get('server_host', "0.0.0.0"),
                port=config.get('port', 8080))


if __name__ == "__main__":
    main()
