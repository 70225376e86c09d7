# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

import sys

from ripe_insar.cli import main

if __name__ == "__main__":
    sys.exit(main())
