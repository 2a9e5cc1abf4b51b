#!/usr/bin/env python3
"""Run the traveling-wave verification experiment with the stock config.

Extra key=value arguments override the config file, e.g.
    python scripts/run_rh_exactness.py t_end=1.0 output_path=/tmp/rh.csv
"""

import sys
from pathlib import Path

from rhlab.cli import main

CONFIG = Path(__file__).parent / "configs" / "rh_exactness.cfg"

if __name__ == "__main__":
    sys.exit(main(["rh-verify", "--config", str(CONFIG), *sys.argv[1:]]))
