#!/usr/bin/env python3
"""Run the rearrangement maximality-bound experiment with the stock config."""

import sys
from pathlib import Path

from rhlab.cli import main

CONFIG = Path(__file__).parent / "configs" / "rearrangement.cfg"

if __name__ == "__main__":
    sys.exit(main(["rearrange", "--config", str(CONFIG), *sys.argv[1:]]))
