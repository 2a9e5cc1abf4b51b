#!/usr/bin/env python3
"""Run the orbit-traversal experiment with the stock config."""

import sys
from pathlib import Path

from rhlab.cli import main

CONFIG = Path(__file__).parent / "configs" / "traversal.cfg"

if __name__ == "__main__":
    sys.exit(main(["traversal", "--config", str(CONFIG), *sys.argv[1:]]))
