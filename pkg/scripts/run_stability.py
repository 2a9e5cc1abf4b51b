#!/usr/bin/env python3
"""Run an orbital-stability sweep.

Usage: python scripts/run_stability.py [polar|so3] [key=value ...]
"""

import sys
from pathlib import Path

from rhlab.cli import main

if __name__ == "__main__":
    group = sys.argv[1] if len(sys.argv) > 1 and "=" not in sys.argv[1] else "polar"
    overrides = [a for a in sys.argv[1:] if "=" in a]
    cfg = Path(__file__).parent / "configs" / f"stability_{group}.cfg"
    sys.exit(main(["stability", "--config", str(cfg), *overrides]))
