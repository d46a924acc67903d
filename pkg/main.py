#!/usr/bin/env python3
"""
decotm: decoherence rates of a qubit in piecewise-constant random fields.

Entry point for the command line.
"""

import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent / "src"))

from src.experiments.cli import main


if __name__ == "__main__":
    sys.exit(main())
