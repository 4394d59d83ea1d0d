#!/usr/bin/env python3
"""Debug entry point: runs the CLI from a checkout with debug logging."""

import os
import sys

# Add repository root to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
os.environ.setdefault('DEBUG', '1')

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
