#!/usr/bin/env python3
"""
Run the Bimodule Connection Verifications

Entry point for the ``bimod`` command-line driver.

Usage:
    python bimod_cli.py verify all [--seed 42] [--format json]
    python bimod_cli.py solve metric --middle-linear --mode zeta3
"""

import os
import sys

# Add project root to path
sys.path.insert(0, os.path.dirname(__file__))

from bimod.cli import main


if __name__ == '__main__':
    sys.exit(main())
