"""Runs the :mod:`scenemap.cli` entry point with ``python -m scenemap``."""
import sys

from scenemap.cli import main

sys.exit(main())
