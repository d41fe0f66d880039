"""Shared pytest configuration; test helpers live in helpers.py."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
