"""Exact algebra toolkit for Pfaffian quartic threefolds in P^4."""
from __future__ import annotations

__version__ = "0.1.0"
