"""Explicit constants and desk-scale numerics for gaps between zeta zeros."""
from __future__ import annotations

__version__ = "0.1.0"

from . import constants, moments, numerics, primesums, zeros, zeta_engine  # noqa: E402,F401
from .errors import ZetaGapsError  # noqa: E402,F401
