"""Numeric tolerance shared by every validity and equality check."""

from __future__ import annotations

import os

DEFAULT_TOL = 1e-9


def default_tol() -> float:
    """Comparison tolerance; the CHOQUET_TOL env var overrides it (test use only)."""
    raw = os.environ.get("CHOQUET_TOL")
    return float(raw) if raw else DEFAULT_TOL


def resolve_tol(tol: float | None) -> float:
    return default_tol() if tol is None else float(tol)
