"""Capacity limits shared by the exponential-time routines."""

import os

MAX_LABELS = 12
MAX_DOMAIN = 12
MAX_HYPERCUBE_D = 6
DEFAULT_BUDGET = 10**6


class CapacityError(RuntimeError):
    """Raised when an exhaustive computation would exceed a configured limit."""


def enumeration_budget():
    """Dataset-enumeration budget, overridable through ``MINIMAX_LAB_BUDGET``."""
    raw = os.environ.get("MINIMAX_LAB_BUDGET")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    try:
        value = int(float(raw))
    except ValueError as exc:
        raise ValueError(f"MINIMAX_LAB_BUDGET must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError("MINIMAX_LAB_BUDGET must be positive")
    return value
