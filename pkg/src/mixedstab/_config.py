"""Global numerical settings.

Tolerances default to 1e-9, which is many orders of magnitude above the
round-off seen on the exact-phase fixtures.  The cap on the total Hilbert
space dimension can be overridden with the ``MIXEDSTAB_MAX_DIM`` environment
variable.
"""

from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass


@dataclass
class Settings:
    atol: float = 1e-9
    norm_atol: float = 1e-9
    ame_atol: float = 1e-9
    max_dim: int = 4096
    max_order: int = 100_000


def _initial_max_dim() -> int:
    raw = os.environ.get("MIXEDSTAB_MAX_DIM")
    if raw is None:
        return 4096
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"MIXEDSTAB_MAX_DIM must be an integer, got {raw!r}") from None
    if value < 2:
        raise ValueError("MIXEDSTAB_MAX_DIM must be at least 2")
    return value


settings = Settings(max_dim=_initial_max_dim())


@contextlib.contextmanager
def override(**kwargs):
    """Temporarily change fields of the global :data:`settings`."""
    old = {k: getattr(settings, k) for k in kwargs}
    for k, v in kwargs.items():
        if not hasattr(settings, k):
            raise AttributeError(f"unknown setting {k!r}")
        setattr(settings, k, v)
    try:
        yield settings
    finally:
        for k, v in old.items():
            setattr(settings, k, v)


def tol(value: float | None) -> float:
    return settings.atol if value is None else value
