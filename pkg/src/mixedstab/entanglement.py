"""The EM_r entanglement measure and absolute maximal entanglement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._config import settings
from .errors import PreconditionError
from .hilbert import StateVector, Subsystem, all_subsystems, as_dims, partial_trace, purity, subsystems_with_dim

__all__ = [
    "EMResult",
    "AMEReport",
    "em_r",
    "is_ame",
    "delta",
    "ame_distance",
    "schmidt_check",
    "marginal_deviation",
]


@dataclass(frozen=True)
class EMResult:
    r: int
    f: int
    value: float
    terms: tuple[tuple[Subsystem, float], ...]  # (S, 1 - tr rho_S^2)


@dataclass(frozen=True)
class AMEReport:
    delta: float
    checked: tuple[tuple[Subsystem, float], ...]  # (S, max |rho_S - I/dim S|)
    verdict: bool

    @property
    def max_deviation(self) -> float:
        return max((d for _, d in self.checked), default=0.0)


def em_r(psi: StateVector, r: int) -> EMResult:
    """(1/f) sum_{dim S = r} r/(r-1) (1 - tr rho_S^2)."""
    if r < 2:
        raise PreconditionError(f"EM_r needs r >= 2 (the factor r/(r-1) is singular at r=1), got {r}")
    subs = subsystems_with_dim(psi.dims, r)
    if not subs:
        raise PreconditionError(f"no subsystem of dimension {r} in {psi.dims.dims}")
    terms = tuple((S, 1.0 - purity(partial_trace(psi, S))) for S in subs)
    value = sum(t for _, t in terms) * r / (r - 1) / len(subs)
    return EMResult(r, len(subs), value, terms)


def delta(dims) -> float:
    """sqrt(prod D_i)."""
    return math.sqrt(as_dims(dims).total)


def ame_distance(dims) -> int:
    """floor(Delta) + 1, computed with integer arithmetic."""
    return math.isqrt(as_dims(dims).total) + 1


def marginal_deviation(psi: StateVector, S: Subsystem) -> float:
    rho = partial_trace(psi, S).matrix
    return float(np.max(np.abs(rho - np.eye(S.dim) / S.dim)))


def _small_subsystems(dims) -> list[Subsystem]:
    # dim S <= Delta  <=>  dim S^2 <= prod D_i
    total = dims.total
    return [S for S in all_subsystems(dims) if S.dim * S.dim <= total]


def is_ame(psi: StateVector, full: bool = False, atol: float | None = None) -> AMEReport:
    """Check rho_S = I/dim S for every S with dim S <= Delta.

    By default only the inclusion-maximal such S are examined, since every
    marginal of a maximally mixed state is maximally mixed.  ``full=True``
    checks them all.
    """
    atol = settings.ame_atol if atol is None else atol
    dims = psi.dims
    small = _small_subsystems(dims)
    if not full:
        sets = [set(S.sites) for S in small]
        small = [S for S, s in zip(small, sets) if not any(s < t for t in sets)]
    checked = tuple((S, marginal_deviation(psi, S)) for S in small)
    verdict = all(d <= atol for _, d in checked)
    return AMEReport(delta(dims), checked, verdict)


def schmidt_check(psi: StateVector, S) -> tuple[float, float]:
    """(tr rho_S^2, tr rho_{S'}^2); equal for any pure state."""
    dims = psi.dims
    S = S if isinstance(S, Subsystem) else Subsystem.of(S, dims)
    comp = S.complement(dims)
    p = purity(partial_trace(psi, S))
    q = purity(partial_trace(psi, comp)) if comp.sites else abs(psi.norm()) ** 4
    return p, q
