"""Mixed-radix Hilbert spaces C^{D_1} x ... x C^{D_n}.

Sites are numbered from 0.  Basis kets |j_1 ... j_n> are flattened row-major
(leftmost site most significant), so the flat index of ``(1, 0, 2)`` in
dimensions ``(2, 3, 3)`` is ``1*9 + 0*3 + 2 = 11``.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from ._config import settings, tol
from .errors import DimensionMismatchError, InvalidIndexError, PreconditionError

__all__ = [
    "Dims",
    "StateVector",
    "DensityOperator",
    "Subsystem",
    "as_dims",
    "flat_index",
    "unflatten",
    "inner_product",
    "tensor",
    "partial_trace",
    "purity",
    "trace",
    "subsystems_with_dim",
    "all_subsystems",
]


@dataclass(frozen=True)
class Dims:
    """Ordered local dimensions (D_1, ..., D_n)."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise PreconditionError("a space needs at least one site")
        if any(d < 2 for d in dims):
            raise PreconditionError(f"every local dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)
        if math.prod(dims) > settings.max_dim:
            raise PreconditionError(
                f"total dimension {math.prod(dims)} exceeds the cap {settings.max_dim}"
                " (raise it with MIXEDSTAB_MAX_DIM)"
            )

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def subsystem_dim(self, sites: Iterable[int]) -> int:
        return math.prod(self.dims[i] for i in sites)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    def __getitem__(self, i):
        return self.dims[i]

    def __add__(self, other: Dims) -> Dims:
        return Dims(self.dims + as_dims(other).dims)

    def __repr__(self):
        return f"Dims{self.dims}"


def as_dims(dims) -> Dims:
    if isinstance(dims, Dims):
        return dims
    if isinstance(dims, (int, np.integer)):
        return Dims((int(dims),))
    return Dims(tuple(dims))


def flat_index(digits: Sequence[int], dims) -> int:
    """Row-major flat index of the basis ket with the given site values."""
    dims = as_dims(dims)
    if len(digits) != dims.n:
        raise InvalidIndexError(f"expected {dims.n} digits, got {len(digits)}")
    index = 0
    for j, d in zip(digits, dims):
        if not 0 <= j < d:
            raise InvalidIndexError(f"digit {j} out of range for a site of dimension {d}")
        index = index * d + int(j)
    return index


def unflatten(index: int, dims) -> tuple[int, ...]:
    """Inverse of :func:`flat_index`."""
    dims = as_dims(dims)
    if not 0 <= index < dims.total:
        raise InvalidIndexError(f"flat index {index} out of range [0, {dims.total})")
    digits = []
    for d in reversed(dims.dims):
        index, j = divmod(index, d)
        digits.append(j)
    return tuple(reversed(digits))


def _as_digits(ket, dims: Dims) -> tuple[int, ...]:
    if isinstance(ket, str):
        parts = ket.split(".") if "." in ket else list(ket)
        try:
            ket = tuple(int(p) for p in parts)
        except ValueError:
            raise InvalidIndexError(f"cannot read ket {ket!r}") from None
    return tuple(ket)


@dataclass(frozen=True, eq=False)
class StateVector:
    """A (usually normalised) vector of amplitudes over the computational basis."""

    dims: Dims
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (dims.total,):
            raise DimensionMismatchError(
                f"{amps.size} amplitudes given for a space of dimension {dims.total}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, dims, digits) -> StateVector:
        dims = as_dims(dims)
        amps = np.zeros(dims.total, dtype=complex)
        amps[flat_index(_as_digits(digits, dims), dims)] = 1.0
        return cls(dims, amps)

    @classmethod
    def from_kets(cls, dims, kets: Mapping, normalize: bool = False) -> StateVector:
        """Build a state from ``{ket: amplitude}``.

        Kets may be digit tuples, plain digit strings such as ``"0212"`` or
        dot-separated strings such as ``"0.2.1.2"`` (needed once D_i >= 10).
        """
        dims = as_dims(dims)
        amps = np.zeros(dims.total, dtype=complex)
        for ket, amp in kets.items():
            amps[flat_index(_as_digits(ket, dims), dims)] += complex(amp)
        state = cls(dims, amps)
        return state.normalized() if normalize else state

    @property
    def n(self) -> int:
        return self.dims.n

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, atol: float | None = None) -> bool:
        atol = settings.norm_atol if atol is None else atol
        return abs(self.norm() ** 2 - 1.0) <= atol

    def normalized(self) -> StateVector:
        nrm = self.norm()
        if nrm == 0:
            raise PreconditionError("cannot normalise the zero vector")
        return StateVector(self.dims, self.amplitudes / nrm)

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims.dims)

    def kets(self, atol: float | None = None) -> dict[tuple[int, ...], complex]:
        """Nonzero amplitudes keyed by digit tuples, in flat-index order."""
        atol = tol(atol)
        return {
            unflatten(k, self.dims): complex(a)
            for k, a in enumerate(self.amplitudes)
            if abs(a) > atol
        }

    def allclose(self, other: StateVector, atol: float | None = None) -> bool:
        _check_same(self.dims, other.dims)
        return bool(np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=tol(atol)))

    def __add__(self, other: StateVector) -> StateVector:
        _check_same(self.dims, other.dims)
        return StateVector(self.dims, self.amplitudes + other.amplitudes)

    def __sub__(self, other: StateVector) -> StateVector:
        _check_same(self.dims, other.dims)
        return StateVector(self.dims, self.amplitudes - other.amplitudes)

    def __mul__(self, scalar) -> StateVector:
        return StateVector(self.dims, self.amplitudes * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> StateVector:
        return StateVector(self.dims, -self.amplitudes)

    def __repr__(self):
        terms = [f"{a:.4g}|{''.join(map(str, k))}>" for k, a in list(self.kets().items())[:6]]
        more = " + ..." if len(self.kets()) > 6 else ""
        return f"StateVector({self.dims.dims}, {' + '.join(terms)}{more})"


@dataclass(frozen=True, eq=False)
class DensityOperator:
    dims: Dims
    matrix: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (dims.total, dims.total):
            raise DimensionMismatchError(
                f"matrix of shape {m.shape} does not match dimension {dims.total}"
            )
        m.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_state(cls, psi: StateVector) -> DensityOperator:
        a = psi.amplitudes
        return cls(psi.dims, np.outer(a, a.conj()))

    def is_valid(self, atol: float | None = None) -> bool:
        atol = tol(atol)
        m = self.matrix
        if not np.allclose(m, m.conj().T, rtol=0, atol=atol):
            return False
        if abs(np.trace(m) - 1) > atol:
            return False
        return bool(np.linalg.eigvalsh(m).min() >= -atol)


@dataclass(frozen=True)
class Subsystem:
    """A set of sites (0-based, strictly increasing) and its dimension."""

    sites: tuple[int, ...]
    dim: int

    @classmethod
    def of(cls, sites: Iterable[int], dims) -> Subsystem:
        dims = as_dims(dims)
        sites = tuple(sorted(set(int(s) for s in sites)))
        for s in sites:
            if not 0 <= s < dims.n:
                raise InvalidIndexError(f"site {s} out of range for {dims.n} sites")
        return cls(sites, dims.subsystem_dim(sites))

    def complement(self, dims) -> Subsystem:
        dims = as_dims(dims)
        return Subsystem.of([i for i in range(dims.n) if i not in self.sites], dims)

    def __len__(self):
        return len(self.sites)

    def __iter__(self):
        return iter(self.sites)


def _check_same(a: Dims, b: Dims):
    if a != b:
        raise DimensionMismatchError(f"dimension mismatch: {a.dims} vs {b.dims}")


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_same(a.dims, b.dims)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def tensor(*states: StateVector) -> StateVector:
    """Tensor product; site lists are concatenated in argument order."""
    if not states:
        raise PreconditionError("tensor needs at least one state")
    dims = states[0].dims
    amps = states[0].amplitudes
    for s in states[1:]:
        dims = dims + s.dims
        amps = np.kron(amps, s.amplitudes)
    return StateVector(dims, amps)


def _keep_subsystem(keep, dims: Dims) -> Subsystem:
    sub = keep if isinstance(keep, Subsystem) else Subsystem.of(keep, dims)
    if not sub.sites:
        raise PreconditionError("partial trace onto the empty subsystem; use trace() instead")
    return sub


def partial_trace(rho, keep) -> DensityOperator:
    """Reduced density operator on the sites in ``keep``.

    ``rho`` may be a :class:`StateVector`, in which case |psi><psi| is never
    formed on the full space.
    """
    dims = rho.dims
    sub = _keep_subsystem(keep, dims)
    kept = list(sub.sites)
    traced = [i for i in range(dims.n) if i not in sub.sites]
    dim_t = dims.subsystem_dim(traced)
    if isinstance(rho, StateVector):
        t = rho.as_tensor().transpose(kept + traced).reshape(sub.dim, dim_t)
        reduced = t @ t.conj().T
    elif isinstance(rho, DensityOperator):
        n = dims.n
        t = rho.matrix.reshape(dims.dims * 2)
        perm = kept + traced + [n + i for i in kept] + [n + i for i in traced]
        t = t.transpose(perm).reshape(sub.dim, dim_t, sub.dim, dim_t)
        reduced = np.einsum("ajbj->ab", t)
    else:
        raise TypeError(f"cannot take a partial trace of {type(rho).__name__}")
    return DensityOperator(Dims(tuple(dims[i] for i in kept)), reduced)


def trace(rho) -> complex:
    if isinstance(rho, StateVector):
        return complex(np.vdot(rho.amplitudes, rho.amplitudes))
    return complex(np.trace(rho.matrix))


def purity(rho) -> float:
    """tr(rho^2)."""
    if isinstance(rho, StateVector):
        return float(np.vdot(rho.amplitudes, rho.amplitudes).real ** 2)
    m = rho.matrix
    # tr(m m) = sum_ij m_ij m_ji = sum_ij |m_ij|^2 for Hermitian m
    return float(np.einsum("ij,ji->", m, m).real)


def all_subsystems(dims, include_empty: bool = False) -> list[Subsystem]:
    """Every subset of sites, ordered by size and then lexicographically."""
    dims = as_dims(dims)
    start = 0 if include_empty else 1
    return [
        Subsystem(sites, dims.subsystem_dim(sites))
        for size in range(start, dims.n + 1)
        for sites in itertools.combinations(range(dims.n), size)
    ]


def subsystems_with_dim(dims, r: int) -> list[Subsystem]:
    """All subsystems S with dim S == r, in lexicographic site order."""
    if r < 1:
        raise PreconditionError("r must be at least 1")
    dims = as_dims(dims)
    found = [s for s in all_subsystems(dims) if s.dim == r]
    return sorted(found, key=lambda s: s.sites)
