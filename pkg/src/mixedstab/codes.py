"""Knill-Laflamme detectability, dimensional distance and the Singleton bound."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._config import tol
from .errors import PreconditionError
from .hilbert import Dims, Subsystem, all_subsystems, as_dims
from .operators import GenPermOperator, LocalOperator, WeylLabel, apply_weyl
from .stabiliser import CodeSpace

__all__ = [
    "KLReport",
    "CodeParams",
    "DistanceResult",
    "SingletonVerdict",
    "kl_matrix",
    "kl_check",
    "errors_with_support",
    "dimensional_distance",
    "is_pure",
    "singleton_check",
    "singleton_max_K",
]


@dataclass(frozen=True)
class KLReport:
    label: object
    c_E: complex
    detectable: bool
    max_offdiag: float
    diag_spread: float
    atol: float = 1e-9

    @property
    def pure(self) -> bool:
        """Detectable with c_E = 0 (only meaningful for non-identity E)."""
        return self.detectable and abs(self.c_E) <= self.atol


@dataclass(frozen=True)
class CodeParams:
    """(((D_1, ..., D_n), K, D)) with an optional purity flag."""

    dims: Dims
    K: int
    D: int
    pure: bool = False

    def __post_init__(self):
        dims = as_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        if not 1 <= self.K <= dims.total:
            raise PreconditionError(f"K must lie in [1, {dims.total}], got {self.K}")
        if self.D < 1:
            raise PreconditionError(f"D must be at least 1, got {self.D}")
        if self.K == 1:
            object.__setattr__(self, "pure", True)


@dataclass(frozen=True)
class DistanceResult:
    """Smallest dimensional weight of an undetectable basis error.

    When every error up to ``limit`` is detectable, ``distance`` is
    ``limit + 1`` and ``witness`` is None: the true distance is at least that.
    """

    distance: int
    witness: WeylLabel | None
    limit: int

    @property
    def bounded(self) -> bool:
        return self.witness is None


@dataclass(frozen=True)
class SingletonVerdict:
    ok: bool
    witness: tuple[Subsystem, Subsystem, Subsystem] | None = None

    def __bool__(self):
        return self.ok


def _apply(E, code: CodeSpace) -> np.ndarray:
    """E applied to every basis vector; returns shape (K, total_dim)."""
    if isinstance(E, WeylLabel):
        return apply_weyl(E, code.dims, code.tensors()).reshape(code.K, -1)
    if isinstance(E, LocalOperator):
        if E.dims != code.dims:
            raise PreconditionError("operator and code live on different spaces")
        return E.apply_tensor(code.tensors()).reshape(code.K, -1)
    if isinstance(E, GenPermOperator):
        return E.apply_vector(code.matrix())
    m = np.asarray(E, dtype=complex)
    return code.matrix() @ m.T


def kl_matrix(code: CodeSpace, E) -> np.ndarray:
    """C_ij = <psi_i|E|psi_j>."""
    return code.matrix().conj() @ _apply(E, code).T


def _report(C: np.ndarray, label, atol: float) -> KLReport:
    K = C.shape[0]
    diag = np.diag(C)
    off = C - np.diag(diag)
    max_off = float(np.max(np.abs(off))) if K > 1 else 0.0
    spread = float(np.max(np.abs(diag[:, None] - diag[None, :])))
    detectable = max_off <= atol and spread <= atol
    return KLReport(label, complex(diag.mean()), detectable, max_off, spread, atol)


def kl_check(code: CodeSpace, E, atol: float | None = None, check_basis: bool = True) -> KLReport:
    """Evaluate <psi_i|E|psi_j> = c_E delta_ij on the code basis."""
    atol = tol(atol)
    if check_basis and not code.is_orthonormal(atol):
        raise PreconditionError("code basis is not orthonormal")
    return _report(kl_matrix(code, E), E, atol)


def errors_with_support(dims, sites: Sequence[int]):
    """Weyl labels whose support is exactly ``sites``, in lexicographic order."""
    dims = as_dims(dims)
    choices = []
    for i, D in enumerate(dims):
        if i in sites:
            choices.append([(a, b) for a in range(D) for b in range(D) if (a, b) != (0, 0)])
        else:
            choices.append([(0, 0)])
    for pairs in itertools.product(*choices):
        yield WeylLabel(tuple(pairs))


def _fails(code: CodeSpace, label: WeylLabel, atol: float, need_pure: bool) -> bool:
    report = _report(kl_matrix(code, label), label, atol)
    if not report.detectable:
        return True
    return need_pure and abs(report.c_E) > atol


def _supports_by_dim(dims: Dims, limit: int) -> list[tuple[int, list[Subsystem]]]:
    groups: dict[int, list[Subsystem]] = {}
    for S in all_subsystems(dims):
        if S.dim <= limit:
            groups.setdefault(S.dim, []).append(S)
    return sorted(groups.items())


def _first_failure(code, supports, atol, need_pure, jobs) -> WeylLabel | None:
    def scan(S: Subsystem):
        for label in errors_with_support(code.dims, S.sites):
            if _fails(code, label, atol, need_pure):
                return label
        return None

    if jobs > 1 and len(supports) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(scan, supports))
    else:
        found = [scan(S) for S in supports]
    found = [f for f in found if f is not None]
    return min(found) if found else None


def dimensional_distance(
    code: CodeSpace,
    limit: int | None = None,
    atol: float | None = None,
    jobs: int = 1,
    pure: bool | None = None,
) -> DistanceResult:
    """Smallest dimwt of a non-identity basis error that the code fails to detect.

    Errors are scanned in order of nondecreasing dimensional weight, ties
    broken by label order.  One-dimensional codes are held to the purity
    convention (c_E must vanish), as is any code when ``pure=True``.
    """
    atol = tol(atol)
    limit = code.dims.total if limit is None else int(limit)
    if limit > code.dims.total:
        raise PreconditionError(f"limit {limit} exceeds the space dimension {code.dims.total}")
    need_pure = code.K == 1 if pure is None else pure
    for dim, supports in _supports_by_dim(code.dims, limit):
        witness = _first_failure(code, supports, atol, need_pure, jobs)
        if witness is not None:
            return DistanceResult(dim, witness, limit)
    return DistanceResult(limit + 1, None, limit)


def is_pure(code: CodeSpace, D: int, atol: float | None = None) -> bool:
    """Every non-identity basis error of dimwt < D has <psi_i|E|psi_j> = 0."""
    atol = tol(atol)
    for dim, supports in _supports_by_dim(code.dims, D - 1):
        for S in supports:
            for label in errors_with_support(code.dims, S.sites):
                if np.max(np.abs(kl_matrix(code, label))) > atol:
                    return False
    return True


def _admissible(dims: Dims, D: int) -> list[Subsystem]:
    # the empty set is always allowed, so D = 1 leaves the whole space as C
    return [S for S in all_subsystems(dims, include_empty=True) if not S.sites or S.dim < D]


def _partitions(dims: Dims, D: int):
    """All (A, B, C) with A, B disjoint, dim A < D, dim B < D and C the rest."""
    adm = _admissible(dims, D)
    everything = set(range(dims.n))
    for A in adm:
        for B in adm:
            if set(A.sites) & set(B.sites):
                continue
            rest = sorted(everything - set(A.sites) - set(B.sites))
            yield A, B, Subsystem(tuple(rest), dims.subsystem_dim(rest))


def singleton_check(params: CodeParams) -> SingletonVerdict:
    """Check dim C >= K for every split of the sites into A, B, C with dim A, dim B < D."""
    for A, B, C in _partitions(params.dims, params.D):
        if C.dim < params.K:
            return SingletonVerdict(False, (A, B, C))
    return SingletonVerdict(True)


def singleton_max_K(dims, D: int) -> int:
    """Largest K allowed by the Singleton bound for dimensional distance D."""
    if D < 1:
        raise PreconditionError("D must be at least 1")
    dims = as_dims(dims)
    return min(C.dim for _, _, C in _partitions(dims, D))
