"""Weyl operators, local operators and generalised permutation operators."""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from ._config import tol
from .cyclotomic import ONE, Cyclotomic, PhaseExp
from .errors import DimensionMismatchError, PreconditionError
from .hilbert import Dims, StateVector, _as_digits, as_dims, flat_index, unflatten

__all__ = [
    "weyl",
    "WeylLabel",
    "LocalOperator",
    "GenPermOperator",
    "nice_error_basis",
    "dimwt",
    "genperm_compose",
    "genperm_trace",
    "genperm_from_spec",
    "apply",
    "apply_weyl",
]


def weyl(site_dim: int, a: int, b: int) -> np.ndarray:
    """Dense matrix of X(a) Z(b) on C^D, with X(a)|j> = |j+a>, Z(b)|j> = eta^{bj}|j>."""
    D = int(site_dim)
    if D < 2:
        raise PreconditionError("site dimension must be >= 2")
    a, b = a % D, b % D
    eta = np.exp(2j * np.pi / D)
    m = np.zeros((D, D), dtype=complex)
    j = np.arange(D)
    m[(j + a) % D, j] = eta ** ((b * j) % D)
    return m


@dataclass(frozen=True, order=True)
class WeylLabel:
    """phase * X(a_1)Z(b_1) x ... x X(a_n)Z(b_n); ordering is lexicographic in (a_i, b_i) pairs."""

    pairs: tuple[tuple[int, int], ...]
    phase: PhaseExp = field(default=ONE, compare=False)

    @classmethod
    def of(cls, dims, pairs: Sequence[Sequence[int]], phase: PhaseExp = ONE) -> WeylLabel:
        dims = as_dims(dims)
        if len(pairs) != dims.n:
            raise DimensionMismatchError(f"need {dims.n} (a, b) pairs, got {len(pairs)}")
        return cls(tuple((a % D, b % D) for (a, b), D in zip(pairs, dims)), phase)

    @classmethod
    def single(cls, dims, site: int, a: int, b: int = 0) -> WeylLabel:
        dims = as_dims(dims)
        pairs = [(0, 0)] * dims.n
        pairs[site] = (a, b)
        return cls.of(dims, pairs)

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.pairs)

    @property
    def b(self) -> tuple[int, ...]:
        return tuple(p[1] for p in self.pairs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.pairs) if p != (0, 0))

    def is_identity(self) -> bool:
        return not self.support and self.phase == ONE

    def dimwt(self, dims) -> int:
        dims = as_dims(dims)
        return math.prod(dims[i] for i in self.support)

    def to_local(self, dims) -> LocalOperator:
        dims = as_dims(dims)
        factors = [weyl(D, a, b) for (a, b), D in zip(self.pairs, dims)]
        factors[0] = factors[0] * self.phase.value
        return LocalOperator(dims, tuple(factors))

    def to_genperm(self, dims) -> GenPermOperator:
        dims = as_dims(dims)

        def action(digits):
            phase = self.phase
            out = []
            for (a, b), D, j in zip(self.pairs, dims, digits):
                phase = phase * PhaseExp(b * j, D)
                out.append((j + a) % D)
            return phase, out

        return GenPermOperator.from_map(dims, action)

    def __str__(self):
        def site(a, b):
            if (a, b) == (0, 0):
                return "1"
            parts = ([f"X({a})"] if a else []) + ([f"Z({b})"] if b else [])
            return "".join(parts)

        body = " x ".join(site(a, b) for a, b in self.pairs)
        return body if self.phase == ONE else f"{self.phase!r}*{body}"


def apply_weyl(label: WeylLabel, dims, states: np.ndarray) -> np.ndarray:
    """Apply a Weyl label to a stack of state tensors of shape (K, D_1, ..., D_n)."""
    dims = as_dims(dims)
    out = states
    for site in label.support:
        a, b = label.pairs[site]
        D = dims[site]
        axis = site + 1
        if b:
            shape = [1] * out.ndim
            shape[axis] = D
            eta = np.exp(2j * np.pi * ((b * np.arange(D)) % D) / D).reshape(shape)
            out = out * eta
        if a:
            out = np.roll(out, a, axis=axis)
    if label.phase != ONE:
        out = out * label.phase.value
    return out


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """Tensor product of one square matrix per site."""

    dims: Dims
    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = as_dims(self.dims)
        factors = tuple(np.array(f, dtype=complex) for f in self.factors)
        if len(factors) != dims.n:
            raise DimensionMismatchError(f"need {dims.n} factors, got {len(factors)}")
        for f, D in zip(factors, dims):
            if f.shape != (D, D):
                raise DimensionMismatchError(f"factor of shape {f.shape} on a site of dimension {D}")
            f.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "factors", factors)

    @classmethod
    def identity(cls, dims) -> LocalOperator:
        dims = as_dims(dims)
        return cls(dims, tuple(np.eye(D) for D in dims))

    @classmethod
    def on_sites(cls, dims, ops: Mapping[int, np.ndarray]) -> LocalOperator:
        dims = as_dims(dims)
        return cls(dims, tuple(np.asarray(ops.get(i, np.eye(D))) for i, D in enumerate(dims)))

    def support(self, atol: float | None = None) -> tuple[int, ...]:
        atol = tol(atol)
        out = []
        for i, f in enumerate(self.factors):
            scalar = f[0, 0]
            trivial = abs(scalar) > atol and np.allclose(
                f, scalar * np.eye(f.shape[0]), rtol=0, atol=atol
            )
            if not trivial:
                out.append(i)
        return tuple(out)

    def dimwt(self) -> int:
        return self.dims.subsystem_dim(self.support())

    def to_dense(self) -> np.ndarray:
        m = np.ones((1, 1), dtype=complex)
        for f in self.factors:
            m = np.kron(m, f)
        return m

    def adjoint(self) -> LocalOperator:
        return LocalOperator(self.dims, tuple(f.conj().T for f in self.factors))

    def __matmul__(self, other: LocalOperator) -> LocalOperator:
        if self.dims != other.dims:
            raise DimensionMismatchError("dimension mismatch")
        return LocalOperator(self.dims, tuple(f @ g for f, g in zip(self.factors, other.factors)))

    def apply_tensor(self, states: np.ndarray) -> np.ndarray:
        """Apply to a stack of tensors of shape (K, D_1, ..., D_n)."""
        out = states
        for site in self.support(atol=0.0):
            out = np.moveaxis(np.tensordot(self.factors[site], out, axes=([1], [site + 1])), 0, site + 1)
        trivial = [i for i in range(self.dims.n) if i not in self.support(atol=0.0)]
        scale = math.prod(complex(self.factors[i][0, 0]) for i in trivial)
        return out if scale == 1 else out * scale

    def partial_trace(self, traced: Iterable[int]) -> np.ndarray:
        """tr_T(E) as a dense matrix on the remaining sites."""
        traced = set(traced)
        m = np.ones((1, 1), dtype=complex)
        scalar = 1.0 + 0j
        for i, f in enumerate(self.factors):
            if i in traced:
                scalar *= np.trace(f)
            else:
                m = np.kron(m, f)
        return scalar * m


def nice_error_basis(dims) -> Iterator[tuple[WeylLabel, LocalOperator]]:
    """All products of site Weyl operators, identity first.

    Sites vary left to right as in an odometer (rightmost fastest) with
    (a, b) lexicographic on each site.
    """
    dims = as_dims(dims)
    per_site = [[(a, b) for a in range(D) for b in range(D)] for D in dims]
    for pairs in itertools.product(*per_site):
        label = WeylLabel(tuple(pairs))
        yield label, label.to_local(dims)


def dimwt(E) -> int:
    """Dimensional weight: product of the local dimensions over the support."""
    if isinstance(E, LocalOperator):
        return E.dimwt()
    raise TypeError(f"dimwt needs a LocalOperator, got {type(E).__name__}")


class GenPermOperator:
    """Unitary acting as M|k> = exp(2 pi i phase_k[k] / L) |perm[k]> on flat indices.

    The phases share one modulus ``L``, kept minimal so that the pair
    (perm, phase numerators) is a canonical, exact key for the operator.
    """

    __slots__ = ("dims", "perm", "phase_k", "L", "_key")

    def __init__(self, dims, perm, phase_k=None, L: int = 1):
        dims = as_dims(dims)
        perm = np.asarray(perm, dtype=np.int64).reshape(-1)
        if perm.shape != (dims.total,):
            raise DimensionMismatchError(f"permutation of length {perm.size} on dimension {dims.total}")
        if not np.array_equal(np.sort(perm), np.arange(dims.total)):
            raise PreconditionError("the index map is not a bijection")
        if L <= 0:
            raise PreconditionError("phase modulus must be positive")
        if phase_k is None:
            phase_k = np.zeros(dims.total, dtype=np.int64)
        phase_k = np.asarray(phase_k, dtype=np.int64).reshape(-1) % L
        g = math.gcd(L, *(int(x) for x in np.unique(phase_k)))
        phase_k = phase_k // g
        L //= g
        perm.flags.writeable = False
        phase_k.flags.writeable = False
        self.dims = dims
        self.perm = perm
        self.phase_k = phase_k
        self.L = L
        self._key = None

    # construction -----------------------------------------------------

    @classmethod
    def identity(cls, dims) -> GenPermOperator:
        dims = as_dims(dims)
        return cls(dims, np.arange(dims.total))

    @classmethod
    def from_phases(cls, dims, perm, phases: Sequence[PhaseExp]) -> GenPermOperator:
        L = math.lcm(1, *(p.L for p in phases))
        ks = [p.k * (L // p.L) for p in phases]
        return cls(dims, perm, ks, L)

    @classmethod
    def from_map(cls, dims, action: Callable) -> GenPermOperator:
        """Build from ``action(digits) -> (phase, new_digits)`` evaluated on every basis ket."""
        dims = as_dims(dims)
        perm = np.empty(dims.total, dtype=np.int64)
        phases = []
        for k in range(dims.total):
            phase, digits = action(unflatten(k, dims))
            if not isinstance(phase, PhaseExp):
                phase = PhaseExp(*phase)
            perm[k] = flat_index(tuple(digits), dims)
            phases.append(phase)
        return cls.from_phases(dims, perm, phases)

    @classmethod
    def from_cycles(cls, dims, cycles: Iterable[Sequence], phases=None) -> GenPermOperator:
        """Cycles of kets; ``phases[c][i]`` multiplies the step from entry i to entry i+1.

        Kets not mentioned are left fixed with phase 1.
        """
        dims = as_dims(dims)
        perm = np.arange(dims.total)
        ph = [ONE] * dims.total
        seen = set()
        for c, cycle in enumerate(cycles):
            idx = [flat_index(_as_digits(ket, dims), dims) for ket in cycle]
            for i, k in enumerate(idx):
                if k in seen:
                    raise PreconditionError(f"ket {unflatten(k, dims)} appears twice in the cycle spec")
                seen.add(k)
                perm[k] = idx[(i + 1) % len(idx)]
                if phases is not None:
                    p = phases[c][i]
                    ph[k] = p if isinstance(p, PhaseExp) else PhaseExp(*p)
        return cls.from_phases(dims, perm, ph)

    @classmethod
    def from_diagonal(cls, dims, site_phases: Sequence[Sequence[PhaseExp] | None]) -> GenPermOperator:
        """Tensor product of diagonal phase matrices, one list per site (None = identity)."""
        dims = as_dims(dims)

        def action(digits):
            phase = ONE
            for j, diag in zip(digits, site_phases):
                if diag is not None:
                    p = diag[j]
                    phase = phase * (p if isinstance(p, PhaseExp) else PhaseExp(*p))
            return phase, digits

        return cls.from_map(dims, action)

    @classmethod
    def from_matrix_convention(cls, dims, sigma: Sequence[int], etas: Sequence[PhaseExp]) -> GenPermOperator:
        """Operator with matrix entries m_ij = delta_{j, sigma(i)} eta_i.

        Column sigma(i) has its single entry in row i, i.e. M|sigma(i)> = eta_i|i>.
        """
        dims = as_dims(dims)
        sigma = np.asarray(sigma, dtype=np.int64)
        perm = np.empty_like(sigma)
        phases = [ONE] * dims.total
        for i, s in enumerate(sigma):
            perm[s] = i
            phases[s] = etas[i]
        return cls.from_phases(dims, perm, phases)

    @classmethod
    def from_dense(cls, dims, matrix: np.ndarray, max_order: int = 64, atol: float | None = None) -> GenPermOperator:
        dims = as_dims(dims)
        m = np.asarray(matrix, dtype=complex)
        atol = tol(atol)
        perm = np.empty(dims.total, dtype=np.int64)
        phases = []
        for k in range(dims.total):
            col = m[:, k]
            nz = np.flatnonzero(np.abs(col) > atol)
            if len(nz) != 1:
                raise PreconditionError(f"column {k} is not a phase times a basis vector")
            perm[k] = nz[0]
            phases.append(PhaseExp.from_complex(col[nz[0]], max_order=max_order, atol=max(atol, 1e-9)))
        return cls.from_phases(dims, perm, phases)

    # algebra ------------------------------------------------------------

    def phase(self, k: int) -> PhaseExp:
        return PhaseExp(int(self.phase_k[k]), self.L)

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.perm.tobytes(), self.L, self.phase_k.tobytes())
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenPermOperator):
            return NotImplemented
        return self.dims == other.dims and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def _check(self, other: GenPermOperator):
        if self.dims != other.dims:
            raise DimensionMismatchError(f"dimension mismatch: {self.dims.dims} vs {other.dims.dims}")

    def __matmul__(self, other: GenPermOperator) -> GenPermOperator:
        """Composition: (A @ B)|k> = A(B|k>)."""
        if not isinstance(other, GenPermOperator):
            return NotImplemented
        self._check(other)
        L = math.lcm(self.L, other.L)
        kb = other.phase_k * (L // other.L)
        ka = self.phase_k * (L // self.L)
        return GenPermOperator(self.dims, self.perm[other.perm], kb + ka[other.perm], L)

    def adjoint(self) -> GenPermOperator:
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.perm.size)
        # M|k> = w_k |pi(k)>  =>  M^dag |pi(k)> = conj(w_k) |k>
        return GenPermOperator(self.dims, inv, (-self.phase_k)[inv], self.L)

    def scaled(self, phase: PhaseExp) -> GenPermOperator:
        L = math.lcm(self.L, phase.L)
        ks = self.phase_k * (L // self.L) + phase.k * (L // phase.L)
        return GenPermOperator(self.dims, self.perm, ks, L)

    def __neg__(self) -> GenPermOperator:
        return self.scaled(PhaseExp(1, 2))

    def __pow__(self, e: int) -> GenPermOperator:
        if e < 0:
            return self.adjoint() ** (-e)
        result = GenPermOperator.identity(self.dims)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.perm.size)) and not self.phase_k.any())

    def order(self, limit: int = 100_000) -> int:
        """Smallest m >= 1 with M^m = identity."""
        current = self
        for m in range(1, limit + 1):
            if current.is_identity():
                return m
            current = current @ self
        raise PreconditionError(f"operator order exceeds {limit}")

    def commutes_with(self, other: GenPermOperator) -> bool:
        return (self @ other) == (other @ self)

    def trace(self) -> Cyclotomic:
        """Exact trace: sum of the phases on fixed points of the permutation."""
        fixed = np.flatnonzero(self.perm == np.arange(self.perm.size))
        return Cyclotomic.from_exponents((int(x) for x in self.phase_k[fixed]), self.L)

    def phase_values(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.phase_k / self.L)

    def to_dense(self) -> np.ndarray:
        N = self.dims.total
        m = np.zeros((N, N), dtype=complex)
        m[self.perm, np.arange(N)] = self.phase_values()
        return m

    def apply_vector(self, amps: np.ndarray) -> np.ndarray:
        """Apply to flat amplitude arrays; the last axis indexes the basis."""
        out = np.zeros_like(amps, dtype=complex)
        out[..., self.perm] = amps * self.phase_values()
        return out

    def apply(self, psi: StateVector) -> StateVector:
        if psi.dims != self.dims:
            raise DimensionMismatchError(f"dimension mismatch: {self.dims.dims} vs {psi.dims.dims}")
        return StateVector(self.dims, self.apply_vector(psi.amplitudes))

    def cycles(self) -> list[list[int]]:
        """Cycle decomposition of the permutation, omitting fixed points with phase 1."""
        seen = np.zeros(self.perm.size, dtype=bool)
        out = []
        for start in range(self.perm.size):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            k = int(self.perm[start])
            while k != start:
                cyc.append(k)
                seen[k] = True
                k = int(self.perm[k])
            if len(cyc) > 1 or self.phase_k[start]:
                out.append(cyc)
        return out

    def __repr__(self):
        moved = int(np.count_nonzero(self.perm != np.arange(self.perm.size)))
        return f"GenPermOperator(dims={self.dims.dims}, moved={moved}, L={self.L})"


def genperm_compose(A: GenPermOperator, B: GenPermOperator) -> GenPermOperator:
    return A @ B


def genperm_trace(A: GenPermOperator) -> Cyclotomic:
    return A.trace()


def _parse_phase(p) -> PhaseExp:
    if p is None:
        return ONE
    if isinstance(p, PhaseExp):
        return p
    if isinstance(p, Mapping):
        L = int(p.get("L", 1))
        if L <= 0:
            raise PreconditionError("phase modulus must be positive")
        return PhaseExp(int(p.get("k", 0)), L)
    if isinstance(p, (int, float)) and not isinstance(p, bool):
        return PhaseExp.from_complex(complex(p))
    if isinstance(p, (list, tuple)) and len(p) == 2:
        return PhaseExp.from_complex(complex(p[0], p[1]))
    raise PreconditionError(f"cannot read phase {p!r}")


def genperm_from_spec(dims, spec: Mapping | None = None) -> GenPermOperator:
    """Build a generalised permutation from one of three spec forms.

    ``{"cycles": [[ket, ...], ...], "phases": [[phase, ...], ...]}``
        explicit ket cycles, phase i applying to the step out of entry i;
    ``{"diag": [[phase per value] or null, ...]}``
        a tensor product of diagonal phase matrices;
    ``{"site_local": [[a, b], ...]}``
        a product of Weyl operators X(a)Z(b).

    An optional ``"phase"`` entry multiplies the whole operator.  An empty
    spec is the identity.
    """
    dims = as_dims(dims)
    spec = dict(spec or {})
    forms = [f for f in ("cycles", "diag", "site_local") if f in spec]
    if len(forms) > 1:
        raise PreconditionError(f"a generator spec may use only one form, got {forms}")
    if not forms:
        op = GenPermOperator.identity(dims)
    elif forms[0] == "cycles":
        phases = spec.get("phases")
        if phases is not None:
            phases = [[_parse_phase(p) for p in row] for row in phases]
            if len(phases) != len(spec["cycles"]) or any(
                len(r) != len(c) for r, c in zip(phases, spec["cycles"])
            ):
                raise PreconditionError("phases must match the cycle shapes")
        op = GenPermOperator.from_cycles(dims, spec["cycles"], phases)
    elif forms[0] == "diag":
        diag = spec["diag"]
        if len(diag) != dims.n:
            raise PreconditionError(f"diag needs one entry per site ({dims.n})")
        parsed = []
        for row, D in zip(diag, dims):
            if row is None:
                parsed.append(None)
            else:
                if len(row) != D:
                    raise PreconditionError(f"diagonal of length {len(row)} on a site of dimension {D}")
                parsed.append([_parse_phase(p) for p in row])
        op = GenPermOperator.from_diagonal(dims, parsed)
    else:
        op = WeylLabel.of(dims, spec["site_local"]).to_genperm(dims)
    if "phase" in spec:
        op = op.scaled(_parse_phase(spec["phase"]))
    return op


def apply(op, psi: StateVector) -> StateVector:
    """Apply a generalised permutation, local operator, Weyl label or dense matrix to a state."""
    if isinstance(op, GenPermOperator):
        return op.apply(psi)
    if isinstance(op, LocalOperator):
        if op.dims != psi.dims:
            raise DimensionMismatchError("dimension mismatch")
        out = op.apply_tensor(psi.as_tensor()[None])[0]
        return StateVector(psi.dims, out.reshape(-1))
    if isinstance(op, WeylLabel):
        out = apply_weyl(op, psi.dims, psi.as_tensor()[None])[0]
        return StateVector(psi.dims, out.reshape(-1))
    m = np.asarray(op, dtype=complex)
    if m.shape != (psi.dims.total, psi.dims.total):
        raise DimensionMismatchError(f"matrix of shape {m.shape} on dimension {psi.dims.total}")
    return StateVector(psi.dims, m @ psi.amplitudes)
