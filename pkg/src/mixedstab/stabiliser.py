"""Abelian stabiliser groups, the trace formula and the stabilised subspace."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from ._config import settings, tol
from .cyclotomic import Cyclotomic
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    EmptyCodeError,
    InconsistentGroupError,
    NotAbelianError,
    PreconditionError,
)
from .hilbert import Dims, StateVector, as_dims
from .operators import GenPermOperator, LocalOperator, WeylLabel

__all__ = [
    "StabiliserGroup",
    "CodeSpace",
    "close_group",
    "code_dimension",
    "projector",
    "code_basis",
    "stabilises",
]


def _as_element(g, dims: Dims | None):
    if isinstance(g, GenPermOperator):
        return g
    if isinstance(g, WeylLabel):
        if dims is None:
            raise PreconditionError("dims are needed to interpret a Weyl label")
        return g.to_genperm(dims)
    if isinstance(g, LocalOperator):
        return g.to_dense()
    return np.asarray(g, dtype=complex)


def _dense_key(m: np.ndarray) -> bytes:
    r = np.round(m, 6) + (0.0 + 0.0j)
    return r.tobytes()


@dataclass(frozen=True, eq=False)
class StabiliserGroup:
    """A finite abelian group of unitaries given by generators and its full element list.

    ``words[i]`` is the exponent vector over the generators that first
    produced ``elements[i]`` in the breadth-first closure.
    """

    dims: Dims
    generators: tuple
    elements: tuple
    words: tuple[tuple[int, ...], ...]
    exact: bool

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def dense(self, element) -> np.ndarray:
        return element.to_dense() if isinstance(element, GenPermOperator) else element

    def traces(self) -> list:
        """Exact :class:`Cyclotomic` traces for gen-perm groups, complex floats otherwise."""
        if self.exact:
            return [m.trace() for m in self.elements]
        return [complex(np.trace(m)) for m in self.elements]

    def word_string(self, word: Sequence[int], names: Sequence[str] | None = None) -> str:
        names = names or [f"M{i}" for i in range(len(word))]
        parts = []
        for name, e in zip(names, word):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "".join(parts) or "1"


@dataclass(frozen=True, eq=False)
class CodeSpace:
    """An orthonormal basis of a code Q, with K = dim Q."""

    dims: Dims
    basis: tuple[StateVector, ...]
    claimed_distance: int | None = None

    def __post_init__(self):
        dims = as_dims(self.dims)
        basis = tuple(self.basis)
        if not basis:
            raise EmptyCodeError("a code needs at least one basis vector")
        for b in basis:
            if b.dims != dims:
                raise DimensionMismatchError("basis vector on the wrong space")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_states(cls, states: Iterable[StateVector], claimed_distance=None, check: bool = True) -> CodeSpace:
        states = tuple(states)
        if not states:
            raise EmptyCodeError("a code needs at least one basis vector")
        code = cls(states[0].dims, states, claimed_distance)
        if check and not code.is_orthonormal():
            raise PreconditionError("code basis is not orthonormal")
        return code

    @property
    def K(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        """Basis vectors as rows, shape (K, total_dim)."""
        return np.stack([b.amplitudes for b in self.basis])

    def tensors(self) -> np.ndarray:
        return self.matrix().reshape((self.K,) + self.dims.dims)

    def gram(self) -> np.ndarray:
        B = self.matrix()
        return B.conj() @ B.T

    def is_orthonormal(self, atol: float | None = None) -> bool:
        return bool(np.allclose(self.gram(), np.eye(self.K), rtol=0, atol=tol(atol)))

    def projector(self) -> np.ndarray:
        B = self.matrix()
        return B.T @ B.conj()

    def overlap(self, other: CodeSpace) -> float:
        """tr(P_self P_other) / max(K): equals 1 iff the spans agree when K matches."""
        if self.dims != other.dims:
            raise DimensionMismatchError("dimension mismatch")
        M = self.matrix().conj() @ other.matrix().T
        return float(np.sum(np.abs(M) ** 2).real / max(self.K, other.K))


def close_group(generators: Sequence, max_order: int | None = None, dims=None) -> StabiliserGroup:
    """Breadth-first closure of commuting unitaries.

    Generalised permutations are deduplicated exactly; dense matrices by
    their entries rounded to six decimals.
    """
    max_order = settings.max_order if max_order is None else max_order
    if dims is not None:
        dims = as_dims(dims)
    if not generators:
        if dims is None:
            raise PreconditionError("an empty generator list needs explicit dims")
        generators = [GenPermOperator.identity(dims)]
    gens = [_as_element(g, dims) for g in generators]
    exact = all(isinstance(g, GenPermOperator) for g in gens)
    if exact:
        dims = gens[0].dims
        for g in gens:
            if g.dims != dims:
                raise DimensionMismatchError("generators act on different spaces")
        ident = GenPermOperator.identity(dims)
        key = GenPermOperator.key
        mul = GenPermOperator.__matmul__
    else:
        gens = [g.to_dense() if isinstance(g, GenPermOperator) else g for g in gens]
        N = gens[0].shape[0]
        if dims is None:
            raise PreconditionError("dense generators need explicit dims")
        if any(g.shape != (N, N) for g in gens) or N != dims.total:
            raise DimensionMismatchError("generators act on different spaces")
        atol = settings.atol
        for i, g in enumerate(gens):
            if not np.allclose(g.conj().T @ g, np.eye(N), rtol=0, atol=1e3 * atol):
                raise PreconditionError(f"generator {i} is not unitary")
        ident = np.eye(N, dtype=complex)
        key = _dense_key
        mul = np.matmul

    def commute(x, y) -> bool:
        if exact:
            return x.commutes_with(y)
        return bool(np.allclose(x @ y, y @ x, rtol=0, atol=1e3 * settings.atol))

    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commute(gens[i], gens[j]):
                raise NotAbelianError(f"generators {i} and {j} do not commute", witness=(i, j))

    elements = [ident]
    words = [(0,) * len(gens)]
    index = {key(ident): 0}
    queue = deque([0])
    while queue:
        cur = queue.popleft()
        for gi, g in enumerate(gens):
            new = mul(g, elements[cur])
            k = key(new)
            if k in index:
                continue
            for gj, h in enumerate(gens):
                if not commute(new, h):
                    raise NotAbelianError(
                        f"element {words[cur]} * generator {gi} does not commute with generator {gj}",
                        witness=(gi, gj),
                    )
            if len(elements) >= max_order:
                raise BudgetExceededError(f"group closure exceeded max_order={max_order}")
            index[k] = len(elements)
            elements.append(new)
            w = list(words[cur])
            w[gi] += 1
            words.append(tuple(w))
            queue.append(len(elements) - 1)
    return StabiliserGroup(dims, tuple(generators), tuple(elements), tuple(words), exact)


def _trace_sum(group: StabiliserGroup):
    traces = group.traces()
    if group.exact:
        total = Cyclotomic.from_int(0)
        for t in traces:
            total = total + t
        return total
    return sum(traces)


def code_dimension(group: StabiliserGroup) -> int:
    """(1/|S|) sum_M tr(M), checked to be a nonnegative integer."""
    total = _trace_sum(group)
    if group.exact:
        if not total.is_rational():
            raise InconsistentGroupError(f"trace sum {total!r} is not rational")
        value = total.as_fraction() / group.order
        if value.denominator != 1 or value < 0:
            raise InconsistentGroupError(f"trace formula gives {value}, not a nonnegative integer")
        return int(value)
    value = total / group.order
    k = round(value.real)
    if abs(value - k) > settings.atol * group.order or k < 0:
        raise InconsistentGroupError(f"trace formula gives {value}, not a nonnegative integer")
    return int(k)


def projector(group: StabiliserGroup) -> np.ndarray:
    """P = (1/|S|) sum_M M as a dense matrix."""
    N = group.dims.total
    P = np.zeros((N, N), dtype=complex)
    cols = np.arange(N)
    for m in group.elements:
        if isinstance(m, GenPermOperator):
            P[m.perm, cols] += m.phase_values()
        else:
            P += m
    return P / group.order


def code_basis(group: StabiliserGroup) -> CodeSpace:
    """Orthonormal basis of the common +1 eigenspace."""
    K = code_dimension(group)
    if K == 0:
        raise EmptyCodeError("the stabilised subspace is zero dimensional")
    P = projector(group)
    w, v = np.linalg.eigh((P + P.conj().T) / 2)
    vecs = v[:, w > 0.5]
    if vecs.shape[1] != K:
        raise InconsistentGroupError(f"projector rank {vecs.shape[1]} differs from trace formula {K}")
    q, _ = np.linalg.qr(vecs)
    basis = [StateVector(group.dims, _fix_phase(q[:, i])) for i in range(K)]
    return CodeSpace(group.dims, tuple(basis))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-6))
    return v * (abs(v[k]) / v[k])


def stabilises(group, psi: StateVector, atol: float | None = None) -> bool:
    """True iff every generator fixes ``psi`` (which then holds for the whole group)."""
    atol = tol(atol)
    gens = group.generators if isinstance(group, StabiliserGroup) else group
    for g in gens:
        g = _as_element(g, psi.dims)
        if isinstance(g, GenPermOperator):
            out = g.apply_vector(psi.amplitudes)
        else:
            out = g @ psi.amplitudes
        if np.linalg.norm(out - psi.amplitudes) > atol:
            return False
    return True
