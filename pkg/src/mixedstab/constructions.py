"""Purification of pure codes into AME states, and the library of worked examples.

Fixture amplitudes are stored exactly, as integer signs over a common
square-root normaliser, and only converted to floats when a state is built.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from ._config import tol
from .cyclotomic import Cyclotomic, PhaseExp
from .entanglement import is_ame
from .errors import InternalInconsistencyError, PreconditionError
from .hilbert import StateVector, as_dims
from .operators import GenPermOperator, WeylLabel
from .stabiliser import CodeSpace, StabiliserGroup, close_group

__all__ = [
    "ExactState",
    "Fixture",
    "purify",
    "purify_to_ame",
    "FIXTURES",
    "fixture",
    "phi_basis",
    "psi2333",
    "psi2333_minus",
    "m0",
    "m1",
    "m2",
    "m0_ext",
    "example_7_group",
    "trace_table",
    "extended_stabiliser_qutrit",
    "extended_stabiliser_ququint",
    "q312_3",
    "q312_5",
    "q312_3_generators",
    "q312_5_generators",
    "index_two_subgroups",
    "s_minus_group",
    "phi33_generators",
    "phi55_generators",
    "DIMS_2333",
]


@dataclass(frozen=True)
class ExactState:
    """sum_k sign_k |ket_k> / sqrt(norm_sq) with integer signs."""

    dims: tuple[int, ...]
    terms: tuple[tuple[str, int], ...]
    norm_sq: int

    def state(self) -> StateVector:
        scale = 1 / math.sqrt(self.norm_sq)
        return StateVector.from_kets(self.dims, {k: s * scale for k, s in self.terms})


def _exact(dims, kets: str, norm_sq: int | None = None) -> ExactState:
    """Parse a whitespace separated list of kets, each optionally prefixed by '-'."""
    terms = []
    for tok in kets.split():
        sign = -1 if tok.startswith("-") else 1
        terms.append((tok.lstrip("+-"), sign))
    return ExactState(tuple(dims), tuple(terms), len(terms) if norm_sq is None else norm_sq)


# ---------------------------------------------------------------------------
# purification


def purify(codewords: Sequence[StateVector], r: int, atol: float | None = None) -> StateVector:
    """(1/sqrt r) sum_{j<r} |j>|psi_j> on C^r x H, using the first ``r`` codewords.

    For r = 1 the factor C^1 is dropped and the first codeword is returned.
    """
    codewords = list(codewords)
    if not 1 <= r <= len(codewords):
        raise PreconditionError(f"r must lie in [1, {len(codewords)}], got {r}")
    words = codewords[:r]
    dims = words[0].dims
    if any(w.dims != dims for w in words):
        raise PreconditionError("codewords live on different spaces")
    B = np.stack([w.amplitudes for w in words])
    if not np.allclose(B.conj() @ B.T, np.eye(r), rtol=0, atol=tol(atol)):
        raise PreconditionError("codewords are not orthonormal")
    if r == 1:
        return words[0]
    amps = B.reshape(-1) / math.sqrt(r)
    return StateVector(as_dims((r,) + dims.dims), amps)


def purify_to_ame(codewords: Sequence[StateVector], r: int, jobs: int = 1) -> StateVector:
    """Purify after checking the code is pure with distance >= ceil(sqrt(r * dim H)).

    The result is certified with :func:`is_ame`; a failure there means the
    implementation contradicts the construction and is raised as an internal
    inconsistency.
    """
    from .codes import dimensional_distance, is_pure

    codewords = list(codewords)
    if not 2 <= r <= len(codewords):
        raise PreconditionError(f"r must lie in [2, {len(codewords)}], got {r}")
    code = CodeSpace.from_states(codewords)
    N = r * code.dims.total
    required = math.isqrt(N)
    if required * required < N:
        required += 1
    result = dimensional_distance(code, limit=required - 1, jobs=jobs)
    if result.witness is not None:
        raise PreconditionError(
            f"code distance {result.distance} is below the required {required};"
            f" witness {result.witness}"
        )
    if not is_pure(code, required):
        raise PreconditionError(f"code is not pure up to dimensional weight {required - 1}")
    phi = purify(codewords, r)
    report = is_ame(phi)
    if not report.verdict:
        raise InternalInconsistencyError(
            f"purified state failed the AME check (max deviation {report.max_deviation:.3e})"
        )
    return phi


# ---------------------------------------------------------------------------
# Example: C^2 x C^3 x C^3 x C^3 state psi and the group <M0, M1, M2>

DIMS_2333 = (2, 3, 3, 3)

# (sign, qubit, qutrit ket) for phi_1 ... phi_24
_PHI_TABLE = [
    (1, 0, "022"), (1, 0, "210"), (1, 0, "102"), (1, 0, "011"), (1, 0, "120"), (1, 0, "201"),
    (-1, 1, "021"), (1, 1, "220"), (-1, 1, "202"), (1, 1, "012"), (-1, 1, "110"), (1, 1, "101"),
    (1, 1, "022"), (1, 1, "210"), (1, 1, "102"), (1, 1, "011"), (1, 1, "120"), (1, 1, "201"),
    (1, 0, "021"), (-1, 0, "220"), (1, 0, "202"), (-1, 0, "012"), (1, 0, "110"), (-1, 0, "101"),
]


def phi_basis() -> list[StateVector]:
    """The 24 orthonormal kets phi_1 ... phi_24 (list index j-1)."""
    return [
        StateVector.from_kets(DIMS_2333, {f"{q}{t}": s}) for s, q, t in _PHI_TABLE
    ]


# (1/sqrt 12) sum_{j=1}^{12} phi_j, the state fixed by <M0, M1, M2>
PSI_2333 = ExactState(DIMS_2333, tuple((f"{q}{t}", s) for s, q, t in _PHI_TABLE[:12]), 12)

# The usual ket-by-ket expansion carries the opposite
# sign on the qubit-|1> half; it equals (Z x 1 x 1 x 1) psi and is negated by M2.
PSI_2333_ALT = _exact(
    DIMS_2333,
    "0022 0201 0120 0011 0102 0210 -1101 1110 -1012 1202 -1220 1021",
)


def psi2333() -> StateVector:
    return PSI_2333.state()


def psi2333_printed() -> StateVector:
    return PSI_2333_ALT.state()


def psi2333_minus() -> StateVector:
    """(1/sqrt 12) sum_{j=13}^{24} phi_j."""
    terms = tuple((f"{q}{t}", s) for s, q, t in _PHI_TABLE[12:])
    return ExactState(DIMS_2333, terms, 12).state()


def m0() -> GenPermOperator:
    """1 x diag(-1, i, i)^{x3}."""
    d = [PhaseExp(1, 2), PhaseExp(1, 4), PhaseExp(1, 4)]
    return GenPermOperator.from_diagonal(DIMS_2333, [None, d, d, d])


# value/site token map of M1 on the three qutrits (sites 1, 2, 3 here):
# (1_3 -> 1_2 -> 1_4 -> 2_3 -> 2_2 -> 2_4 ->)(0_3 -> 0_2 -> 0_4 ->) in 1-based site labels
_M1_TOKEN_CYCLES = [
    [(1, 3), (1, 2), (1, 4), (2, 3), (2, 2), (2, 4)],
    [(0, 3), (0, 2), (0, 4)],
]


def _token_map(cycles) -> dict[tuple[int, int], tuple[int, int]]:
    out = {}
    for cyc in cycles:
        for i, tok in enumerate(cyc):
            out[tok] = cyc[(i + 1) % len(cyc)]
    return out


def m1() -> GenPermOperator:
    """Z on the qubit times the token permutation of the qutrit values."""
    tokens = _token_map(_M1_TOKEN_CYCLES)

    def action(digits):
        q = digits[0]
        out = [q, None, None, None]
        for site in (1, 2, 3):
            value, target = tokens[(digits[site], site + 1)]
            out[target - 1] = value
        return PhaseExp(q, 2), out

    return GenPermOperator.from_map(DIMS_2333, action)


# qutrit-ket cycles of M2 as signed kets s_i|t_i>, mapped s_i|t_i> -> s_{i+1}|t_{i+1}>
_M2_CYCLES = [
    [("022", 1), ("021", 1), ("011", -1), ("012", 1)],
    [("102", 1), ("202", 1), ("201", -1), ("101", 1)],
    [("120", 1), ("110", 1), ("210", -1), ("220", 1)],
]


def m2() -> GenPermOperator:
    """ZX on the qubit combined with three signed 4-cycles of qutrit kets; identity elsewhere."""
    step = {}
    for cyc in _M2_CYCLES:
        for i, (ket, _) in enumerate(cyc):
            nxt, sign = cyc[(i + 1) % len(cyc)]
            step[ket] = (nxt, sign * cyc[i][1])

    def action(digits):
        q, t = digits[0], "".join(map(str, digits[1:]))
        if t not in step:
            return PhaseExp(), digits
        nxt, sign = step[t]
        # ZX|0> = -|1>, ZX|1> = |0>
        phase = PhaseExp(0 if sign > 0 else 1, 2) * PhaseExp(1 - q, 2)
        return phase, (1 - q,) + tuple(int(c) for c in nxt)

    return GenPermOperator.from_map(DIMS_2333, action)


def example_7_group(max_order: int | None = None) -> StabiliserGroup:
    return close_group([m0(), m1(), m2()], max_order=max_order)


def trace_table() -> list[tuple[tuple[int, int, int], str, Cyclotomic]]:
    """(exponents (a, b, c), word, exact trace) for M0^a M1^b M2^c, 0<=a<4, 0<=b<6, 0<=c<4."""
    g0, g1, g2 = m0(), m1(), m2()
    p0 = [g0**a for a in range(4)]
    p1 = [g1**b for b in range(6)]
    p2 = [g2**c for c in range(4)]
    rows = []
    for a, b, c in itertools.product(range(4), range(6), range(4)):
        word = _word(("M0", "M1", "M2"), (a, b, c))
        rows.append(((a, b, c), word, (p0[a] @ p1[b] @ p2[c]).trace()))
    return rows


def _word(names, exps) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "".join(parts) or "1"


def index_two_subgroups() -> dict[str, StabiliserGroup]:
    g0, g1, g2 = m0(), m1(), m2()
    return {
        "s0": close_group([g0 @ g0, g1, g2]),
        "s1": close_group([g0, g1 @ g1, g2]),
        "s2": close_group([g0, g1, g2 @ g2]),
    }


def s_minus_group() -> StabiliserGroup:
    """<M0, -M1, M2>."""
    return close_group([m0(), -m1(), m2()])


# ---------------------------------------------------------------------------
# [[3,1,2]]_3 and [[3,1,2]]_5 codes and their purifications

_Q312_3_WORDS = ["000 111 222", "102 210 021", "201 120 012"]
_Q312_5_WORDS = [
    "000 113 221 334 442",
    "023 131 244 302 410",
    "032 140 203 311 424",
    "041 104 212 320 433",
    "014 122 230 343 401",
]


def q312_3_generators() -> list[GenPermOperator]:
    dims = (3, 3, 3)
    return [
        WeylLabel.of(dims, [(1, 0)] * 3).to_genperm(dims),
        WeylLabel.of(dims, [(0, 1)] * 3).to_genperm(dims),
    ]


def q312_5_generators() -> list[GenPermOperator]:
    dims = (5, 5, 5)
    return [
        WeylLabel.of(dims, [(1, 0), (1, 0), (3, 0)]).to_genperm(dims),
        WeylLabel.of(dims, [(0, 1)] * 3).to_genperm(dims),
    ]


def q312_3() -> CodeSpace:
    words = [_exact((3, 3, 3), w).state() for w in _Q312_3_WORDS]
    return CodeSpace.from_states(words, claimed_distance=9)


def q312_5() -> CodeSpace:
    words = [_exact((5, 5, 5), w).state() for w in _Q312_5_WORDS]
    return CodeSpace.from_states(words, claimed_distance=25)


def _purified_exact(words: list[str], q: int, r: int) -> ExactState:
    terms = []
    for j, w in enumerate(words[:r]):
        for ket in w.split():
            terms.append((f"{j}{ket}", 1))
    return ExactState((r, q, q, q), tuple(terms), len(terms))


PHI_23 = _exact((2, 3, 3, 3), "0000 0111 0222 1102 1210 1021")
PHI_33 = _exact((3, 3, 3, 3), "0000 0111 0222 1102 1210 1021 2201 2120 2012")
PHI_25 = _exact((2, 5, 5, 5), "0000 0113 0221 0334 0442 1023 1131 1244 1302 1410")
PHI_35 = _exact(
    (3, 5, 5, 5),
    "0000 0113 0221 0334 0442 1023 1131 1244 1302 1410 2032 2140 2203 2311 2424",
)
PHI_45 = _exact(
    (4, 5, 5, 5),
    "0000 0113 0221 0334 0442 1023 1131 1244 1302 1410 2032 2140 2203 2311 2424"
    " 3041 3104 3212 3320 3433",
)
PHI_55 = _exact(
    (5, 5, 5, 5),
    "0000 0113 0221 0334 0442 1023 1131 1244 1302 1410 2032 2140 2203 2311 2424"
    " 3041 3104 3212 3320 3433 4014 4122 4230 4343 4401",
)


def phi33_generators() -> list[GenPermOperator]:
    """Three Pauli stabilisers of phi_33."""
    dims = (3, 3, 3, 3)
    return [
        WeylLabel.of(dims, [(0, 0), (1, 0), (1, 0), (1, 0)]).to_genperm(dims),
        WeylLabel.of(dims, [(0, 0), (0, 1), (0, 1), (0, 1)]).to_genperm(dims),
        WeylLabel.of(dims, [(1, 0), (2, 0), (1, 0), (0, 0)]).to_genperm(dims),
    ]


def phi55_generators() -> list[GenPermOperator]:
    """Three Pauli operators listed as stabilisers of phi_55."""
    dims = (5, 5, 5, 5)
    return [
        WeylLabel.of(dims, [(0, 0), (1, 0), (1, 0), (3, 0)]).to_genperm(dims),
        WeylLabel.of(dims, [(0, 0), (0, 1), (0, 1), (0, 1)]).to_genperm(dims),
        WeylLabel.of(dims, [(1, 0), (1, 0), (3, 0), (1, 0)]).to_genperm(dims),
    ]


def m0_ext() -> GenPermOperator:
    """X on the qubit, with a 6-cycle on the listed qutrit kets; X x 1 elsewhere."""
    return _cycle_extension(2, 3, ["000", "102", "111", "210", "222", "021"])


def _cycle_extension(r: int, q: int, cycle: list[str]) -> GenPermOperator:
    dims = (r, q, q, q)
    nxt = {cycle[i]: cycle[(i + 1) % len(cycle)] for i in range(len(cycle))}

    def action(digits):
        t = "".join(map(str, digits[1:]))
        tail = nxt.get(t, t)
        return PhaseExp(), ((digits[0] + 1) % r,) + tuple(int(c) for c in tail)

    return GenPermOperator.from_map(dims, action)


def _lift(op: GenPermOperator, r: int) -> GenPermOperator:
    """1_r x op."""
    dims = (r,) + op.dims.dims
    n = op.dims.total
    perm = np.concatenate([op.perm + j * n for j in range(r)])
    ks = np.tile(op.phase_k, r)
    return GenPermOperator(dims, perm, ks, op.L)


def extended_stabiliser_qutrit() -> StabiliserGroup:
    """<M0_ext, 1 x X(1)^{x3}, 1 x Z(1)^{x3}> on C^2 x (C^3)^{x3}."""
    return close_group([m0_ext()] + [_lift(g, 2) for g in q312_3_generators()])


def extended_stabiliser_ququint() -> StabiliserGroup:
    """The order-250 analogue on C^2 x (C^5)^{x3}."""
    ext = _cycle_extension(
        2, 5, ["000", "023", "113", "131", "221", "244", "334", "302", "442", "410"]
    )
    return close_group([ext] + [_lift(g, 2) for g in q312_5_generators()])


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str  # "state", "code", "operator", "group"
    build: Callable[[], Any]
    provenance: str
    dims: tuple[int, ...]

    def payload(self):
        return self.build()


def _index_two(name):
    return lambda: index_two_subgroups()[name]


FIXTURES: dict[str, Fixture] = {
    f.name: f
    for f in [
        Fixture("phi23", "state", PHI_23.state, "[[3,1,2]]_3 purified, r=2", (2, 3, 3, 3)),
        Fixture("phi33", "state", PHI_33.state, "[[3,1,2]]_3 purified, r=3", (3, 3, 3, 3)),
        Fixture("phi25", "state", PHI_25.state, "[[3,1,2]]_5 purified, r=2", (2, 5, 5, 5)),
        Fixture("phi35", "state", PHI_35.state, "[[3,1,2]]_5 purified, r=3", (3, 5, 5, 5)),
        Fixture("phi45", "state", PHI_45.state, "[[3,1,2]]_5 purified, r=4", (4, 5, 5, 5)),
        Fixture("phi55", "state", PHI_55.state, "[[3,1,2]]_5 purified, r=5", (5, 5, 5, 5)),
        Fixture("psi2333", "state", psi2333, "AME state on C^2 x C^3 x C^3 x C^3", DIMS_2333),
        Fixture("psi2333_printed", "state", psi2333_printed, "ket expansion of psi, equal to (Z x 1 x 1 x 1) psi", DIMS_2333),
        Fixture("psi2333_minus", "state", psi2333_minus, "state fixed by <M0, -M1, M2>", DIMS_2333),
        Fixture("q312_3", "code", q312_3, "[[3,1,2]]_3 Pauli-stabilised code", (3, 3, 3)),
        Fixture("q312_5", "code", q312_5, "[[3,1,2]]_5 Pauli-stabilised code", (5, 5, 5)),
        Fixture("m0", "operator", m0, "1 x diag(-1,i,i)^{x3}", DIMS_2333),
        Fixture("m1", "operator", m1, "Z x token permutation", DIMS_2333),
        Fixture("m2", "operator", m2, "ZX x signed ket cycles", DIMS_2333),
        Fixture("m0_ext", "operator", m0_ext, "X x 6-cycle extension", (2, 3, 3, 3)),
        Fixture("s7", "group", example_7_group, "<M0, M1, M2>, order 96", DIMS_2333),
        Fixture("s0", "group", _index_two("s0"), "<M0^2, M1, M2>", DIMS_2333),
        Fixture("s1", "group", _index_two("s1"), "<M0, M1^2, M2>", DIMS_2333),
        Fixture("s2", "group", _index_two("s2"), "<M0, M1, M2^2>", DIMS_2333),
        Fixture("s_minus", "group", s_minus_group, "<M0, -M1, M2>", DIMS_2333),
        Fixture("sext54", "group", extended_stabiliser_qutrit, "extended qutrit stabiliser, order 54", (2, 3, 3, 3)),
        Fixture("sext250", "group", extended_stabiliser_ququint, "extended ququint stabiliser, order 250", (2, 5, 5, 5)),
        Fixture("phi33_stab", "group", lambda: close_group(phi33_generators()), "Pauli stabilisers of phi33", (3, 3, 3, 3)),
        Fixture("phi55_stab", "group", lambda: close_group(phi55_generators()), "listed Pauli generators for phi55", (5, 5, 5, 5)),
    ]
}
# alias for the spelling used in some interface listings
FIXTURES["q313_3"] = Fixture("q313_3", "code", q312_3, "alias of q312_3", (3, 3, 3))


def fixture(name: str):
    """Build the payload of a named fixture."""
    try:
        return FIXTURES[name].payload()
    except KeyError:
        raise PreconditionError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
