import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixedstab import (
    CodeParams,
    CodeSpace,
    StateVector,
    WeylLabel,
    dimensional_distance,
    fixture,
    is_pure,
    kl_check,
    nice_error_basis,
    override,
    singleton_check,
    singleton_max_K,
)
from mixedstab.codes import kl_matrix
from mixedstab.constructions import DIMS_2333, index_two_subgroups
from mixedstab.errors import PreconditionError
from mixedstab.stabiliser import code_basis

from conftest import random_state


def brute_distance(code, pure):
    """Oracle: dense nice error basis, full scan, no early exit."""
    B = code.matrix()
    best = None
    for label, E in nice_error_basis(code.dims):
        if label.is_identity():
            continue
        C = B.conj() @ E.to_dense() @ B.T
        c = C[0, 0]
        ok = np.allclose(C, c * np.eye(code.K), atol=1e-9) and (not pure or abs(c) < 1e-9)
        if not ok:
            w = E.dimwt()
            best = w if best is None else min(best, w)
    return best


def brute_max_K(dims, D):
    """Oracle: assign every site to A, B or C."""
    best = None
    for assign in itertools.product("ABC", repeat=len(dims)):
        dim = {s: math.prod(d for d, a in zip(dims, assign) if a == s) for s in "ABC"}
        if all(dim[s] < D or s not in assign for s in "AB"):
            best = dim["C"] if best is None else min(best, dim["C"])
    return best


def span(*states):
    return CodeSpace.from_states(states)


def test_kl_examples():
    psi = span(fixture("psi2333"))
    Z = WeylLabel.single(DIMS_2333, 0, 0, 1)
    rep = kl_check(psi, Z)
    assert rep.detectable and abs(rep.c_E) < 1e-9
    ident = WeylLabel.of(DIMS_2333, [(0, 0)] * 4)
    rep = kl_check(fixture("q312_3"), ident)
    assert rep.detectable and rep.c_E == pytest.approx(1)
    s0 = span(fixture("psi2333"), StateVector.basis(DIMS_2333, "0000"))
    assert not kl_check(s0, Z).detectable


def test_kl_accepts_operator_forms():
    code = fixture("q312_3")
    label = WeylLabel.of(code.dims, [(1, 0), (1, 0), (0, 0)])
    dense = label.to_local(code.dims).to_dense()
    expected = kl_matrix(code, label)
    for E in (label.to_local(code.dims), label.to_genperm(code.dims), dense):
        assert np.allclose(kl_matrix(code, E), expected)


def test_kl_rejects_non_orthonormal():
    a = StateVector.basis((2,), "0")
    code = CodeSpace((2,), (a, a))
    with pytest.raises(PreconditionError):
        kl_check(code, WeylLabel.of((2,), [(0, 1)]))


def test_distance_q312_3():
    res = dimensional_distance(fixture("q312_3"))
    assert res.distance == 9
    assert res.witness.dimwt((3, 3, 3)) == 9
    assert str(res.witness) == "1 x Z(1) x Z(2)"
    assert brute_distance(fixture("q312_3"), pure=False) == 9


def test_distance_psi_span():
    code = span(fixture("psi2333"))
    res = dimensional_distance(code, limit=6)
    assert res.bounded and res.distance == 7
    full = dimensional_distance(code)
    assert full.distance == 9 == brute_distance(code, pure=True)


def test_distance_zero_ket():
    code = span(StateVector.basis(DIMS_2333, "0000"))
    res = dimensional_distance(code)
    assert res.distance == 2
    assert str(res.witness) == "Z(1) x 1 x 1 x 1"


def test_distance_parallel_agrees():
    code = fixture("q312_3")
    a = dimensional_distance(code, jobs=1)
    b = dimensional_distance(code, jobs=4)
    assert (a.distance, a.witness) == (b.distance, b.witness)


def test_distance_limit_validation():
    with pytest.raises(PreconditionError):
        dimensional_distance(fixture("q312_3"), limit=28)


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_distance_matches_oracle_on_random_codes(seed, K):
    rng = np.random.default_rng(seed)
    dims = (2, 3)
    M = rng.normal(size=(6, K)) + 1j * rng.normal(size=(6, K))
    q, _ = np.linalg.qr(M)
    code = CodeSpace.from_states([StateVector(dims, q[:, i]) for i in range(K)])
    res = dimensional_distance(code)
    assert res.distance == brute_distance(code, pure=K == 1)


def test_is_pure_examples():
    assert is_pure(fixture("q312_3"), 9)
    zero = span(StateVector.basis(DIMS_2333, "0000"))
    # Z on the qubit has c_E = 1 but dimwt 2, so it only counts once D > 2
    assert is_pure(zero, 2)
    assert not is_pure(zero, 3)
    assert is_pure(zero, 1)


def test_index_two_failures():
    groups = index_two_subgroups()
    Z = WeylLabel.single(DIMS_2333, 0, 0, 1)
    ZX = WeylLabel.single(DIMS_2333, 0, 1, 1)
    codes = {k: code_basis(g) for k, g in groups.items()}
    assert all(c.K == 2 for c in codes.values())
    assert not kl_check(codes["s0"], Z).detectable
    assert not kl_check(codes["s1"], ZX).detectable
    assert not kl_check(codes["s2"], Z).detectable
    for c in codes.values():
        assert dimensional_distance(c).distance == 2


def test_singleton_examples():
    assert singleton_check(CodeParams(DIMS_2333, 1, 8)).ok
    v = singleton_check(CodeParams((2, 2, 2), 4, 4))
    assert not v.ok
    A, B, C = v.witness
    assert (A.sites, B.sites, C.sites, C.dim) == ((0,), (1,), (2,), 2)
    assert singleton_max_K((3, 3, 3), 9) == 3
    assert singleton_max_K(DIMS_2333, 1) == 54


@pytest.mark.parametrize("dims,D", [((2, 3, 3, 3), 8), ((2, 3, 3, 3), 3), ((2, 3, 5), 6), ((4, 2, 3), 7)])
def test_singleton_max_K_matches_oracle(dims, D):
    assert singleton_max_K(dims, D) == brute_max_K(dims, D)


def test_singleton_max_K_2333_at_8():
    # A = {qubit, qutrit} (dim 6) and B = {qutrit} leave one qutrit in C;
    # two qutrits in A would give dim 9, which is not admissible
    assert singleton_max_K(DIMS_2333, 8) == 3


@pytest.mark.parametrize("q", [2, 3, 5])
def test_singleton_reduces_to_qary_bound(q):
    with override(max_dim=10**6):
        for n in range(1, 7):
            for k in range(1, n + 1):
                for d in range(1, n + 1):
                    ok = singleton_check(CodeParams((q,) * n, q**k, q**d)).ok
                    assert ok == (n >= k + 2 * (d - 1)), (q, n, k, d)


def test_code_params_validation():
    with pytest.raises(PreconditionError):
        CodeParams((2, 2), 5, 2)
    with pytest.raises(PreconditionError):
        CodeParams((2, 2), 1, 0)
    assert CodeParams((2, 2), 1, 2).pure


def test_singleton_for_fixture_codes():
    for name in ("q312_3", "q312_5"):
        code = fixture(name)
        D = dimensional_distance(code).distance
        assert singleton_check(CodeParams(code.dims, code.K, D)).ok


def test_random_state_distance_small(rng):
    psi = random_state(rng, (2, 3))
    assert dimensional_distance(span(psi)).distance == 2
