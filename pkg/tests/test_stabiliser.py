import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixedstab import (
    CodeSpace,
    GenPermOperator,
    StateVector,
    WeylLabel,
    close_group,
    code_basis,
    code_dimension,
    fixture,
    projector,
    stabilises,
    weyl,
)
from mixedstab.constructions import DIMS_2333, example_7_group, m0, m1, m2, phi55_generators
from mixedstab.errors import BudgetExceededError, EmptyCodeError, NotAbelianError, PreconditionError

from test_operators import random_genperm


def dense_closure(gens):
    """Oracle: naive closure by dense products, deduplicated by rounded entries."""
    N = gens[0].shape[0]
    ident = np.eye(N, dtype=complex)
    seen = {(np.round(ident, 8) + 0).tobytes(): ident}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for A in frontier:
            for g in gens:
                B = g @ A
                k = (np.round(B, 8) + 0).tobytes()
                if k not in seen:
                    seen[k] = B
                    nxt.append(B)
        frontier = nxt
    return list(seen.values())


def commuting_family(rng, dims, count):
    """Powers of one random gen-perm times independent phases: always abelian."""
    A = random_genperm(rng, dims, Ls=(1, 2, 4))
    return [A ** int(rng.integers(0, 4)) for _ in range(count)]


def test_order_96_group():
    g = example_7_group()
    assert g.order == 96
    assert code_dimension(g) == 1
    assert sum(1 for t in g.traces() if not t.is_zero()) == 48


def test_trivial_group():
    g = close_group([GenPermOperator.identity(DIMS_2333)])
    assert g.order == 1
    assert code_dimension(g) == 54
    assert np.allclose(projector(g), np.eye(54))
    assert close_group([], dims=(2, 3)).order == 1
    with pytest.raises(PreconditionError):
        close_group([])


def test_xx_zz_group_order():
    X, Z = weyl(2, 1, 0), weyl(2, 0, 1)
    gens = [np.kron(X, X), np.kron(Z, Z)]
    oracle = dense_closure(gens)
    g = close_group(gens, dims=(2, 2))
    # XX and ZZ commute and their product squares to the identity,
    # so the closure is {1, XX, ZZ, XXZZ} and contains no -1
    assert g.order == len(oracle) == 4
    assert code_dimension(g) == 1
    exact = close_group([WeylLabel.of((2, 2), [(1, 0), (1, 0)]), WeylLabel.of((2, 2), [(0, 1), (0, 1)])], dims=(2, 2))
    assert exact.order == 4


def test_z_group():
    g = close_group([WeylLabel.of((2,), [(0, 1)])], dims=(2,))
    assert code_dimension(g) == 1
    assert np.allclose(projector(g), np.diag([1, 0]))
    code = code_basis(g)
    assert code.K == 1 and np.allclose(code.basis[0].amplitudes, [1, 0])


def test_example_7_projector_is_psi():
    g = example_7_group()
    P = projector(g)
    psi = fixture("psi2333").amplitudes
    assert np.allclose(P, np.outer(psi, psi.conj()), atol=1e-12)
    code = code_basis(g)
    assert abs(np.vdot(psi, code.basis[0].amplitudes)) ** 2 == pytest.approx(1, abs=1e-9)


def test_s0_basis_contains_psi_and_zero_ket():
    g = fixture("s0")
    code = code_basis(g)
    assert code.K == 2
    stated = CodeSpace.from_states([fixture("psi2333"), StateVector.basis(DIMS_2333, "0000")])
    assert code.overlap(stated) == pytest.approx(1, abs=1e-9)


def test_s_minus_group():
    g = fixture("s_minus")
    assert g.order == 96 and code_dimension(g) == 1
    target = CodeSpace.from_states([fixture("psi2333_minus")])
    assert code_basis(g).overlap(target) == pytest.approx(1, abs=1e-9)


def test_stabilises_examples():
    phi55 = fixture("phi55")
    gens = phi55_generators()
    # the first two listed generators fix phi55; the third does not (see test_acceptance)
    assert stabilises(gens[:2], phi55)
    zero = StateVector.basis(DIMS_2333, "0000")
    # M1 leaves |0000> unchanged: its qubit factor is Z, and the qutrit token map fixes 000
    assert stabilises([m1()], zero)
    assert not stabilises([m1()], StateVector.basis(DIMS_2333, "1000"))
    assert stabilises([GenPermOperator.identity(DIMS_2333)], fixture("phi23"))


def test_not_abelian():
    with pytest.raises(NotAbelianError):
        close_group([WeylLabel.of((2,), [(1, 0)]), WeylLabel.of((2,), [(0, 1)])], dims=(2,))


def test_budget():
    with pytest.raises(BudgetExceededError):
        close_group([m0(), m1(), m2()], max_order=50)


def test_empty_code():
    g = close_group([-GenPermOperator.identity((2,))], dims=(2,))
    assert code_dimension(g) == 0
    with pytest.raises(EmptyCodeError):
        code_basis(g)


@given(st.integers(0, 2**32 - 1))
def test_closure_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    dims = (2, 3)
    gens = commuting_family(rng, dims, 3)
    g = close_group(gens)
    dense = dense_closure([x.to_dense() for x in gens])
    assert g.order == len(dense)
    P = projector(g)
    assert np.allclose(P, sum(dense) / len(dense))
    assert np.allclose(P @ P, P) and np.allclose(P, P.conj().T)
    rank = int(np.sum(np.linalg.eigvalsh(P) > 0.5))
    assert code_dimension(g) == rank


@given(st.integers(0, 2**32 - 1))
def test_generator_order_irrelevant(seed):
    rng = np.random.default_rng(seed)
    gens = commuting_family(rng, (3, 2), 3)
    a = close_group(gens)
    b = close_group(gens[::-1])
    assert {e.key() for e in a.elements} == {e.key() for e in b.elements}
    assert code_dimension(a) == code_dimension(b)


def test_dense_generators_agree_with_exact():
    gens = [m0(), m1(), m2()]
    dense = close_group([g.to_dense() for g in gens], dims=DIMS_2333)
    assert dense.order == 96 and code_dimension(dense) == 1


def test_code_space_checks():
    with pytest.raises(PreconditionError):
        CodeSpace.from_states([StateVector.basis((2,), "0"), StateVector.basis((2,), "0")])
    code = CodeSpace.from_states([StateVector.basis((2,), "0"), StateVector.basis((2,), "1")])
    assert code.K == 2 and np.allclose(code.projector(), np.eye(2))
    assert math.isclose(code.overlap(code), 1)
