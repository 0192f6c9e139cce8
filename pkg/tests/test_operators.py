import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixedstab import (
    Cyclotomic,
    GenPermOperator,
    LocalOperator,
    PhaseExp,
    StateVector,
    WeylLabel,
    apply,
    dimwt,
    fixture,
    genperm_compose,
    genperm_from_spec,
    genperm_trace,
    nice_error_basis,
    weyl,
)
from mixedstab.constructions import DIMS_2333, m0, m1, m2, phi_basis
from mixedstab.errors import PreconditionError
from mixedstab.hilbert import flat_index


def random_genperm(rng, dims, Ls=(1, 2, 3, 4, 6)):
    total = math.prod(dims)
    L = int(rng.choice(Ls))
    return GenPermOperator(dims, rng.permutation(total), rng.integers(0, L, size=total), L)


def phi_index_action(op):
    """How ``op`` permutes phi_1..phi_24 (1-based), with the sign picked up."""
    basis = phi_basis()
    out = {}
    for j, v in enumerate(basis, 1):
        w = op.apply(v).amplitudes
        for k, u in enumerate(basis, 1):
            ov = np.vdot(u.amplitudes, w)
            if abs(ov) > 0.5:
                out[j] = round(ov.real) * k
    return out


def test_weyl_examples():
    X = weyl(3, 1, 0)
    assert np.allclose(X @ np.eye(3)[:, 0], np.eye(3)[:, 1])
    assert np.trace(X) == 0
    assert np.allclose(weyl(2, 0, 0), np.eye(2)) and np.trace(weyl(2, 0, 0)) == 2


@given(st.integers(2, 7), st.data())
def test_weyl_composition_law(D, data):
    a, b, c, d = (data.draw(st.integers(0, D - 1)) for _ in range(4))
    eta = np.exp(2j * np.pi / D)
    # X(a)Z(b) X(c)Z(d) = eta^{bc} X(a+c)Z(b+d)
    assert np.allclose(weyl(D, a, b) @ weyl(D, c, d), eta ** (b * c) * weyl(D, a + c, b + d))


@pytest.mark.parametrize("dims", [(2,), (2, 3), (3, 3)])
def test_nice_error_basis_orthogonal(dims):
    ops = [E.to_dense() for _, E in nice_error_basis(dims)]
    N = math.prod(dims)
    assert len(ops) == N * N
    G = np.array([[np.trace(A.conj().T @ B) for B in ops] for A in ops])
    assert np.allclose(G, N * np.eye(N * N))


def test_nice_error_basis_counts_and_order():
    labels = [str(label) for label, _ in nice_error_basis((2,))]
    assert labels == ["1", "Z(1)", "X(1)", "X(1)Z(1)"]
    assert sum(1 for _ in nice_error_basis((2, 3))) == 36


def test_dimwt_examples():
    dims = DIMS_2333
    assert dimwt(LocalOperator.identity(dims)) == 1
    assert dimwt(WeylLabel.single(dims, 0, 0, 1).to_local(dims)) == 2
    E = WeylLabel.of(dims, [(1, 0), (1, 2), (0, 0), (0, 0)]).to_local(dims)
    assert dimwt(E) == 6


def test_local_support_ignores_scalar_factors():
    dims = (2, 3)
    E = LocalOperator.on_sites(dims, {1: 1j * np.eye(3)})
    assert E.support() == ()
    assert dimwt(E) == 1


@given(st.integers(0, 2**32 - 1))
def test_compose_matches_dense(seed):
    rng = np.random.default_rng(seed)
    dims = (2, 3)
    A, B = random_genperm(rng, dims), random_genperm(rng, dims)
    assert np.allclose(genperm_compose(A, B).to_dense(), A.to_dense() @ B.to_dense())
    assert np.allclose(A.adjoint().to_dense(), A.to_dense().conj().T)
    assert complex(genperm_trace(A)) == pytest.approx(np.trace(A.to_dense()), abs=1e-9)


@given(st.integers(0, 2**32 - 1))
def test_from_dense_round_trip(seed):
    rng = np.random.default_rng(seed)
    A = random_genperm(rng, (3, 2))
    assert GenPermOperator.from_dense((3, 2), A.to_dense()) == A


def test_trace_examples():
    assert genperm_trace(GenPermOperator.identity(DIMS_2333)) == 54
    assert genperm_trace(m2()) == 30
    assert genperm_trace(m0()) == Cyclotomic.gaussian(22, -4)
    assert complex(genperm_trace(m0())) == pytest.approx(22 - 4j)


def test_m1_m2_permute_phi_states():
    act1 = phi_index_action(m1())
    act2 = phi_index_action(m2())
    # M1 = (1 2 3 4 5 6)(7 8 9 10 11 12)... on the first 12 phi states
    for cyc in ([1, 2, 3, 4, 5, 6], [7, 8, 9, 10, 11, 12]):
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            assert abs(act1[x]) == y
    prod = phi_index_action(m1() @ m2())
    assert prod == phi_index_action(m2() @ m1())
    # M1 M2 = (1 8 6 7 5 12 4 11 3 10 2 9)...
    cyc = [1, 8, 6, 7, 5, 12, 4, 11, 3, 10, 2, 9]
    for x, y in zip(cyc, cyc[1:] + cyc[:1]):
        assert abs(prod[x]) == y
    assert all(abs(v) <= 12 for k, v in act2.items() if k <= 12)


def test_spec_forms():
    dims = DIMS_2333
    i4 = {"k": 1, "L": 4}
    op = genperm_from_spec(dims, {"diag": [None] + [[{"k": 1, "L": 2}, i4, i4]] * 3})
    assert op == m0()
    psi = fixture("psi2333")
    assert apply(op, psi).allclose(psi)
    assert genperm_from_spec(dims, {}).is_identity()
    X = genperm_from_spec((3,), {"site_local": [[1, 0]]})
    assert np.allclose(X.to_dense(), weyl(3, 1, 0))
    cyc = genperm_from_spec((3,), {"cycles": [[(0,), (1,), (2,)]]})
    assert cyc == X
    minus = genperm_from_spec((2,), {"site_local": [[0, 1]], "phase": -1})
    assert np.allclose(minus.to_dense(), -weyl(2, 0, 1))
    with pytest.raises(PreconditionError):
        genperm_from_spec((3,), {"diag": [[1, 1]]})


def test_apply_examples():
    phi23 = fixture("phi23")
    assert apply(GenPermOperator.identity(phi23.dims), phi23).allclose(phi23)
    phi33 = fixture("phi33")
    g = WeylLabel.of(phi33.dims, [(0, 0), (1, 0), (1, 0), (1, 0)])
    assert apply(g, phi33).allclose(phi33)
    psi = fixture("psi2333")
    assert apply(m1(), psi).allclose(psi)


def test_operator_orders():
    assert m0().order() == 4 and m1().order() == 6 and m2().order() == 4


def test_matrix_convention_conversion():
    # m_ij = eta_j delta_{i sigma(j)} style input, with sigma the inverse permutation
    sigma = [1, 2, 0]
    op = GenPermOperator.from_matrix_convention((3,), sigma, [PhaseExp(0, 1)] * 3)
    dense = op.to_dense()
    perm = np.zeros((3, 3))
    for i, j in enumerate(sigma):
        perm[i, j] = 1
    assert np.allclose(dense, perm)


@given(st.integers(0, 2**32 - 1))
def test_weyl_label_paths_agree(seed):
    rng = np.random.default_rng(seed)
    dims = (2, 3, 4)
    label = WeylLabel.of(dims, [(int(rng.integers(D)), int(rng.integers(D))) for D in dims])
    dense = label.to_local(dims).to_dense()
    assert np.allclose(label.to_genperm(dims).to_dense(), dense)
    psi = StateVector(dims, rng.normal(size=24))
    assert np.allclose(apply(label, psi).amplitudes, dense @ psi.amplitudes)


def test_traceless_over_support_subsystems():
    for dims in [(2, 3), (3, 3)]:
        for label, E in nice_error_basis(dims):
            for traced in itertools.chain.from_iterable(
                itertools.combinations(range(len(dims)), k) for k in range(1, len(dims) + 1)
            ):
                if label.is_identity() or not set(traced) & set(label.support):
                    continue
                assert np.allclose(E.partial_trace(traced), 0, atol=1e-12)


def test_cycles_listing():
    op = genperm_from_spec((3,), {"cycles": [[(0,), (2,)]]})
    assert op.cycles() == [[0, 2]]
    assert flat_index((2,), (3,)) == 2
