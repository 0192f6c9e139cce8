import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixedstab import (
    CodeSpace,
    StateVector,
    ame_distance,
    delta,
    dimensional_distance,
    em_r,
    fixture,
    is_ame,
    partial_trace,
    schmidt_check,
    tensor,
)
from mixedstab.errors import PreconditionError
from mixedstab.hilbert import all_subsystems

from conftest import random_state

BELL = StateVector.from_kets((2, 2), {"00": 1, "11": 1}, normalize=True)
DIMS = [(2, 2), (2, 3), (3, 3), (2, 3, 3)]


def admissible_r(dims):
    return sorted({S.dim for S in all_subsystems(dims)} - {1})


def test_em_examples():
    assert em_r(BELL, 2).value == pytest.approx(1)
    assert em_r(StateVector.basis((2, 2), "00"), 2).value == pytest.approx(0, abs=1e-12)
    assert em_r(fixture("phi23"), 6).value == pytest.approx(1, abs=1e-9)
    res = em_r(fixture("phi23"), 3)
    assert res.f == 3 and res.value == pytest.approx(1, abs=1e-9)


def test_em_preconditions():
    with pytest.raises(PreconditionError):
        em_r(BELL, 1)
    with pytest.raises(PreconditionError):
        em_r(BELL, 3)


@given(st.sampled_from(DIMS), st.integers(0, 2**32 - 1))
def test_em_bounds(dims, seed):
    psi = random_state(np.random.default_rng(seed), dims)
    for r in admissible_r(dims):
        v = em_r(psi, r).value
        assert -1e-9 <= v <= 1 + 1e-9


@given(st.sampled_from(DIMS), st.integers(0, 2**32 - 1))
def test_em_vanishes_on_products(dims, seed):
    rng = np.random.default_rng(seed)
    psi = tensor(*(random_state(rng, (d,)) for d in dims))
    for r in admissible_r(dims):
        assert em_r(psi, r).value == pytest.approx(0, abs=1e-9)


def test_delta_examples():
    assert delta((2, 3, 3, 3)) == pytest.approx(math.sqrt(54))
    assert ame_distance((2, 3, 3, 3)) == 8
    assert delta((2, 2)) == 2
    assert delta((5, 5, 5, 5)) == 25 and ame_distance((5, 5, 5, 5)) == 26


@pytest.mark.parametrize("name", ["phi23", "phi33", "phi25", "phi35", "phi45", "phi55", "psi2333", "psi2333_minus"])
def test_fixtures_are_ame(name):
    rep = is_ame(fixture(name))
    assert rep.verdict and rep.max_deviation <= 1e-9


def test_zero_ket_is_not_ame():
    assert not is_ame(StateVector.basis((2, 3, 3, 3), "0000")).verdict


@given(st.sampled_from(DIMS + [(2, 2, 2)]), st.integers(0, 2**32 - 1), st.booleans())
def test_full_and_maximal_checks_agree(dims, seed, bell_like):
    rng = np.random.default_rng(seed)
    psi = BELL if bell_like and dims == (2, 2) else random_state(rng, dims)
    assert is_ame(psi).verdict == is_ame(psi, full=True).verdict


def test_full_check_covers_all_small_subsystems():
    rep = is_ame(fixture("phi23"), full=True)
    assert len(rep.checked) == 4 + 3  # single sites, then qubit-qutrit pairs
    assert len(is_ame(fixture("phi23")).checked) == 3


@pytest.mark.parametrize(
    "psi",
    [fixture("phi23"), fixture("psi2333"), StateVector.basis((2, 3, 3, 3), "0000"), BELL,
     StateVector.basis((2, 2), "00")],
    ids=["phi23", "psi2333", "zero2333", "bell", "zero22"],
)
def test_ame_iff_distance_exceeds_floor_delta(psi):
    code = CodeSpace.from_states([psi])
    D = dimensional_distance(code).distance
    assert is_ame(psi).verdict == (D >= ame_distance(psi.dims))


def test_schmidt_examples():
    zero = StateVector.basis((2, 3), "00")
    assert schmidt_check(zero, [0]) == pytest.approx((1, 1))
    assert schmidt_check(BELL, [0]) == pytest.approx((0.5, 0.5))
    assert schmidt_check(fixture("psi2333"), [0, 1]) == pytest.approx((1 / 6, 1 / 6), abs=1e-12)


@given(st.sampled_from(DIMS), st.integers(0, 2**32 - 1))
def test_schmidt_symmetry(dims, seed):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, dims)
    for S in all_subsystems(dims):
        if len(S.sites) < len(dims):
            p, q = schmidt_check(psi, S)
            assert p == pytest.approx(q, abs=1e-12)


def test_rank_obstruction():
    # a marginal on the larger side of a cut has rank at most the smaller side,
    # so it can never be maximally mixed
    psi = random_state(np.random.default_rng(7), (2, 3))
    rho = np.linalg.eigvalsh(partial_trace(psi, [1]).matrix)
    assert np.sum(rho > 1e-9) <= 2
