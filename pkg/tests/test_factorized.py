import math

import numpy as np
import pytest

from bvnoise.density import bv_stages, build_oracle, run_bv_full
from bvnoise.factorized import (
    LOG_SPACE_ABOVE,
    NonProductOracleError,
    evolve_single_qubit,
    full_state_from_factors,
    hidden_string_from_oracle,
    qubit_success_factor,
    success_probability_factorized,
)
from bvnoise.hidden import HiddenString
from bvnoise.matrix import DimensionError, validate_density

from oracles import H, I2, Z, qubit_factor_polynomial


def _chain_by_hand(s_i, p):
    """Stage formulas written out directly in terms of rho_1, rho_2, rho_3."""
    rho1 = np.full((2, 2), 0.5, dtype=complex)
    u = Z if s_i else I2
    rho2 = u @ rho1 @ u
    rho3 = H @ rho2 @ H
    half_i = I2 / 2
    return [
        rho1,
        (1 - p) * rho1 + p * half_i,
        (1 - p) * rho2 + p * half_i,
        (1 - p) ** 2 * rho2 + (2 * p - p * p) * half_i,
        (1 - p) ** 2 * rho3 + (2 * p - p * p) * half_i,
        (1 - p) ** 3 * rho3 + p * (p * p - 3 * p + 3) * half_i,
    ]


@pytest.mark.parametrize("s_i", [0, 1])
@pytest.mark.parametrize("p", [0.0, 0.02, 0.1, 0.5, 0.9, 1.0])
def test_stages_match_closed_form_chain(s_i, p):
    stages = evolve_single_qubit(s_i, p)
    assert [st.label for st in stages] == ["sigma1", "sigma2", "sigma3", "sigma4", "sigma5", "sigma6"]
    for st, expected in zip(stages, _chain_by_hand(s_i, p)):
        np.testing.assert_allclose(st.mat, expected, atol=1e-12)
        assert validate_density(st.mat).ok


def test_noiseless_zero_bit():
    np.testing.assert_allclose(evolve_single_qubit(0, 0.0)[-1].mat, [[1, 0], [0, 0]], atol=1e-15)


@pytest.mark.parametrize("s_i", [0, 1])
def test_full_noise_gives_maximally_mixed(s_i):
    np.testing.assert_allclose(evolve_single_qubit(s_i, 1.0)[-1].mat, I2 / 2, atol=1e-15)


def test_hand_value_s1_p01():
    assert qubit_success_factor(1, 0.1) == pytest.approx(0.8645, abs=1e-14)


def test_evolve_rejects_bad_input():
    with pytest.raises(ValueError):
        evolve_single_qubit(1, 1.01)
    with pytest.raises(ValueError):
        evolve_single_qubit(2, 0.1)


def test_success_factor_independent_of_bit():
    for p in np.linspace(0, 1, 101):
        assert abs(qubit_success_factor(0, p) - qubit_success_factor(1, p)) <= 1e-12


def test_success_examples():
    noiseless = success_probability_factorized(HiddenString.parse("10110"), 0.0)
    assert noiseless.prob == pytest.approx(1.0, abs=1e-12)
    assert success_probability_factorized(HiddenString.parse("101"), 0.1).prob == pytest.approx(
        0.646092936125, abs=1e-12
    )
    assert success_probability_factorized(HiddenString.parse("0"), 1.0).prob == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("n", [1, 3, 17, 64, 512, 513, 1000])
@pytest.mark.parametrize("p", [0.001, 0.1, 0.7])
def test_matches_polynomial_power(n, p):
    s = HiddenString.ones(n)
    res = success_probability_factorized(s, p)
    base = qubit_factor_polynomial(p)
    assert res.log2_prob == pytest.approx(n * math.log2(base), rel=1e-12)
    assert res.prob == pytest.approx(base**n, rel=1e-12)


def test_log_space_survives_underflow():
    res = success_probability_factorized(HiddenString.ones(5000), 0.5)
    assert res.prob == 0.0
    assert res.log2_prob == pytest.approx(5000 * math.log2(qubit_factor_polynomial(0.5)), rel=1e-12)
    assert LOG_SPACE_ABOVE < 5000


def test_monotone_in_p_and_n():
    ps = np.linspace(0, 1, 201)[:-1]
    values = [success_probability_factorized(HiddenString.ones(4), p).prob for p in ps]
    assert all(b < a for a, b in zip(values, values[1:]))
    for p in (0.001, 0.1, 0.9):
        by_n = [success_probability_factorized(HiddenString.ones(n), p).prob for n in range(1, 40)]
        assert all(b < a for a, b in zip(by_n, by_n[1:]))


def test_full_state_single_factor():
    s = HiddenString.parse("1")
    np.testing.assert_array_equal(full_state_from_factors(s, 0.3).mat, evolve_single_qubit(1, 0.3)[-1].mat)


def test_full_state_noiseless_projector():
    expected = np.zeros((4, 4))
    expected[3, 3] = 1
    np.testing.assert_allclose(full_state_from_factors(HiddenString.parse("11"), 0.0).mat, expected, atol=1e-15)


def test_full_state_matches_full_sim_n3():
    s = HiddenString.parse("101")
    diff = full_state_from_factors(s, 0.05).mat - run_bv_full(s, 0.05).mat
    assert np.linalg.norm(diff) <= 1e-10


def test_every_stage_factorizes():
    s = HiddenString.parse("0110")
    for k, (_, rho) in enumerate(bv_stages(s, 0.2), start=1):
        assert np.linalg.norm(rho.mat - full_state_from_factors(s, 0.2, stage=k).mat) <= 1e-12


@pytest.mark.parametrize("p", [0.0, 0.01, 0.1, 0.5, 1.0])
def test_factorization_equivalence_random(p):
    rng = np.random.default_rng(int(1000 * p) + 7)
    for n in range(1, 7):
        s = HiddenString.random(n, rng)
        assert np.linalg.norm(full_state_from_factors(s, p).mat - run_bv_full(s, p).mat) <= 1e-10


def test_full_state_cap():
    with pytest.raises(DimensionError):
        full_state_from_factors(HiddenString.ones(13), 0.1)


def test_oracle_roundtrip():
    for bits in ("1", "01", "110", "1011"):
        s = HiddenString.parse(bits)
        assert hidden_string_from_oracle(build_oracle(s)) == s


def test_rejects_entangling_oracle():
    cz = np.diag([1, 1, 1, -1]).astype(complex)
    with pytest.raises(NonProductOracleError):
        hidden_string_from_oracle(cz)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    with pytest.raises(NonProductOracleError):
        hidden_string_from_oracle(cnot)
    with pytest.raises(NonProductOracleError):
        hidden_string_from_oracle(np.diag([1, 1j]))
