import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bvnoise import montecarlo
from bvnoise.analytic import success_probability
from bvnoise.hidden import HiddenString
from bvnoise.matrix import PAULIS
from bvnoise.montecarlo import (
    McEstimate,
    ShotStream,
    TrajectoryConfig,
    estimate_success,
    mix64,
    sample_run,
    shot_keys,
    uniforms,
)
from bvnoise.verify import random_density

# chi-square, 1 degree of freedom, 99% quantile
CHI2_1DOF_99 = 6.634896601021214


def _splitmix64_reference(state):
    """Textbook SplitMix64 step on Python ints."""
    mask = (1 << 64) - 1
    state = (state + 0x9E3779B97F4A7C15) & mask
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return state, z ^ (z >> 31)


def test_stream_is_splitmix64_seeded_by_shot_key():
    key = int(shot_keys(12345, np.array([9]))[0])
    expected = []
    state = key
    for _ in range(5):
        state, z = _splitmix64_reference(state)
        expected.append((z >> 11) / 2**53)
    stream = ShotStream(12345, 9)
    assert [stream.uniform() for _ in range(5)] == expected
    np.testing.assert_array_equal(uniforms(shot_keys(12345, np.array([9])), 5)[0], expected)


def test_mix64_known_value():
    # first output of SplitMix64 seeded with 0
    assert int(mix64(np.uint64(0x9E3779B97F4A7C15))) == 0xE220A8397B1DCDAF


def test_noiseless_always_returns_s():
    s = HiddenString.parse("10110")
    stream = ShotStream(1, 0)
    for _ in range(20):
        assert sample_run(s, 0.0, stream) == s
    est = estimate_success(TrajectoryConfig(s, 0.0, 1, 3))
    assert est.estimate == 1.0
    assert est.stderr == 0.0


def test_sample_run_matches_batch_rows():
    s = HiddenString.parse("1101")
    p, seed = 0.6, 77
    draws = montecarlo.DRAWS_PER_QUBIT * s.n
    u = uniforms(shot_keys(seed, np.arange(50, dtype=np.uint64)), draws)
    batch = montecarlo._simulate(np.array(s.bits, dtype=np.int8), p, u)
    for k in range(50):
        assert sample_run(s, p, ShotStream(seed, k)).bits == tuple(int(b) for b in batch[k])


def test_p1_single_qubit_uniform_chi_square():
    shots = 100_000
    est = estimate_success(TrajectoryConfig(HiddenString.parse("1"), 1.0, shots, 2024))
    ones, zeros = est.successes, shots - est.successes
    chi2 = ((ones - shots / 2) ** 2 + (zeros - shots / 2) ** 2) / (shots / 2)
    assert chi2 < CHI2_1DOF_99


def test_single_qubit_p01_converges():
    est = estimate_success(TrajectoryConfig(HiddenString.parse("1"), 0.1, 200_000, 5))
    assert abs(est.estimate - 0.8645) <= 4 * est.stderr


def test_estimate_examples():
    exact5 = success_probability(5, 0.01).prob
    assert exact5 == pytest.approx(0.92792036506, abs=1e-10)
    est = estimate_success(TrajectoryConfig(HiddenString.ones(5), 0.01, 10**6, 1))
    assert abs(est.estimate - exact5) <= 4 * est.stderr
    half = estimate_success(TrajectoryConfig(HiddenString.parse("0"), 1.0, 10**6, 1))
    assert abs(half.estimate - 0.5) <= 4 * half.stderr


def test_stderr_formula():
    est = estimate_success(TrajectoryConfig(HiddenString.ones(2), 0.3, 1000, 9))
    assert isinstance(est, McEstimate)
    assert est.stderr == pytest.approx(np.sqrt(est.estimate * (1 - est.estimate) / 1000))
    assert est.estimate == est.successes / 1000


def test_deterministic_and_schedule_independent(monkeypatch):
    cfg = TrajectoryConfig(HiddenString.parse("011"), 0.25, 30_001, 42)
    a = estimate_success(cfg)
    b = estimate_success(cfg)
    monkeypatch.setattr(montecarlo, "CHUNK_DRAWS", 12 * 7)
    c = estimate_success(cfg)
    assert a == b == c


def test_different_seeds_differ():
    base = TrajectoryConfig(HiddenString.ones(3), 0.2, 5000, 1)
    other = TrajectoryConfig(HiddenString.ones(3), 0.2, 5000, 2)
    assert estimate_success(base).successes != estimate_success(other).successes


def test_config_validation():
    s = HiddenString.ones(2)
    with pytest.raises(ValueError):
        TrajectoryConfig(s, 0.1, 0)
    with pytest.raises(ValueError):
        TrajectoryConfig(s, -0.1, 10)
    with pytest.raises(ValueError):
        TrajectoryConfig(s, 0.1, 10, seed=-1)
    with pytest.raises(ValueError):
        TrajectoryConfig(s, 0.1, 10, seed=2**64)


@settings(max_examples=30)
@given(st.integers(0, 2**32), st.floats(0, 1))
def test_twirl_average_equals_channel(seed, p):
    rho = random_density(1, np.random.default_rng(seed)).mat
    weights = (1 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p)
    twirled = sum(w * P @ rho @ P.conj().T for w, P in zip(weights, PAULIS))
    np.testing.assert_allclose(twirled, (1 - p) * rho + p * np.eye(2) / 2, atol=1e-12)


def test_pauli_partition():
    p = 0.4
    u = np.array([0.0, 0.699, 0.7, 0.799, 0.8, 0.899, 0.9, 0.999])
    np.testing.assert_array_equal(montecarlo._pauli_index(u, p), [0, 0, 1, 1, 2, 2, 3, 3])


def test_pauli_application_matches_matrices():
    rng = np.random.default_rng(0)
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    for idx, P in enumerate(PAULIS):
        b0, b1 = montecarlo._apply_pauli(np.array([a[0]]), np.array([a[1]]), np.array([idx]))
        np.testing.assert_allclose([b0[0], b1[0]], P @ a, atol=1e-15)


def test_statistical_consistency_over_seeds():
    exact = success_probability(3, 0.1).prob
    inside = 0
    for seed in range(20):
        est = estimate_success(TrajectoryConfig(HiddenString.parse("101"), 0.1, 100_000, seed))
        inside += abs(est.estimate - exact) <= 3 * est.stderr
    assert inside >= 19
