"""Pauli-twirl trajectory sampling of the noisy circuit.

Each depolarizing location applies I with probability ``1 - 3p/4`` and X, Y
or Z with probability ``p/4`` each. Every qubit is tracked as a two-amplitude
pure state, so one shot costs O(n).

Random numbers
--------------
Shot ``k`` under seed ``seed`` owns a SplitMix64 stream keyed by::

    key_k = mix64(mix64(seed) + k * GOLDEN)
    u_j   = (mix64(key_k + (j + 1) * GOLDEN) >> 11) * 2^-53

where ``mix64`` is the SplitMix64 finalizer and ``GOLDEN`` its Weyl
increment. Qubit ``i`` (0-based) consumes draws ``j = 4i, 4i+1, 4i+2`` for
its three noise locations and ``j = 4i+3`` for measurement. Streams are pure
functions of ``(seed, k, j)``, so results do not depend on shot scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import check_probability
from .hidden import HiddenString

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / (1 << 53)

DRAWS_PER_QUBIT = 4
CHUNK_DRAWS = 1 << 22

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def mix64(x) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = np.array(x, dtype=np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= _M1
    z ^= z >> np.uint64(27)
    z *= _M2
    z ^= z >> np.uint64(31)
    return z


def shot_keys(seed: int, shots: np.ndarray) -> np.ndarray:
    base = mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    return mix64(base + np.asarray(shots, dtype=np.uint64) * GOLDEN)


def uniforms(keys: np.ndarray, draws: int) -> np.ndarray:
    """``(len(keys), draws)`` array of doubles in [0, 1)."""
    j = np.arange(1, draws + 1, dtype=np.uint64)
    bits = mix64(keys[:, None] + j[None, :] * GOLDEN)
    return (bits >> np.uint64(11)).astype(np.float64) * _INV_2_53


class ShotStream:
    """Sequential view of one shot's counter-based stream."""

    def __init__(self, seed: int, shot: int = 0):
        self.key = shot_keys(seed, np.array([shot]))
        self.counter = 0

    def uniform(self) -> float:
        u = uniforms(self.key + np.array([self.counter], dtype=np.uint64) * GOLDEN, 1)[0, 0]
        self.counter += 1
        return float(u)


@dataclass(frozen=True)
class TrajectoryConfig:
    s: HiddenString
    p: float
    shots: int
    seed: int = 0

    def __post_init__(self):
        check_probability(self.p)
        if int(self.shots) != self.shots or self.shots < 1:
            raise ValueError(f"shots must be a positive integer, got {self.shots}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    shots: int
    seed: int
    successes: int


def _pauli_index(u, p: float):
    """0..3 for I, X, Y, Z from one uniform draw."""
    keep = 1.0 - 0.75 * p
    q = 0.25 * p
    return np.where(u < keep, 0, np.where(u < keep + q, 1, np.where(u < keep + 2 * q, 2, 3)))


def _apply_pauli(a0, a1, idx):
    # X: (a1, a0); Y: (-i a1, i a0); Z: (a0, -a1)
    x_or_y = (idx == 1) | (idx == 2)
    b0 = np.where(x_or_y, a1, a0)
    b1 = np.where(x_or_y, a0, a1)
    b0 = np.where(idx == 2, -1j * b0, b0)
    b1 = np.where(idx == 2, 1j * b1, b1)
    b1 = np.where(idx == 3, -b1, b1)
    return b0, b1


def _hadamard(a0, a1):
    return (a0 + a1) * _SQRT_HALF, (a0 - a1) * _SQRT_HALF


def _simulate(bits: np.ndarray, p: float, u: np.ndarray) -> np.ndarray:
    """Measured bits, shape ``(shots, n)``, given draws of shape ``(shots, 4n)``."""
    shots, n = u.shape[0], bits.size
    u = u.reshape(shots, n, DRAWS_PER_QUBIT)
    a0 = np.ones((shots, n), dtype=np.complex128)
    a1 = np.zeros((shots, n), dtype=np.complex128)
    a0, a1 = _hadamard(a0, a1)
    a0, a1 = _apply_pauli(a0, a1, _pauli_index(u[:, :, 0], p))
    a1 = np.where(bits[None, :] == 1, -a1, a1)
    a0, a1 = _apply_pauli(a0, a1, _pauli_index(u[:, :, 1], p))
    a0, a1 = _hadamard(a0, a1)
    a0, a1 = _apply_pauli(a0, a1, _pauli_index(u[:, :, 2], p))
    return (u[:, :, 3] < np.abs(a1) ** 2).astype(np.int8)


def sample_run(s: HiddenString, p: float, rng: ShotStream) -> HiddenString:
    """One trajectory; returns the measured bit string."""
    p = check_probability(p)
    u = np.array([[rng.uniform() for _ in range(DRAWS_PER_QUBIT * s.n)]])
    measured = _simulate(np.array(s.bits, dtype=np.int8), p, u)[0]
    return HiddenString(tuple(int(b) for b in measured))


def estimate_success(cfg: TrajectoryConfig) -> McEstimate:
    """Fraction of shots that return ``s``, with its binomial standard error."""
    bits = np.array(cfg.s.bits, dtype=np.int8)
    draws = DRAWS_PER_QUBIT * cfg.s.n
    chunk = max(1, CHUNK_DRAWS // draws)
    successes = 0
    for start in range(0, cfg.shots, chunk):
        idx = np.arange(start, min(start + chunk, cfg.shots), dtype=np.uint64)
        u = uniforms(shot_keys(cfg.seed, idx), draws)
        measured = _simulate(bits, cfg.p, u)
        successes += int(np.count_nonzero(np.all(measured == bits[None, :], axis=1)))
    est = successes / cfg.shots
    stderr = math.sqrt(est * (1.0 - est) / cfg.shots)
    return McEstimate(est, stderr, cfg.shots, cfg.seed, successes)
