"""O(n) exact backend: evolve each qubit's 2x2 density matrix separately.

Valid because the phase oracle is a tensor product of ``Z^s_i`` gates and
the noise acts on each qubit independently, so the n-qubit state stays a
product state through the whole circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .analytic import SuccessProbability
from .density import STAGE_LABELS, DensityMatrix, check_probability, check_qubits
from .hidden import HiddenString
from .matrix import H, I2, Z, kron_all

LOG_SPACE_ABOVE = 512


class NonProductOracleError(ValueError):
    """The oracle does not factor into single-qubit ``Z^s_i`` gates."""


@dataclass(frozen=True)
class QubitStage:
    label: str
    mat: np.ndarray


def _depolarize(sigma: np.ndarray, p: float) -> np.ndarray:
    return (1.0 - p) * sigma + p * I2 / 2


@lru_cache(maxsize=4096)
def _evolve_cached(s_i: int, p: float) -> tuple[QubitStage, ...]:
    oracle = Z if s_i else I2
    ket0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
    mats = []
    sigma = H @ ket0 @ H
    mats.append(sigma)
    sigma = _depolarize(sigma, p)
    mats.append(sigma)
    sigma = oracle @ sigma @ oracle
    mats.append(sigma)
    sigma = _depolarize(sigma, p)
    mats.append(sigma)
    sigma = H @ sigma @ H
    mats.append(sigma)
    sigma = _depolarize(sigma, p)
    mats.append(sigma)
    for m in mats:
        m.setflags(write=False)
    return tuple(QubitStage(label, m) for label, m in zip(STAGE_LABELS, mats))


def evolve_single_qubit(s_i: int, p: float) -> tuple[QubitStage, ...]:
    """The six per-qubit stages ``sigma1..sigma6`` for bit ``s_i``."""
    if s_i not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {s_i!r}")
    return _evolve_cached(int(s_i), check_probability(p))


def qubit_success_factor(s_i: int, p: float) -> float:
    final = evolve_single_qubit(s_i, p)[-1].mat
    return float(final[s_i, s_i].real)


def success_probability_factorized(s: HiddenString, p: float) -> SuccessProbability:
    """Product of per-qubit success factors.

    Above ``LOG_SPACE_ABOVE`` qubits the product is accumulated as a sum of
    logarithms so the log value stays exact even when the probability
    underflows.
    """
    p = check_probability(p)
    factors = [qubit_success_factor(b, p) for b in s.bits]
    if s.n > LOG_SPACE_ABOVE:
        log2_prob = math.fsum(math.log2(f) for f in factors)
        return SuccessProbability(2.0**log2_prob, log2_prob)
    prob = math.prod(factors)
    return SuccessProbability(prob, math.log2(prob))


def full_state_from_factors(s: HiddenString, p: float, stage: int = 6) -> DensityMatrix:
    """Tensor product of the per-qubit states after ``stage`` (1..6)."""
    check_qubits(s.n)
    if not 1 <= stage <= len(STAGE_LABELS):
        raise ValueError(f"stage must be in 1..{len(STAGE_LABELS)}, got {stage}")
    mats = [evolve_single_qubit(b, p)[stage - 1].mat for b in s.bits]
    return DensityMatrix(s.n, kron_all(mats))


def hidden_string_from_oracle(u) -> HiddenString:
    """Recover ``s`` from a diagonal phase oracle, rejecting anything that is not ``⊗ Z^s_i``."""
    u = np.asarray(u, dtype=np.complex128)
    dim = u.shape[0]
    n = dim.bit_length() - 1
    if u.ndim != 2 or u.shape != (dim, dim) or dim != 2**n or n < 1:
        raise NonProductOracleError(f"oracle must be a 2^n x 2^n matrix, got shape {u.shape}")
    if np.max(np.abs(u - np.diag(np.diag(u)))) > 1e-12:
        raise NonProductOracleError("oracle is not diagonal")
    # bit k of s is the phase sign on the basis state with only qubit k set
    bits = []
    for k in range(n):
        phase = u[1 << (n - 1 - k), 1 << (n - 1 - k)] / u[0, 0]
        if abs(phase - 1) <= 1e-12:
            bits.append(0)
        elif abs(phase + 1) <= 1e-12:
            bits.append(1)
        else:
            raise NonProductOracleError(f"qubit {k + 1} phase {phase} is not +-1")
    s = HiddenString(tuple(bits))
    expected = u[0, 0] * np.diag(kron_all(Z if b else I2 for b in s.bits))
    if np.max(np.abs(np.diag(u) - expected)) > 1e-12:
        raise NonProductOracleError("oracle phases are not a product of single-qubit Z gates")
    return s
