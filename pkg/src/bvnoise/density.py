"""Brute-force density-matrix simulation of the noisy Bernstein-Vazirani circuit.

The circuit per qubit is ``H -> E -> Z^s_i -> E -> H -> E`` where ``E`` is
the single-qubit depolarizing channel ``E(rho) = (1-p) rho + p I/2``.
State preparation and measurement are noiseless.

Single-qubit gates and channels act block-wise on a reshaped view of the
full ``2^n x 2^n`` matrix, so no ``2^n``-sized Kraus or gate matrices are
built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .hidden import HiddenString
from .matrix import (
    H,
    I2,
    MAX_QUBITS,
    PAULIS,
    Z,
    DensityReport,
    DimensionError,
    as_matrix,
    kron_all,
    validate_density,
)

PROB_TOL = 1e-9

STAGE_LABELS = ("sigma1", "sigma2", "sigma3", "sigma4", "sigma5", "sigma6")


@dataclass(frozen=True)
class DensityMatrix:
    n: int
    mat: np.ndarray

    def __post_init__(self):
        check_qubits(self.n)
        mat = as_matrix(self.mat)
        dim = 2**self.n
        if mat.shape != (dim, dim):
            raise DimensionError(f"expected {dim}x{dim} matrix for n={self.n}, got {mat.shape}")
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return 2**self.n

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def validate(self, **tols) -> DensityReport:
        return validate_density(self.mat, **tols)


def check_qubits(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise DimensionError(f"full density simulation supports 1 <= n <= {MAX_QUBITS}, got n={n}")


def check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"error probability must lie in [0, 1], got {p}")
    return p


def init_zero_state(n: int) -> DensityMatrix:
    check_qubits(n)
    mat = np.zeros((2**n, 2**n), dtype=np.complex128)
    mat[0, 0] = 1.0
    return DensityMatrix(n, mat)


def oracle_phases(s: HiddenString) -> np.ndarray:
    """Diagonal of the phase oracle: entry ``x`` is ``(-1)^(s.x mod 2)``."""
    check_qubits(s.n)
    idx = np.arange(2**s.n)
    parity = np.zeros(2**s.n, dtype=np.int64)
    for k, bit in enumerate(s.bits):
        if bit:
            parity ^= (idx >> (s.n - 1 - k)) & 1
    return (1 - 2 * parity).astype(np.complex128)


def build_oracle(s: HiddenString) -> np.ndarray:
    return np.diag(oracle_phases(s))


def build_oracle_kron(s: HiddenString) -> np.ndarray:
    """Same oracle as a tensor product of ``Z^s_i`` factors."""
    return kron_all(Z if b else I2 for b in s.bits)


def apply_unitary(rho: DensityMatrix, u) -> DensityMatrix:
    u = as_matrix(u)
    if u.shape != rho.mat.shape:
        raise DimensionError(f"unitary {u.shape} does not match state {rho.mat.shape}")
    return DensityMatrix(rho.n, u @ rho.mat @ u.conj().T)


def _qubit_view(rho: DensityMatrix, qubit: int) -> np.ndarray:
    if not 1 <= qubit <= rho.n:
        raise IndexError(f"qubit index {qubit} outside 1..{rho.n}")
    left, right = 2 ** (qubit - 1), 2 ** (rho.n - qubit)
    return rho.mat.reshape(left, 2, right, left, 2, right)


def superoperator(kraus) -> np.ndarray:
    """``S[i, l, j, k] = sum_K K[i, j] conj(K[l, k])`` for a list of 2x2 Kraus operators."""
    return sum(np.einsum("ij,lk->iljk", k, k.conj()) for k in kraus)


def _apply_local_channel(rho: DensityMatrix, qubit: int, kraus) -> DensityMatrix:
    # block (i, l) of the output mixes the four 2x2-indexed blocks of the input
    sup = superoperator(kraus)
    view = _qubit_view(rho, qubit)
    out = np.zeros_like(view)
    for i in range(2):
        for l in range(2):
            acc = out[:, i, :, :, l, :]
            for j in range(2):
                for k in range(2):
                    c = sup[i, l, j, k]
                    if c != 0:
                        acc += c * view[:, j, :, :, k, :]
    return DensityMatrix(rho.n, out.reshape(rho.mat.shape))


def apply_single_qubit_gate(rho: DensityMatrix, qubit: int, g) -> DensityMatrix:
    g = as_matrix(g)
    if g.shape != (2, 2):
        raise DimensionError(f"single-qubit gate must be 2x2, got {g.shape}")
    return _apply_local_channel(rho, qubit, [g])


def depolarizing_kraus(p: float) -> tuple[np.ndarray, ...]:
    p = check_probability(p)
    weights = (1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p)
    return tuple(np.sqrt(w) * P for w, P in zip(weights, PAULIS))


def apply_depolarizing(rho: DensityMatrix, qubit: int, p: float) -> DensityMatrix:
    """Depolarize one qubit via the four Pauli Kraus operators."""
    return _apply_local_channel(rho, qubit, depolarizing_kraus(p))


def apply_depolarizing_mixture(rho: DensityMatrix, qubit: int, p: float) -> DensityMatrix:
    """Convex form ``(1-p) rho + p (Tr_q rho) ⊗ I/2``; independent check on the Kraus path."""
    p = check_probability(p)
    view = _qubit_view(rho, qubit)
    reduced = np.einsum("ajbcjd->abcd", view)
    replaced = reduced[:, None, :, :, None, :] * (I2 / 2)[None, :, None, None, :, None]
    mixed = (1.0 - p) * view + p * replaced
    return DensityMatrix(rho.n, mixed.reshape(rho.mat.shape))


def _hadamard_layer(rho: DensityMatrix) -> DensityMatrix:
    for q in range(1, rho.n + 1):
        rho = apply_single_qubit_gate(rho, q, H)
    return rho


def _noise_layer(rho: DensityMatrix, p: float) -> DensityMatrix:
    for q in range(1, rho.n + 1):
        rho = apply_depolarizing(rho, q, p)
    return rho


def bv_stages(s: HiddenString, p: float) -> Iterator[tuple[str, DensityMatrix]]:
    """Yield ``(label, state)`` after each of the six circuit stages.

    Stage ``k`` equals the tensor product of the per-qubit ``sigma_k`` states.
    """
    p = check_probability(p)
    rho = init_zero_state(s.n)
    rho = _hadamard_layer(rho)
    yield STAGE_LABELS[0], rho
    rho = _noise_layer(rho, p)
    yield STAGE_LABELS[1], rho
    phases = oracle_phases(s)
    # diagonal oracle: U rho U^dagger is an elementwise phase product
    rho = DensityMatrix(s.n, phases[:, None] * rho.mat * phases.conj()[None, :])
    yield STAGE_LABELS[2], rho
    rho = _noise_layer(rho, p)
    yield STAGE_LABELS[3], rho
    rho = _hadamard_layer(rho)
    yield STAGE_LABELS[4], rho
    rho = _noise_layer(rho, p)
    yield STAGE_LABELS[5], rho


def run_bv_full(s: HiddenString, p: float) -> DensityMatrix:
    rho = None
    for _, rho in bv_stages(s, p):
        pass
    return rho


def measure_probability(rho: DensityMatrix, x: HiddenString) -> float:
    """Probability of reading basis state ``x``.

    Values within ``PROB_TOL`` of [0, 1] are clamped; anything further out
    raises, since it signals a broken state rather than rounding.
    """
    if x.n != rho.n:
        raise ValueError(f"bit string of length {x.n} does not match {rho.n}-qubit state")
    value = float(rho.mat[x.basis_index, x.basis_index].real)
    if value < -PROB_TOL or value > 1.0 + PROB_TOL:
        raise ValueError(f"diagonal entry {value} is not a probability")
    return min(max(value, 0.0), 1.0)


def outcome_distribution(rho: DensityMatrix) -> np.ndarray:
    """All computational-basis probabilities, indexed big-endian."""
    diag = np.real(np.diag(rho.mat))
    if diag.min() < -PROB_TOL or diag.max() > 1.0 + PROB_TOL:
        raise ValueError("diagonal entries are not probabilities")
    return np.clip(diag, 0.0, 1.0)


def success_probability_full(s: HiddenString, p: float) -> float:
    return measure_probability(run_bv_full(s, p), s)
