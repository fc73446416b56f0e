"""Dense complex matrix primitives shared by every backend.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` (row-major).
Basis indices are big-endian: qubit 1 is the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 12
MAX_DIM = 2**MAX_QUBITS

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)

PAULIS = (I2, X, Y, Z)


class DimensionError(ValueError):
    """Raised on mismatched or oversized matrix dimensions."""


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b``.

    Raises ``DimensionError`` if either axis of the result would exceed
    ``MAX_DIM``.
    """
    a, b = as_matrix(a), as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > MAX_DIM or cols > MAX_DIM:
        raise DimensionError(f"kron result {rows}x{cols} exceeds cap of {MAX_DIM} per axis")
    return np.kron(a, b)


def kron_all(mats) -> np.ndarray:
    mats = list(mats)
    if not mats:
        raise DimensionError("kron_all needs at least one matrix")
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = kron(out, m)
    return out


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def is_unitary(u, tol: float = 1e-12) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


@dataclass(frozen=True)
class DensityReport:
    hermitian: bool
    unit_trace: bool
    psd: bool
    hermitian_error: float
    trace_error: float
    min_eigenvalue: float
    failures: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.hermitian and self.unit_trace and self.psd


def validate_density(
    a,
    tol: float | None = None,
    *,
    hermitian_tol: float = HERMITIAN_TOL,
    trace_tol: float = TRACE_TOL,
    psd_tol: float = PSD_TOL,
) -> DensityReport:
    """Check the density-matrix axioms and report each one.

    A single ``tol`` overrides all three tolerances. Never raises on a
    failed check; the report carries the failures instead.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"density matrix must be square, got {a.shape}")
    if tol is not None:
        hermitian_tol = trace_tol = psd_tol = tol

    herm_err = float(np.max(np.abs(a - a.conj().T)))
    trace_err = float(abs(np.trace(a) - 1.0))
    # symmetrize so eigvalsh sees an exactly Hermitian input
    min_eig = float(np.linalg.eigvalsh((a + a.conj().T) / 2).min())

    failures = []
    if herm_err > hermitian_tol:
        failures.append("hermitian")
    if trace_err > trace_tol:
        failures.append("unit_trace")
    if min_eig < -psd_tol:
        failures.append("psd")
    return DensityReport(
        hermitian="hermitian" not in failures,
        unit_trace="unit_trace" not in failures,
        psd="psd" not in failures,
        hermitian_error=herm_err,
        trace_error=trace_err,
        min_eigenvalue=min_eig,
        failures=tuple(failures),
    )
