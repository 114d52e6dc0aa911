"""Dense complex linear algebra for few-qubit polarization states.

Matrices are plain ``numpy.ndarray`` objects in the computational basis.
Photon 0 occupies the most significant bit of every basis index, so the
three-photon ket |abc> sits at index 4a + 2b + c.  Every module in this
package shares that convention.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

# Tolerances for the DensityMatrix invariants.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)


class NumericalError(RuntimeError):
    """An eigenvalue iteration or other numeric routine failed to converge."""


def require_finite(m: np.ndarray, name: str = "matrix") -> None:
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the photon-0-most-significant ordering."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    require_finite(a, "kron operand")
    require_finite(b, "kron operand")
    return np.kron(a, b)


def eigvals_hermitian(m: np.ndarray, herm_tol: float = 1e-10) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eigvals_hermitian expects a square matrix")
    dev = np.max(np.abs(m - m.conj().T))
    if dev > herm_tol:
        raise ValueError(f"matrix is not Hermitian (max |m - m^H| = {dev:.3e})")
    try:
        vals = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise NumericalError(f"Hermitian eigensolve failed: {exc}") from exc
    return vals[::-1].copy()


def eigvals_general(m: np.ndarray) -> np.ndarray:
    """Complex eigenvalues of a small general matrix (dimension <= 8)."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eigvals_general expects a square matrix")
    if m.shape[0] > 8:
        raise ValueError("eigvals_general is limited to dimension <= 8")
    require_finite(m, "eigvals_general input")
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration did not converge: {exc}") from exc


def clip_spectrum(vals: np.ndarray, floor: float = PSD_FLOOR) -> np.ndarray:
    """Zero out tiny negative eigenvalues of a nominally PSD spectrum.

    Values in [floor, 0) are rounding noise and become 0.  Anything below
    ``floor`` indicates a genuinely indefinite matrix and raises.
    """
    vals = np.asarray(vals, dtype=np.float64)
    low = vals.min() if vals.size else 0.0
    if low < floor:
        raise NumericalError(f"spectrum has negative eigenvalue {low:.3e} below floor {floor:.1e}")
    return np.where(vals < 0.0, 0.0, vals)


class DensityMatrix:
    """A validated n-qubit density matrix.

    Construction enforces the physical invariants: Hermiticity to 1e-12,
    unit trace to 1e-12, and positive semidefiniteness with eigenvalues
    no lower than -1e-10.
    """

    __slots__ = ("n_qubits", "matrix")

    def __init__(self, n_qubits: int, matrix: np.ndarray):
        dim = 1 << n_qubits
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix for {n_qubits} qubits, got {m.shape}")
        require_finite(m, "density matrix")
        dev = np.max(np.abs(m - m.conj().T))
        if dev > HERMITICITY_TOL:
            raise ValueError(f"density matrix is not Hermitian (max deviation {dev:.3e})")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr:.15g} is not 1")
        low = float(np.linalg.eigvalsh(m).min())
        if low < PSD_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {low:.3e}")
        self.n_qubits = n_qubits
        self.matrix = m

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def __repr__(self) -> str:
        return f"DensityMatrix(n_qubits={self.n_qubits})"


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state over the kept qubits, preserving their relative order."""
    requested = [int(i) for i in keep]
    kept = sorted(requested)
    n = rho.n_qubits
    if not kept:
        raise ValueError("partial_trace needs at least one kept qubit")
    if len(set(kept)) != len(kept):
        raise ValueError(f"kept qubits {requested} contain duplicates")
    if kept[0] < 0 or kept[-1] >= n:
        raise ValueError(f"kept qubits {kept} out of range for {n} qubits")
    kept_set = set(kept)
    t = rho.matrix.reshape([2] * (2 * n))
    # Row axis i carries photon i (MSB first); column axes are offset by n.
    row_sub = list(range(n))
    col_sub = [i if i not in kept_set else i + n for i in range(n)]
    out_sub = kept + [i + n for i in kept]
    reduced = np.einsum(t, row_sub + col_sub, out_sub)
    k = len(kept)
    return DensityMatrix(k, reduced.reshape(1 << k, 1 << k))
