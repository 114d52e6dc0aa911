"""Entangled input states and the witness operators that certify them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qlinalg import DensityMatrix

# State families.  "ghz" covers the Bell pair at n = 2.
GHZ = "ghz"
W = "w"

MIN_QUBITS = 2
MAX_QUBITS = 12

NORM_TOL = 1e-12


def _check_n(n: int) -> None:
    if not isinstance(n, int) or not (MIN_QUBITS <= n <= MAX_QUBITS):
        raise ValueError(f"qubit count must be an integer in [{MIN_QUBITS}, {MAX_QUBITS}], got {n!r}")


@dataclass(frozen=True)
class PureState:
    """A normalized n-qubit pure state in the computational basis.

    Amplitude ordering follows the package convention: photon 0 is the
    most significant bit of the basis index.
    """

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_n(self.n_qubits)
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes contain non-finite entries")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm:.15g} is not 1")
        object.__setattr__(self, "amplitudes", amps)

    def density(self) -> DensityMatrix:
        """|psi><psi| as a validated density matrix."""
        return DensityMatrix(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


def ghz_state(n: int) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2); the Bell pair when n = 2."""
    _check_n(n)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return PureState(n, amps)


def w_state(n: int) -> PureState:
    """Symmetric single-excitation superposition over all n photons."""
    _check_n(n)
    amps = np.zeros(1 << n, dtype=np.complex128)
    c = 1.0 / math.sqrt(n)
    for k in range(n):
        # photon k excited: bit n-1-k of the index (photon 0 is the MSB)
        amps[1 << (n - 1 - k)] = c
    return PureState(n, amps)


def witness_a0(kind: str, n: int) -> float:
    """Offset of the projector witness a0*I - |target><target|."""
    _check_n(n)
    if kind == GHZ:
        return 0.5
    if kind == W:
        return (n - 1) / n
    raise ValueError(f"unknown state kind {kind!r}")


@dataclass(frozen=True)
class WitnessSpec:
    """A projector entanglement witness a0*I - |target><target|."""

    kind: str
    n_qubits: int
    a0: float
    target: PureState


def witness_spec(kind: str, n: int) -> WitnessSpec:
    """Witness for the ideal GHZ or W state on n photons.

    The expectation value on the pure target is a0 - 1: -1/2 for GHZ
    and -1/n for W.  Nonnegative values certify nothing (ESD regime).
    """
    a0 = witness_a0(kind, n)
    target = ghz_state(n) if kind == GHZ else w_state(n)
    return WitnessSpec(kind=kind, n_qubits=n, a0=a0, target=target)
