"""Fiber channel models: PMD dephasing and PDL mode filtering.

Each photon of the entangled state travels its own fiber.  PMD delays the
two principal polarization modes by the differential group delay (DGD),
which dephases superposition terms by the spectral overlap R of the photon
wave packets.  PDL attenuates one mode relative to the other, which filters
the amplitudes and requires renormalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .qlinalg import DensityMatrix, NumericalError
from .states import PureState

UNCORRELATED = "uncorrelated"
CORRELATED = "correlated"
PMD = "pmd"
PDL = "pdl"


@dataclass(frozen=True)
class SpectralModel:
    """Photon spectra: independent Gaussians, or Gaussians pinned by a CW pump.

    Under the correlated (CW pump) model the photon frequencies satisfy
    sum(omega_i) = 0, which makes the overlap R depend only on pairwise
    delay differences.
    """

    kind: str
    bandwidths: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in (UNCORRELATED, CORRELATED):
            raise ValueError(f"spectrum kind must be '{UNCORRELATED}' or '{CORRELATED}', got {self.kind!r}")
        bws = tuple(float(b) for b in self.bandwidths)
        if len(bws) < 1:
            raise ValueError("at least one bandwidth required")
        if self.kind == CORRELATED and len(bws) < 2:
            raise ValueError("correlated spectrum needs at least two photons")
        for i, b in enumerate(bws):
            if not (math.isfinite(b) and b > 0.0):
                raise ValueError(f"bandwidths[{i}] must be finite and > 0, got {b!r}")
        object.__setattr__(self, "bandwidths", bws)


@dataclass(frozen=True)
class FiberChannel:
    """Per-photon fiber parameters: DGD magnitude/sign and PDL coefficient/sign."""

    dgd: float = 0.0
    dgd_sign: int = 1
    pdl: float = 0.0
    pdl_sign: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.dgd) and self.dgd >= 0.0):
            raise ValueError(f"dgd must be finite and >= 0, got {self.dgd!r}")
        if not (math.isfinite(self.pdl) and self.pdl >= 0.0):
            raise ValueError(f"pdl must be finite and >= 0, got {self.pdl!r}")
        if self.dgd_sign not in (1, -1):
            raise ValueError(f"dgd_sign must be +1 or -1, got {self.dgd_sign!r}")
        if self.pdl_sign not in (1, -1):
            raise ValueError(f"pdl_sign must be +1 or -1, got {self.pdl_sign!r}")


@dataclass(frozen=True)
class NetworkConfig:
    """One fiber channel per photon plus the shared spectral model."""

    n_qubits: int
    channels: tuple[FiberChannel, ...]
    spectrum: SpectralModel
    effect: str

    def __post_init__(self):
        if self.effect not in (PMD, PDL):
            raise ValueError(f"effect must be '{PMD}' or '{PDL}', got {self.effect!r}")
        if len(self.channels) != self.n_qubits:
            raise ValueError(f"expected {self.n_qubits} channels, got {len(self.channels)}")
        if len(self.spectrum.bandwidths) != self.n_qubits:
            raise ValueError(
                f"expected {self.n_qubits} bandwidths, got {len(self.spectrum.bandwidths)}"
            )
        object.__setattr__(self, "channels", tuple(self.channels))

    def signed_dgds(self) -> np.ndarray:
        return np.array([ch.dgd_sign * ch.dgd for ch in self.channels], dtype=np.float64)

    def signed_pdls(self) -> np.ndarray:
        return np.array([ch.pdl_sign * ch.pdl for ch in self.channels], dtype=np.float64)


def r_uncorrelated(signed_taus, bandwidths) -> float:
    """Overlap of independent Gaussian spectra at per-photon delays.

    Separable: exp(-sum_i bw_i^2 tau_i^2 / 2).  Even in each delay and
    strictly decreasing in each |tau_i|.
    """
    t = np.asarray(signed_taus, dtype=np.float64)
    b = np.asarray(bandwidths, dtype=np.float64)
    if t.shape != b.shape:
        raise ValueError("delay and bandwidth vectors must have equal length")
    return float(np.exp(-0.5 * np.sum(b * b * t * t)))


def r_correlated(signed_taus, bandwidths) -> float:
    """Overlap under the CW-pump constraint sum(omega_i) = 0.

    Depends only on pairwise delay differences, so a common shift of all
    delays leaves it unchanged:
    exp(-[sum_{i<j} bw_i^2 bw_j^2 (tau_i - tau_j)^2] / (2 sum_i bw_i^2)).
    """
    t = np.asarray(signed_taus, dtype=np.float64)
    b = np.asarray(bandwidths, dtype=np.float64)
    if t.shape != b.shape:
        raise ValueError("delay and bandwidth vectors must have equal length")
    n = t.size
    if n < 2:
        raise ValueError("correlated overlap needs at least two photons")
    b2 = b * b
    num = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            diff = t[i] - t[j]
            num += b2[i] * b2[j] * diff * diff
    return float(np.exp(-num / (2.0 * float(b2.sum()))))


def spectral_overlap(spectrum: SpectralModel, signed_taus) -> float:
    """R for the given spectral model at the signed delay vector."""
    if spectrum.kind == CORRELATED:
        return r_correlated(signed_taus, spectrum.bandwidths)
    return r_uncorrelated(signed_taus, spectrum.bandwidths)


def _check_state(state: PureState, config: NetworkConfig) -> None:
    if state.n_qubits != config.n_qubits:
        raise ValueError(f"state has {state.n_qubits} qubits but config expects {config.n_qubits}")


def apply_pmd(state: PureState, config: NetworkConfig) -> DensityMatrix:
    """Dephase a pure state by per-photon DGDs.

    Element (b, b') of the result is c_b c_b'* R(e) with
    e_i = (b_i - b'_i) * sign_i * tau_i, so diagonal entries are untouched
    and equal delays under the correlated spectrum decohere nothing.
    """
    _check_state(state, config)
    if config.effect != PMD:
        raise ValueError(f"apply_pmd requires effect '{PMD}', got {config.effect!r}")
    rho = backend.dephase_outer(
        state.amplitudes,
        config.signed_dgds(),
        config.spectrum.bandwidths,
        config.spectrum.kind == CORRELATED,
    )
    return DensityMatrix(config.n_qubits, rho)


def apply_pdl(state: PureState, config: NetworkConfig) -> DensityMatrix:
    """Filter a pure state by per-photon PDL and renormalize.

    Amplitude c_b is scaled by prod_i exp(sign_i gamma_i (1 - 2 b_i) / 2);
    exponents are normalized by their maximum before exponentiation, so
    coefficients far beyond gamma ~ 300 stay finite.
    """
    _check_state(state, config)
    if config.effect != PDL:
        raise ValueError(f"apply_pdl requires effect '{PDL}', got {config.effect!r}")
    n = config.n_qubits
    dim = 1 << n
    gammas = config.signed_pdls()
    shifts = (n - 1 - np.arange(n))[None, :]
    bits = ((np.arange(dim)[:, None] >> shifts) & 1).astype(np.float64)
    expo = (0.5 - bits) @ gammas
    amps = state.amplitudes
    nz = np.nonzero(amps)[0]
    scaled = np.zeros(dim, dtype=np.complex128)
    scaled[nz] = amps[nz] * np.exp(expo[nz] - expo[nz].max())
    norm = float(np.linalg.norm(scaled))
    if norm == 0.0 or not math.isfinite(norm):
        raise NumericalError("PDL filtering annihilated the state")
    scaled /= norm
    return DensityMatrix(n, np.outer(scaled, scaled.conj()))


def apply_channel(state: PureState, config: NetworkConfig) -> DensityMatrix:
    """Dispatch to apply_pmd or apply_pdl on config.effect."""
    if config.effect == PMD:
        return apply_pmd(state, config)
    return apply_pdl(state, config)
