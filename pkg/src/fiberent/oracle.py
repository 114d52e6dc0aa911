"""Brute-force cross-checks for the analytic channel formulas.

These routines never share a code path with the closed forms they verify:
the grid kernels apply per-frequency phases and integrate numerically,
and the X-state concurrence is the textbook two-term expression.  They
back the test suite and the ``oracle-compare`` CLI command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .channels import CORRELATED, PMD, NetworkConfig
from .qlinalg import DensityMatrix
from .states import PureState

MIN_POINTS = 41
MIN_HALF_WIDTH = 5.0
MAX_GRID_QUBITS = 4

DEFAULT_POINTS = 201
DEFAULT_HALF_WIDTH = 6.0


@dataclass(frozen=True)
class FrequencyGrid:
    """Midpoint quadrature grid: odd point count, half-width in units of max bandwidth."""

    points: int = DEFAULT_POINTS
    half_width: float = DEFAULT_HALF_WIDTH
    correlated: bool = False

    def __post_init__(self):
        if not isinstance(self.points, int) or self.points < MIN_POINTS or self.points % 2 == 0:
            raise ValueError(f"points must be an odd integer >= {MIN_POINTS}, got {self.points!r}")
        if not (math.isfinite(self.half_width) and self.half_width >= MIN_HALF_WIDTH):
            raise ValueError(f"half_width must be >= {MIN_HALF_WIDTH}, got {self.half_width!r}")


def grid_r(taus, bandwidths, grid: FrequencyGrid | None = None) -> float:
    """Spectral overlap by direct quadrature of the weighted phase integral."""
    if grid is None:
        grid = FrequencyGrid()
    t = np.asarray(taus, dtype=np.float64)
    b = np.asarray(bandwidths, dtype=np.float64)
    if t.shape != b.shape or t.ndim != 1:
        raise ValueError("delay and bandwidth vectors must have equal length")
    if grid.correlated and t.size < 2:
        raise ValueError("correlated grid needs at least two photons")
    return backend.grid_r(t, b, grid.points, grid.half_width, grid.correlated)


def grid_apply_pmd(state: PureState, config: NetworkConfig, grid: FrequencyGrid | None = None) -> DensityMatrix:
    """apply_pmd recomputed the slow way: phase every grid frequency, then average.

    The grid dimension grows exponentially, so this is limited to 4 photons.
    """
    if config.effect != PMD:
        raise ValueError("grid_apply_pmd requires a PMD config")
    if state.n_qubits != config.n_qubits:
        raise ValueError("state and config qubit counts differ")
    if config.n_qubits > MAX_GRID_QUBITS:
        raise ValueError(f"grid oracle is limited to {MAX_GRID_QUBITS} photons")
    correlated = config.spectrum.kind == CORRELATED
    if grid is None:
        grid = FrequencyGrid(correlated=correlated)
    if grid.correlated != correlated:
        raise ValueError("grid.correlated does not match the config spectrum")
    rho = backend.grid_pmd_outer(
        state.amplitudes,
        config.signed_dgds(),
        config.spectrum.bandwidths,
        grid.points,
        grid.half_width,
        correlated,
    )
    return DensityMatrix(config.n_qubits, rho)


def xstate_concurrence(rho2: DensityMatrix) -> float:
    """Closed-form concurrence for X-shaped two-qubit states.

    Requires every entry outside the diagonal and anti-diagonal to vanish
    (tolerance 1e-12): C = 2 max(0, |rho_03| - sqrt(rho_11 rho_22),
    |rho_12| - sqrt(rho_00 rho_33)).
    """
    if rho2.n_qubits != 2:
        raise ValueError("xstate_concurrence is defined for two-qubit states")
    m = rho2.matrix
    mask = np.ones((4, 4), dtype=bool)
    for i in range(4):
        mask[i, i] = False
        mask[i, 3 - i] = False
    off = float(np.max(np.abs(m[mask])))
    if off > 1e-12:
        raise ValueError(f"matrix is not X-shaped (off-pattern magnitude {off:.3e})")
    d = [max(float(m[i, i].real), 0.0) for i in range(4)]
    inner = abs(m[0, 3]) - math.sqrt(d[1] * d[2])
    outer = abs(m[1, 2]) - math.sqrt(d[0] * d[3])
    return 2.0 * max(0.0, inner, outer)
