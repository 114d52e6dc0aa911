"""Vectorized numpy kernels: the fallback backend.

Same call signatures as the compiled module ``fiberent._kernels``; the
``fiberent.backend`` module picks one of the two at import time.  Grid
kernels iterate the first frequency axis in fixed order and vectorize the
rest, so results are deterministic run to run.
"""

from __future__ import annotations

import numpy as np


def _bit_table(indices: np.ndarray, n: int) -> np.ndarray:
    """Rows of photon bits for the given basis indices, photon 0 first."""
    shifts = (n - 1 - np.arange(n))[None, :]
    return ((indices[:, None] >> shifts) & 1).astype(np.float64)


def dephase_outer(amps, signed_taus, bandwidths, correlated: bool):
    """Density matrix of a pure state dephased by per-photon delays.

    Element (b, b') is amps[b] * conj(amps[b']) * R(e) with e_i the
    signed delay difference (b_i - b'_i) * signed_taus[i] and R the
    spectral overlap of the chosen pump model.
    """
    amps = np.asarray(amps, dtype=np.complex128)
    staus = np.asarray(signed_taus, dtype=np.float64)
    bws = np.asarray(bandwidths, dtype=np.float64)
    n = staus.size
    dim = 1 << n
    bits = _bit_table(np.arange(dim), n)
    if correlated:
        # Sum_{i<j} b2_i b2_j (e_i - e_j)^2 = e^T L e with the Laplacian-like
        # L = S diag(b2) - b2 b2^T, so log R is a bilinear form in the rows.
        b2 = bws**2
        s = float(b2.sum())
        lap = s * np.diag(b2) - np.outer(b2, b2)
        u = bits * staus
        g = u @ lap @ u.T
        q = np.diag(g).copy()
        logr = (q[:, None] + q[None, :] - 2.0 * g) / (-2.0 * s)
    else:
        wvec = 0.5 * bws**2 * staus**2
        v = bits @ wvec
        g = (bits * wvec) @ bits.T
        logr = -(v[:, None] + v[None, :] - 2.0 * g)
    np.minimum(logr, 0.0, out=logr)  # rounding guard: R never exceeds 1
    np.exp(logr, out=logr)
    rho = np.outer(amps, amps.conj())
    rho *= logr
    return rho


def _midpoint_nodes(points: int, half: float) -> np.ndarray:
    step = 2.0 * half / points
    return -half + step * (np.arange(points) + 0.5)


def _grid_chunks(bws: np.ndarray, points: int, half_width: float, correlated: bool):
    """Yield (weights, omega) slabs of the frequency grid, one per first-axis node.

    omega has one column per photon; under the correlated pump the last
    photon's frequency is fixed to minus the sum of the free ones.
    """
    n = bws.size
    half = half_width * float(bws.max())
    nodes = _midpoint_nodes(points, half)
    n_free = n - 1 if correlated else n
    if n_free < 1:
        raise ValueError("correlated grid needs at least two photons")
    if n_free > 1:
        mesh = np.meshgrid(*([nodes] * (n_free - 1)), indexing="ij")
        inner = np.stack([m.ravel() for m in mesh], axis=1)
        w_inner = np.exp(-0.5 * (inner**2 / bws[1:n_free] ** 2).sum(axis=1))
    else:
        inner = np.zeros((1, 0))
        w_inner = np.ones(1)
    for om0 in nodes:
        lead = np.full((inner.shape[0], 1), om0)
        omega = np.concatenate([lead, inner], axis=1)
        w = np.exp(-0.5 * om0 * om0 / bws[0] ** 2) * w_inner
        if correlated:
            om_last = -omega.sum(axis=1)
            w = w * np.exp(-0.5 * om_last**2 / bws[n - 1] ** 2)
            omega = np.concatenate([omega, om_last[:, None]], axis=1)
        yield w, omega


def grid_r(taus, bandwidths, points: int, half_width: float, correlated: bool) -> float:
    """Spectral overlap by midpoint quadrature on the weighted frequency grid."""
    taus = np.asarray(taus, dtype=np.float64)
    bws = np.asarray(bandwidths, dtype=np.float64)
    acc = 0.0
    norm = 0.0
    for w, omega in _grid_chunks(bws, points, half_width, correlated):
        phase = omega @ taus
        acc += float(np.sum(w * np.cos(phase)))
        norm += float(np.sum(w))
    return acc / norm


def grid_pmd_outer(amps, signed_taus, bandwidths, points: int, half_width: float, correlated: bool):
    """Brute-force dephased density matrix: apply per-frequency phases, then average.

    Independent of ``dephase_outer``: no overlap function is ever formed;
    each grid point contributes w * v v^dagger with v the phased amplitudes.
    """
    amps = np.asarray(amps, dtype=np.complex128)
    staus = np.asarray(signed_taus, dtype=np.float64)
    bws = np.asarray(bandwidths, dtype=np.float64)
    n = staus.size
    dim = 1 << n
    nz = np.nonzero(amps)[0]
    coeff = _bit_table(nz, n) * staus  # (K, n) phase coefficients
    c = amps[nz]
    acc = np.zeros((nz.size, nz.size), dtype=np.complex128)
    norm = 0.0
    for w, omega in _grid_chunks(bws, points, half_width, correlated):
        z = np.exp(1j * (omega @ coeff.T))
        z *= c
        acc += (w[:, None] * z).T @ z.conj()
        norm += float(np.sum(w))
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[np.ix_(nz, nz)] = acc / norm
    return rho
