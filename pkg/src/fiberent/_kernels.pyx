# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: dephasing assembly and frequency-grid quadrature.

Call signatures mirror ``fiberent._kernels_py``.  Loops accumulate in a
fixed order, so results are deterministic run to run.
"""

import numpy as np

from libc.math cimport cos, exp, sin

def dephase_outer(double complex[::1] amps, double[::1] signed_taus,
                  double[::1] bandwidths, bint correlated):
    cdef Py_ssize_t n = signed_taus.shape[0]
    cdef Py_ssize_t dim = amps.shape[0]
    if n > 16:
        raise ValueError("dephase_outer supports at most 16 photons")
    if dim != (1 << n) or bandwidths.shape[0] != n:
        raise ValueError("inconsistent amplitude/channel lengths")
    out_arr = np.empty((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double b2[16]
    cdef double wv[16]
    cdef double e[16]
    cdef double s2 = 0.0
    cdef double lr, diff
    cdef Py_ssize_t r, c, i, j, x
    cdef int br, bc
    cdef double complex prod
    for i in range(n):
        b2[i] = bandwidths[i] * bandwidths[i]
        wv[i] = 0.5 * b2[i] * signed_taus[i] * signed_taus[i]
        s2 += b2[i]
    for r in range(dim):
        for c in range(r, dim):
            if correlated:
                for i in range(n):
                    br = (r >> (n - 1 - i)) & 1
                    bc = (c >> (n - 1 - i)) & 1
                    e[i] = (br - bc) * signed_taus[i]
                lr = 0.0
                for i in range(n):
                    for j in range(i + 1, n):
                        diff = e[i] - e[j]
                        lr += b2[i] * b2[j] * diff * diff
                lr = -lr / (2.0 * s2)
            else:
                lr = 0.0
                x = r ^ c
                for i in range(n):
                    if (x >> (n - 1 - i)) & 1:
                        lr -= wv[i]
            prod = amps[r] * amps[c].conjugate() * exp(lr)
            out[r, c] = prod
            if c != r:
                out[c, r] = prod.conjugate()
    return out_arr


def grid_r(double[::1] taus, double[::1] bws, Py_ssize_t points,
           double half_width, bint correlated):
    cdef Py_ssize_t n = taus.shape[0]
    cdef Py_ssize_t n_free = n - 1 if correlated else n
    if n_free < 1:
        raise ValueError("correlated grid needs at least two photons")
    if n_free > 7:
        raise ValueError("grid dimension too large")
    cdef double bmax = 0.0
    cdef Py_ssize_t i, k, a, o
    for i in range(n):
        if bws[i] > bmax:
            bmax = bws[i]
    cdef double half = half_width * bmax
    cdef double step = 2.0 * half / points
    nodes_arr = -half + step * (np.arange(points, dtype=np.float64) + 0.5)
    cdef double[::1] nodes = nodes_arr
    wt_arr = np.empty((n_free, points), dtype=np.float64)
    cdef double[:, ::1] wt = wt_arr
    for a in range(n_free):
        for k in range(points):
            wt[a, k] = exp(-0.5 * nodes[k] * nodes[k] / (bws[a] * bws[a]))
    cdef double b2last = bws[n - 1] * bws[n - 1]
    cdef double tau_in = taus[n_free - 1]
    cdef double tau_con = taus[n - 1]
    cdef Py_ssize_t n_out = n_free - 1
    cdef Py_ssize_t digit[8]
    for a in range(8):
        digit[a] = 0
    cdef Py_ssize_t outer_total = 1
    for a in range(n_out):
        outer_total *= points
    cdef double acc = 0.0, norm = 0.0
    cdef double wout, phout, sumout, w, ph, om, om_n
    for o in range(outer_total):
        wout = 1.0
        phout = 0.0
        sumout = 0.0
        for a in range(n_out):
            k = digit[a]
            wout *= wt[a, k]
            phout += nodes[k] * taus[a]
            sumout += nodes[k]
        for k in range(points):
            om = nodes[k]
            w = wout * wt[n_free - 1, k]
            ph = phout + om * tau_in
            if correlated:
                om_n = -(sumout + om)
                w *= exp(-0.5 * om_n * om_n / b2last)
                ph += om_n * tau_con
            acc += w * cos(ph)
            norm += w
        a = n_out - 1
        while a >= 0:
            digit[a] += 1
            if digit[a] < points:
                break
            digit[a] = 0
            a -= 1
    return acc / norm


def grid_pmd_outer(double complex[::1] amps, double[::1] signed_taus,
                   double[::1] bws, Py_ssize_t points, double half_width,
                   bint correlated):
    cdef Py_ssize_t n = signed_taus.shape[0]
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t n_free = n - 1 if correlated else n
    if n_free < 1:
        raise ValueError("correlated grid needs at least two photons")
    if dim > 16:
        raise ValueError("grid_pmd_outer supports at most 4 photons")
    if dim != (1 << n) or bws.shape[0] != n:
        raise ValueError("inconsistent amplitude/channel lengths")

    nz_list = [i for i in range(dim) if amps[i] != 0]
    cdef Py_ssize_t kk = len(nz_list)
    cdef Py_ssize_t nz[16]
    cdef double coeff[16][16]
    cdef Py_ssize_t s, t, i, k, a, o
    for s in range(kk):
        nz[s] = nz_list[s]
        for i in range(n):
            coeff[s][i] = ((nz[s] >> (n - 1 - i)) & 1) * signed_taus[i]

    cdef double bmax = 0.0
    for i in range(n):
        if bws[i] > bmax:
            bmax = bws[i]
    cdef double half = half_width * bmax
    cdef double step = 2.0 * half / points
    nodes_arr = -half + step * (np.arange(points, dtype=np.float64) + 0.5)
    cdef double[::1] nodes = nodes_arr
    wt_arr = np.empty((n_free, points), dtype=np.float64)
    cdef double[:, ::1] wt = wt_arr
    for a in range(n_free):
        for k in range(points):
            wt[a, k] = exp(-0.5 * nodes[k] * nodes[k] / (bws[a] * bws[a]))
    cdef double b2last = bws[n - 1] * bws[n - 1]

    cdef double accr[16][16]
    cdef double acci[16][16]
    cdef double zr[16]
    cdef double zi[16]
    cdef double phst[16]
    for s in range(kk):
        for t in range(kk):
            accr[s][t] = 0.0
            acci[s][t] = 0.0

    cdef Py_ssize_t n_out = n_free - 1
    cdef Py_ssize_t digit[8]
    for a in range(8):
        digit[a] = 0
    cdef Py_ssize_t outer_total = 1
    for a in range(n_out):
        outer_total *= points
    cdef double norm = 0.0
    cdef double wout, sumout, w, om, om_n, ph
    for o in range(outer_total):
        wout = 1.0
        sumout = 0.0
        for s in range(kk):
            phst[s] = 0.0
        for a in range(n_out):
            k = digit[a]
            om = nodes[k]
            wout *= wt[a, k]
            sumout += om
            for s in range(kk):
                phst[s] += om * coeff[s][a]
        for k in range(points):
            om = nodes[k]
            w = wout * wt[n_free - 1, k]
            if correlated:
                om_n = -(sumout + om)
                w *= exp(-0.5 * om_n * om_n / b2last)
                for s in range(kk):
                    ph = phst[s] + om * coeff[s][n_free - 1] + om_n * coeff[s][n - 1]
                    zr[s] = cos(ph)
                    zi[s] = sin(ph)
            else:
                for s in range(kk):
                    ph = phst[s] + om * coeff[s][n_free - 1]
                    zr[s] = cos(ph)
                    zi[s] = sin(ph)
            for s in range(kk):
                for t in range(s, kk):
                    accr[s][t] += w * (zr[s] * zr[t] + zi[s] * zi[t])
                    acci[s][t] += w * (zi[s] * zr[t] - zr[s] * zi[t])
            norm += w
        a = n_out - 1
        while a >= 0:
            digit[a] += 1
            if digit[a] < points:
                break
            digit[a] = 0
            a -= 1

    out_arr = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double complex zval
    for s in range(kk):
        for t in range(s, kk):
            zval = (accr[s][t] + 1j * acci[s][t]) / norm
            zval = amps[nz[s]] * amps[nz[t]].conjugate() * zval
            out[nz[s], nz[t]] = zval
            if t != s:
                out[nz[t], nz[s]] = zval.conjugate()
    return out_arr
