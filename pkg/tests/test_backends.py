import numpy as np
import pytest

from fiberent import backend
from fiberent.states import ghz_state, w_state

ALL = backend.available_backends()
PAIRED = len(ALL) >= 2


def random_amps(rng, n):
    dim = 1 << n
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    # sparsify: channel inputs are few-term superpositions
    mask = rng.random(dim) < 0.5
    if not mask.any():
        mask[0] = True
    v = np.where(mask, v, 0.0)
    return np.ascontiguousarray(v / np.linalg.norm(v))


def test_active_backend_is_listed():
    assert backend.active_backend() in ALL


def test_forced_context_restores():
    before = backend.active_backend()
    with backend.forced("python"):
        assert backend.active_backend() == "python"
    assert backend.active_backend() == before


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        backend.use_backend("fortran")


@pytest.mark.skipif(not PAIRED, reason="only one backend built")
def test_dephase_outer_parity():
    rng = np.random.default_rng(61)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        amps = random_amps(rng, n)
        staus = rng.uniform(-2.5, 2.5, size=n)
        bws = rng.uniform(0.3, 2.0, size=n)
        for corr in (False, True):
            outs = []
            for name in ALL:
                with backend.forced(name):
                    outs.append(backend.dephase_outer(amps, staus, bws, corr))
            assert np.max(np.abs(outs[0] - outs[1])) < 1e-13


@pytest.mark.skipif(not PAIRED, reason="only one backend built")
def test_grid_r_parity():
    rng = np.random.default_rng(62)
    for _ in range(8):
        n = int(rng.integers(2, 5))
        taus = rng.uniform(-2.0, 2.0, size=n)
        bws = rng.uniform(0.4, 1.6, size=n)
        for corr in (False, True):
            outs = []
            for name in ALL:
                with backend.forced(name):
                    outs.append(backend.grid_r(taus, bws, 41, 5.0, corr))
            assert outs[0] == pytest.approx(outs[1], abs=1e-12)


@pytest.mark.skipif(not PAIRED, reason="only one backend built")
def test_grid_pmd_outer_parity():
    rng = np.random.default_rng(63)
    for _ in range(6):
        n = int(rng.integers(2, 4))
        state = ghz_state(n) if rng.random() < 0.5 else w_state(n)
        amps = state.amplitudes
        staus = rng.uniform(-2.0, 2.0, size=n)
        bws = rng.uniform(0.4, 1.6, size=n)
        for corr in (False, True):
            outs = []
            for name in ALL:
                with backend.forced(name):
                    outs.append(backend.grid_pmd_outer(amps, staus, bws, 41, 5.0, corr))
            assert np.max(np.abs(outs[0] - outs[1])) < 1e-12


def test_correlated_equal_delays_are_exactly_lossless():
    # pairwise differences vanish identically, so the damping factor must be
    # exactly 1.0 on every backend; this is what makes the DSF flag exact
    amps = ghz_state(3).amplitudes
    bws = np.array([1.0, 0.8, 1.3])
    bare = amps[0] * np.conj(amps[7])
    for name in ALL:
        with backend.forced(name):
            for tau in (0.7, 2.5, 17.0):
                staus = np.array([tau, tau, tau])
                rho = backend.dephase_outer(amps, staus, bws, True)
                # bit-for-bit: the damping factor must be exactly 1.0
                assert rho[0, 7] == bare
                assert rho[7, 0] == np.conj(bare)


def test_uncorrelated_dephasing_never_amplifies():
    rng = np.random.default_rng(64)
    for name in ALL:
        with backend.forced(name):
            for _ in range(5):
                n = int(rng.integers(2, 4))
                amps = random_amps(rng, n)
                staus = rng.uniform(-3.0, 3.0, size=n)
                bws = rng.uniform(0.3, 2.0, size=n)
                rho = backend.dephase_outer(amps, staus, bws, False)
                bare = np.outer(amps, amps.conj())
                assert np.all(np.abs(rho) <= np.abs(bare) + 1e-15)
