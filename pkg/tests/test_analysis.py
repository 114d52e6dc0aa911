import math

import numpy as np
import pytest

from fiberent.analysis import (
    EsdQuery,
    ScanSpec,
    classify_monotonicity,
    dsf_check,
    esd_threshold,
    expand_bracket,
    sweep,
)
from fiberent.channels import (
    CORRELATED,
    PDL,
    PMD,
    UNCORRELATED,
    FiberChannel,
    NetworkConfig,
    SpectralModel,
)
from fiberent.metrics import witness_closed_form
from fiberent.states import GHZ, W

SQRT_LN2 = 0.8325546111576977
LN4 = 1.3862943611198906


def uniform_network(n, effect, spectrum_kind=UNCORRELATED, dgd=0.0, pdl=0.0,
                    pdl_signs=None):
    signs = pdl_signs or tuple(1 for _ in range(n))
    chans = tuple(FiberChannel(dgd=dgd, pdl=pdl, pdl_sign=s) for s in signs)
    spec = SpectralModel(spectrum_kind, tuple(1.0 for _ in range(n)))
    return NetworkConfig(n_qubits=n, channels=chans, spectrum=spec, effect=effect)


# ---------------------------------------------------------------- scan plumbing

def test_scan_spec_rejects_bad_parameter():
    with pytest.raises(ValueError):
        ScanSpec(parameter="bandwidth")


def test_scan_spec_rejects_duplicate_photons():
    with pytest.raises(ValueError):
        ScanSpec(parameter="dgd", photons=(0, 0))


def test_scan_apply_sets_selected_photons():
    net = uniform_network(3, PMD)
    scan = ScanSpec(parameter="dgd", photons=(1,))
    out = scan.apply(net, 2.0)
    assert [c.dgd for c in out.channels] == [0.0, 2.0, 0.0]
    # untouched fields survive the rebuild
    assert [c.pdl for c in out.channels] == [0.0, 0.0, 0.0]


def test_scan_apply_defaults_to_all_photons():
    net = uniform_network(3, PMD)
    out = ScanSpec(parameter="dgd").apply(net, 1.5)
    assert [c.dgd for c in out.channels] == [1.5, 1.5, 1.5]


def test_scan_apply_rejects_wrong_parameter_for_effect():
    net = uniform_network(3, PMD)
    with pytest.raises(ValueError):
        ScanSpec(parameter="pdl").apply(net, 1.0)


def test_scan_apply_rejects_negative_value():
    net = uniform_network(3, PMD)
    with pytest.raises(ValueError):
        ScanSpec(parameter="dgd").apply(net, -0.5)


def test_scan_apply_rejects_photon_out_of_range():
    net = uniform_network(3, PMD)
    with pytest.raises(ValueError):
        ScanSpec(parameter="dgd", photons=(3,)).apply(net, 1.0)


# ---------------------------------------------------------------- ESD thresholds

def test_esd_threshold_w_pmd_uniform():
    # V crosses zero where exp(-t^2) = 1/2
    net = uniform_network(3, PMD)
    query = EsdQuery(kind=W, base=net, scan=ScanSpec(parameter="dgd"),
                     bracket=(0.0, 2.0))
    t = esd_threshold(query)
    assert t == pytest.approx(SQRT_LN2, abs=1e-8)


def test_esd_threshold_w_pdl_two_channel():
    net = uniform_network(3, PDL)
    query = EsdQuery(kind=W, base=net,
                     scan=ScanSpec(parameter="pdl", photons=(0, 1)),
                     bracket=(0.0, 3.0))
    g = esd_threshold(query)
    assert g == pytest.approx(LN4, abs=1e-8)


def test_esd_threshold_none_for_ghz():
    net = uniform_network(3, PMD)
    query = EsdQuery(kind=GHZ, base=net, scan=ScanSpec(parameter="dgd"),
                     bracket=(0.0, 30.0))
    assert esd_threshold(query) is None


def test_esd_threshold_underflowed_witness_is_not_a_crossing():
    # at dgd 30 on three channels the GHZ witness underflows to -0.0;
    # that is still the negative side, not sudden death
    net = uniform_network(3, PMD)
    v = witness_closed_form(ScanSpec(parameter="dgd").apply(net, 30.0), GHZ)
    assert v == 0.0 and math.copysign(1.0, v) < 0.0
    query = EsdQuery(kind=GHZ, base=net, scan=ScanSpec(parameter="dgd"),
                     bracket=(0.0, 30.0))
    assert esd_threshold(query) is None


def test_esd_threshold_exact_endpoint():
    net = uniform_network(3, PDL)
    scan = ScanSpec(parameter="pdl", photons=(0, 1))
    query = EsdQuery(kind=W, base=net, scan=scan, bracket=(LN4, 5.0))
    assert esd_threshold(query) == LN4


def test_esd_threshold_rejects_bad_bracket():
    net = uniform_network(3, PMD)
    scan = ScanSpec(parameter="dgd")
    for bracket in ((1.0, 1.0), (2.0, 1.0), (-1.0, 1.0)):
        with pytest.raises(ValueError):
            esd_threshold(EsdQuery(kind=W, base=net, scan=scan, bracket=bracket))


def test_expand_bracket_finds_w_crossing():
    net = uniform_network(3, PMD)
    scan = ScanSpec(parameter="dgd")

    def f(t):
        return witness_closed_form(scan.apply(net, t), W)

    bracket = expand_bracket(f)
    assert bracket is not None
    lo, hi = bracket
    assert f(lo) < 0.0 <= f(hi)


def test_expand_bracket_gives_up_for_ghz():
    net = uniform_network(3, PMD)
    scan = ScanSpec(parameter="dgd")

    def f(t):
        return witness_closed_form(scan.apply(net, t), GHZ)

    assert expand_bracket(f) is None


# ---------------------------------------------------------------- DSF detection

def test_dsf_correlated_equal_dgd_ghz():
    net = uniform_network(3, PMD, spectrum_kind=CORRELATED, dgd=2.5)
    res = dsf_check(net, GHZ)
    assert res.is_dsf
    assert res.witness_value == -0.5


def test_dsf_uncorrelated_equal_dgd_ghz_absent():
    net = uniform_network(3, PMD, spectrum_kind=UNCORRELATED, dgd=2.5)
    assert not dsf_check(net, GHZ).is_dsf


def test_dsf_anti_aligned_pdl_ghz():
    # gamma_A = gamma_B + gamma_C with photon 0 anti-aligned
    chans = (FiberChannel(pdl=0.7, pdl_sign=-1), FiberChannel(pdl=0.3),
             FiberChannel(pdl=0.4))
    net = NetworkConfig(3, chans, SpectralModel(UNCORRELATED, (1.0, 1.0, 1.0)), PDL)
    res = dsf_check(net, GHZ)
    assert res.is_dsf
    assert res.witness_value == -0.5


def test_dsf_equal_gamma_w():
    net = uniform_network(3, PDL, pdl=1.7)
    res = dsf_check(net, W)
    assert res.is_dsf
    assert res.witness_value == pytest.approx(-1.0 / 3.0, abs=1e-15)


def test_dsf_equal_gamma_w_needs_all_channels_equal():
    chans = (FiberChannel(pdl=1.7), FiberChannel(pdl=1.7), FiberChannel(pdl=1.0))
    net = NetworkConfig(3, chans, SpectralModel(UNCORRELATED, (1.0, 1.0, 1.0)), PDL)
    assert not dsf_check(net, W).is_dsf


def test_dsf_w_pmd_never_occurs_at_nonzero_delay():
    # correlated-spectrum delays cannot restore the W witness
    net = uniform_network(3, PMD, spectrum_kind=CORRELATED, dgd=1.0)
    assert not dsf_check(net, W).is_dsf


# ---------------------------------------------------------------- sweeps

def test_classify_monotonicity():
    assert classify_monotonicity([1.0, 2.0, 3.0]) == "increasing"
    assert classify_monotonicity([3.0, 1.0, 0.5]) == "decreasing"
    assert classify_monotonicity([1.0, 1.0, 1.0]) == "constant"
    assert classify_monotonicity([1.0, 2.0, 1.5]) == "mixed"
    assert classify_monotonicity([1.0]) == "constant"


def test_sweep_shapes_and_flags():
    net = uniform_network(3, PMD)
    values = np.linspace(0.0, 2.0, 21)
    res = sweep(net, W, ScanSpec(parameter="dgd"), values)
    assert res.parameters.shape == (21,)
    assert res.witness_values.shape == (21,)
    assert len(res.concurrences) == 21
    assert res.monotonicity == "increasing"
    # flags flip exactly once, at the sqrt(ln 2) threshold
    crossings = np.flatnonzero(np.diff(res.esd_flags.astype(int)))
    assert len(crossings) == 1
    t_lo = values[crossings[0]]
    t_hi = values[crossings[0] + 1]
    assert t_lo < SQRT_LN2 < t_hi
    assert bool(res.dsf_flags[0]) and not np.any(res.dsf_flags[1:])


def test_sweep_constant_series_for_correlated_ghz():
    net = uniform_network(3, PMD, spectrum_kind=CORRELATED)
    res = sweep(net, GHZ, ScanSpec(parameter="dgd"), np.linspace(0.0, 3.0, 16))
    assert res.monotonicity == "constant"
    assert np.all(res.witness_values == -0.5)
    assert np.all(res.dsf_flags)


def test_sweep_rejects_unsorted_grid():
    net = uniform_network(3, PMD)
    with pytest.raises(ValueError):
        sweep(net, W, ScanSpec(parameter="dgd"), [0.0, 1.0, 0.5])
    with pytest.raises(ValueError):
        sweep(net, W, ScanSpec(parameter="dgd"), [1.0])
