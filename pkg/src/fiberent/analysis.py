"""Sudden-death thresholds, decoherence-free configurations, and sweeps.

Everything here drives the closed-form metrics, so sweeps stay cheap even
for wide parameter grids.  Agreement between the closed forms and the
assembled density matrices is enforced by the metrics tests.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import math

import numpy as np

from .channels import PDL, PMD, NetworkConfig
from .metrics import pair_concurrences_closed_form, witness_closed_form
from .qlinalg import NumericalError
from .states import witness_a0

DSF_TOL = 1e-10
BISECT_TOL = 1e-10
BISECT_MAX_ITER = 200
MONOTONE_SLACK = 1e-12

# The scanned channel field that actually feeds each effect.
_EFFECT_PARAM = {PMD: "dgd", PDL: "pdl"}


@dataclass(frozen=True)
class ScanSpec:
    """Which channel parameter to scan, and over which photons.

    photons = None scans every channel in lockstep (a uniform scale);
    a tuple scans just those photons while the rest keep their base values.
    """

    parameter: str
    photons: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.parameter not in ("dgd", "pdl"):
            raise ValueError(f"scan parameter must be 'dgd' or 'pdl', got {self.parameter!r}")
        if self.photons is not None:
            pts = tuple(int(p) for p in self.photons)
            if len(pts) == 0:
                raise ValueError("scan photon list must not be empty")
            if len(set(pts)) != len(pts):
                raise ValueError(f"scan photon list has duplicates: {pts}")
            object.__setattr__(self, "photons", pts)

    def resolve_photons(self, n_qubits: int) -> tuple[int, ...]:
        if self.photons is None:
            return tuple(range(n_qubits))
        for p in self.photons:
            if not (0 <= p < n_qubits):
                raise ValueError(f"scan photon {p} out of range for {n_qubits} qubits")
        return self.photons

    def apply(self, config: NetworkConfig, value: float) -> NetworkConfig:
        """Base config with the scanned parameter set to value on the scanned photons."""
        if not (math.isfinite(value) and value >= 0.0):
            raise ValueError(f"scan value must be finite and >= 0, got {value!r}")
        if self.parameter != _EFFECT_PARAM[config.effect]:
            raise ValueError(
                f"scan parameter {self.parameter!r} does not drive effect {config.effect!r}"
            )
        chans = list(config.channels)
        for p in self.resolve_photons(config.n_qubits):
            chans[p] = replace(chans[p], **{self.parameter: float(value)})
        return replace(config, channels=tuple(chans))


@dataclass(frozen=True)
class EsdQuery:
    """Find where the witness crosses zero along a one-parameter scan."""

    kind: str
    base: NetworkConfig
    scan: ScanSpec
    bracket: tuple[float, float]


def _sign(x: float) -> float:
    # a witness that underflows to -0.0 is still on the negative side
    return math.copysign(1.0, x)


def esd_threshold(query: EsdQuery) -> float | None:
    """Bisection root of the closed-form witness over the bracket.

    Returns None when the witness does not change sign on the bracket
    (in particular when it stays negative: no sudden death there).
    Tolerance is 1e-10 in the parameter, capped at 200 iterations.
    """
    lo, hi = (float(query.bracket[0]), float(query.bracket[1]))
    if not (math.isfinite(lo) and math.isfinite(hi)) or not (0.0 <= lo < hi):
        raise ValueError(f"invalid bracket ({lo!r}, {hi!r})")

    def f(t: float) -> float:
        return witness_closed_form(query.scan.apply(query.base, t), query.kind)

    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0 and _sign(flo) > 0.0:
        return lo
    if fhi == 0.0 and _sign(fhi) > 0.0:
        return hi
    if _sign(flo) == _sign(fhi):
        return None
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo <= BISECT_TOL:
            return mid
        fm = f(mid)
        if fm == 0.0 and _sign(fm) > 0.0:
            return mid
        if _sign(fm) == _sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    raise NumericalError("bisection did not reach tolerance within 200 iterations")


def expand_bracket(
    f: Callable[[float], float], hi0: float = 1.0, limit: float = 50.0
) -> tuple[float, float] | None:
    """Grow [0, hi] geometrically until f changes sign; None if it never does."""
    if not (0.0 < hi0 <= limit):
        raise ValueError("need 0 < hi0 <= limit")
    lo = 0.0
    flo = f(lo)
    if flo == 0.0 and _sign(flo) > 0.0:
        return (lo, lo)
    hi = hi0
    while True:
        fhi = f(hi)
        if _sign(fhi) != _sign(flo):
            return (lo, hi)
        if hi >= limit:
            return None
        hi = min(2.0 * hi, limit)


@dataclass(frozen=True)
class DsfResult:
    is_dsf: bool
    witness_value: float
    pure_value: float


def dsf_check(config: NetworkConfig, kind: str) -> DsfResult:
    """Does the configured channel leave the witness at its pure-state value?

    Decoherence-free within |V - V_pure| <= 1e-10.
    """
    v = witness_closed_form(config, kind)
    pure = witness_a0(kind, config.n_qubits) - 1.0
    return DsfResult(is_dsf=abs(v - pure) <= DSF_TOL, witness_value=v, pure_value=pure)


def classify_monotonicity(values: Sequence[float], slack: float = MONOTONE_SLACK) -> str:
    """'increasing', 'decreasing', 'constant', or 'mixed' with rounding slack."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        return "constant"
    diffs = np.diff(arr)
    has_inc = bool(np.any(diffs > slack))
    has_dec = bool(np.any(diffs < -slack))
    if has_inc and has_dec:
        return "mixed"
    if has_inc:
        return "increasing"
    if has_dec:
        return "decreasing"
    return "constant"


@dataclass(frozen=True)
class SweepResult:
    """Closed-form metrics along one scanned parameter."""

    kind: str
    scan: ScanSpec
    parameters: np.ndarray
    witness_values: np.ndarray
    concurrences: tuple[dict[tuple[int, int], float], ...]
    esd_flags: np.ndarray
    dsf_flags: np.ndarray
    monotonicity: str


def sweep(config: NetworkConfig, kind: str, scan: ScanSpec, values) -> SweepResult:
    """Evaluate the closed-form metrics at each scan value (strictly increasing)."""
    params = np.asarray(values, dtype=np.float64)
    if params.ndim != 1 or params.size < 2:
        raise ValueError("sweep needs a 1-D grid with at least two points")
    if not np.all(np.diff(params) > 0.0):
        raise ValueError("sweep grid must be strictly increasing")
    pure = witness_a0(kind, config.n_qubits) - 1.0
    witness = np.empty(params.size)
    conc: list[dict[tuple[int, int], float]] = []
    for k, t in enumerate(params):
        cfg = scan.apply(config, float(t))
        witness[k] = witness_closed_form(cfg, kind)
        conc.append(pair_concurrences_closed_form(cfg, kind))
    return SweepResult(
        kind=kind,
        scan=scan,
        parameters=params,
        witness_values=witness,
        concurrences=tuple(conc),
        esd_flags=witness >= 0.0,
        dsf_flags=np.abs(witness - pure) <= DSF_TOL,
        monotonicity=classify_monotonicity(witness),
    )
