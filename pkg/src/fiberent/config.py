"""JSON run-configuration parsing for the CLI.

The schema is documented in README.md; validation errors carry the JSON
path of the offending field and map to CLI exit code 2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .analysis import ScanSpec
from .channels import CORRELATED, PDL, PMD, UNCORRELATED, FiberChannel, NetworkConfig, SpectralModel
from .oracle import FrequencyGrid
from .states import GHZ, MAX_QUBITS, MIN_QUBITS, W


class ConfigError(ValueError):
    """Invalid run configuration."""


def _expect_dict(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected an object, got {type(value).__name__}")
    return value


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(f"{path}: expected an array, got {type(value).__name__}")
    return value


def _get(d: dict, key: str, path: str):
    if key not in d:
        raise ConfigError(f"{path}.{key}: required field is missing")
    return d[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {type(value).__name__}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(f"{path}: must be finite")
    return v


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {type(value).__name__}")
    return value


def _string(value, path: str, allowed: tuple[str, ...] | None = None) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{path}: expected a string, got {type(value).__name__}")
    if allowed is not None and value not in allowed:
        raise ConfigError(f"{path}: must be one of {list(allowed)}, got {value!r}")
    return value


def _parse_spectrum(raw, n_qubits: int, path: str) -> SpectralModel:
    d = _expect_dict(raw, path)
    kind = _string(_get(d, "kind", path), f"{path}.kind", (UNCORRELATED, CORRELATED))
    bws_raw = _expect_list(_get(d, "bandwidths", path), f"{path}.bandwidths")
    if len(bws_raw) != n_qubits:
        raise ConfigError(f"{path}.bandwidths: expected {n_qubits} entries, got {len(bws_raw)}")
    bws = tuple(_number(b, f"{path}.bandwidths[{i}]") for i, b in enumerate(bws_raw))
    try:
        return SpectralModel(kind=kind, bandwidths=bws)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_channels(raw, n_qubits: int, path: str) -> tuple[FiberChannel, ...]:
    lst = _expect_list(raw, path)
    if len(lst) != n_qubits:
        raise ConfigError(f"{path}: expected {n_qubits} entries for n_qubits={n_qubits}, got {len(lst)}")
    known = {"dgd", "dgd_sign", "pdl", "pdl_sign"}
    chans = []
    for i, item in enumerate(lst):
        d = _expect_dict(item, f"{path}[{i}]")
        extra = set(d) - known
        if extra:
            raise ConfigError(f"{path}[{i}]: unknown fields {sorted(extra)}")
        kwargs = {}
        for key in ("dgd", "pdl"):
            if key in d:
                kwargs[key] = _number(d[key], f"{path}[{i}].{key}")
        for key in ("dgd_sign", "pdl_sign"):
            if key in d:
                kwargs[key] = _integer(d[key], f"{path}[{i}].{key}")
        try:
            chans.append(FiberChannel(**kwargs))
        except ValueError as exc:
            raise ConfigError(f"{path}[{i}]: {exc}") from exc
    return tuple(chans)


def _parse_photons(raw, path: str) -> tuple[int, ...] | None:
    if raw is None:
        return None
    lst = _expect_list(raw, path)
    return tuple(_integer(p, f"{path}[{i}]") for i, p in enumerate(lst))


def _parse_scan(d: dict, effect: str, n_qubits: int, path: str) -> ScanSpec:
    parameter = _string(_get(d, "parameter", path), f"{path}.parameter", ("dgd", "pdl"))
    photons = _parse_photons(d.get("photons"), f"{path}.photons")
    try:
        scan = ScanSpec(parameter=parameter, photons=photons)
        scan.resolve_photons(n_qubits)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    expected = "dgd" if effect == PMD else "pdl"
    if parameter != expected:
        raise ConfigError(
            f"{path}.parameter: {parameter!r} does not drive effect {effect!r} (use {expected!r})"
        )
    return scan


@dataclass(frozen=True)
class SweepSeries:
    label: str
    scan: ScanSpec
    network: NetworkConfig


@dataclass(frozen=True)
class SweepSettings:
    start: float
    stop: float
    points: int
    series: tuple[SweepSeries, ...]


@dataclass(frozen=True)
class EsdSettings:
    scan: ScanSpec
    lo: float
    hi: float


@dataclass(frozen=True)
class OracleSettings:
    grid: FrequencyGrid


@dataclass(frozen=True)
class RunConfig:
    kind: str
    network: NetworkConfig
    sweep: SweepSettings | None = None
    esd: EsdSettings | None = None
    oracle: OracleSettings | None = None


_TOP_FIELDS = {"state", "n_qubits", "effect", "spectrum", "channels", "sweep", "esd", "oracle"}


def parse_config(doc: dict) -> RunConfig:
    d = _expect_dict(doc, "config")
    extra = set(d) - _TOP_FIELDS
    if extra:
        raise ConfigError(f"config: unknown fields {sorted(extra)}")
    kind = _string(_get(d, "state", "config"), "config.state", (GHZ, W))
    n = _integer(_get(d, "n_qubits", "config"), "config.n_qubits")
    if not (MIN_QUBITS <= n <= MAX_QUBITS):
        raise ConfigError(f"config.n_qubits: must be in [{MIN_QUBITS}, {MAX_QUBITS}], got {n}")
    effect = _string(_get(d, "effect", "config"), "config.effect", (PMD, PDL))
    spectrum = _parse_spectrum(_get(d, "spectrum", "config"), n, "config.spectrum")
    channels = _parse_channels(_get(d, "channels", "config"), n, "config.channels")
    try:
        network = NetworkConfig(n_qubits=n, channels=channels, spectrum=spectrum, effect=effect)
    except ValueError as exc:
        raise ConfigError(f"config: {exc}") from exc

    sweep = _parse_sweep(d.get("sweep"), network, "config.sweep") if d.get("sweep") is not None else None
    esd = _parse_esd(d.get("esd"), network, "config.esd") if d.get("esd") is not None else None
    oracle = _parse_oracle(d.get("oracle"), "config.oracle") if d.get("oracle") is not None else None
    return RunConfig(kind=kind, network=network, sweep=sweep, esd=esd, oracle=oracle)


def _parse_sweep(raw, network: NetworkConfig, path: str) -> SweepSettings:
    d = _expect_dict(raw, path)
    known = {"parameter", "photons", "start", "stop", "points", "series"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"{path}: unknown fields {sorted(extra)}")
    start = _number(_get(d, "start", path), f"{path}.start")
    stop = _number(_get(d, "stop", path), f"{path}.stop")
    points = _integer(_get(d, "points", path), f"{path}.points")
    if points < 2:
        raise ConfigError(f"{path}.points: need at least 2, got {points}")
    if not (0.0 <= start < stop):
        raise ConfigError(f"{path}: need 0 <= start < stop, got start={start}, stop={stop}")
    base_scan = _parse_scan(d, network.effect, network.n_qubits, path)

    series_raw = d.get("series")
    series: list[SweepSeries] = []
    if series_raw is None:
        series.append(SweepSeries(label="sweep", scan=base_scan, network=network))
    else:
        lst = _expect_list(series_raw, f"{path}.series")
        if not lst:
            raise ConfigError(f"{path}.series: must not be empty")
        labels = set()
        for i, item in enumerate(lst):
            spath = f"{path}.series[{i}]"
            sd = _expect_dict(item, spath)
            s_known = {"label", "parameter", "photons", "spectrum", "channels"}
            s_extra = set(sd) - s_known
            if s_extra:
                raise ConfigError(f"{spath}: unknown fields {sorted(s_extra)}")
            label = _string(_get(sd, "label", spath), f"{spath}.label")
            if not label or not all(c.isalnum() or c in "-_" for c in label):
                raise ConfigError(f"{spath}.label: use only letters, digits, '-' and '_'")
            if label in labels:
                raise ConfigError(f"{spath}.label: duplicate label {label!r}")
            labels.add(label)
            net = network
            if "spectrum" in sd:
                net_spectrum = _parse_spectrum(sd["spectrum"], net.n_qubits, f"{spath}.spectrum")
                net = NetworkConfig(net.n_qubits, net.channels, net_spectrum, net.effect)
            if "channels" in sd:
                net_channels = _parse_channels(sd["channels"], net.n_qubits, f"{spath}.channels")
                net = NetworkConfig(net.n_qubits, net_channels, net.spectrum, net.effect)
            scan_dict = {
                "parameter": sd.get("parameter", base_scan.parameter),
                "photons": sd.get("photons", list(base_scan.photons) if base_scan.photons else None),
            }
            scan = _parse_scan(scan_dict, net.effect, net.n_qubits, spath)
            series.append(SweepSeries(label=label, scan=scan, network=net))
    return SweepSettings(start=start, stop=stop, points=points, series=tuple(series))


def _parse_esd(raw, network: NetworkConfig, path: str) -> EsdSettings:
    d = _expect_dict(raw, path)
    known = {"parameter", "photons", "lo", "hi"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"{path}: unknown fields {sorted(extra)}")
    lo = _number(_get(d, "lo", path), f"{path}.lo")
    hi = _number(_get(d, "hi", path), f"{path}.hi")
    if not (0.0 <= lo < hi):
        raise ConfigError(f"{path}: need 0 <= lo < hi, got lo={lo}, hi={hi}")
    scan = _parse_scan(d, network.effect, network.n_qubits, path)
    return EsdSettings(scan=scan, lo=lo, hi=hi)


def _parse_oracle(raw, path: str) -> OracleSettings:
    d = _expect_dict(raw, path)
    known = {"points", "half_width"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"{path}: unknown fields {sorted(extra)}")
    kwargs = {}
    if "points" in d:
        kwargs["points"] = _integer(d["points"], f"{path}.points")
    if "half_width" in d:
        kwargs["half_width"] = _number(d["half_width"], f"{path}.half_width")
    try:
        return OracleSettings(grid=FrequencyGrid(**kwargs))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_config(path: str) -> RunConfig:
    """Read and validate a JSON run configuration from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(doc)
