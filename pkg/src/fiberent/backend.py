"""Kernel backend selection: compiled extension or numpy fallback.

The Cython extension ``fiberent._kernels`` is preferred when importable.
Set ``FIBERENT_BACKEND=python`` to force the numpy kernels, or
``FIBERENT_BACKEND=compiled`` to fail loudly when the extension is absent.
"""

from __future__ import annotations

import contextlib
import os

import numpy as np

from . import _kernels_py

_impls = {"python": _kernels_py}
try:
    from . import _kernels  # type: ignore[attr-defined]

    _impls["compiled"] = _kernels
except ImportError:
    pass

_env = os.environ.get("FIBERENT_BACKEND", "")
if _env:
    if _env not in ("python", "compiled"):
        raise ImportError(f"FIBERENT_BACKEND must be 'python' or 'compiled', got {_env!r}")
    if _env not in _impls:
        raise ImportError("FIBERENT_BACKEND=compiled but fiberent._kernels is not built")
    _active = _env
else:
    _active = "compiled" if "compiled" in _impls else "python"


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_impls))


def active_backend() -> str:
    return _active


def use_backend(name: str) -> None:
    global _active
    if name not in _impls:
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    _active = name


@contextlib.contextmanager
def forced(name: str):
    """Temporarily run on the named backend (tests and benchmarks)."""
    prev = _active
    use_backend(name)
    try:
        yield
    finally:
        use_backend(prev)


def _f64(x) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


def _c128(x) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(x, dtype=np.complex128))


def dephase_outer(amps, signed_taus, bandwidths, correlated: bool) -> np.ndarray:
    return _impls[_active].dephase_outer(_c128(amps), _f64(signed_taus), _f64(bandwidths), bool(correlated))


def grid_r(taus, bandwidths, points: int, half_width: float, correlated: bool) -> float:
    return float(_impls[_active].grid_r(_f64(taus), _f64(bandwidths), int(points), float(half_width), bool(correlated)))


def grid_pmd_outer(amps, signed_taus, bandwidths, points: int, half_width: float, correlated: bool) -> np.ndarray:
    return _impls[_active].grid_pmd_outer(
        _c128(amps), _f64(signed_taus), _f64(bandwidths), int(points), float(half_width), bool(correlated)
    )
