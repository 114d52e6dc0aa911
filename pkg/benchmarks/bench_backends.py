"""Time the compiled kernels against the numpy fallback.

Runs each kernel on representative workloads under both backends and
prints per-call timings plus the speedup ratio.  The compiled extension
must be built for the comparison; without it only the fallback column is
reported.

Usage: python3 benchmarks/bench_backends.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from fiberent import backend
from fiberent.states import ghz_state, w_state


def _signed(rng, n):
    return rng.uniform(0.3, 1.8, n) * rng.choice([-1.0, 1.0], n)


def workloads():
    rng = np.random.default_rng(7)
    out = []
    for n, label in ((3, "n=3"), (4, "n=4")):
        taus = _signed(rng, n)
        bws = rng.uniform(0.5, 1.5, n)
        amps = ghz_state(n).amplitudes
        out.append((f"dephase_outer {label} ghz", 200,
                    lambda a=amps, t=taus, b=bws: backend.dephase_outer(a, t, b, False)))
        out.append((f"dephase_outer {label} ghz corr", 200,
                    lambda a=amps, t=taus, b=bws: backend.dephase_outer(a, t, b, True)))
    taus3 = _signed(rng, 3)
    bws3 = rng.uniform(0.5, 1.5, 3)
    out.append(("grid_r n=3 81pts", 20,
                lambda: backend.grid_r(taus3, bws3, 81, 6.0, False)))
    out.append(("grid_r n=3 201pts corr", 2,
                lambda: backend.grid_r(taus3, bws3, 201, 6.0, True)))
    w3 = w_state(3).amplitudes
    out.append(("grid_pmd_outer w3 81pts", 5,
                lambda: backend.grid_pmd_outer(w3, taus3, bws3, 81, 6.0, False)))
    out.append(("grid_pmd_outer w3 81pts corr", 5,
                lambda: backend.grid_pmd_outer(w3, taus3, bws3, 81, 6.0, True)))
    return out


def time_call(fn, inner: int, repeat: int) -> float:
    # best-of-repeat wall time per call, in seconds
    best = min(timeit.repeat(fn, number=inner, repeat=repeat))
    return best / inner


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions per workload (default 5)")
    args = parser.parse_args()

    names = backend.available_backends()
    print(f"backends available: {', '.join(names)}")
    if "compiled" not in names:
        print("compiled extension not built; timing the fallback only")

    rows = []
    for label, inner, fn in workloads():
        timings = {}
        for name in names:
            with backend.forced(name):
                fn()  # warm up, and fail fast if a backend misbehaves
                timings[name] = time_call(fn, inner, args.repeat)
        rows.append((label, timings))

    width = max(len(r[0]) for r in rows)
    header = f"{'workload':<{width}}  {'python':>12}"
    if "compiled" in names:
        header += f"  {'compiled':>12}  {'speedup':>8}"
    print()
    print(header)
    print("-" * len(header))
    for label, timings in rows:
        line = f"{label:<{width}}  {timings['python'] * 1e6:>10.1f}us"
        if "compiled" in timings:
            ratio = timings["python"] / timings["compiled"]
            line += f"  {timings['compiled'] * 1e6:>10.1f}us  {ratio:>7.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
