"""Command-line front end: simulate, sweep, esd, dsf-check, oracle-compare."""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import analysis, metrics, oracle
from .channels import CORRELATED, PMD, apply_channel, apply_pmd
from .config import ConfigError, RunConfig, load_config
from .qlinalg import NumericalError
from .states import GHZ, PureState, ghz_state, w_state, witness_a0, witness_spec

ORACLE_TOL = 1e-6


def _fmt(x: float) -> str:
    # 12 significant digits; +0.0 collapses negative zero
    return format(float(x) + 0.0, ".12g")


def _flag(b) -> str:
    return "1" if b else "0"


def _make_state(kind: str, n: int) -> PureState:
    return ghz_state(n) if kind == GHZ else w_state(n)


def _pair_columns(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _say(args, text: str) -> None:
    if not args.quiet:
        print(text)


# ---------------------------------------------------------------- commands

def _row(witness: float, fidelity: float, conc: dict, pairs, esd: bool, dsf: bool) -> list[str]:
    cells = [_fmt(witness), _fmt(-witness), _fmt(fidelity)]
    cells += [_fmt(conc[p]) for p in pairs]
    cells += [_flag(esd), _flag(dsf)]
    return cells


def _header(pairs, with_param: bool) -> str:
    cols = ["param"] if with_param else []
    cols += ["witness", "neg_witness", "fidelity"]
    cols += [f"C_{i}{j}" for i, j in pairs]
    cols += ["esd", "dsf"]
    return ",".join(cols)


def cmd_simulate(cfg: RunConfig, args) -> int:
    state = _make_state(cfg.kind, cfg.network.n_qubits)
    rho = apply_channel(state, cfg.network)
    report = metrics.evaluate(rho, witness_spec(cfg.kind, cfg.network.n_qubits))
    pure = witness_a0(cfg.kind, cfg.network.n_qubits) - 1.0
    dsf = abs(report.witness_value - pure) <= analysis.DSF_TOL
    pairs = _pair_columns(cfg.network.n_qubits)

    _say(args, f"state: {cfg.kind}  photons: {cfg.network.n_qubits}  effect: {cfg.network.effect}")
    _say(args, f"witness: {_fmt(report.witness_value)}")
    _say(args, f"neg_witness: {_fmt(-report.witness_value)}")
    _say(args, f"fidelity: {_fmt(report.fidelity)}")
    for i, j in pairs:
        _say(args, f"C_{i}{j}: {_fmt(report.pair_concurrences[(i, j)])}")
    _say(args, f"esd: {'yes' if report.esd_flag else 'no'}")
    _say(args, f"dsf: {'yes' if dsf else 'no'}")

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_header(pairs, with_param=False) + "\n")
            cells = _row(report.witness_value, report.fidelity,
                         report.pair_concurrences, pairs, report.esd_flag, dsf)
            fh.write(",".join(cells) + "\n")
        _say(args, f"wrote {args.out}")
    return 0


def _series_path(out: str, label: str, multi: bool) -> str:
    if not multi:
        return out
    stem, ext = os.path.splitext(out)
    return f"{stem}_{label}{ext or '.csv'}"


def cmd_sweep(cfg: RunConfig, args) -> int:
    if cfg.sweep is None:
        raise ConfigError("config.sweep: required for the sweep command")
    sw = cfg.sweep
    values = np.linspace(sw.start, sw.stop, sw.points)
    pairs = _pair_columns(cfg.network.n_qubits)
    multi = len(sw.series) > 1
    svg_series = []
    for series in sw.series:
        result = analysis.sweep(series.network, cfg.kind, series.scan, values)
        a0 = witness_a0(cfg.kind, series.network.n_qubits)
        path = _series_path(args.out, series.label, multi)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_header(pairs, with_param=True) + "\n")
            for k in range(result.parameters.size):
                v = float(result.witness_values[k])
                cells = [_fmt(result.parameters[k])]
                cells += _row(v, a0 - v, result.concurrences[k], pairs,
                              bool(result.esd_flags[k]), bool(result.dsf_flags[k]))
                fh.write(",".join(cells) + "\n")
        _say(args, f"series {series.label}: wrote {path} "
                   f"({sw.points} points, witness {result.monotonicity})")
        svg_series.append((series.label, result.parameters, -result.witness_values))
    if args.svg:
        from .svgplot import write_svg

        xlabel = sw.series[0].scan.parameter
        write_svg(args.svg, svg_series, xlabel=xlabel, ylabel="neg_witness",
                  title=f"{cfg.kind} witness sweep")
        _say(args, f"wrote {args.svg}")
    return 0


def cmd_esd(cfg: RunConfig, args) -> int:
    if cfg.esd is None:
        raise ConfigError("config.esd: required for the esd command")
    query = analysis.EsdQuery(kind=cfg.kind, base=cfg.network,
                              scan=cfg.esd.scan, bracket=(cfg.esd.lo, cfg.esd.hi))
    threshold = analysis.esd_threshold(query)
    lines = [f"parameter: {cfg.esd.scan.parameter}"]
    lines.append("threshold: none" if threshold is None else f"threshold: {_fmt(threshold)}")
    for line in lines:
        _say(args, line)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        _say(args, f"wrote {args.out}")
    return 0


def cmd_dsf_check(cfg: RunConfig, args) -> int:
    result = analysis.dsf_check(cfg.network, cfg.kind)
    lines = [
        f"witness: {_fmt(result.witness_value)}",
        f"pure_witness: {_fmt(result.pure_value)}",
        f"deviation: {_fmt(abs(result.witness_value - result.pure_value))}",
        f"dsf: {'yes' if result.is_dsf else 'no'}",
    ]
    for line in lines:
        _say(args, line)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        _say(args, f"wrote {args.out}")
    return 0


def cmd_oracle_compare(cfg: RunConfig, args) -> int:
    if cfg.network.effect != PMD:
        raise ConfigError("config.effect: oracle-compare checks the dephasing "
                          "quadrature and supports 'pmd' only")
    state = _make_state(cfg.kind, cfg.network.n_qubits)
    grid = cfg.oracle.grid if cfg.oracle is not None else oracle.FrequencyGrid()
    grid = dataclasses.replace(grid, correlated=cfg.network.spectrum.kind == CORRELATED)
    rho_fast = apply_pmd(state, cfg.network)
    rho_grid = oracle.grid_apply_pmd(state, cfg.network, grid)
    dev_rho = float(np.max(np.abs(rho_fast.matrix - rho_grid.matrix)))
    spec = witness_spec(cfg.kind, cfg.network.n_qubits)
    v_closed = metrics.witness_closed_form(cfg.network, cfg.kind)
    v_grid = metrics.witness_value(rho_grid, spec)
    dev_v = abs(v_closed - v_grid)
    worst = max(dev_rho, dev_v)
    ok = worst <= ORACLE_TOL
    lines = [
        f"grid: points={grid.points} half_width={_fmt(grid.half_width)} "
        f"correlated={'yes' if grid.correlated else 'no'}",
        f"max_matrix_deviation: {_fmt(dev_rho)}",
        f"witness_deviation: {_fmt(dev_v)}",
        f"result: {'pass' if ok else 'fail'} (tolerance {ORACLE_TOL:g})",
    ]
    for line in lines:
        _say(args, line)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        _say(args, f"wrote {args.out}")
    return 0 if ok else 3


# ---------------------------------------------------------------- driver

_COMMANDS = {
    "simulate": (cmd_simulate, "apply the configured channel and report all metrics"),
    "sweep": (cmd_sweep, "scan a channel parameter and write per-point CSV rows"),
    "esd": (cmd_esd, "bisect for the witness zero crossing inside a bracket"),
    "dsf-check": (cmd_dsf_check, "test whether the channel leaves the witness unchanged"),
    "oracle-compare": (cmd_oracle_compare, "cross-check analytic dephasing against quadrature"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiberent",
        description="Entanglement decoherence of photonic GHZ/W states in fiber channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in _COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", required=(name == "sweep"),
                        help="output file (CSV for simulate/sweep, text otherwise)")
        if name == "sweep":
            sp.add_argument("--svg", help="also write an SVG plot of -witness vs parameter")
        sp.add_argument("--quiet", action="store_true", help="suppress stdout reporting")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = _COMMANDS[args.command][0]
    try:
        cfg = load_config(args.config)
        return handler(cfg, args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
