"""Command-line front end: one subcommand per experiment, one table per run.

Exit status: 0 success, 2 invalid arguments, 3 a numerical result did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Any

import numpy as np

from . import arith, contour, fourier, signals, tauber
from .errors import TaulabError
from .zeta import default_evaluator

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 2, 3


class Report:
    def __init__(self, command: str, params: dict, rows: list[dict], summary: dict, converged: bool = True):
        self.command = command
        self.params = params
        self.rows = rows
        self.summary = summary
        self.converged = converged


# -- argument types -----------------------------------------------------------


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return v


def nonneg_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be non-negative and finite: {text!r}")
    return v


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def float_list(kind):
    def parse(text: str) -> list[float]:
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise argparse.ArgumentTypeError("empty list")
        return [kind(p.strip()) for p in parts]

    return parse


# -- helpers ------------------------------------------------------------------------


def _cache_path(args) -> str | None:
    return os.environ.get("TAULAB_CACHE") or args.cache_path


def _table(args, N: int) -> arith.MangoldtTable:
    return arith.load_or_sieve(N, _cache_path(args))


def _signal(args) -> signals.BoundedSignal:
    table = _table(args, args.N) if args.signal == "pnt_b" else None
    return signals.make_signal(args.signal, alpha=args.alpha, omega=args.omega, table=table, seed=args.seed)


def _add_signal_args(p, default="exp_decay"):
    p.add_argument("--signal", choices=signals.LIBRARY, default=default)
    p.add_argument("--alpha", type=positive_float, default=1.0, help="exp_decay rate")
    p.add_argument("--omega", type=positive_float, default=1.0, help="sine frequency")
    p.add_argument("--N", type=positive_int, default=10**6, help="sieve limit for pnt_b")


def _params(args) -> dict:
    skip = {"func", "format", "cache_path", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# -- commands ------------------------------------------------------------------------


def cmd_psi(args) -> Report:
    table = _table(args, args.limit)
    grid = tauber.log_grid(args.limit) if args.limit >= 10 else np.array([args.limit])
    rows = []
    for v in grid:
        psi = arith.chebyshev_psi(v, table)
        rows.append({"v": int(v), "psi": psi, "pi": arith.prime_count(v, table), "psi_over_v": psi / v})
    return Report("psi", _params(args), rows, {"psi": rows[-1]["psi"], "pi": rows[-1]["pi"]})


def cmd_pnt_report(args) -> Report:
    table = _table(args, max(args.N, int(args.vmax)))
    rep = tauber.pnt_report(args.vmax, table)
    rows = [{"v": int(v), "psi_over_v": a, "pi_log_over_v": b} for v, a, b in zip(rep.grid, rep.psi_ratio, rep.pi_ratio)]
    summary = {
        "S1": rep.S1,
        "S2": rep.S2,
        "g0": rep.reference,
        "psi_deviation": rep.psi_deviation,
        "integral_deviation": rep.integral_deviation,
        "corridor_1e4": rep.corridor_holds(1e4),
    }
    return Report("pnt-report", _params(args), rows, summary)


def cmd_zeta_eval(args) -> Report:
    ev = default_evaluator()
    rows = []
    for w in args.w:
        z, dz = ev.zeta_and_derivative(w)
        rows.append({"w": w, "zeta": z, "dzeta": dz, "g": ev.g_transform(w - 1) if w != 0 else complex("nan"),
                     "neg_log_deriv_regular": ev.neg_log_deriv_regular(w)})
    return Report("zeta-eval", _params(args), rows, {"count": len(rows)})


def cmd_contour_verify(args) -> Report:
    s = _signal(args)
    rows, ok = [], True
    for T in args.T:
        d = contour.newman_decomposition(s, args.R, T)
        ok = ok and d.converged
        rows.append({"T": T, "I1": d.I1, "I2": d.I2, "I3": d.I3, "lhs": d.lhs, "residual": d.residual,
                     "bound_I1": d.bound_I1, "bound_I2": d.bound_I2, "quad_error": d.quad_error,
                     "within_bounds": d.within_bounds()})
    summary = {"signal": s.name, "max_residual": max(r["residual"] for r in rows), "converged": ok}
    return Report("contour-verify", _params(args), rows, summary, ok)


def cmd_bound_check(args) -> Report:
    suite = signals.random_step_signals(args.count, seed=args.seed, M=args.M)
    rows, violations, ok = [], 0, True
    for s in suite:
        for T in args.T:
            d = contour.newman_decomposition(s, args.R, T)
            good = d.within_bounds()
            violations += not good
            ok = ok and d.converged
            rows.append({"signal": s.name, "T": T, "abs_I1": abs(d.I1), "bound_I1": d.bound_I1, "abs_I2": abs(d.I2),
                         "bound_I2": d.bound_I2, "residual": d.residual, "ok": good})
    summary = {"signals": len(suite), "violations": violations, "converged": ok}
    return Report("bound-check", _params(args), rows, summary, ok)


def cmd_tauber_sweep(args) -> Report:
    s = _signal(args)
    sw = tauber.tauber_sweep(s, args.B, args.T, args.R)
    rows = [{"T": r.T, "partial": r.partial, "deviation": r.deviation, "bound": r.bound, "rhs_full": r.rhs_full}
            for r in sw.rows]
    return Report("tauber-sweep", _params(args), rows, sw.summary(), sw.converged)


def cmd_fatou(args) -> Report:
    series = tauber.SERIES[args.series]()
    rows = []
    for N in args.N:
        r = tauber.fatou_sum(series, N)
        rows.append({"N": r.N, "partial": r.partial, "deviation": r.deviation, "tail_coeff_max": r.tail_coeff_max,
                     "divergent": r.divergent})
    summary = {"series": series.name, "limit": series.limit_value, "divergent": rows[-1]["divergent"]}
    return Report("fatou", _params(args), rows, summary)


def cmd_rl_decay(args) -> Report:
    F = fourier.MODELS[args.model]()
    phi = fourier.TestFunction(args.lam, args.mu)
    rows, ok = [], True
    for T in args.T:
        r = fourier.modulated_pair(F, phi, T)
        ok = ok and r.converged
        rows.append({"T": T, "value": r.value, "abs": abs(r.value), "error": r.error})
    summary = {"model": F.name, "decay_class": F.decay_class, "two_pi_phi0": 2 * math.pi * float(phi.eval(0.0)),
               "converged": ok}
    return Report("rl-decay", _params(args), rows, summary, ok)


def cmd_boundary_pair(args) -> Report:
    s = _signal(args)
    rows, ok = [], True
    for eps in args.eps:
        for T in args.T:
            r = fourier.boundary_pairing(s, args.R, T, eps)
            ok = ok and r.converged
            rows.append({"eps": eps, "T": T, "value": r.value, "abs": abs(r.value), "error": r.error})
    return Report("boundary-pair", _params(args), rows, {"signal": s.name, "converged": ok}, ok)


def cmd_ikehara(args) -> Report:
    table = _table(args, int(args.vmax))
    rep = tauber.ikehara_check(args.vmax, table, A=args.A)
    rows = [{"t": t, "ratio": r} for t, r in zip(rep.t, rep.ratio)]
    summary = {"label": rep.label, "A": rep.A, "final_ratio": rep.final_ratio, "bounded": rep.bounded}
    for p in rep.probes:
        summary[f"max_abs_g@x={p.x:g}"] = p.max_abs_g
        summary[f"abs_uncancelled@x={p.x:g}"] = p.abs_raw
    return Report("ikehara", _params(args), rows, summary)


# -- output --------------------------------------------------------------------------


def _scalar(v: Any):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.complexfloating):
        return complex(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _flatten(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        v = _scalar(v)
        if isinstance(v, complex):
            out[f"{k}_re"] = v.real
            out[f"{k}_im"] = v.imag
        elif isinstance(v, list):
            out[k] = [_json_value(_scalar(x)) for x in v]
        else:
            out[k] = v
    return out


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, complex):
        return {"re": _json_value(v.real), "im": _json_value(v.imag)}
    return v


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def render(report: Report, fmt: str) -> str:
    rows = [_flatten(r) for r in report.rows]
    if fmt == "json":
        doc = {
            "command": report.command,
            "params": {k: _json_value(v) for k, v in _flatten(report.params).items()},
            "rows": [{k: _json_value(v) for k, v in r.items()} for r in rows],
            "summary": {k: _json_value(v) for k, v in _flatten(report.summary).items()},
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    header = list(rows[0].keys()) if rows else []
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_cell(r.get(k)) for k in header])
    return buf.getvalue()


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taulab", description="Numerical Tauberian laboratory.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-path", default=None, help="sieve cache file (TAULAB_CACHE overrides)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi", parents=[common], help="Chebyshev psi and prime counts")
    p.add_argument("--limit", type=positive_int, required=True)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("pnt-report", parents=[common], help="PNT traces and the g(0) integral")
    p.add_argument("--vmax", type=positive_float, default=1e6)
    p.add_argument("--N", type=positive_int, default=10**6, help="sieve limit")
    p.set_defaults(func=cmd_pnt_report)

    p = sub.add_parser("zeta-eval", parents=[common], help="zeta, zeta' and the PNT transform")
    p.add_argument("--w", type=complex_arg, nargs="+", required=True)
    p.set_defaults(func=cmd_zeta_eval)

    p = sub.add_parser("contour-verify", parents=[common], help="Newman contour decomposition")
    _add_signal_args(p)
    p.add_argument("--R", type=positive_float, default=1.0)
    p.add_argument("--T", type=float_list(positive_float), default=[5.0])
    p.set_defaults(func=cmd_contour_verify)

    p = sub.add_parser("bound-check", parents=[common], help="arc bounds on random step signals")
    p.add_argument("--count", type=positive_int, default=200)
    p.add_argument("--M", type=positive_float, default=1.0)
    p.add_argument("--R", type=positive_float, default=1.0)
    p.add_argument("--T", type=float_list(positive_float), default=[5.0, 20.0])
    p.set_defaults(func=cmd_bound_check)

    p = sub.add_parser("tauber-sweep", parents=[common], help="deviation against 2M/B over a T grid")
    _add_signal_args(p, default="sinc")
    p.add_argument("--B", type=positive_float, default=1.0)
    p.add_argument("--R", type=positive_float, default=0.9)
    p.add_argument("--T", type=float_list(positive_float), default=[10.0, 100.0, 1000.0])
    p.set_defaults(func=cmd_tauber_sweep)

    p = sub.add_parser("fatou", parents=[common], help="partial sums of power-series coefficients at z=1")
    p.add_argument("--series", choices=sorted(tauber.SERIES), default="geometric_log")
    p.add_argument("--N", type=float_list(positive_int), default=[100])
    p.set_defaults(func=cmd_fatou)

    p = sub.add_parser("rl-decay", parents=[common], help="modulated pairings <F, phi e^{iTy}>")
    p.add_argument("--model", choices=sorted(fourier.MODELS), default="exp_abs")
    p.add_argument("--lam", type=nonneg_float, default=1.0, help="test function plateau")
    p.add_argument("--mu", type=positive_float, default=1.0, help="test function shoulder")
    p.add_argument("--T", type=float_list(float), default=[5.0, 50.0, 500.0])
    p.set_defaults(func=cmd_rl_decay)

    p = sub.add_parser("boundary-pair", parents=[common], help="I(T, eps) sweeps")
    _add_signal_args(p)
    p.add_argument("--R", type=positive_float, default=1.0)
    p.add_argument("--T", type=float_list(nonneg_float), default=[10.0, 100.0, 1000.0])
    p.add_argument("--eps", type=float_list(positive_float), default=[1e-2, 1e-3, 1e-4])
    p.set_defaults(func=cmd_boundary_pair)

    p = sub.add_parser("ikehara", parents=[common], help="empirical Wiener-Ikehara check for psi")
    p.add_argument("--vmax", type=positive_float, default=1e6)
    p.add_argument("--A", type=float, default=1.0)
    p.set_defaults(func=cmd_ikehara)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except TaulabError as exc:
        print(f"taulab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(render(report, args.format))
    sys.stdout.flush()
    if not report.converged:
        print("taulab: a numerical result did not converge", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
