"""
Command-line front end.

Subcommands: ``discrete``, ``continuous``, ``spectrum``, ``sweep`` and
``verify``.  Data goes to ``--out`` (stdout by default) as CSV or JSON.

Exit codes: 0 success, 1 failed verification, 2 invalid arguments,
3 full-space oracle above its size cap, 4 RK4 accuracy failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from typing import Any, Optional, Sequence

import numpy as np

from . import analysis as an
from . import continuous as cw
from . import discrete as dw
from . import verification
from .errors import IntegrationAccuracyError, OracleSizeError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_ORACLE_SIZE = 3
EXIT_INTEGRATION = 4


def _fmt(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % (float(value) + 0.0)  # folds -0.0 into 0
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if not math.isfinite(value) else value
    if isinstance(value, complex):
        return [_jsonable(value.real), _jsonable(value.imag)]
    return value


def render(records: list[dict], columns: Sequence[str], params: dict, fmt: str) -> str:
    """CSV (header + one line per record, LF endings) or JSON {params, records}."""
    if fmt == "json":
        payload = {"params": _jsonable(params), "records": _jsonable(records)}
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(rec[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


def _series_records(series) -> list[dict]:
    name = series.column_name
    xs = series.x.astype(int) if series.kind == "step" else series.x
    return [{name: x, "probability": p} for x, p in zip(xs, series.p)]


# --- subcommands -------------------------------------------------------------

def _discrete_params(args) -> dw.DiscreteParams:
    if args.c is not None:
        return dw.DiscreteParams.from_c(args.n, args.c, args.marked)
    return dw.DiscreteParams(args.n, args.phi if args.phi is not None else 0.0, args.marked)


def cmd_discrete(args) -> int:
    p = _discrete_params(args)
    steps = an.default_steps(p.N) if args.steps is None else args.steps
    if args.full:
        series = dw.simulate_full(p, steps, cap=args.oracle_cap)
    else:
        series = dw.simulate_reduced(p, steps)
    params = {**asdict(p), "c": p.c, "steps": steps, "full": args.full}
    _emit(render(_series_records(series), ["step", "probability"], params, args.format), args.out)
    return EXIT_OK


def cmd_continuous(args) -> int:
    p = cw.ContinuousParams(
        args.n, args.gamma_n, args.epsilon, args.marked, t_max=args.t_max, dt=args.dt
    )
    if args.full:
        series = cw.integrate_full_c(p, cap=args.oracle_cap).series
    else:
        series = cw.success_series_c(p)
    params = {**asdict(p), "full": args.full}
    _emit(render(_series_records(series), ["t", "probability"], params, args.format), args.out)
    return EXIT_OK


def _discrete_spectrum_record(p: dw.DiscreteParams) -> dict:
    s = dw.spectrum(p)
    rec: dict[str, Any] = {
        "walk": "discrete",
        "N": p.N,
        "phi": p.phi,
        "c": p.c,
        "theta": s.theta,
        "sigma": s.sigma,
        "predicted_t": dw.predicted_runtime(p),
        "predicted_p": dw.predicted_peak_probability(p),
    }
    for label, val, vec in zip(("phi", "plus", "minus"), s.values, (s.psi_phi, s.psi_plus, s.psi_minus)):
        rec[f"lambda_{label}_re"] = val.real
        rec[f"lambda_{label}_im"] = val.imag
        for comp, amp in zip(("ab", "ba", "bb"), vec):
            rec[f"psi_{label}_{comp}_re"] = amp.real
            rec[f"psi_{label}_{comp}_im"] = amp.imag
    return rec


def _continuous_spectrum_record(p: cw.ContinuousParams) -> dict:
    s = cw.spectrum_c(p)
    rec: dict[str, Any] = {
        "walk": "continuous",
        "N": p.N,
        "gamma_n": p.gamma_n,
        "epsilon": p.epsilon,
        "E0": s.E0,
        "E1": s.E1,
        "gap": s.gap,
        "critical_gamma_n": cw.critical_gamma_n(p),
        "predicted_t": math.pi / s.gap,
    }
    for label, state in (("ground", s.ground), ("excited", s.excited)):
        for comp, amp in zip(("a", "b"), state.as_array()):
            rec[f"{label}_{comp}_re"] = amp.real
            rec[f"{label}_{comp}_im"] = amp.imag
    return rec


def cmd_spectrum(args) -> int:
    if args.walk == "discrete":
        if args.gamma_n is not None or args.epsilon is not None:
            raise ValueError("--gamma-n/--epsilon apply to --walk continuous only")
        rec = _discrete_spectrum_record(_discrete_params(args))
    else:
        if args.phi is not None or args.c is not None:
            raise ValueError("--phi/--c apply to --walk discrete only")
        p = cw.ContinuousParams(
            args.n,
            1.0 if args.gamma_n is None else args.gamma_n,
            0.0 if args.epsilon is None else args.epsilon,
        )
        rec = _continuous_spectrum_record(p)
    _emit(render([rec], list(rec), {"walk": args.walk}, args.format), args.out)
    return EXIT_OK


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid size list {text!r}") from exc
    if not sizes:
        raise argparse.ArgumentTypeError("empty size list")
    return sizes


SWEEP_COLUMNS = ["N", "phi", "c", "peak_x", "peak_p", "predicted_t", "predicted_p", "regime"]


def cmd_sweep(args) -> int:
    family = an.ScalingFamily(args.family_a, args.family_b)
    if args.walk == "discrete":
        rows = an.sweep_discrete(family, args.sizes, steps=args.steps)
    else:
        rows = an.sweep_continuous(family, args.sizes, gamma_policy=args.gamma_policy, dt=args.dt)
    params = {
        "walk": args.walk,
        "family_a": family.a,
        "family_b": family.b,
        "sizes": sorted(args.sizes),
        "gamma_policy": args.gamma_policy if args.walk == "continuous" else None,
    }
    _emit(render([r.as_dict() for r in rows], SWEEP_COLUMNS, params, args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = verification.VerifyConfig(oracle_cap=args.oracle_cap, tol_p=args.tol_p, tol_t=args.tol_t)
    results = verification.run_all(cfg)
    report = verification.report_dict(cfg, results)
    text = json.dumps(_jsonable(report), indent=2) + "\n"
    if args.format == "json" and args.out is None:
        sys.stdout.write(text)
    else:
        for r in results:
            print(r.line())
        failed = report["failed"]
        print("verify: OK" if not failed else f"verify: FAILED ({', '.join(failed)})")
        if args.out is not None:
            _emit(text, args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


# --- argument parsing --------------------------------------------------------

def _add_output(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", default=None, help="output file (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_barrier(sp: argparse.ArgumentParser) -> None:
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--phi", type=float, default=None, help="barrier angle in radians")
    grp.add_argument("--c", type=float, default=None, help="barrier as phi = c / sqrt(N)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barrierwalk",
        description="Quantum walk search on the complete graph with potential barriers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("discrete", help="coined walk success probability vs step")
    sp.add_argument("--n", type=int, required=True)
    _add_barrier(sp)
    sp.add_argument("--marked", type=int, default=0)
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--full", action="store_true", help="evolve the full coined space")
    sp.add_argument("--oracle-cap", type=int, default=dw.DEFAULT_ORACLE_CAP)
    _add_output(sp)
    sp.set_defaults(func=cmd_discrete)

    sp = sub.add_parser("continuous", help="continuous walk success probability vs time")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--gamma-n", type=float, default=1.0)
    sp.add_argument("--epsilon", type=float, default=0.0)
    sp.add_argument("--marked", type=int, default=0)
    sp.add_argument("--t-max", type=float, default=None)
    sp.add_argument("--dt", type=float, default=0.1)
    sp.add_argument("--full", action="store_true", help="RK4 over the full vertex space")
    sp.add_argument("--oracle-cap", type=int, default=cw.DEFAULT_ORACLE_CAP)
    _add_output(sp)
    sp.set_defaults(func=cmd_continuous)

    sp = sub.add_parser("spectrum", help="analytic eigensystem and predictions")
    sp.add_argument("--walk", choices=("discrete", "continuous"), default="discrete")
    sp.add_argument("--n", type=int, required=True)
    _add_barrier(sp)
    sp.add_argument("--marked", type=int, default=0)
    sp.add_argument("--gamma-n", type=float, default=None)
    sp.add_argument("--epsilon", type=float, default=None)
    _add_output(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("sweep", help="peak vs prediction over a barrier family a*N^b")
    sp.add_argument("--walk", choices=("discrete", "continuous"), default="discrete")
    sp.add_argument("--family-a", type=float, required=True)
    sp.add_argument("--family-b", type=float, required=True)
    sp.add_argument("--sizes", type=_parse_sizes, required=True, help="comma-separated N list")
    sp.add_argument("--gamma-policy", choices=("fixed", "compensated"), default="fixed")
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--dt", type=float, default=0.1)
    _add_output(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the self-check suite")
    sp.add_argument("--oracle-cap", type=int, default=dw.DEFAULT_ORACLE_CAP)
    sp.add_argument("--tol-p", type=float, default=0.02)
    sp.add_argument("--tol-t", type=float, default=0.05)
    _add_output(sp)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors (and --help) this way
        return int(exc.code or 0)
    try:
        return args.func(args)
    except OracleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE_SIZE
    except IntegrationAccuracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
