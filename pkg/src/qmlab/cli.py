"""qmlab command line: every solver behind subcommands, 10-significant-digit
output in text, json or csv.

Exit codes: 0 success, 2 invalid arguments or input files, 3 numerical
failure (non-convergence, infeasible/unbounded LP, singular system).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bounds, corner, lp_blowup, pasting, power, tables
from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    DiscontinuousPaste,
    DomainMismatch,
    DomainViolation,
    Infeasible,
    InvalidFunctionFile,
    InvalidParam,
    NoSignChange,
    NonConvergence,
    NotQuasiminimizer,
    QmlabError,
    SingularMatrix,
    Unbounded,
)
from .pwl import (
    PiecewiseLinearFn,
    concave_envelope,
    energy_report,
    pointwise_min,
    quasimin_constant,
)

_USAGE_ERRORS = (InvalidParam, InvalidFunctionFile, DomainViolation, DomainMismatch)
_NUMERIC_ERRORS = (
    NonConvergence,
    NoSignChange,
    SingularMatrix,
    Infeasible,
    Unbounded,
    NotQuasiminimizer,
    DiscontinuousPaste,
)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _emit(result: dict, fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        text = json.dumps(result, indent=1) + "\n"
    elif fmt == "csv":
        text = "".join(f"{k},{_fmt(v)}\n" for k, v in result.items())
    else:
        text = "".join(f"{k} = {_fmt(v)}\n" for k, v in result.items())
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_fn(path: str) -> PiecewiseLinearFn:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidFunctionFile(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidFunctionFile(f"{path} is not valid JSON: {exc}") from exc
    try:
        return PiecewiseLinearFn.from_dict(data)
    except QmlabError as exc:
        raise InvalidFunctionFile(f"{path}: {exc}") from exc


def _dump_fn(f: PiecewiseLinearFn, out_path: str | None) -> None:
    text = json.dumps(f.to_dict()) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _interval(spec: str) -> tuple[float, float]:
    try:
        a_s, b_s = spec.split(",")
        return float(a_s), float(b_s)
    except ValueError as exc:
        raise InvalidParam(f"bad interval {spec!r}, expected 'a,b'") from exc


def _cfg(args: argparse.Namespace) -> ToleranceConfig:
    return ToleranceConfig(
        root_abs_tol=args.tol_root,
        opt_rel_tol=args.tol_opt,
        lp_feas_tol=args.tol_lp,
        max_iter=args.max_iter,
    )


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("json", "csv", "text"),
        default=os.environ.get("QMLAB_FORMAT", "text"),
        help="output format (default from QMLAB_FORMAT, else text)",
    )
    common.add_argument("--out", default=None, help="write output to a file instead of stdout")
    common.add_argument("--tol-root", type=float, default=DEFAULT_TOL.root_abs_tol)
    common.add_argument("--tol-opt", type=float, default=DEFAULT_TOL.opt_rel_tol)
    common.add_argument("--tol-lp", type=float, default=DEFAULT_TOL.lp_feas_tol)
    common.add_argument("--max-iter", type=int, default=DEFAULT_TOL.max_iter)

    parser = argparse.ArgumentParser(
        prog="qmlab",
        description="Quasiminimizer blowup constants on intervals: one-corner and "
        "power-type extremals, min-of-N bounds, pasting constructions.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_corner = sub.add_parser("corner", help="one-corner function constants")
    corner_sub = p_corner.add_subparsers(dest="sub", required=True)
    c_q = corner_sub.add_parser("q", parents=[common], help="Q and k from gamma")
    c_q.add_argument("--gamma", type=float, required=True)
    c_q.add_argument("--p", type=float, required=True)
    c_g = corner_sub.add_parser("gamma", parents=[common], help="gamma from Q")
    c_g.add_argument("--q", type=float, required=True)
    c_g.add_argument("--p", type=float, required=True)
    c_o = corner_sub.add_parser("optimal", parents=[common], help="extremal unit one-corner fn")
    c_o.add_argument("--gamma", type=float, required=True)
    c_o.add_argument("--p", type=float, required=True)

    p_power = sub.add_parser("power", help="power-type quasiminimizers")
    power_sub = p_power.add_subparsers(dest="sub", required=True)
    pw_a = power_sub.add_parser("qalpha", parents=[common], help="constant of x^alpha")
    pw_a.add_argument("--alpha", type=float, required=True)
    pw_a.add_argument("--p", type=float, required=True)
    pw_b = power_sub.add_parser("branches", parents=[common], help="both exponents for a Q")
    pw_b.add_argument("--q", type=float, required=True)
    pw_b.add_argument("--p", type=float, required=True)
    pw_t = power_sub.add_parser("qtilde", parents=[common], help="two-power blowup bound")
    pw_t.add_argument("--q1", type=float, required=True)
    pw_t.add_argument("--q2", type=float, required=True)
    pw_t.add_argument("--p", type=float, required=True)

    p_bound = sub.add_parser("bound", help="closed-form blowup bounds")
    bound_sub = p_bound.add_subparsers(dest="sub", required=True)
    for name, two in (("km", True), ("min2", True), ("min3", False), ("system", False)):
        b = bound_sub.add_parser(name, parents=[common])
        b.add_argument("--q1", type=float, required=True)
        b.add_argument("--q2", type=float, required=True)
        if not two:
            b.add_argument("--q3", type=float, required=True)

    p_lp = sub.add_parser("lp", parents=[common], help="region LP for min of N functions")
    p_lp.add_argument("--q", required=True, help="comma-separated constants, e.g. 2,3,4")
    p_lp.add_argument(
        "--relaxed", action="store_true", help="one-sided cancellation (experiment)"
    )

    p_blow = sub.add_parser("blowup", parents=[common], help="two-function blowup summary")
    p_blow.add_argument("--q1", type=float, required=True)
    p_blow.add_argument("--q2", type=float, required=True)
    p_blow.add_argument("--p", type=float, required=True)

    p_paste = sub.add_parser("paste", help="pasting constructions")
    paste_sub = p_paste.add_subparsers(dest="sub", required=True)
    ps_s = paste_sub.add_parser("sharp", parents=[common], help="two-component sharp example")
    ps_i = paste_sub.add_parser("interval", parents=[common], help="connected-interval example")
    ps_w = paste_sub.add_parser("sweep", parents=[common], help="interval example across p")
    for sp in (ps_s, ps_i, ps_w):
        sp.add_argument("--q1", type=float, required=True)
        sp.add_argument("--q2", type=float, required=True)
    ps_s.add_argument("--p", type=float, required=True)
    ps_s.add_argument("--out-function", default=None, help="write pasted function JSON here")
    ps_i.add_argument("--p", type=float, required=True)
    ps_i.add_argument("--variant", choices=("standard", "second"), default="standard")
    ps_i.add_argument("--out-function", default=None, help="write pasted function JSON here")
    ps_w.add_argument("--p-list", required=True, help="comma-separated p values")

    p_fn = sub.add_parser("fn", help="piecewise-linear function operations")
    fn_sub = p_fn.add_subparsers(dest="sub", required=True)
    fn_e = fn_sub.add_parser("energy", parents=[common])
    fn_q = fn_sub.add_parser("qconst", parents=[common])
    fn_m = fn_sub.add_parser("min", parents=[common])
    fn_v = fn_sub.add_parser("envelope", parents=[common])
    for sp in (fn_e, fn_q, fn_m, fn_v):
        sp.add_argument("--input", required=True, help="function JSON file")
    for sp in (fn_e, fn_v):
        sp.add_argument("--interval", default=None, help="a,b (default: full domain)")
    for sp in (fn_e, fn_q):
        sp.add_argument("--p", type=float, required=True)
    fn_q.add_argument("--mode", choices=("free", "super"), default="free")
    fn_m.add_argument("--input2", required=True, help="second function JSON file")

    p_table = sub.add_parser("table", parents=[common], help="reproduce a benchmark table")
    p_table.add_argument("--name", choices=("1", "2"), required=True)

    return parser


def _run(args: argparse.Namespace) -> None:
    cfg = _cfg(args)
    fmt = args.format
    out = args.out
    if args.cmd == "corner":
        if args.sub == "q":
            cc = corner.corner_constant(args.gamma, args.p)
            _emit({"gamma": args.gamma, "p": args.p, "Q": cc.Q, "k": cc.k}, fmt, out)
        elif args.sub == "gamma":
            g = corner.gamma_from_q(args.q, args.p, cfg)
            _emit({"Q": args.q, "p": args.p, "gamma": g}, fmt, out)
        else:
            uc = corner.optimal_unit_corner(args.gamma, args.p)
            _emit(
                {"gamma": args.gamma, "p": args.p, "x0": uc.x0, "alpha": uc.alpha}, fmt, out
            )
    elif args.cmd == "power":
        if args.sub == "qalpha":
            _emit({"alpha": args.alpha, "p": args.p, "Q": power.q_alpha(args.alpha, args.p)}, fmt, out)
        elif args.sub == "branches":
            br = power.alpha_branches(args.q, args.p, cfg)
            _emit(
                {"Q": args.q, "p": args.p, "alpha_prime": br.alpha_prime, "alpha": br.alpha},
                fmt,
                out,
            )
        else:
            rep = power.q_tilde(args.q1, args.q2, args.p, cfg)
            _emit(
                {
                    "Q1": args.q1,
                    "Q2": args.q2,
                    "p": args.p,
                    "alpha1": rep.alpha1,
                    "alpha2": rep.alpha2,
                    "x0": rep.x0,
                    "x1": rep.x1,
                    "x2": rep.x2,
                    "q_tilde": rep.q_tilde,
                    "lb1": rep.lb1,
                    "lb2": rep.lb2,
                },
                fmt,
                out,
            )
    elif args.cmd == "bound":
        if args.sub == "km":
            _emit({"bound": bounds.km_bound(args.q1, args.q2)}, fmt, out)
        elif args.sub == "min2":
            _emit({"bound": bounds.min2_bound(args.q1, args.q2)}, fmt, out)
        elif args.sub == "min3":
            _emit({"bound": bounds.min3_bound(args.q1, args.q2, args.q3)}, fmt, out)
        else:
            rep = bounds.min3_via_system(args.q1, args.q2, args.q3)
            result = {"Q_A0": rep.Q_A0}
            for i in range(3):
                result[f"x{i + 1}"] = rep.x[i]
            for i in range(3):
                result[f"y{i + 1}"] = rep.y[i]
            for i in range(3):
                result[f"Q_A1_{i + 1}"] = rep.Q_A1[i]
            _emit(result, fmt, out)
    elif args.cmd == "lp":
        try:
            qs = [float(tok) for tok in args.q.split(",")]
        except ValueError as exc:
            raise InvalidParam(f"bad --q list {args.q!r}") from exc
        sol = lp_blowup.solve_blowup_lp(qs, cfg, relaxed_cancellation=args.relaxed)
        result = {"n": len(qs), "bound": sol.bound}
        if len(qs) >= 4:
            result["exploratory"] = True  # no closed-form ground truth for N >= 4
        _emit(result, fmt, out)
    elif args.cmd == "blowup":
        rep = power.q_tilde(args.q1, args.q2, args.p, cfg)
        result = {
            "km_bound": bounds.km_bound(args.q1, args.q2),
            "min2_bound": bounds.min2_bound(args.q1, args.q2),
            "q_tilde": rep.q_tilde,
            "lb1": rep.lb1,
            "lb2": rep.lb2,
        }
        if args.p == 2.0:
            qt = power.qt_closed_form_p2(args.q1, args.q2)
            result["qt_bound1"] = qt.bound1
            result["qt_bound2"] = qt.bound2
            if args.q1 == args.q2:
                result["e_bound"] = power.equal_q_e_bound(args.q1)
        _emit(result, fmt, out)
    elif args.cmd == "paste":
        if args.sub == "sweep":
            ps = [float(tok) for tok in args.p_list.split(",")]
            rows = pasting.p_sweep(args.q1, args.q2, ps, cfg)
            result = {}
            for r in rows:
                result[f"p={r.p:g}.A"] = r.head_energy
                result[f"p={r.p:g}.energy"] = r.achieved_energy
            _emit(result, fmt, out)
        else:
            if args.sub == "sharp":
                ex = pasting.sharp_example(args.q1, args.q2, args.p, cfg)
            else:
                ex = pasting.interval_example(args.q1, args.q2, args.p, args.variant, cfg)
            _emit(
                {
                    "achieved_energy": ex.achieved_energy,
                    "claimed_bound": ex.claimed_bound,
                    "omega1": "; ".join(f"({a:.10g},{b:.10g})" for a, b in ex.omega1),
                },
                fmt,
                out,
            )
            if args.out_function:
                _dump_fn(ex.u, args.out_function)
    elif args.cmd == "fn":
        f = _load_fn(args.input)
        if args.sub == "energy":
            a, b = _interval(args.interval) if args.interval else f.domain
            rep = energy_report(f, args.p, a, b)
            _emit(
                {
                    "a": a,
                    "b": b,
                    "p": args.p,
                    "energy": rep.energy,
                    "chord_energy": rep.chord_energy,
                    "ratio": rep.ratio,
                },
                fmt,
                out,
            )
        elif args.sub == "qconst":
            _emit(
                {"mode": args.mode, "Q": quasimin_constant(f, args.p, args.mode, cfg)}, fmt, out
            )
        elif args.sub == "min":
            g = _load_fn(args.input2)
            _dump_fn(pointwise_min(f, g), out)
        else:
            a, b = _interval(args.interval) if args.interval else f.domain
            _dump_fn(concave_envelope(f, a, b), out)
    elif args.cmd == "table":
        rows = tables.table1(cfg) if args.name == "1" else tables.table2(cfg)
        if fmt == "json":
            text = tables.rows_to_json(rows) + "\n"
        elif fmt == "csv":
            text = tables.rows_to_csv(rows)
        else:
            text = tables.rows_to_text(rows, args.name)
        if out:
            with open(out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _run(args)
    except _USAGE_ERRORS as exc:
        print(f"qmlab: error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"qmlab: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
