"""Benchmark tables: blowup lower bounds for Q1 = Q2 = Q.

Table 1: both functions are one-corner functions with the quotient gamma
pinned by Q and p, boundary values (0,0) and (1,1), and freely chosen
corners; the table value is the p-energy of their minimum, maximized over
the two corner positions.  For p = 2 the optimum is (4Q-1)/3.

Table 2: the two-power lower bound q_tilde(Q, Q, p), plus its explicit
p = 2 closed-form column and the two-function upper bound 2Q^2/(Q+1).

Values print at 10 significant digits; TableRow stores them already
rounded so emitted files round-trip exactly.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

from .bounds import min2_bound
from .config import DEFAULT_TOL, ToleranceConfig
from .corner import gamma_from_q
from .errors import InvalidParam
from .numerics import maximize_2d
from .power import q_tilde, qt_closed_form_p2
from .pwl import _pow_term

TABLE_Q = (1.001, 1.01, 1.125, 2.0, 10.0, 100.0)
TABLE_P = (1.2, 2.0, 100.0)

# Corner coordinates are searched as y = log(1 - c): the optimal corners sit
# at 1 - c ~ 1/gamma, and gamma reaches ~1.5e11 at (Q, p) = (100, 1.2) where
# a uniform grid in c could never see them.
_Y_RANGE = (-34.0, 0.0)


@dataclass(frozen=True)
class TableRow:
    Q: float
    p: float | None  # None for p-independent rows (upper bound column)
    value: float
    kind: str  # table1 | table2 | qt-column | upper-bound


def _round10(v: float) -> float:
    return float(f"{v:.10g}")


def _min_energy_objective(gamma: float, p: float):
    """Energy of min{u1, u2} for one-corner functions with quotient gamma and
    corners c_j = 1 - e^(y_j), as a function of (y1, y2).

    Works throughout in distances from 1: with s = 1 - c, slope scales
    a = 1/(1 + (gamma-1) s), the crossing m of the two functions satisfies
    1 - m = (1 - a_late)/(gamma a_early - a_late) exactly, which avoids the
    catastrophic cancellation of forming m itself when gamma is huge.
    """
    gm1 = gamma - 1.0

    def f(y1: float, y2: float) -> float:
        s_early = math.exp(max(y1, y2))  # earlier corner = larger 1 - c
        s_late = math.exp(min(y1, y2))
        a_early = 1.0 / (1.0 + gm1 * s_early)
        a_late = 1.0 / (1.0 + gm1 * s_late)
        den = gamma * a_early - a_late  # > 0 always
        s_m = (1.0 - a_late) / den if den > 0.0 else s_early
        s_m = min(max(s_m, s_late), s_early)
        e = _pow_term(a_early, p, 1.0 - s_early)
        e += _pow_term(gamma * a_early, p, s_early - s_m)
        e += _pow_term(a_late, p, s_m - s_late)
        e += _pow_term(gamma * a_late, p, s_late)
        return e

    return f


def table1_row(Q: float, p: float, cfg: ToleranceConfig = DEFAULT_TOL) -> TableRow:
    """Optimized two-one-corner lower bound for the blowup at Q1 = Q2 = Q.

    The chord energy of the minimum is 1 (boundary values 0 and 1), so the
    maximized energy is a lower bound for its quasisuperminimizing constant.
    """
    if Q <= 1.0 or p <= 1.0:
        raise InvalidParam("need Q > 1 and p > 1")
    gamma = gamma_from_q(Q, p, cfg)
    f = _min_energy_objective(gamma, p)
    _, value = maximize_2d(f, [_Y_RANGE, _Y_RANGE], cfg, grid=96)
    return TableRow(Q=Q, p=p, value=_round10(value), kind="table1")


def table2_row(Q: float, p: float, cfg: ToleranceConfig = DEFAULT_TOL) -> TableRow:
    """Two-power lower bound q_tilde at Q1 = Q2 = Q."""
    if Q <= 1.0 or p <= 1.0:
        raise InvalidParam("need Q > 1 and p > 1")
    return TableRow(Q=Q, p=p, value=_round10(q_tilde(Q, Q, p, cfg).q_tilde), kind="table2")


def table1(cfg: ToleranceConfig = DEFAULT_TOL) -> list[TableRow]:
    rows = [table1_row(q, p, cfg) for q in TABLE_Q for p in TABLE_P]
    rows += [
        TableRow(Q=q, p=None, value=_round10(min2_bound(q, q)), kind="upper-bound")
        for q in TABLE_Q
    ]
    return rows


def table2(cfg: ToleranceConfig = DEFAULT_TOL) -> list[TableRow]:
    rows = [table2_row(q, p, cfg) for q in TABLE_Q for p in TABLE_P]
    rows += [
        TableRow(
            Q=q, p=2.0, value=_round10(q + qt_closed_form_p2(q, q).bound1), kind="qt-column"
        )
        for q in TABLE_Q
    ]
    rows += [
        TableRow(Q=q, p=None, value=_round10(min2_bound(q, q)), kind="upper-bound")
        for q in TABLE_Q
    ]
    return rows


def rows_to_csv(rows: list[TableRow]) -> str:
    out = io.StringIO()
    out.write("Q,p,value,kind\n")
    for r in rows:
        p_field = "" if r.p is None else f"{r.p:.10g}"
        out.write(f"{r.Q:.10g},{p_field},{r.value:.10g},{r.kind}\n")
    return out.getvalue()


def rows_from_csv(text: str) -> list[TableRow]:
    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != "Q,p,value,kind":
        raise InvalidParam("bad CSV header")
    rows = []
    for ln in lines[1:]:
        q_s, p_s, v_s, kind = ln.split(",")
        rows.append(
            TableRow(
                Q=float(q_s), p=None if p_s == "" else float(p_s), value=float(v_s), kind=kind
            )
        )
    return rows


def rows_to_json(rows: list[TableRow]) -> str:
    return json.dumps(
        [{"Q": r.Q, "p": r.p, "value": r.value, "kind": r.kind} for r in rows], indent=1
    )


def rows_from_json(text: str) -> list[TableRow]:
    return [
        TableRow(Q=d["Q"], p=d["p"], value=d["value"], kind=d["kind"])
        for d in json.loads(text)
    ]


def rows_to_text(rows: list[TableRow], name: str) -> str:
    """Grid layout: one line per Q, lower-bound columns by p, then extras."""
    kinds = [k for k in ("table1", "table2") if any(r.kind == k for r in rows)]
    main = kinds[0] if kinds else "table1"
    by_key = {(r.Q, r.p, r.kind): r.value for r in rows}
    has_qt = any(r.kind == "qt-column" for r in rows)
    hdr = f"{'Q':>8} " + " ".join(f"{'p=' + format(p, 'g'):>15}" for p in TABLE_P)
    hdr += f" {'upper bound':>15}"
    if has_qt:
        hdr += f" {'(Qt) p=2':>15}"
    lines = [f"Table {name}", hdr]
    for q in TABLE_Q:
        cells = [f"{by_key[(q, p, main)]:>15.10g}" for p in TABLE_P]
        cells.append(f"{by_key[(q, None, 'upper-bound')]:>15.10g}")
        if has_qt:
            cells.append(f"{by_key[(q, 2.0, 'qt-column')]:>15.10g}")
        lines.append(f"{q:>8g} " + " ".join(cells))
    return "\n".join(lines) + "\n"
