"""Acceptance suite: one test per criterion, each printing a pass line with
its runtime (run with -s to see them).

Source-data note, established against 60-digit recomputation (see
tests/test_power.py and the decisions ledger): the printed benchmark value
for the two-power bound at (Q, p) = (100, 1.2) is 195.7168148, which is off
by 5.7e-8 relative from the true value of its defining formula,
195.71682602417677 (the reference computation lost the crossing point at
1 - x0 ~ 3.3e-13).  Criterion 4 therefore pins that cell to the true value
at 1e-8 and to the printed one at its actual accuracy, 1e-7.
"""

import itertools
import math
import random
import time

import numpy as np
import pytest

from qmlab.bounds import km_bound, min2_bound, min2_sandwich, min3_bound, min3_via_system
from qmlab.corner import corner_constant, gamma_from_q, zigzag_constant
from qmlab.lp_blowup import region_coverage, solve_blowup_lp
from qmlab.pasting import interval_example, sharp_example
from qmlab.power import alpha_branches, equal_q_e_bound, q_tilde, qt_closed_form_p2
from qmlab.pwl import PiecewiseLinearFn, energy, quasimin_constant
from qmlab.tables import table1_row, table2_row

TABLE_1 = {
    (1.001, 1.2): 1.001333193,
    (1.001, 2.0): 1.001333333,
    (1.001, 100.0): 1.001333353,
    (1.01, 1.2): 1.013319341,
    (1.01, 2.0): 1.013333333,
    (1.01, 100.0): 1.013335243,
    (1.125, 1.2): 1.164635987,
    (1.125, 2.0): 1.166666667,
    (1.125, 100.0): 1.166948556,
    (2.0, 1.2): 2.254420532,
    (2.0, 2.0): 2.333333333,
    (2.0, 100.0): 2.346323188,
    (10.0, 1.2): 11.80468177,
    (10.0, 2.0): 13.0,
    (10.0, 100.0): 13.34762304,
    (100.0, 1.2): 118.9796468,
    (100.0, 2.0): 133.0,
    (100.0, 100.0): 139.1598599,
}
TABLE_2 = {
    (1.001, 1.2): 1.001480628,
    (1.001, 2.0): 1.001480660,
    (1.001, 100.0): 1.001480665,
    (1.01, 1.2): 1.014821935,
    (1.01, 2.0): 1.014825154,
    (1.01, 100.0): 1.014825593,
    (1.125, 1.2): 1.187625011,
    (1.125, 2.0): 1.188100103,
    (1.125, 100.0): 1.188165836,
    (2.0, 1.2): 2.599606519,
    (2.0, 2.0): 2.619135721,
    (2.0, 100.0): 2.622161265,
    (10.0, 1.2): 17.45294063,
    (10.0, 2.0): 17.67321156,
    (10.0, 100.0): 17.72170691,
    (100.0, 1.2): 195.7168148,
    (100.0, 2.0): 196.3948537,
    (100.0, 100.0): 196.5955633,
}
# 60-digit value of the defining formula for the misprinted cell.
TABLE_2_100_12_EXACT = 195.71682602417677
TABLE_2_QT = {
    1.001: 1.001373803,
    1.01: 1.013873175,
    1.125: 1.180555556,
    2.0: 2.601317394,
    10.0: 17.66438145,
    100.0: 196.3936712,
}


def _report(n, budget, t0, detail):
    elapsed = time.perf_counter() - t0
    assert elapsed < budget, f"criterion {n} exceeded its {budget}s budget: {elapsed:.2f}s"
    print(f"[PASS] criterion {n}: {detail} ({elapsed * 1000:.1f} ms)")


def test_criterion_1_one_corner_constants():
    corner_constant(2.0, 2.0)  # warm up interpreter caches
    t0 = time.perf_counter()
    cc = corner_constant(2.0, 2.0)
    assert abs(cc.k - 2.0) <= 1e-14
    assert abs(cc.Q - 1.125) <= 1e-14
    _report(1, 1e-3, t0, "corner_constant(2,2) = (k=2, Q=9/8) at 1e-14")


def test_criterion_2_running_example_regression():
    import json
    import os

    path = os.path.join(os.path.dirname(__file__), "fixtures", "ex1_min.json")
    with open(path) as fh:
        data = json.load(fh)
    fixture_min = PiecewiseLinearFn(data["breakpoints"], data["values"])
    t0 = time.perf_counter()
    e = energy(fixture_min, 2.0, 0.0, 1.0)
    assert abs(e - 7 / 6) <= 1e-14 * (7 / 6)
    assert abs(min2_bound(9 / 8, 9 / 8) - 81 / 68) <= 1e-14
    assert abs(km_bound(9 / 8, 9 / 8) - 81 / 64) <= 1e-14
    _report(2, 1e-3, t0, "fixture minimum energy 7/6; bounds 81/68 and 81/64 at 1e-14")


def test_criterion_3_table1_reproduction():
    t0 = time.perf_counter()
    for (q, p), want in TABLE_1.items():
        got = table1_row(q, p).value
        assert got == pytest.approx(want, rel=1e-6), f"table 1 cell ({q}, {p})"
    for q in (1.001, 1.01, 1.125, 2.0, 10.0, 100.0):
        got = table1_row(q, 2.0).value
        assert got == pytest.approx((4.0 * q - 1.0) / 3.0, rel=1e-9)
    _report(3, 30.0, t0, "all 18 cells at 1e-6; p=2 column equals (4Q-1)/3 at 1e-9")


def test_criterion_4_table2_reproduction():
    t0 = time.perf_counter()
    for (q, p), want in TABLE_2.items():
        got = table2_row(q, p).value
        if (q, p) == (100.0, 1.2):
            # printed cell is itself off by 5.7e-8; pin to the true formula
            # value at 1e-8 and report the source discrepancy
            assert got == pytest.approx(TABLE_2_100_12_EXACT, rel=1e-8)
            assert got == pytest.approx(want, rel=1e-7)
            print(
                f"  note: cell (100, 1.2) printed as {want}, formula value "
                f"{TABLE_2_100_12_EXACT} (source off by 5.7e-8)"
            )
        else:
            assert got == pytest.approx(want, rel=1e-8), f"table 2 cell ({q}, {p})"
    for q, want in TABLE_2_QT.items():
        got = q + qt_closed_form_p2(q, q).bound1
        assert got == pytest.approx(want, rel=1e-8)
    _report(4, 5.0, t0, "18 cells at 1e-8 (one source misprint pinned to formula); Qt column at 1e-8")


def test_criterion_5_three_function_agreement():
    t0 = time.perf_counter()
    rng = random.Random(20240810)
    for _ in range(1000):
        Q = [rng.uniform(1.0001, 100.0) for _ in range(3)]
        a = min3_bound(*Q)
        b = min3_via_system(*Q).Q_A0
        c = solve_blowup_lp(Q).bound
        scale = max(a, b, c)
        assert abs(a - b) <= 1e-9 * scale
        assert abs(a - c) <= 1e-9 * scale
        assert abs(b - c) <= 1e-9 * scale
    for q in (1.5, 2.0, 7.0, 63.0):
        want = 6.0 * q**3 / ((q + 1.0) * (2.0 * q + 1.0))
        assert min3_bound(q, q, q) == pytest.approx(want, rel=1e-12)
        assert min3_bound(q, 1.0, 1.0) == q
    for _ in range(200):
        q1, q2 = rng.uniform(1.0001, 100.0), rng.uniform(1.0001, 100.0)
        assert min3_bound(q1, q2, 1.0) == pytest.approx(min2_bound(q1, q2), rel=1e-12)
    _report(5, 60.0, t0, "closed form, linear system and LP agree at 1e-9 on 1000 triples")


def test_criterion_6_lp_base_case_and_coverage():
    from test_lp_blowup import TABLE_THREE_FUNCTIONS

    t0 = time.perf_counter()
    rng = random.Random(424242)
    for _ in range(1000):
        Q = [rng.uniform(1.0001, 100.0) for _ in range(2)]
        want = min2_bound(*Q)
        assert solve_blowup_lp(Q).bound == pytest.approx(want, rel=1e-9)
    cov = region_coverage(3)
    for vpos, want_rows in TABLE_THREE_FUNCTIONS.items():
        got = sorted(
            ((e.inequality.i, tuple(sorted(e.inequality.S))), e.rhs_fn)
            for e in cov
            if e.region.perm == (1, 2, 3) and e.region.vpos == vpos
        )
        assert got == sorted(want_rows)
    _report(6, 30.0, t0, "N=2 LP equals min2_bound on 1000 pairs; coverage table reproduced")


def test_criterion_7_pasting_sharpness():
    t0 = time.perf_counter()
    grid = np.linspace(1.1, 10.0, 5)
    for q1 in grid:
        for q2 in grid:
            ex = sharp_example(float(q1), float(q2), 2.0)
            assert ex.achieved_energy == pytest.approx(q1 * q2, rel=1e-10)
            got = quasimin_constant(ex.u, 2.0, "super")
            assert got == pytest.approx(q1 * q2, rel=1e-6)
    rng = random.Random(77)
    for _ in range(25):
        q1 = rng.uniform(1.1, 6.0)
        q2 = rng.uniform(1.1, 6.0)
        p = rng.uniform(1.3, 5.0)
        std = interval_example(q1, q2, p, "standard")
        assert std.achieved_energy > q1 * (q2 - 1.0) + 1.0  # strict: Q1 > 1
        sec = interval_example(q1, q2, p, "second")
        assert sec.achieved_energy > q2 * (q1 + 1.0) / 2.0  # strict: A < Q2/2
    _report(7, 120.0, t0, "5x5 sharp grid at 1e-10 and 1e-6; interval bounds strict")


def test_criterion_8_property_suites():
    t0 = time.perf_counter()
    rng = random.Random(1729)

    # monotonicity of the one-corner constant in the quotient
    for _ in range(200):
        g1, g2 = sorted(rng.uniform(1.0, 100.0) for _ in range(2))
        p = rng.uniform(1.1, 20.0)
        if g2 - g1 > 1e-9:
            assert corner_constant(g2, p).Q > corner_constant(g1, p).Q

    # two-sided sandwich Q <= gamma^(p-1) <= p^p Q/(p-1)^(p-1)
    for _ in range(200):
        g = rng.uniform(1.0001, 1000.0)
        p = rng.uniform(1.1, 20.0)
        ln_q = math.log(corner_constant(g, p).Q)
        mid = (p - 1.0) * math.log(g)
        assert ln_q <= mid + 1e-10
        assert mid <= p * math.log(p) - (p - 1.0) * math.log(p - 1.0) + ln_q + 1e-10

    # strict two-function chain Q1+Q2-2 < Qbar < Q1+Q2-1
    for _ in range(200):
        q1, q2 = rng.uniform(1.001, 100.0), rng.uniform(1.001, 100.0)
        lo, hi = min2_sandwich(q1, q2)
        assert lo < min2_bound(q1, q2) < hi

    # branch ordering and crossing enclosure x1 < x0 < x2
    for _ in range(200):
        q1, q2 = rng.uniform(1.05, 50.0), rng.uniform(1.05, 50.0)
        p = rng.uniform(1.3, 8.0)
        br = alpha_branches(q1, p)
        assert 1.0 - 1.0 / p < br.alpha_prime < 1.0 < br.alpha
        rep = q_tilde(q1, q2, p)
        assert 0.0 < rep.x1 < rep.x0 < rep.x2 < 1.0

    # explicit p = 2 lower bounds stay below the realized blowup
    for _ in range(200):
        q1, q2 = sorted(rng.uniform(1.01, 50.0) for _ in range(2))
        rep = q_tilde(q1, q2, 2.0)
        qt = qt_closed_form_p2(q1, q2)
        assert rep.q_tilde > q2 + qt.bound1
        assert rep.q_tilde > q2 + qt.bound2

    # equal-constant 1/e bound at p = 2
    for _ in range(200):
        q = rng.uniform(1.001, 200.0)
        assert q_tilde(q, q, 2.0).q_tilde > equal_q_e_bound(q)

    # numerical best-constant of alternating zig-zags matches the one-corner Q
    for _ in range(200):
        lo_s = rng.uniform(0.2, 2.0)
        hi_s = lo_s * rng.uniform(1.1, 5.0)
        n_corners = rng.randint(1, 3)
        xs = [0.0] + sorted(rng.uniform(0.1, 0.9) for _ in range(n_corners)) + [1.0]
        while any(b - a < 0.03 for a, b in zip(xs, xs[1:])):
            xs = [0.0] + sorted(rng.uniform(0.1, 0.9) for _ in range(n_corners)) + [1.0]
        start_low = rng.random() < 0.5
        slopes = [
            (lo_s if (i % 2 == 0) == start_low else hi_s) for i in range(n_corners + 1)
        ]
        ys = [0.0]
        for s, a, b in zip(slopes, xs, xs[1:]):
            ys.append(ys[-1] + s * (b - a))
        p = rng.uniform(1.3, 6.0)
        zz = PiecewiseLinearFn(xs, ys)
        want = zigzag_constant(slopes, xs[1:-1], p)
        got = quasimin_constant(zz, p, "free")
        assert got == pytest.approx(want, rel=1e-8)

    _report(8, 120.0, t0, "7 property families x 200 randomized instances")
