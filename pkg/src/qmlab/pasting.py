"""Sharp pasting constructions.

Pasting a Q1-quasisuperminimizer over an open subset of the domain of a
Q2-one (taking the minimum inside, keeping the outer function elsewhere)
yields a Q1*Q2-quasisuperminimizer, and the factor Q1*Q2 is attained:

* with a two-component inner set split at the outer one-corner function's
  corner, the pasted function's energy on (0, 1) is exactly Q1*Q2 against
  chord energy 1 (sharp_example);

* with a connected inner interval (x0, 1) the energy is
  Q1*Q2 - A(Q1-1) >= Q1(Q2-1) + 1, where A = alpha^p x0 < 1 is the outer
  function's energy left of its corner (interval_example, standard), and
  A -> 0 as p -> 1, driving the energy back up to Q1*Q2 (p_sweep);

* when the energy right of the corner is at most Q2/2, rebuilding both
  functions as decreasing one-corner functions places the large energy
  piece inside the pasted region instead, which guarantees
  energy >= Q2(Q1+1)/2 in all cases (interval_example, second).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corner import gamma_from_q, optimal_unit_corner, unit_corner_pwl
from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DiscontinuousPaste, InvalidParam
from .pwl import PiecewiseLinearFn, energy, pointwise_min

Interval = tuple[float, float]


@dataclass(frozen=True)
class PasteExample:
    """A concrete pasting instance: inner u1, outer u2, the pasted function,
    the inner open set, the realized energy on the full domain and the
    closed-form bound it witnesses."""

    u1: PiecewiseLinearFn
    u2: PiecewiseLinearFn
    u: PiecewiseLinearFn
    omega1: tuple[Interval, ...]
    achieved_energy: float
    claimed_bound: float


def paste(
    u2: PiecewiseLinearFn,
    u1: PiecewiseLinearFn,
    omega1: list[Interval] | tuple[Interval, ...],
    tol: float = 1e-12,
) -> PiecewiseLinearFn:
    """u2 outside omega1, min{u1, u2} on each component of omega1.

    The components must be disjoint open subintervals of u2's domain, u1
    must be defined on their closures, and the pasted function must be
    continuous: at every component endpoint e, min{u1(e), u2(e)} has to
    agree with u2(e), i.e. u1(e) >= u2(e) - tol.
    """
    lo, hi = u2.domain
    comps = sorted((float(a), float(b)) for a, b in omega1)
    prev = lo
    for a, b in comps:
        if not (lo <= a < b <= hi):
            raise InvalidParam(f"component ({a}, {b}) outside domain [{lo}, {hi}]")
        if a < prev:
            raise InvalidParam("components must be pairwise disjoint")
        prev = b
    u1_lo, u1_hi = u1.domain
    for a, b in comps:
        if not (u1_lo <= a and b <= u1_hi):
            raise InvalidParam("u1 is not defined on the closure of omega1")
        for e in (a, b):
            if u1(e) < u2(e) - tol * (1.0 + abs(u2(e))):
                raise DiscontinuousPaste(
                    f"min{{u1, u2}}({e}) = {u1(e)} != u2({e}) = {u2(e)}"
                )

    xs: list[float] = []
    ys: list[float] = []

    def _append(piece: PiecewiseLinearFn) -> None:
        for px, py in zip(piece.x.tolist(), piece.y.tolist()):
            if xs and px <= xs[-1]:
                continue
            xs.append(px)
            ys.append(py)

    cursor = lo
    for a, b in comps:
        if a > cursor:
            _append(u2.restrict(cursor, a))
        _append(pointwise_min(u1.restrict(a, b), u2.restrict(a, b)))
        cursor = b
    if cursor < hi:
        _append(u2.restrict(cursor, hi))
    if not xs or xs[0] > lo:
        xs.insert(0, lo)
        ys.insert(0, u2(lo))
    return PiecewiseLinearFn(xs, ys)


def sharp_example(
    Q1: float, Q2: float, p: float, cfg: ToleranceConfig = DEFAULT_TOL
) -> PasteExample:
    """The construction attaining the pasting factor exactly.

    u2 is the extremal one-corner function for Q2 on (0, 1) (corner x0);
    the inner set is (0, x0) union (x0, 1) and u1 restricts to each
    component as the extremal Q1 one-corner function rescaled to share
    u2's values at 0, x0 and 1.  Each inner piece then carries Q1 times
    the energy of u2's linear piece underneath it, so the total is
    exactly Q1 * (energy of u2) = Q1 Q2, while the chord energy is 1.
    """
    if Q1 <= 1.0 or Q2 <= 1.0:
        raise InvalidParam("sharp example needs Q1, Q2 > 1")
    if p <= 1.0:
        raise InvalidParam("p must be > 1")
    u2 = unit_corner_pwl(gamma_from_q(Q2, p, cfg), p)
    x0 = float(u2.x[1])
    y0 = float(u2.y[1])
    unit1 = unit_corner_pwl(gamma_from_q(Q1, p, cfg), p)
    left = unit1.affine_image(0.0, x0, 0.0, y0)
    right = unit1.affine_image(x0, 1.0, y0, 1.0)
    u1 = PiecewiseLinearFn(
        left.x.tolist() + right.x.tolist()[1:],
        left.y.tolist() + right.y.tolist()[1:],
    )
    omega1 = ((0.0, x0), (x0, 1.0))
    u = paste(u2, u1, omega1)
    return PasteExample(
        u1=u1,
        u2=u2,
        u=u,
        omega1=omega1,
        achieved_energy=energy(u, p, 0.0, 1.0),
        claimed_bound=Q1 * Q2,
    )


def interval_example(
    Q1: float,
    Q2: float,
    p: float,
    variant: str = "standard",
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> PasteExample:
    """Connected inner interval I running from the outer function's corner
    to the right domain end.

    standard: u2 = extremal increasing one-corner function for Q2 (corner
    x0), I = (x0, 1), u1 = extremal Q1 function rescaled onto I with
    matching boundary values.  Energy = Q1 Q2 - A(Q1-1) with
    A = alpha^p x0, witnessing the bound Q1(Q2-1) + 1 (strictly when
    Q1 > 1, since A < 1).

    second: if u2's energy right of the corner is at most Q2/2, both
    functions are replaced by their decreasing mirror images and I starts
    at the mirrored corner 1 - x0, so the inner region always holds energy
    >= Q2/2 and the total is >= Q2(Q1+1)/2.
    """
    if Q1 < 1.0 or Q2 < 1.0:
        raise InvalidParam("constants must be >= 1")
    if p <= 1.0:
        raise InvalidParam("p must be > 1")
    if variant not in ("standard", "second"):
        raise InvalidParam(f"unknown variant {variant!r}")
    u2 = unit_corner_pwl(gamma_from_q(Q2, p, cfg), p)
    x0 = float(u2.x[1]) if len(u2.x) == 3 else 0.0
    head = energy(u2, p, 0.0, x0) if x0 > 0.0 else 0.0  # A = alpha^p x0
    tail = energy(u2, p, x0, 1.0)
    unit1 = unit_corner_pwl(gamma_from_q(Q1, p, cfg), p)

    if variant == "second" and tail <= Q2 / 2.0:
        # Decreasing mirror: the corner moves to 1 - x0 and the shallow
        # piece (energy A >= Q2/2 here) lands inside the pasted region.
        ru2 = u2.reflect()
        c = 1.0 - x0
        ru1 = unit1.reflect().affine_image(c, 1.0, ru2(c), 0.0)
        omega1 = ((c, 1.0),)
        u = paste(ru2, ru1, omega1)
        return PasteExample(
            u1=ru1,
            u2=ru2,
            u=u,
            omega1=omega1,
            achieved_energy=energy(u, p, 0.0, 1.0),
            claimed_bound=Q2 * (Q1 + 1.0) / 2.0,
        )

    if x0 > 0.0:
        u1 = unit1.affine_image(x0, 1.0, float(u2.y[1]), 1.0)
        omega1 = ((x0, 1.0),)
    else:
        u1 = unit1
        omega1 = ((0.0, 1.0),)
    u = paste(u2, u1, omega1)
    claimed = Q2 * (Q1 + 1.0) / 2.0 if variant == "second" else Q1 * (Q2 - 1.0) + 1.0
    return PasteExample(
        u1=u1,
        u2=u2,
        u=u,
        omega1=omega1,
        achieved_energy=energy(u, p, 0.0, 1.0),
        claimed_bound=claimed,
    )


@dataclass(frozen=True)
class SweepRow:
    p: float
    head_energy: float  # A = alpha^p x0
    achieved_energy: float


def _standard_row_closed_form(Q1: float, Q2: float, p: float, cfg: ToleranceConfig) -> SweepRow:
    if Q2 == 1.0:
        return SweepRow(p=p, head_energy=0.0, achieved_energy=Q1)
    uc = optimal_unit_corner(gamma_from_q(Q2, p, cfg), p)
    head = math.exp(p * math.log(uc.alpha)) * uc.x0
    return SweepRow(p=p, head_energy=head, achieved_energy=Q1 * Q2 - head * (Q1 - 1.0))


def p_sweep(
    Q1: float, Q2: float, p_list: list[float], cfg: ToleranceConfig = DEFAULT_TOL
) -> list[SweepRow]:
    """interval_example(standard) across p_list: the head term A falls to 0
    as p decreases toward 1 and the realized energy climbs toward Q1*Q2.

    Near p = 1 the construction's corner is closer to 1 than doubles can
    represent (see unit_corner_pwl); those rows come from the closed form
    A = alpha^p x0, achieved = Q1 Q2 - A (Q1 - 1), which is the identity
    the realized rows satisfy anyway.
    """
    rows = []
    for p in p_list:
        try:
            ex = interval_example(Q1, Q2, p, "standard", cfg)
        except InvalidParam:
            rows.append(_standard_row_closed_form(Q1, Q2, p, cfg))
            continue
        a = ex.omega1[0][0]
        head = energy(ex.u2, p, 0.0, a) if a > 0.0 else 0.0
        rows.append(SweepRow(p=p, head_energy=head, achieved_energy=ex.achieved_energy))
    return rows
