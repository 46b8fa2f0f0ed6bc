"""Blowup upper bounds for minima of two and three quasisuperminimizers.

min{u1, u2} of a Q1- and a Q2-quasisuperminimizer is a quasisuperminimizer
with constant at most

    min{Q1 Q2, Q1 + Q2}            (the coarse product/sum bound)
    (Q1 + Q2 - 2) Q1 Q2/(Q1 Q2 - 1)  (the sharper two-function bound),

the latter strictly between Q1 + Q2 - 2 and Q1 + Q2 - 1 whenever both
constants exceed 1.  For three functions the cancellation-multiplier system
gives

    Qbar = Q1 Q2 Q3 (R1 + R2 + R3) / P,
    P = 2 Q1 Q2 Q3 - Q1 Q2 - Q2 Q3 - Q3 Q1 + 1,
    R_i = (Qj-1)(Qk-1)(Qj-1 + Qk-1)/(Qj Qk - 1),

which degenerates to the two-function bound when one constant is 1 and to
the surviving constant when two are.  min3_via_system re-derives the same
value by actually solving the 6-equation reduced multiplier system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam
from .numerics import solve_dense_linear


def _check_q(*qs: float, strict: bool = False) -> None:
    for q in qs:
        if strict and q <= 1.0:
            raise InvalidParam(f"constants must be > 1, got {q}")
        if q < 1.0:
            raise InvalidParam(f"constants must be >= 1, got {q}")


def km_bound(Q1: float, Q2: float) -> float:
    """Coarse two-function bound min{Q1*Q2, Q1+Q2}."""
    _check_q(Q1, Q2)
    return min(Q1 * Q2, Q1 + Q2)


def min2_bound(Q1: float, Q2: float) -> float:
    """Sharper two-function bound (Q1+Q2-2) Q1 Q2/(Q1 Q2 - 1); equals 1 when
    both inputs are 1 and max{Q1, Q2} when either is."""
    _check_q(Q1, Q2)
    if Q1 == 1.0 and Q2 == 1.0:
        return 1.0
    prod = Q1 * Q2  # shared subexpression keeps the bound exactly symmetric
    return (Q1 + Q2 - 2.0) * prod / (prod - 1.0)


def min2_sandwich(Q1: float, Q2: float) -> tuple[float, float]:
    """(Q1+Q2-2, Q1+Q2-1): the strict enclosure of min2_bound for Q > 1."""
    _check_q(Q1, Q2, strict=True)
    return (Q1 + Q2 - 2.0, Q1 + Q2 - 1.0)


def _r_term(Qj: float, Qk: float) -> float:
    if Qj == 1.0 and Qk == 1.0:
        return 0.0
    return (Qj - 1.0) * (Qk - 1.0) * (Qj - 1.0 + Qk - 1.0) / (Qj * Qk - 1.0)


def min3_bound(Q1: float, Q2: float, Q3: float) -> float:
    """Three-function bound Q1 Q2 Q3 (R1+R2+R3)/P.

    Inputs equal to 1 are handled by case analysis: two or more ones leave
    the remaining constant (P and the R_i are 0/0 there), a single one
    reduces to min2_bound of the other two, which the closed form already
    does on its own.
    """
    _check_q(Q1, Q2, Q3)
    qs = (Q1, Q2, Q3)
    ones = sum(1 for q in qs if q == 1.0)
    if ones >= 2:
        return max(qs)
    P = 2.0 * Q1 * Q2 * Q3 - Q1 * Q2 - Q2 * Q3 - Q3 * Q1 + 1.0
    R = _r_term(Q2, Q3) + _r_term(Q3, Q1) + _r_term(Q1, Q2)
    return Q1 * Q2 * Q3 * R / P


@dataclass(frozen=True)
class TripleSystemReport:
    """Multipliers and region constants from the reduced 6-equation system.

    Q_A1[k] <= Q_A0 for each choice of the top function k, Q_A2[i] = Q_i,
    and Q_A0 is symmetric in the inputs.
    """

    x: tuple[float, float, float]
    y: tuple[float, float, float]
    Q_A0: float
    Q_A1: tuple[float, float, float]
    Q_A2: tuple[float, float, float]


def min3_via_system(Q1: float, Q2: float, Q3: float) -> TripleSystemReport:
    """Solve the reduced multiplier system

        x + S y = 0,   R x + y = c,   S_i = Q_i/(Q_i - 1),

    i.e. x = (S R - I)^{-1} S c, and read off the region constants:
    Q_A0 = c.x, Q_A1 (v below the top function) and Q_A2 = Q_i (v just
    above the minimum).  Requires all constants strictly > 1 (S_i blows up
    at 1; use min3_bound for the degenerate cases)."""
    _check_q(Q1, Q2, Q3, strict=True)
    q = np.array([Q1, Q2, Q3])
    s = q / (q - 1.0)
    S = np.array(
        [[0.0, s[2], s[1]], [s[2], 0.0, s[0]], [s[1], s[0], 0.0]]
    )
    R = np.array([[q[0], 1.0, 1.0], [1.0, q[1], 1.0], [1.0, 1.0, q[2]]])
    M = S @ R - np.eye(3)
    x = solve_dense_linear(M, S @ q)
    y = q - R @ x
    q_a0 = float(q @ x)
    q_a1 = tuple(float(q @ x - (q[k] - 1.0) * x[k]) for k in range(3))
    return TripleSystemReport(
        x=tuple(x), y=tuple(y), Q_A0=q_a0, Q_A1=q_a1, Q_A2=(Q1, Q2, Q3)
    )
