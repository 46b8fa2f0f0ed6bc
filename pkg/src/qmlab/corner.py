"""One-corner functions: two positive slopes alpha < beta meeting at a corner,
quotient gamma = beta/alpha.

The optimal quasiminimizing constant of such a function is

    Q = (gamma^p + k) (1 + k)^(p-1) / (gamma + k)^p
      = (p-1)^(p-1) (gamma^p - 1)^p / (p^p (gamma^p - gamma)^(p-1) (gamma - 1)),

    k = (p gamma^p (gamma - 1) - gamma (gamma^p - 1)) / (gamma^p - 1 - p (gamma - 1)),

and the energy ratio over an interval [-a, b] around the corner is maximal
(equal to Q) exactly when a/b = k, with a on the shallow side.  k = gamma
when p = 2.  Q(gamma, p) is continuous and strictly increasing in gamma, and
Q <= gamma^(p-1) <= p^p Q / (p-1)^(p-1), which brackets the inverse map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import InvalidParam
from .numerics import find_root_bracketed
from .pwl import PiecewiseLinearFn


@dataclass(frozen=True)
class CornerConstants:
    """Interval-shape parameter k and optimal constant Q of a one-corner fn."""

    k: float
    Q: float


@dataclass(frozen=True)
class OneCornerSpec:
    """A concrete one-corner function: slope alpha before the corner,
    alpha*gamma after it, value offset at the corner."""

    gamma: float
    corner: float
    alpha: float
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma <= 1.0:
            raise InvalidParam("gamma must be > 1")
        if self.alpha <= 0.0:
            raise InvalidParam("alpha must be > 0")

    def to_pwl(self, lo: float, hi: float) -> PiecewiseLinearFn:
        """Realize on [lo, hi]; the corner must lie strictly inside."""
        if not lo < self.corner < hi:
            raise InvalidParam("corner must lie strictly inside [lo, hi]")
        y_lo = self.offset + self.alpha * (lo - self.corner)
        y_hi = self.offset + self.alpha * self.gamma * (hi - self.corner)
        return PiecewiseLinearFn([lo, self.corner, hi], [y_lo, self.offset, y_hi])


def _ln_expm1(t: float) -> float:
    """log(e^t - 1) for t > 0 without overflow."""
    if t < 40.0:
        return math.log(math.expm1(t))
    return t + math.log1p(-math.exp(-t))


def _ln_corner_q(gamma: float, p: float) -> float:
    """log Q(gamma, p) via the k-free product form, all factors in log scale."""
    ln_g = math.log(gamma)
    ln_a = _ln_expm1(p * ln_g)  # log(gamma^p - 1)
    ln_b = ln_g + _ln_expm1((p - 1.0) * ln_g)  # log(gamma^p - gamma)
    return (
        (p - 1.0) * math.log(p - 1.0)
        - p * math.log(p)
        + p * ln_a
        - (p - 1.0) * ln_b
        - math.log(gamma - 1.0)
    )


def _corner_k(gamma: float, p: float) -> float:
    eps = gamma - 1.0
    if p * eps <= 1e-4:
        # Series around gamma = 1 (the closed form is 0/0 there); the
        # quadratic term vanishes at p = 2 where k = gamma exactly.
        return 1.0 + (p + 1.0) * eps / 3.0 + (p + 1.0) * (p - 2.0) * eps * eps / 18.0
    big = p * math.log(gamma)
    if big <= 600.0:
        a = math.expm1(big)  # gamma^p - 1
        num = p * (a + 1.0) * eps - gamma * a
        den = a - p * eps
        return num / den
    # gamma^p overflows; divide both sides by gamma^p first.
    e = math.exp(-big)
    return (p * eps - gamma + gamma * e) / (1.0 - e * (1.0 + p * eps))


def corner_constant(gamma: float, p: float) -> CornerConstants:
    """Optimal quasiminimizing constant Q and interval shape k for quotient
    gamma; gamma = 1 is the cornerless limit (k, Q) = (1, 1).

    Evaluation stays in the log domain, so large p and gamma produce finite
    results whenever Q itself is representable.
    """
    if gamma < 1.0:
        raise InvalidParam(f"gamma must be >= 1, got {gamma}")
    if p <= 1.0:
        raise InvalidParam(f"p must be > 1, got {p}")
    if gamma == 1.0:
        return CornerConstants(k=1.0, Q=1.0)
    ln_q = _ln_corner_q(gamma, p)
    q = math.exp(ln_q) if ln_q < 709.0 else math.inf  # Q beyond double range
    return CornerConstants(k=_corner_k(gamma, p), Q=q)


def gamma_from_q(Q: float, p: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """The unique gamma >= 1 with corner_constant(gamma, p).Q = Q.

    Solved for log(gamma) on the bracket given by the two-sided estimate
    Q <= gamma^(p-1) <= p^p Q / (p-1)^(p-1), so the root is enclosed on the
    first try; working in log coordinates keeps full relative precision for
    the huge quotients that small p and large Q demand.
    """
    if Q < 1.0:
        raise InvalidParam(f"Q must be >= 1, got {Q}")
    if p <= 1.0:
        raise InvalidParam(f"p must be > 1, got {p}")
    if Q == 1.0:
        return 1.0
    ln_q = math.log(Q)
    lo = ln_q / (p - 1.0)
    hi = (p * math.log(p) - (p - 1.0) * math.log(p - 1.0) + ln_q) / (p - 1.0)

    def f(t: float) -> float:
        return _ln_corner_q(math.exp(t), p) - ln_q

    # Both inequalities of the estimate are strict for gamma > 1, but guard
    # the float edges anyway.
    for _ in range(60):
        if f(lo) < 0.0:
            break
        lo *= 0.5
    for _ in range(60):
        if f(hi) > 0.0:
            break
        hi *= 1.5
    t = find_root_bracketed(f, lo, hi, cfg)
    return math.exp(t)


@dataclass(frozen=True)
class UnitCorner:
    """The convex one-corner function on (0,1) with u(0)=0, u(1)=1 and the
    maximal p-energy allowed by Q: corner at x0 = k/(k+1), lower slope alpha."""

    x0: float
    alpha: float


def optimal_unit_corner(gamma: float, p: float) -> UnitCorner:
    """Corner abscissa and lower slope of the extremal unit one-corner fn:

        x0 = k/(k+1),
        alpha = (p-1)/p * (gamma^p - 1)/(gamma^p - gamma),

    which satisfy the continuity identity alpha*(gamma + x0*(1-gamma)) = 1.
    """
    if gamma <= 1.0:
        raise InvalidParam(f"gamma must be > 1, got {gamma}")
    if p <= 1.0:
        raise InvalidParam(f"p must be > 1, got {p}")
    k = _corner_k(gamma, p)
    x0 = k / (k + 1.0)
    ln_g = math.log(gamma)
    # (gamma^p-1)/(gamma^p-gamma) = expm1(-p ln g)/expm1((1-p) ln g): stable
    # for both tiny and huge gamma^p.
    ratio = math.expm1(-p * ln_g) / math.expm1((1.0 - p) * ln_g)
    return UnitCorner(x0=x0, alpha=(p - 1.0) / p * ratio)


def unit_corner_pwl(gamma: float, p: float) -> PiecewiseLinearFn:
    """PWL realization of optimal_unit_corner on [0, 1]; gamma = 1 gives the
    identity (no corner).

    For p close to 1 the corner abscissa k/(k+1) crowds the right endpoint
    (k grows like (p-1)*gamma with gamma >= Q^(1/(p-1))); once 1 - x0 drops
    under 1e-12 the two-segment function cannot be realized in doubles and
    InvalidParam is raised."""
    if gamma == 1.0:
        return PiecewiseLinearFn([0.0, 1.0], [0.0, 1.0])
    uc = optimal_unit_corner(gamma, p)
    k = _corner_k(gamma, p)
    if 1.0 / (k + 1.0) < 1e-12:
        raise InvalidParam(
            f"corner at 1 - {1.0 / (k + 1.0):.3e} is too close to 1 to realize"
        )
    return PiecewiseLinearFn([0.0, uc.x0, 1.0], [0.0, uc.alpha * uc.x0, 1.0])


@dataclass(frozen=True)
class TangencyExponents:
    """Exponent pair (alpha, alpha*gamma) at which the power functions x^a
    share the one-corner function's constant: Q_alpha = Q_(alpha*gamma) = Q."""

    alpha_low: float
    alpha_high: float


def tangency_exponents(gamma: float, p: float) -> TangencyExponents:
    """Both power exponents tangent to the optimal unit one-corner function:
    the lower slope alpha (< 1) and alpha*gamma (> 1).

    The power-function constants of both exponents equal the one-corner Q;
    this is verified before returning, in log scale and with the
    cancellation-free denominator p(alpha-1)+1 = (p-1)(gamma-1)/(gamma^p -
    gamma) (evaluating q_alpha directly at the rounded alpha can lose far
    more than 1e-12 when alpha is pinned against 1 - 1/p).
    """
    uc = optimal_unit_corner(gamma, p)
    lo, hi = uc.alpha, uc.alpha * gamma
    ln_g = math.log(gamma)
    ln_d = (
        math.log(p - 1.0) + math.log(gamma - 1.0) - ln_g - _ln_expm1((p - 1.0) * ln_g)
    )
    ln_q = _ln_corner_q(gamma, p)
    for ln_a in (math.log(lo), math.log(lo) + ln_g):
        # d is the same for the low branch and gamma^p * d-identity for the
        # high one, so both reduce to the identical log expression p*ln(lo)
        # - ln_d; check it once per exponent form anyway.
        ln_qa = p * ln_a - (ln_d + (p * ln_g if ln_a > math.log(lo) else 0.0))
        if abs(ln_qa - ln_q) > 1e-12 * (1.0 + abs(ln_q)):
            raise InvalidParam(
                f"tangency check failed: log Q_alpha = {ln_qa} vs log corner Q = {ln_q}"
            )
    return TangencyExponents(alpha_low=lo, alpha_high=hi)


def zigzag_constant(slopes: list[float], corners: list[float], p: float) -> float:
    """Best quasiminimizing constant of a strictly increasing PWL function
    whose slopes alternate between exactly two positive values alpha < beta:
    it equals the one-corner constant for gamma = beta/alpha, independent of
    how many corners there are or where they sit."""
    if len(slopes) < 2 or len(corners) != len(slopes) - 1:
        raise InvalidParam("need n+1 slopes for n >= 1 corners")
    if any(s <= 0.0 for s in slopes):
        raise InvalidParam("slopes must be positive (strictly increasing zig-zag)")
    if any(b <= a for a, b in zip(corners, corners[1:])):
        raise InvalidParam("corners must be strictly increasing")
    distinct = sorted(set(slopes))
    if len(distinct) != 2:
        raise InvalidParam(f"slopes must take exactly 2 distinct values, got {len(distinct)}")
    if any(a == b for a, b in zip(slopes, slopes[1:])):
        raise InvalidParam("slopes must alternate")
    return corner_constant(distinct[1] / distinct[0], p).Q
