"""Continuous piecewise-linear functions on a closed interval, with p-energy,
pointwise minima, least concave majorants and best-constant estimation.

The p-energy of a PWL function over (a, b) is the exact sum of
|slope|^p * overlap over its segments; the chord energy is the energy of the
linear function with the same endpoint values, i.e. |df|^p / (b-a)^(p-1).
The ratio of the two, taken over all subintervals, is the quasiminimizing
constant; replacing the chord by the least concave majorant gives the
quasisuperminimizing constant.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    DomainMismatch,
    DomainViolation,
    InvalidExponent,
    InvalidParam,
    NotQuasiminimizer,
)
from .numerics import maximize_2d

# Above this, |s|^p * w is evaluated as exp(p*log|s| + log w) so that huge
# |s|^p with tiny w does not overflow on the way to a finite product.
_LOG_DOMAIN_THRESHOLD = 600.0


def _pow_term(slope: float, p: float, width: float) -> float:
    """|slope|^p * width, routed through the log domain when |slope|^p alone
    would overflow or underflow."""
    s = abs(slope)
    if s == 0.0 or width == 0.0:
        return 0.0
    t = p * math.log(s)
    if abs(t) <= _LOG_DOMAIN_THRESHOLD:
        return s**p * width
    return math.exp(t + math.log(width))


def _abs_pow(base: float, p: float) -> float:
    b = abs(base)
    if b == 0.0:
        return 0.0
    t = p * math.log(b)
    if abs(t) <= _LOG_DOMAIN_THRESHOLD:
        return b**p
    return math.exp(t)


class PiecewiseLinearFn:
    """Continuous piecewise-linear function given by strictly increasing
    breakpoints x_0 < ... < x_n and values y_0 ... y_n; affine in between.

    Immutable after construction; evaluation outside [x_0, x_n] raises.
    """

    __slots__ = ("x", "y")

    def __init__(self, breakpoints: Iterable[float], values: Iterable[float]):
        x = np.asarray(list(breakpoints), dtype=float)
        y = np.asarray(list(values), dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise InvalidParam("breakpoints and values must be 1-D of equal length")
        if len(x) < 2:
            raise InvalidParam("need at least two breakpoints (one segment)")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidParam("coordinates must be finite")
        if not np.all(np.diff(x) > 0.0):
            raise InvalidParam("breakpoints must be strictly increasing")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name: str, value) -> None:  # pragma: no cover
        raise AttributeError("PiecewiseLinearFn is immutable")

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.x[0]), float(self.x[-1])

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.y) / np.diff(self.x)

    def __call__(self, t):
        lo, hi = self.domain
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < lo) or np.any(t_arr > hi):
            raise DomainViolation(f"evaluation outside domain [{lo}, {hi}]")
        out = np.interp(t_arr, self.x, self.y)
        return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out

    def __repr__(self) -> str:
        lo, hi = self.domain
        return f"PiecewiseLinearFn({len(self.x)} pts on [{lo:g}, {hi:g}])"

    def restrict(self, a: float, b: float) -> "PiecewiseLinearFn":
        """The same function viewed on [a, b] (endpoints interpolated in)."""
        _check_subinterval(self, a, b)
        i = bisect_right(self.x.tolist(), a)
        j = bisect_left(self.x.tolist(), b)
        xs = [a] + self.x[i:j].tolist() + [b]
        ys = [self(a)] + self.y[i:j].tolist() + [self(b)]
        return PiecewiseLinearFn(xs, ys)

    def reflect(self) -> "PiecewiseLinearFn":
        """x -> f(x0 + xn - x): the graph mirrored across the domain midpoint."""
        lo, hi = self.domain
        return PiecewiseLinearFn((lo + hi) - self.x[::-1], self.y[::-1])

    def affine_image(self, xa: float, xb: float, ya: float, yb: float) -> "PiecewiseLinearFn":
        """Affine copy with domain mapped onto [xa, xb] and endpoint values
        onto (ya, yb).  Requires xa < xb and nonconstant endpoint values."""
        lo, hi = self.domain
        f0, f1 = float(self.y[0]), float(self.y[-1])
        if not xa < xb:
            raise InvalidParam("need xa < xb")
        if f0 == f1:
            raise InvalidParam("endpoint values equal; value map is underdetermined")
        xs = xa + (self.x - lo) * ((xb - xa) / (hi - lo))
        ys = ya + (self.y - f0) * ((yb - ya) / (f1 - f0))
        xs_list = xs.tolist()
        xs_list[0], xs_list[-1] = xa, xb  # pin ends exactly
        ys_list = ys.tolist()
        ys_list[0], ys_list[-1] = ya, yb
        return PiecewiseLinearFn(xs_list, ys_list)

    def to_dict(self) -> dict:
        return {"breakpoints": self.x.tolist(), "values": self.y.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "PiecewiseLinearFn":
        try:
            return cls(d["breakpoints"], d["values"])
        except (KeyError, TypeError) as exc:
            raise InvalidParam(f"malformed function dict: {exc}") from exc


@dataclass(frozen=True)
class EnergyReport:
    """Energy bookkeeping for one subinterval."""

    interval: tuple[float, float]
    energy: float
    chord_energy: float
    ratio: float  # energy / chord_energy, +inf if the chord is flat


def _check_subinterval(f: PiecewiseLinearFn, a: float, b: float) -> None:
    lo, hi = f.domain
    if not (lo <= a < b <= hi):
        raise DomainViolation(f"({a}, {b}) is not a subinterval of [{lo}, {hi}]")


def energy(f: PiecewiseLinearFn, p: float, a: float, b: float) -> float:
    """Exact p-energy of f over (a, b): sum of |slope|^p * overlap length."""
    if p <= 1.0:
        raise InvalidParam("p must be > 1")
    _check_subinterval(f, a, b)
    x = f.x
    i = max(bisect_right(x.tolist(), a) - 1, 0)
    j = min(bisect_left(x.tolist(), b), len(x) - 1)
    # Segments i .. j-1 intersect (a, b).
    if j - i > 512:
        xs = np.clip(x[i : j + 1], a, b)
        widths = np.diff(xs)
        slopes = np.abs(f.slopes[i:j])
        terms = np.zeros_like(widths)
        pos = (slopes > 0.0) & (widths > 0.0)
        with np.errstate(over="ignore"):
            t = p * np.log(slopes[pos])
            terms[pos] = np.where(
                np.abs(t) <= _LOG_DOMAIN_THRESHOLD,
                slopes[pos] ** p * widths[pos],
                np.exp(t + np.log(widths[pos])),
            )
        return float(np.sum(terms))
    total = 0.0
    for k in range(i, j):
        w = min(b, float(x[k + 1])) - max(a, float(x[k]))
        if w > 0.0:
            sl = (float(f.y[k + 1]) - float(f.y[k])) / (float(x[k + 1]) - float(x[k]))
            total += _pow_term(sl, p, w)
    return total


def chord_energy(f: PiecewiseLinearFn, p: float, a: float, b: float) -> float:
    """p-energy of the linear function sharing f's values at a and b:
    |f(b) - f(a)|^p / (b - a)^(p-1)."""
    if p <= 1.0:
        raise InvalidParam("p must be > 1")
    _check_subinterval(f, a, b)
    df = f(b) - f(a)
    if df == 0.0:
        return 0.0
    return _pow_term(df / (b - a), p, b - a)


def energy_report(f: PiecewiseLinearFn, p: float, a: float, b: float) -> EnergyReport:
    e = energy(f, p, a, b)
    ce = chord_energy(f, p, a, b)
    if ce > 0.0:
        ratio = e / ce
    else:
        ratio = math.inf if e > 0.0 else 1.0
    return EnergyReport((a, b), e, ce, ratio)


def pointwise_min(f: PiecewiseLinearFn, g: PiecewiseLinearFn) -> PiecewiseLinearFn:
    """min{f, g} as a PWL function on the common domain.

    Breakpoints are the union of both breakpoint sets plus every transversal
    crossing, deduplicated at 1e-14 relative; tangential touches contribute
    no new breakpoint.
    """
    if f.domain != g.domain:
        raise DomainMismatch(f"domains differ: {f.domain} vs {g.domain}")
    grid = np.union1d(f.x, g.x)
    fv = np.interp(grid, f.x, f.y)
    gv = np.interp(grid, g.x, g.y)
    d = fv - gv
    dl, dr = d[:-1], d[1:]
    crossing_mask = dl * dr < 0.0
    if np.any(crossing_mask):
        xl = grid[:-1][crossing_mask]
        xr = grid[1:][crossing_mask]
        wl = dl[crossing_mask]
        wr = dr[crossing_mask]
        cross = xl + wl * (xr - xl) / (wl - wr)
        # Drop crossings that collide with an existing node.
        scale = np.maximum(1.0, np.abs(cross))
        idx = np.searchsorted(grid, cross)
        near_left = np.abs(cross - grid[np.maximum(idx - 1, 0)]) <= 1e-14 * scale
        near_right = np.abs(grid[np.minimum(idx, len(grid) - 1)] - cross) <= 1e-14 * scale
        cross = cross[~(near_left | near_right)]
        if len(cross):
            grid = np.sort(np.concatenate([grid, cross]))
    vals = np.minimum(np.interp(grid, f.x, f.y), np.interp(grid, g.x, g.y))
    return PiecewiseLinearFn(grid, vals)


def _upper_hull(xs: list[float], ys: list[float]) -> tuple[list[float], list[float]]:
    """Vertices of the upper convex hull of the given graph points, left to
    right (equivalently: the least concave majorant's breakpoints)."""
    hx: list[float] = []
    hy: list[float] = []
    for px, py in zip(xs, ys):
        while len(hx) >= 2:
            # Pop the middle point when it lies on or below the chord
            # (slope sequence must be strictly decreasing).
            if (hy[-1] - hy[-2]) * (px - hx[-1]) <= (py - hy[-1]) * (hx[-1] - hx[-2]):
                hx.pop()
                hy.pop()
            else:
                break
        hx.append(px)
        hy.append(py)
    return hx, hy


def concave_envelope(f: PiecewiseLinearFn, a: float, b: float) -> PiecewiseLinearFn:
    """Least concave majorant of f on [a, b].

    Equals the upper convex hull of the graph vertices of f restricted to
    [a, b]; it matches f at a and b, dominates f in between, and is the
    least-energy competitor lying above f with those boundary values (the
    1-D obstacle-problem solution).
    """
    g = f.restrict(a, b)
    hx, hy = _upper_hull(g.x.tolist(), g.y.tolist())
    if len(hx) == 1:  # single point cannot happen (restrict keeps 2+), guard anyway
        raise DomainViolation("degenerate envelope")
    return PiecewiseLinearFn(hx, hy)


def _hull_energy(xs: list[float], ys: list[float], p: float) -> float:
    hx, hy = _upper_hull(xs, ys)
    total = 0.0
    for k in range(len(hx) - 1):
        w = hx[k + 1] - hx[k]
        total += _pow_term((hy[k + 1] - hy[k]) / w, p, w)
    return total


class _RatioOracle:
    """Fast energy-ratio evaluation for a fixed PWL function.

    Prefix energies make the numerator O(1); the denominator is the chord
    energy (mode='free') or the least-concave-majorant energy (mode='super',
    O(k) in the number of enclosed breakpoints).
    """

    def __init__(self, f: PiecewiseLinearFn, p: float, mode: str):
        self.f = f
        self.p = p
        self.mode = mode
        self.xs = f.x.tolist()
        self.ys = f.y.tolist()
        n_seg = len(self.xs) - 1
        self.seg_slope = [
            (self.ys[k + 1] - self.ys[k]) / (self.xs[k + 1] - self.xs[k]) for k in range(n_seg)
        ]
        self.seg_pow = [_abs_pow(s, p) for s in self.seg_slope]
        self.prefix = [0.0]
        for k in range(n_seg):
            self.prefix.append(self.prefix[-1] + self.seg_pow[k] * (self.xs[k + 1] - self.xs[k]))

    def value(self, t: float) -> float:
        k = min(max(bisect_right(self.xs, t) - 1, 0), len(self.xs) - 2)
        return self.ys[k] + self.seg_slope[k] * (t - self.xs[k])

    def energy(self, a: float, b: float) -> float:
        i = min(max(bisect_right(self.xs, a) - 1, 0), len(self.xs) - 2)
        j = min(max(bisect_right(self.xs, b) - 1, 0), len(self.xs) - 2)
        if i == j:
            return self.seg_pow[i] * (b - a)
        e = self.prefix[j] - self.prefix[i + 1]
        e += self.seg_pow[i] * (self.xs[i + 1] - a)
        e += self.seg_pow[j] * (b - self.xs[j])
        return e

    def denominator(self, a: float, b: float) -> float:
        fa, fb = self.value(a), self.value(b)
        if self.mode == "free":
            return _pow_term((fb - fa) / (b - a), self.p, b - a)
        i = bisect_right(self.xs, a)
        j = bisect_left(self.xs, b)
        return _hull_energy([a] + self.xs[i:j] + [b], [fa] + self.ys[i:j] + [fb], self.p)

    def ratio(self, a: float, b: float) -> float:
        if not b - a > 0.0:
            return -math.inf
        num = self.energy(a, b)
        den = self.denominator(a, b)
        if den <= 0.0:
            return math.inf if num > 0.0 else 1.0
        return num / den


def quasimin_constant(
    f: PiecewiseLinearFn,
    p: float,
    mode: Literal["free", "super"] = "free",
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Best quasi(super)minimizing constant of f: the supremum over
    subintervals (a, b) of the ratio of f's p-energy to the energy of the
    cheapest admissible competitor (chord for mode='free', least concave
    majorant for mode='super').

    The supremum is attained either at a pair of breakpoints or at an
    interior optimum of the smooth two-variable ratio within a fixed pair of
    segments (for a one-corner function it sits where the side lengths have
    ratio k, strictly inside the segments), so all breakpoint pairs are
    scanned and every segment pair is refined with maximize_2d.

    Raises NotQuasiminimizer when some subinterval has zero competitor
    energy but positive own energy (the constant would be +inf).
    """
    if p <= 1.0:
        raise InvalidParam("p must be > 1")
    if mode not in ("free", "super"):
        raise InvalidParam(f"unknown mode {mode!r}")
    oracle = _RatioOracle(f, p, mode)
    xs = oracle.xs
    n = len(xs)
    best = 1.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            r = oracle.ratio(xs[i], xs[j])
            if r > best:
                best = r
    if math.isinf(best):
        raise NotQuasiminimizer("zero competitor energy on a subinterval with positive energy")
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            # Left end in segment i, right end in segment j; the a < b guard
            # in ratio() handles the shared corner of adjacent segments.
            box = [(xs[i], xs[i + 1]), (xs[j], xs[j + 1])]
            (_, _), val = maximize_2d(oracle.ratio, box, cfg)
            if val > best:
                best = val
    if math.isinf(best):
        raise NotQuasiminimizer("zero competitor energy on a subinterval with positive energy")
    return best


def sample_to_pwl(
    alpha: float,
    form: Literal["increasing", "reflected"],
    n: int,
    p: float = 2.0,
) -> PiecewiseLinearFn:
    """Sample x^alpha (increasing) or 1 - (1-x)^alpha (reflected) on [0, 1]
    at n+1 nodes.

    Where |u'|^p blows up (alpha < 1: at 0 for the increasing form, at 1 for
    the reflected one) the nodes cluster geometrically toward that endpoint,
    otherwise the grid is uniform; uniform grids systematically undershoot
    the energy near the singularity.
    """
    if alpha <= 0.0:
        raise InvalidExponent(f"alpha must be positive, got {alpha}")
    if n < 2:
        raise InvalidParam("need n >= 2 sample segments")
    if form not in ("increasing", "reflected"):
        raise InvalidParam(f"unknown form {form!r}")
    if alpha >= 1.0:
        grid = np.linspace(0.0, 1.0, n + 1)
    else:
        # First cell [0, x_min] carries an energy defect ~ (Q_a - 1) x_min^e0
        # with e0 = p(alpha-1)+1 > 0; pick x_min so the defect is tiny.  For
        # the reflected form nodes live at 1 - s and s below ~1e-12 collides
        # with 1.0 in doubles, which floors the achievable defect there.
        e0 = p * (alpha - 1.0) + 1.0
        if e0 <= 0.0:
            raise InvalidExponent(f"alpha={alpha} not integrable for p={p}")
        floor = 1e-12 if form == "reflected" else 1e-260
        x_min = min(max(10.0 ** (-16.0 / e0), floor), 1.0 / (2 * n))
        grid = np.concatenate([[0.0], np.geomspace(x_min, 1.0, n)])
    if form == "increasing":
        vals = np.where(grid > 0.0, np.power(np.maximum(grid, 1e-320), alpha), 0.0)
        vals[-1] = 1.0
        return PiecewiseLinearFn(grid, vals)
    s = grid[::-1]  # distance to the right endpoint, clustered at 0
    x = (1.0 - grid)[::-1]
    vals = 1.0 - np.where(s > 0.0, np.power(np.maximum(s, 1e-320), alpha), 0.0)
    x[0], vals[0] = 0.0, 0.0
    x[-1], vals[-1] = 1.0, 1.0
    return PiecewiseLinearFn(x, vals)
