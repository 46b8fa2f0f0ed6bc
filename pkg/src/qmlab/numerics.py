"""Scalar numeric kernels: bracketed root finding, box-constrained 2-D
maximization, dense linear solves and a small dense simplex solver.

Everything here is deterministic: fixed pivot rules, fixed scan orders,
no randomness.  All higher modules are built on these four entry points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    Infeasible,
    InvalidParam,
    NonConvergence,
    NoSignChange,
    SingularMatrix,
    Unbounded,
)

_EPS = np.finfo(float).eps
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...


def find_root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Root of f in [lo, hi] by Brent's method (bisection + secant/IQI).

    Requires a strict sign change f(lo)*f(hi) < 0.  Stops when the bracket
    is narrower than cfg.root_abs_tol (plus an ulp-scale guard so roots of
    magnitude >> 1 still terminate).  The returned point is the bracket end
    with the smaller |f|.
    """
    if not lo < hi:
        raise InvalidParam(f"need lo < hi, got [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    fa, fb = float(f(a)), float(f(b))
    # Sign tests compare directly rather than multiplying: products of two
    # tiny bracket values can underflow to zero and fake a sign agreement.
    if (
        math.isnan(fa)
        or math.isnan(fb)
        or fa == 0.0
        or fb == 0.0
        or (fa < 0.0) == (fb < 0.0)
    ):
        raise NoSignChange(f"f({lo})={fa} and f({hi})={fb} do not strictly bracket a root")

    c, fc = a, fa
    d = e = b - a
    for _ in range(cfg.max_iter):
        if fb != 0.0 and (fb < 0.0) == (fc < 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * cfg.root_abs_tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            # Secant (two points) or inverse quadratic (three points).
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = float(f(b))
    raise NonConvergence(f"root finder did not converge in {cfg.max_iter} iterations")


def _golden_max(
    g: Callable[[float], float], lo: float, hi: float, n_iter: int = 80
) -> tuple[float, float]:
    """Golden-section maximization of g on [lo, hi]; returns (x, g(x))."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(n_iter):
        if b - a <= 4.0 * _EPS * (abs(a) + abs(b)) + 1e-300:
            break
        if gc > gd:
            b, d, gd = d, c, gc
            c = b - _GOLDEN * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _GOLDEN * (b - a)
            gd = g(d)
    return (c, gc) if gc > gd else (d, gd)


def maximize_2d(
    f: Callable[[float, float], float],
    box: Sequence[tuple[float, float]],
    cfg: ToleranceConfig = DEFAULT_TOL,
    grid: int = 64,
    n_starts: int = 3,
) -> tuple[tuple[float, float], float]:
    """Maximize f over a box by grid scan plus coordinate golden sections.

    A grid x grid scan (>= 64 x 64) locates candidate basins; the best
    n_starts nodes are refined by alternating golden-section line searches
    over +-1 grid cell per coordinate, until the relative objective change
    over a full sweep drops below cfg.opt_rel_tol.  Only improvements are
    accepted, so the returned value dominates every scanned grid node.
    """
    (lo1, hi1), (lo2, hi2) = box
    if not (lo1 < hi1 and lo2 < hi2):
        raise InvalidParam("degenerate box")
    grid = max(grid, 64)
    xs = np.linspace(lo1, hi1, grid)
    ys = np.linspace(lo2, hi2, grid)
    vals = np.empty((grid, grid))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            vals[i, j] = f(x, y)
    flat = np.argsort(vals, axis=None)[::-1][:n_starts]
    hx = (hi1 - lo1) / (grid - 1)
    hy = (hi2 - lo2) / (grid - 1)

    best_pt: tuple[float, float] | None = None
    best_val = -math.inf
    for k in flat:
        i, j = divmod(int(k), grid)
        bx, by, bv = float(xs[i]), float(ys[j]), float(vals[i, j])
        converged = False
        for _ in range(cfg.max_iter):
            prev = bv
            x_new, vx = _golden_max(lambda x: f(x, by), max(lo1, bx - hx), min(hi1, bx + hx))
            if vx > bv:
                bx, bv = x_new, vx
            y_new, vy = _golden_max(lambda y: f(bx, y), max(lo2, by - hy), min(hi2, by + hy))
            if vy > bv:
                by, bv = y_new, vy
            if abs(bv - prev) <= cfg.opt_rel_tol * (abs(bv) + 1e-300):
                converged = True
                break
        if not converged:
            raise NonConvergence(f"2-D refinement exceeded {cfg.max_iter} sweeps")
        if bv > best_val:
            best_pt, best_val = (bx, by), bv
    assert best_pt is not None
    return best_pt, best_val


def solve_dense_linear(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b by Gaussian elimination with scaled partial pivoting.

    Raises SingularMatrix when the best available pivot is below 1e-14
    relative to its row scale.  One step of iterative refinement keeps the
    residual at ulp level for well-conditioned systems.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise InvalidParam(f"shape mismatch: A {A.shape}, b {b.shape}")

    def _lu_solve(rhs: np.ndarray) -> np.ndarray:
        U = A.copy()
        y = rhs.copy()
        scale = np.max(np.abs(U), axis=1)
        scale[scale == 0.0] = 1.0
        perm = np.arange(n)
        for k in range(n):
            ratios = np.abs(U[k:, k]) / scale[perm[k:]]
            r = k + int(np.argmax(ratios))
            if abs(U[r, k]) < 1e-14 * scale[perm[r]]:
                raise SingularMatrix(f"pivot {U[r, k]!r} below threshold in column {k}")
            if r != k:
                U[[k, r]] = U[[r, k]]
                y[[k, r]] = y[[r, k]]
                perm[[k, r]] = perm[[r, k]]
            factors = U[k + 1 :, k] / U[k, k]
            U[k + 1 :, k:] -= np.outer(factors, U[k, k:])
            y[k + 1 :] -= factors * y[k]
        x = np.zeros(n)
        for k in range(n - 1, -1, -1):
            x[k] = (y[k] - U[k, k + 1 :] @ x[k + 1 :]) / U[k, k]
        return x

    x = _lu_solve(b)
    x += _lu_solve(b - A @ x)
    return x


@dataclass
class LinearProgram:
    """min objective . x  subject to  eq rows, <= rows and lower bounds.

    Rows are (coefficients, rhs) pairs; every coefficient vector must match
    the objective's length.  Lower bounds are finite or -inf (default 0 for
    every variable); there are no upper bounds.
    """

    objective: np.ndarray
    eq_rows: list[tuple[np.ndarray, float]] = field(default_factory=list)
    ub_rows: list[tuple[np.ndarray, float]] = field(default_factory=list)
    lower_bounds: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float)
        n = self.objective.shape[0]
        self.eq_rows = [(np.asarray(a, dtype=float), float(r)) for a, r in self.eq_rows]
        self.ub_rows = [(np.asarray(a, dtype=float), float(r)) for a, r in self.ub_rows]
        for a, _ in self.eq_rows + self.ub_rows:
            if a.shape != (n,):
                raise InvalidParam("constraint row length does not match objective")
        if self.lower_bounds is None:
            self.lower_bounds = np.zeros(n)
        else:
            self.lower_bounds = np.asarray(self.lower_bounds, dtype=float)
            if self.lower_bounds.shape != (n,):
                raise InvalidParam("lower_bounds length does not match objective")
            if np.any(np.isposinf(self.lower_bounds)) or np.any(np.isnan(self.lower_bounds)):
                raise InvalidParam("lower bounds must be finite or -inf")


class _Tableau:
    """Dense simplex tableau with periodic refresh from the original data.

    T holds [B^{-1} A | B^{-1} b]; `lex_cols` (the initial basis columns,
    which start as a permuted identity) plus the rhs drive the
    lexicographic ratio test, which prevents cycling for any entering rule.
    """

    _REFRESH = 128

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: list[int]):
        self.A = A
        self.b = b
        self.basis = basis
        self.lex_cols = list(basis)
        self.T = np.empty((A.shape[0], A.shape[1] + 1))
        self._since_refresh = 0
        self.refresh()

    def refresh(self) -> None:
        B = self.A[:, self.basis]
        try:
            self.T = np.linalg.solve(B, np.hstack([self.A, self.b[:, None]]))
        except np.linalg.LinAlgError as exc:
            raise NonConvergence(f"simplex basis became singular: {exc}") from exc
        self._since_refresh = 0

    def stale(self) -> bool:
        return self._since_refresh > 0

    def reduced_costs(self, c: np.ndarray) -> np.ndarray:
        r = c - self.T[:, :-1].T @ c[self.basis]
        r[self.basis] = 0.0
        return r

    def pivot(self, leave: int, enter: int) -> None:
        T = self.T
        T[leave] /= T[leave, enter]
        others = np.arange(T.shape[0]) != leave
        T[others] -= np.outer(T[others, enter], T[leave])
        T[:, enter] = 0.0
        T[leave, enter] = 1.0
        self.basis[leave] = enter
        self._since_refresh += 1
        if self._since_refresh >= self._REFRESH:
            self.refresh()


def _simplex_phase(
    tab: _Tableau,
    c: np.ndarray,
    blocked: set[int],
    feas_tol: float,
    pivot_cap: int,
) -> None:
    """Run primal simplex to optimality of min c.z over the tableau's
    feasible basis set.

    Entering column by Dantzig's rule (`blocked` columns never enter),
    switching to Bland's smallest-index rule after a long degenerate stall
    so the iteration cannot cycle.  The ratio test ignores pivot candidates
    below a stability floor and, among minimum-ratio ties, takes the
    numerically largest pivot element.  Raises Unbounded on a descent ray,
    NonConvergence past pivot_cap.
    """
    m = tab.T.shape[0]
    if m == 0:
        allowed = [j for j in range(len(c)) if j not in blocked]
        if any(c[j] < -feas_tol for j in allowed):
            raise Unbounded("objective unbounded below (no constraints)")
        return
    blocked_list = list(blocked)
    stall = 0
    bland = False
    for _ in range(pivot_cap):
        r = tab.reduced_costs(c)
        if blocked_list:
            r[blocked_list] = 0.0
        if bland:
            neg = np.flatnonzero(r < -feas_tol)
            enter = int(neg[0]) if len(neg) else -1
        else:
            enter = int(np.argmin(r))
            if r[enter] >= -feas_tol:
                enter = -1
        if enter < 0:
            if tab.stale():
                # Recheck against a freshly recomputed tableau before
                # declaring optimality: kills accumulated drift.
                tab.refresh()
                continue
            return
        d = tab.T[:, enter]
        rhs = tab.T[:, -1]
        floor = 1e-9 * max(1.0, float(np.max(np.abs(d))))
        pos = d > floor
        if not np.any(pos):
            if tab.stale():
                tab.refresh()
                continue
            raise Unbounded("objective unbounded below along entering column")
        ratios = np.where(pos, np.maximum(rhs, 0.0) / np.where(pos, d, 1.0), math.inf)
        theta = float(np.min(ratios))
        tie = np.flatnonzero(ratios <= theta + 1e-9 * (1.0 + abs(theta)))
        leave = int(tie[np.argmax(d[tie])])
        if theta <= feas_tol:
            stall += 1
            if stall > 10 * (m + 5):
                bland = True
        else:
            stall = 0
        tab.pivot(leave, enter)
    raise NonConvergence("simplex exceeded its pivot budget")


def solve_lp(
    lp: LinearProgram, cfg: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, float]:
    """Optimal basic solution of a small dense LP by two-phase simplex.

    Dense floating point throughout (cfg.lp_feas_tol absorbs rounding);
    Bland's rule breaks ties and takes over entirely under degeneracy, so
    the iteration cannot cycle.  The pivot budget is cfg.max_iter per phase
    with a floor scaling in the row count, keeping the default config
    usable for the larger region LPs.  Raises Infeasible / Unbounded.
    """
    n = lp.objective.shape[0]
    lb = lp.lower_bounds
    assert lb is not None
    free = np.isneginf(lb)
    shift = np.where(free, 0.0, lb)

    # Substitute x = shift + u (+ split u, w for free variables): columns are
    # [u_0..u_{n-1}, w_j for free j, slacks...], all >= 0.
    free_idx = np.flatnonzero(free)
    n_u = n + len(free_idx)
    n_slack = len(lp.ub_rows)
    width = n_u + n_slack
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    for a, r in lp.eq_rows:
        row = np.zeros(width)
        row[:n] = a
        row[n : n + len(free_idx)] = -a[free_idx]
        rows.append(row)
        rhs.append(r - float(a @ shift))
    for s, (a, r) in enumerate(lp.ub_rows):
        row = np.zeros(width)
        row[:n] = a
        row[n : n + len(free_idx)] = -a[free_idx]
        row[n_u + s] = 1.0
        rows.append(row)
        rhs.append(r - float(a @ shift))
    m = len(rows)
    A = np.array(rows) if rows else np.zeros((0, width))
    b = np.array(rhs)
    neg = b < 0.0
    A[neg] *= -1.0
    b[neg] *= -1.0
    obj = np.zeros(width)
    obj[:n] = lp.objective
    obj[n : n + len(free_idx)] = -lp.objective[free_idx]

    pivot_cap = max(cfg.max_iter, 50 * (m + 5))
    feas = cfg.lp_feas_tol

    # Initial basis: a slack where its sign survived normalization, an
    # artificial column elsewhere.
    art_rows = [
        i for i in range(m) if i < len(lp.eq_rows) or neg[i]
    ]
    n_art = len(art_rows)
    A_ext = np.hstack([A, np.zeros((m, n_art))])
    basis: list[int] = []
    art_cols: set[int] = set()
    k = 0
    for i in range(m):
        if i in art_rows:
            col = width + k
            A_ext[i, col] = 1.0
            basis.append(col)
            art_cols.add(col)
            k += 1
        else:
            basis.append(n_u + (i - len(lp.eq_rows)))

    tab = _Tableau(A_ext, b, basis) if m else None
    if n_art and tab is not None:
        c1 = np.zeros(width + n_art)
        c1[width:] = 1.0
        _simplex_phase(tab, c1, set(), feas, pivot_cap)
        tab.refresh()
        art_val = sum(
            float(tab.T[i, -1]) for i in range(m) if basis[i] in art_cols
        )
        if art_val > feas * (1.0 + float(np.max(np.abs(b), initial=0.0))):
            raise Infeasible(f"phase-1 optimum {art_val:.3e} > 0")
        # Pivot leftover artificials out; rows admitting no pivot are
        # redundant and get dropped.
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] not in art_cols:
                continue
            cand = [
                j
                for j in np.flatnonzero(np.abs(tab.T[i, :width]) > 1e-9)
                if j not in basis
            ]
            if cand:
                tab.pivot(i, int(cand[0]))
            else:
                keep[i] = False
        if not np.all(keep):
            A_ext = A_ext[keep]
            b = b[keep]
            basis = [basis[i] for i in range(m) if keep[i]]
            m = len(basis)
            tab = _Tableau(A_ext, b, basis)

    if tab is not None:
        c2 = np.zeros(A_ext.shape[1])
        c2[:width] = obj
        _simplex_phase(tab, c2, art_cols, feas, pivot_cap)
        tab.refresh()
    else:
        c2 = np.zeros(A_ext.shape[1])
        c2[:width] = obj
        allowed = [j for j in range(len(c2)) if j not in art_cols]
        if any(c2[j] < -feas for j in allowed):
            raise Unbounded("objective unbounded below (no constraints)")

    u = np.zeros(A_ext.shape[1])
    if tab is not None:
        u[basis] = tab.T[:, -1]
    x = shift + u[:n]
    x[free_idx] -= u[n : n + len(free_idx)]
    return x, float(lp.objective @ x)
