"""Blowup bound for min{u_1, ..., u_N} as a linear program.

Testing the defining inequality of each Q_i-quasisuperminimizer u_i against
the truncations phi_{i,S} = (min_{s in S}{u_s, v} - u_i)_+ yields N 2^(N-1)
inequalities

    int_{u_i < u_S} |grad u_i|^p <= Q_i int_{u_i < u_S} |grad u_S|^p.

On a region where the u's are strictly ordered and v sits between two of
them, inequality (i, S) contributes |grad u_i|^p on the left and Q_i times
the gradient of the smallest of S union {v} on the right.  Multiplying each
inequality by lambda_{i,S} >= 0 and requiring, in every region, that the
minimum function's coefficient is 1 and every other u-gradient cancels
exactly, bounds the blowup by the worst region coefficient of |grad v|^p;
minimizing that coefficient is a small LP.

Although there are N! N regions, a constraint only depends on which
functions precede which, so the distinct rows collapse to

    N                normalizations  (sum_S lambda_{i,S} = 1),
    N (2^(N-1) - 1)  cancellations   (one per function j and nonempty
                                      predecessor set A),
    2^N - 1          v-coefficient rows (one per nonempty set D of
                                      functions below v).

For N = 3 this is exactly the 12-equation multiplier system solved in
closed form by bounds.min3_bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import InvalidParam
from .numerics import LinearProgram, solve_lp

_N_RANGE = (2, 6)


@dataclass(frozen=True)
class Inequality:
    """Test inequality (i, S): function index i (1-based), S a subset of
    {1..N} not containing i."""

    i: int
    S: frozenset[int]

    def __repr__(self) -> str:
        return f"E({self.i},{{{','.join(map(str, sorted(self.S)))}}})"


@dataclass(frozen=True)
class Region:
    """Ordering region: u_{perm[0]} < ... < u_{perm[N-1]}, with v strictly
    between the vpos-th and (vpos+1)-th of them (vpos = N: above all).
    vpos >= 1 always, since v = u + phi > u on {phi > 0}."""

    perm: tuple[int, ...]
    vpos: int


@dataclass(frozen=True)
class CoverageEntry:
    """One (region, inequality) incidence: the inequality's integration set
    contains the region; lhs_fn is the gradient on the left, rhs_fn the one
    on the right (None marks v), and Q_{q_index} is the right-hand factor."""

    region: Region
    inequality: Inequality
    lhs_fn: int
    rhs_fn: int | None
    q_index: int


def _check_n(N: int) -> None:
    if not _N_RANGE[0] <= N <= _N_RANGE[1]:
        raise InvalidParam(f"N must be in [{_N_RANGE[0]}, {_N_RANGE[1]}], got {N}")


def enumerate_inequalities(N: int) -> list[Inequality]:
    """All (i, S) pairs: i ascending, S in binary-counting order over the
    other indices (ascending)."""
    _check_n(N)
    out = []
    for i in range(1, N + 1):
        others = [j for j in range(1, N + 1) if j != i]
        for mask in range(1 << (N - 1)):
            out.append(
                Inequality(i, frozenset(o for b, o in enumerate(others) if mask >> b & 1))
            )
    return out


def enumerate_regions(N: int) -> list[Region]:
    _check_n(N)
    return [
        Region(perm, vpos)
        for perm in permutations(range(1, N + 1))
        for vpos in range(1, N + 1)
    ]


def _covers(region: Region, ineq: Inequality) -> bool:
    rank = {f: r + 1 for r, f in enumerate(region.perm)}
    if rank[ineq.i] > region.vpos:  # u_i above v: phi_{i,S} = 0 there
        return False
    return all(rank[ineq.i] < rank[s] for s in ineq.S)


def _rhs_fn(region: Region, ineq: Inequality) -> int | None:
    """The function realizing min(S union {v}) on the region; None is v."""
    if not ineq.S:
        return None
    rank = {f: r + 1 for r, f in enumerate(region.perm)}
    s_min = min(ineq.S, key=lambda s: rank[s])
    return s_min if rank[s_min] <= region.vpos else None


def region_coverage(N: int) -> list[CoverageEntry]:
    """Coverage table: for every region, every inequality integrating over
    it, with the gradients on both sides.  Restricted to one permutation of
    N = 3 this reproduces the 7 + 6 + 4 rows of the three-function
    bookkeeping table (v above all / above two / directly above the min)."""
    _check_n(N)
    ineqs = enumerate_inequalities(N)
    out = []
    for region in enumerate_regions(N):
        for ineq in ineqs:
            if _covers(region, ineq):
                out.append(
                    CoverageEntry(
                        region=region,
                        inequality=ineq,
                        lhs_fn=ineq.i,
                        rhs_fn=_rhs_fn(region, ineq),
                        q_index=ineq.i,
                    )
                )
    return out


@dataclass(frozen=True)
class BlowupSolution:
    bound: float
    multipliers: dict[Inequality, float]


def _subsets(pool: list[int]) -> list[frozenset[int]]:
    return [
        frozenset(x for b, x in enumerate(pool) if mask >> b & 1)
        for mask in range(1 << len(pool))
    ]


def solve_blowup_lp(
    Q: list[float] | tuple[float, ...],
    cfg: ToleranceConfig = DEFAULT_TOL,
    relaxed_cancellation: bool = False,
) -> BlowupSolution:
    """Minimize the worst region v-coefficient over admissible multipliers
    lambda_{i,S} >= 0.

    Constraints per deduplicated class (see module docstring): for every i
    the lambda_{i,.} sum to 1; for every j and nonempty predecessor set A
    the coefficient of |grad u_j|^p cancels exactly (or, with
    relaxed_cancellation, is allowed to remain positive on the left); for
    every nonempty D below v, sum_{i in D} Q_i sum_{S subset of C}
    lambda_{i,S} <= t with C the complement.  The objective is t.
    """
    N = len(Q)
    _check_n(N)
    if any(q <= 1.0 for q in Q):
        raise InvalidParam("all constants must be strictly > 1 for the region LP")
    qv = {i + 1: float(Q[i]) for i in range(N)}
    ineqs = enumerate_inequalities(N)
    col = {iq: c for c, iq in enumerate(ineqs)}
    n_var = len(ineqs) + 1  # plus t
    t_col = n_var - 1
    every = list(range(1, N + 1))

    eq_rows: list[tuple[np.ndarray, float]] = []
    ub_rows: list[tuple[np.ndarray, float]] = []
    for i in every:
        row = np.zeros(n_var)
        for S in _subsets([j for j in every if j != i]):
            row[col[Inequality(i, S)]] = 1.0
        eq_rows.append((row, 1.0))
    for j in every:
        others = [x for x in every if x != j]
        for A in _subsets(others):
            if not A:
                continue
            B = [x for x in others if x not in A]
            row = np.zeros(n_var)
            for S in _subsets(B):
                row[col[Inequality(j, S)]] += 1.0
            for i in sorted(A):
                for S in _subsets(B):
                    row[col[Inequality(i, S | {j})]] -= qv[i]
            if relaxed_cancellation:
                ub_rows.append((-row, 0.0))  # surplus on the LHS is harmless
            else:
                eq_rows.append((row, 0.0))
    for D in _subsets(every):
        if not D:
            continue
        C = [x for x in every if x not in D]
        row = np.zeros(n_var)
        for i in sorted(D):
            for S in _subsets(C):
                row[col[Inequality(i, S)]] += qv[i]
        row[t_col] = -1.0
        ub_rows.append((row, 0.0))

    objective = np.zeros(n_var)
    objective[t_col] = 1.0
    x, value = solve_lp(LinearProgram(objective, eq_rows, ub_rows), cfg)
    return BlowupSolution(bound=value, multipliers={iq: float(x[col[iq]]) for iq in ineqs})
