"""Numeric tolerances and iteration caps shared by all solvers."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParam


@dataclass(frozen=True)
class ToleranceConfig:
    """Knobs for the root finder, the 2-D maximizer and the LP solver.

    root_abs_tol: final bracket width in the root finder.
    opt_rel_tol:  relative objective change at which golden-section
                  refinement stops.
    lp_feas_tol:  constraint violation accepted by the simplex solver,
                  also the residual scale for linear solves.
    max_iter:     iteration cap per solver (bracketing steps, refinement
                  sweeps, simplex pivots are each counted against it).
    """

    root_abs_tol: float = 1e-12
    opt_rel_tol: float = 1e-9
    lp_feas_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not (self.root_abs_tol > 0 and self.opt_rel_tol > 0 and self.lp_feas_tol > 0):
            raise InvalidParam("tolerances must be strictly positive")
        if self.max_iter < 1:
            raise InvalidParam("max_iter must be >= 1")


DEFAULT_TOL = ToleranceConfig()
