"""qmlab: optimal quasiminimizing constants of one-corner, zig-zag and
power-type functions on intervals, blowup bounds for minima of
quasisuperminimizers, and sharp pasting constructions."""

from .bounds import (
    TripleSystemReport,
    km_bound,
    min2_bound,
    min2_sandwich,
    min3_bound,
    min3_via_system,
)
from .config import DEFAULT_TOL, ToleranceConfig
from .corner import (
    CornerConstants,
    OneCornerSpec,
    UnitCorner,
    corner_constant,
    gamma_from_q,
    optimal_unit_corner,
    tangency_exponents,
    unit_corner_pwl,
    zigzag_constant,
)
from .lp_blowup import (
    BlowupSolution,
    CoverageEntry,
    Inequality,
    Region,
    enumerate_inequalities,
    enumerate_regions,
    region_coverage,
    solve_blowup_lp,
)
from .pasting import PasteExample, SweepRow, interval_example, p_sweep, paste, sharp_example
from .power import (
    AlphaBranches,
    BlowupReport,
    PowerQM,
    QtBounds,
    alpha_branches,
    crossing_x0,
    equal_q_e_bound,
    gamma_parametrized_exponents,
    q_alpha,
    q_tilde,
    qt_closed_form_p2,
)
from .pwl import (
    EnergyReport,
    PiecewiseLinearFn,
    chord_energy,
    concave_envelope,
    energy,
    energy_report,
    pointwise_min,
    quasimin_constant,
    sample_to_pwl,
)
from .tables import TableRow, table1, table1_row, table2, table2_row

__version__ = "0.1.0"
