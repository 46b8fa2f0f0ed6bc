"""Power-type quasiminimizers x^alpha on (0, 1).

For alpha > 1 - 1/p the function x^alpha is a quasiminimizer on (0, 1) with
optimal constant Q_alpha = alpha^p / (p(alpha-1)+1), and it has the maximal
p-energy allowed by Q_alpha on every (0, x0).  Given Q > 1 there are exactly
two exponents 1-1/p < alpha' < 1 < alpha with Q_alpha = Q_alpha' = Q; the
increasing branch u(x) = x^alpha and the reflected one 1 - (1-x)^alpha'
cross exactly once, at the root x0 of

    x0^alpha1 + (1 - x0)^alpha2 = 1,

and the minimum of the two has p-energy

    Q1 x0^(p(alpha1-1)+1) + Q2 (1-x0)^(p(alpha2-1)+1),

which is an explicit lower bound for its quasisuperminimizing constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import InvalidParam, NonConvergence
from .numerics import find_root_bracketed
from .pwl import PiecewiseLinearFn, sample_to_pwl


@dataclass(frozen=True)
class PowerQM:
    """One power-type branch: x^alpha, or its reflection 1 - (1-x)^alpha."""

    alpha: float
    form: Literal["increasing", "reflected"]
    p: float

    def __post_init__(self) -> None:
        if self.p <= 1.0:
            raise InvalidParam("p must be > 1")
        if self.alpha <= 1.0 - 1.0 / self.p:
            raise InvalidParam(f"alpha must exceed 1 - 1/p = {1.0 - 1.0 / self.p}")
        if self.form not in ("increasing", "reflected"):
            raise InvalidParam(f"unknown form {self.form!r}")

    @property
    def constant(self) -> float:
        return q_alpha(self.alpha, self.p)

    def sample(self, n: int) -> PiecewiseLinearFn:
        return sample_to_pwl(self.alpha, self.form, n, self.p)


@dataclass(frozen=True)
class AlphaBranches:
    """The two exponents sharing a constant: alpha_prime < 1 < alpha."""

    alpha_prime: float
    alpha: float


@dataclass(frozen=True)
class BlowupReport:
    """Everything the explicit two-power lower bound produces.

    x1 < x0 < x2 always; q_tilde exceeds both Q2 + lb1 and Q1 + lb2.
    """

    alpha1: float
    alpha2: float
    x0: float
    x1: float
    x2: float
    q_tilde: float
    lb1: float
    lb2: float


def q_alpha(alpha: float, p: float) -> float:
    """Optimal quasiminimizing constant alpha^p / (p(alpha-1)+1) of x^alpha
    on (0, 1); exactly 1 at alpha = 1."""
    if p <= 1.0:
        raise InvalidParam("p must be > 1")
    d = p * (alpha - 1.0) + 1.0
    if d <= 0.0:
        raise InvalidParam(f"alpha={alpha} must exceed 1 - 1/p = {1.0 - 1.0 / p}")
    if alpha == 1.0:
        return 1.0
    t = p * math.log(alpha)
    if t > 700.0:
        return math.inf
    return alpha**p / d


def alpha_branches(Q: float, p: float, cfg: ToleranceConfig = DEFAULT_TOL) -> AlphaBranches:
    """Both solutions of q_alpha(., p) = Q for Q > 1.

    The increasing branch is solved in log(alpha); the decreasing branch in
    log(p(alpha-1)+1), where the equation is well conditioned even when the
    exponent is pinned against 1 - 1/p by a huge Q.
    """
    if Q <= 1.0:
        raise InvalidParam(f"Q must be > 1, got {Q}")
    if p <= 1.0:
        raise InvalidParam("p must be > 1")
    ln_q = math.log(Q)
    # d(log q)/d(log alpha) grows like p, so divide the bracket tolerance by
    # p to keep q_alpha(result) within ~1e-14 of Q at the default config.
    cfg = ToleranceConfig(
        root_abs_tol=cfg.root_abs_tol / (128.0 * max(1.0, p)),
        opt_rel_tol=cfg.opt_rel_tol,
        lp_feas_tol=cfg.lp_feas_tol,
        max_iter=cfg.max_iter,
    )

    def f_upper(s: float) -> float:
        # s = log alpha; log q_alpha = p*s - log(p*(e^s - 1) + 1)
        return p * s - math.log(p * math.expm1(s) + 1.0) - ln_q

    hi = math.log(2.0)
    for _ in range(200):
        if f_upper(hi) > 0.0:
            break
        hi += math.log(2.0)
    else:
        raise NonConvergence("no upper bracket for the increasing branch")
    alpha = math.exp(find_root_bracketed(f_upper, 0.0, hi, cfg))

    def f_lower(t: float) -> float:
        # t = log d with d = p(alpha-1)+1, alpha = 1 + (e^t - 1)/p in (1-1/p, 1)
        return p * math.log1p(math.expm1(t) / p) - t - ln_q

    lo = -1.0
    for _ in range(800):
        if f_lower(lo) > 0.0:
            break
        lo -= 1.0
    else:
        raise NonConvergence("no lower bracket for the decreasing branch")
    t_root = find_root_bracketed(f_lower, lo, 0.0, cfg)
    alpha_prime = 1.0 + math.expm1(t_root) / p
    return AlphaBranches(alpha_prime=alpha_prime, alpha=alpha)


def _crossing(
    alpha1: float, alpha2: float, cfg: ToleranceConfig = DEFAULT_TOL
) -> tuple[float, float]:
    """Solve x^alpha1 + (1-x)^alpha2 = 1 in logit coordinates; returns
    (x0, 1-x0) with both sides at full relative precision.

    The equation vanishes at both endpoints, is < 0 in the interior bulk and
    > 0 in a sliver near 1 whose width can be far below 1e-12 (large alpha1),
    so bracketing and bisection happen in y = logit(x).  Since x + s = 1 the
    residual is evaluated as x(x^(a1-1) - 1) + s(s^(a2-1) - 1) via expm1,
    which keeps its sign readable even when both powers round to 1.
    """
    if not (alpha1 > 1.0 > alpha2 > 0.0):
        raise InvalidParam(f"need alpha1 > 1 > alpha2 > 0, got {alpha1}, {alpha2}")

    def h(y: float) -> float:
        ln_x = -math.log1p(math.exp(-y)) if y > -700.0 else y
        ln_s = -math.log1p(math.exp(y)) if y < 700.0 else -y
        term_x = math.exp(ln_x) * math.expm1((alpha1 - 1.0) * ln_x)
        term_s = math.exp(ln_s) * math.expm1((alpha2 - 1.0) * ln_s)
        return term_x + term_s

    y_lo = 0.0
    for _ in range(240):
        if h(y_lo) < 0.0:
            break
        y_lo -= 3.0
    else:
        raise NonConvergence("no negative value of the crossing equation found")
    y_hi = y_lo
    for _ in range(480):
        y_hi += 3.0
        v = h(y_hi)
        if v > 0.0:
            break
        if v < 0.0:
            y_lo = y_hi  # tighten; exact zeros (degenerate flats) are skipped
    else:
        raise NonConvergence("no positive value of the crossing equation found")
    tight = ToleranceConfig(
        root_abs_tol=cfg.root_abs_tol / 32.0,
        opt_rel_tol=cfg.opt_rel_tol,
        lp_feas_tol=cfg.lp_feas_tol,
        max_iter=cfg.max_iter,
    )
    y = find_root_bracketed(h, y_lo, y_hi, tight)
    x0 = 1.0 / (1.0 + math.exp(-y))
    s0 = 1.0 / (1.0 + math.exp(y))
    return x0, s0


def crossing_x0(alpha1: float, alpha2: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """The unique interior crossing of x^alpha1 and 1 - (1-x)^alpha2."""
    return _crossing(alpha1, alpha2, cfg)[0]


def q_tilde(Q1: float, Q2: float, p: float, cfg: ToleranceConfig = DEFAULT_TOL) -> BlowupReport:
    """Explicit blowup lower bound for min{x^alpha1, 1-(1-x)^alpha2} with
    Q1 = Q_alpha1 (increasing branch) and Q2 = Q_alpha2 (reflected branch).

    Also reports the tangency abscissas x1 = alpha2^(1/(alpha1-1)) and
    1 - x2 = alpha1^(1/(alpha2-1)) and the two closed-form bound amounts
    lb1 = (Q1-1) alpha2^(p+1/(alpha1-1)) and lb2 = (Q2-1) alpha1^(p+1/(alpha2-1)).
    """
    if Q1 <= 1.0 or Q2 <= 1.0:
        raise InvalidParam("Q1 and Q2 must be > 1")
    alpha1 = alpha_branches(Q1, p, cfg).alpha
    alpha2 = alpha_branches(Q2, p, cfg).alpha_prime
    x0, s0 = _crossing(alpha1, alpha2, cfg)
    ln_x0 = math.log1p(-s0)
    ln_s0 = math.log1p(-x0) if x0 < 0.5 else math.log(s0)
    e1 = p * (alpha1 - 1.0) + 1.0
    e2 = p * (alpha2 - 1.0) + 1.0
    qt = Q1 * math.exp(e1 * ln_x0) + Q2 * math.exp(e2 * ln_s0)
    ln_a1, ln_a2 = math.log(alpha1), math.log(alpha2)
    x1 = math.exp(ln_a2 / (alpha1 - 1.0))
    x2 = 1.0 - math.exp(ln_a1 / (alpha2 - 1.0))
    lb1 = (Q1 - 1.0) * math.exp((p + 1.0 / (alpha1 - 1.0)) * ln_a2)
    lb2 = (Q2 - 1.0) * math.exp((p + 1.0 / (alpha2 - 1.0)) * ln_a1)
    return BlowupReport(
        alpha1=alpha1, alpha2=alpha2, x0=x0, x1=x1, x2=x2, q_tilde=qt, lb1=lb1, lb2=lb2
    )


@dataclass(frozen=True)
class QtBounds:
    """The two explicit p = 2 lower bounds for q_tilde - Q2."""

    bound1: float
    bound2: float


def qt_closed_form_p2(Q1: float, Q2: float) -> QtBounds:
    """Closed p = 2 bounds (assuming Q1 <= Q2 for sharpness):

        q_tilde - Q2 > (Q1-1) (Q2 + sqrt(Q2^2-Q2))^(1 - sqrt(Q1/(Q1-1))),
        q_tilde - Q2 > (Q1-1) (Q2 - sqrt(Q2^2-Q2))^(1 + sqrt(Q1/(Q1-1))).
    """
    if Q1 <= 1.0 or Q2 <= 1.0:
        raise InvalidParam("Q1 and Q2 must be > 1")
    root = math.sqrt(Q2 * Q2 - Q2)
    expo = math.sqrt(Q1 / (Q1 - 1.0))
    b1 = (Q1 - 1.0) * math.exp((1.0 - expo) * math.log(Q2 + root))
    b2 = (Q1 - 1.0) * math.exp((1.0 + expo) * math.log(Q2 - root))
    return QtBounds(bound1=b1, bound2=b2)


def equal_q_e_bound(Q: float) -> float:
    """Q + (Q-1)/e: the p = 2, Q1 = Q2 = Q blowup always exceeds this
    (the quotient-parametrized amounts straddle 1/e)."""
    if Q < 1.0:
        raise InvalidParam("Q must be >= 1")
    return Q + (Q - 1.0) / math.e


@dataclass(frozen=True)
class GammaExponents:
    alpha1: float
    alpha2: float


def gamma_parametrized_exponents(gamma1: float, gamma2: float, p: float) -> GammaExponents:
    """The crossing exponents written through one-corner quotients:

        alpha1 = (p-1)/p * (g1^p - 1)/(g1^(p-1) - 1)   (> 1),
        alpha2 = (p-1)/p * (g2^p - 1)/(g2^p - g2)      (< 1),

    consistent with alpha_branches at Q_i = corner constant of gamma_i.
    """
    if gamma1 <= 1.0 or gamma2 <= 1.0:
        raise InvalidParam("gamma1 and gamma2 must be > 1")
    if p <= 1.0:
        raise InvalidParam("p must be > 1")
    lg1, lg2 = math.log(gamma1), math.log(gamma2)
    # Ratios rewritten via expm1 of negated exponents stay finite for huge
    # gamma^p: (g^p-1)/(g^(p-1)-1) = g * expm1(-p lg)/expm1((1-p) lg), etc.
    a1 = (p - 1.0) / p * gamma1 * math.expm1(-p * lg1) / math.expm1((1.0 - p) * lg1)
    a2 = (p - 1.0) / p * math.expm1(-p * lg2) / math.expm1((1.0 - p) * lg2)
    return GammaExponents(alpha1=a1, alpha2=a2)
