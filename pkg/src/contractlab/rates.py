"""Rate arithmetic: benchmark rates, testing rates, and resolution levels.

The base rate for smoothness alpha at sample size n is
eps_n = (n / log n)^(-alpha / (2 alpha + 1)).  Contraction in L^r happens at
delta_n = eps_n (n eps_n^2)^e gamma_n with e = 1/2 - 1/(2r) in the general
regime and e = 1/2 - 1/rbar (rbar = max(2, r)) in the bounded-density
regime, gamma_n = (log n)^g a slack factor.  The large-n exponent of the
contraction rate in L^r is (alpha - 1/2 + 1/rbar) / (2 alpha + 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

INF = float("inf")

THM_GENERAL = "general"
THM_BOUNDED = "bounded"


def epsilon_n(alpha: float, n: int) -> float:
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    if n < 2:
        raise ValueError("n must be >= 2")
    return (n / math.log(n)) ** (-alpha / (2 * alpha + 1))


def r_bar(r: float) -> float:
    if r < 1:
        raise ValueError("r must be >= 1 or inf")
    return max(2.0, r)


def contraction_exponent(alpha: float, r: float) -> float:
    """Decay exponent of the L^r contraction rate in powers of 1/n."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    inv_rbar = 0.0 if r == INF else 1.0 / r_bar(r)
    return (alpha - 0.5 + inv_rbar) / (2 * alpha + 1)


def contraction_exponent_exact(alpha: Fraction, r: Fraction | float) -> Fraction:
    """Same exponent in exact rational arithmetic; r may be inf."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    if r == INF:
        inv_rbar = Fraction(0)
    else:
        rq = Fraction(r)
        if rq < 1:
            raise ValueError("r must be >= 1 or inf")
        inv_rbar = 1 / max(Fraction(2), rq)
    return (alpha - Fraction(1, 2) + inv_rbar) / (2 * alpha + 1)


@dataclass(frozen=True)
class RateSchedule:
    """All rate quantities for one (alpha, r, n) cell.

    J_n is the largest dyadic level with 2^J_n <= c_res * n * eps_n^2,
    gamma_n = (log n)^gamma_log_power, r_bar = max(2, r), and delta_n is the
    general-regime testing rate (see delta_n() for the bounded variant).
    """

    alpha: float
    r: float
    n: int
    gamma_log_power: float
    c_res: float
    eps_n: float
    delta_n: float
    J_n: int
    r_bar: float

    @property
    def gamma_n(self) -> float:
        return math.log(self.n) ** self.gamma_log_power


def _delta(eps: float, n: int, r: float, rbar: float, gamma: float, theorem: str) -> float:
    neps2 = n * eps ** 2
    if theorem == THM_GENERAL:
        expo = 0.5 if r == INF else 0.5 - 1.0 / (2 * r)
    elif theorem == THM_BOUNDED:
        if r <= 1 or r == INF:
            raise ValueError("bounded-density rate requires 1 < r < inf")
        expo = 0.5 - 1.0 / rbar
    else:
        raise ValueError(f"unknown theorem variant {theorem!r}")
    return eps * neps2 ** expo * gamma


def delta_n(sched: RateSchedule, theorem: str = THM_GENERAL) -> float:
    """Testing rate; the bounded-density variant needs 1 < r < inf."""
    return _delta(sched.eps_n, sched.n, sched.r, sched.r_bar, sched.gamma_n, theorem)


def make_schedule(alpha: float, r: float, n: int, gamma_log_power: float = 0.0,
                  c_res: float = 1.0) -> RateSchedule:
    if gamma_log_power < 0:
        raise ValueError("gamma_log_power must be >= 0")
    if c_res <= 0:
        raise ValueError("c_res must be > 0")
    if r < 1:
        raise ValueError("r must be >= 1 or inf")
    eps = epsilon_n(alpha, n)
    gamma = math.log(n) ** gamma_log_power
    J_n = max(0, int(math.floor(math.log2(c_res * n * eps ** 2))))
    return RateSchedule(alpha=alpha, r=r, n=n, gamma_log_power=gamma_log_power,
                        c_res=c_res, eps_n=eps,
                        delta_n=_delta(eps, n, r, r_bar(r), gamma, THM_GENERAL),
                        J_n=J_n, r_bar=r_bar(r))


def feasibility_flags(sched: RateSchedule) -> dict:
    """Side conditions of the bounded-density regime, evaluated literally
    with constant 1 at this n; reported in metadata, never enforced."""
    eps, g = sched.eps_n, sched.gamma_n
    neps2 = sched.n * eps ** 2
    flags = {}
    if 1 < sched.r < 2:
        flags["eps_vs_gamma_neps2"] = bool(eps <= g * neps2 ** (1.0 / sched.r - 1.0))
    if 2 <= sched.r < INF:
        flags["eps2_vs_gamma_sqrtn"] = bool(eps ** 2 <= g / math.sqrt(sched.n))
    flags["sqrt_n_eps_large"] = bool(math.sqrt(sched.n) * eps > 1.0)
    return flags
