"""Norms on [0,1] and Hoelder-scale test functions.

L^r norms are left-endpoint Riemann sums at the function's native grid;
for r = inf the grid maximum is used (a lower bound on the true sup norm).
Smoothness norms are computed from wavelet coefficient trees: the scale-s
sequence norm is the scaling-block p-norm plus the l^q aggregate over
levels of 2^(l(s + 1/2 - 1/p)) times the level p-norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavelets import Basis, GridFunction, WaveletCoeffs, haar, synthesize

INF = float("inf")

PROFILES = ("single-bump", "dense", "seeded-random")


@dataclass(frozen=True)
class BesovIndex:
    """Smoothness s >= 0, integrability p and fine index q in [1, inf]."""

    s: float
    p: float
    q: float

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("smoothness s must be >= 0")
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must lie in [1, inf]")


def _vec_norm(v: np.ndarray, p: float) -> float:
    if v.size == 0:
        return 0.0
    if p == INF:
        return float(np.max(np.abs(v)))
    return float(np.sum(np.abs(v) ** p) ** (1.0 / p))


def lr_norm(f: GridFunction, r: float) -> float:
    """Riemann-sum L^r norm, (sum |f(k/2^J)|^r 2^-J)^(1/r); grid max for r=inf."""
    if r < 1:
        raise ValueError("r must be >= 1 or inf")
    if r == INF:
        return float(np.max(np.abs(f.values)))
    return float((np.mean(np.abs(f.values) ** r)) ** (1.0 / r))


def besov_norm(c: WaveletCoeffs, idx: BesovIndex) -> float:
    scal = _vec_norm(c.scaling, idx.p)
    terms = np.array([
        2.0 ** (l * (idx.s + 0.5 - (0.0 if idx.p == INF else 1.0 / idx.p)))
        * _vec_norm(c.level(l), idx.p)
        for l in c.levels()
    ])
    if terms.size == 0:
        return scal
    if idx.q == INF:
        agg = float(np.max(terms))
    else:
        agg = float(np.sum(terms ** idx.q) ** (1.0 / idx.q))
    return scal + agg


def holder_coeff_radius(c: WaveletCoeffs, alpha: float) -> float:
    """Radius of the smallest coefficient-Hoelder ball containing c:
    the (alpha, inf, inf) sequence norm."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return besov_norm(c, BesovIndex(alpha, INF, INF))


def _profile_coeffs(alpha, B, Jmax, profile, basis, rng):
    if profile not in PROFILES:
        raise ValueError(f"profile must be one of {PROFILES}")
    J0 = basis.J0
    scaling = np.zeros(2 ** J0)
    details = []
    for l in range(J0, Jmax):
        mag = B * 2.0 ** (-l * (alpha + 0.5))
        width = 2 ** l
        if profile == "dense":
            signs = np.where((np.arange(width) + l) % 2 == 0, 1.0, -1.0)
            d = mag * signs
        elif profile == "single-bump":
            d = np.zeros(width)
            d[int(width / 3)] = mag
        else:
            mags = rng.uniform(0.5 * B, B, size=width) * 2.0 ** (-l * (alpha + 0.5))
            d = mags * rng.choice([-1.0, 1.0], size=width)
        details.append(d)
    return WaveletCoeffs(basis, J0, Jmax, scaling, tuple(details))


def make_test_function(alpha: float, B: float, Jmax: int, profile: str = "dense",
                       basis: Basis | None = None, seed: int = 0) -> GridFunction:
    """Ground-truth function with coefficient-Hoelder radius in [B/2, B].

    Detail coefficients have magnitude B * 2^(-l(alpha+1/2)) on the chosen
    support pattern ("dense": every position, "single-bump": one dyadic
    interval per level, "seeded-random": random signs and magnitudes in
    [B/2, B]); the scaling block is zero.
    """
    if alpha <= 0 or B <= 0:
        raise ValueError("alpha and B must be > 0")
    if Jmax < 4:
        raise ValueError("Jmax must be >= 4")
    if basis is None:
        basis = haar()
    rng = np.random.default_rng(seed)
    return synthesize(_profile_coeffs(alpha, B, Jmax, profile, basis, rng))


def make_test_density(alpha: float, B: float, Jmax: int, profile: str = "dense",
                      basis: Basis | None = None, seed: int = 0) -> GridFunction:
    """Positive probability density built from make_test_function by the
    shift-and-normalize map f -> (f - min f + 0.1) / integral."""
    f = make_test_function(alpha, B, Jmax, profile, basis, seed)
    shifted = f.values - f.values.min() + 0.1
    return GridFunction(f.J, shifted / shifted.mean())


def sample_from_density(p: GridFunction, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. points from a piecewise-constant density on the dyadic grid."""
    if np.any(p.values < 0):
        raise ValueError("density must be nonnegative")
    m = p.values.size
    weights = p.values / p.values.sum()
    cells = rng.choice(m, size=n, p=weights)
    return (cells + rng.random(n)) / m
