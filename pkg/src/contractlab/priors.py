"""Samplers for the random-function priors and small-ball estimation.

Three families: uniformly-bounded random wavelet series pushed through the
exponential-normalization map, diagonal Gaussian wavelet series, and
released integrated Brownian motion with an optional sup-norm conditioning
step (plain rejection).  All samplers are deterministic functions of
(spec, generator state).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .wavelets import (Basis, GridFunction, WaveletCoeffs, haar, synthesize,
                       zero_coeffs)

INF = float("inf")

_Z95 = 1.959963984540054


class ConditioningInfeasibleError(RuntimeError):
    """Rejection sampling for the sup-norm constraint is not making progress."""


@dataclass(frozen=True)
class UniformSeriesPrior:
    """Wavelet series with coefficients uniform on [-B, B], scaled by
    2^(-l(alpha+1/2)) at level l, exponentiated and normalized to a density."""

    alpha: float
    B: float
    Jmax: int
    basis: Basis = None

    def __post_init__(self):
        if self.basis is None:
            object.__setattr__(self, "basis", haar())
        if self.B <= 0:
            raise ValueError("B must be > 0")
        if not 0 < self.alpha < self.basis.smoothness_cap:
            raise ValueError(
                f"alpha must lie in (0, {self.basis.smoothness_cap}) for {self.basis}")
        if self.Jmax <= self.basis.J0:
            raise ValueError("Jmax must exceed the coarsest level")


@dataclass(frozen=True)
class DiagGaussianPrior:
    """Independent Gaussian coefficients: unit variance on the scaling block,
    variance mu_l = 2^(-l(2 alpha + 1)) / max(l, 1) at detail level l."""

    alpha: float
    Jmax: int
    basis: Basis = None

    def __post_init__(self):
        if self.basis is None:
            object.__setattr__(self, "basis", haar())
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if self.Jmax <= self.basis.J0:
            raise ValueError("Jmax must exceed the coarsest level")

    def mu(self, l: int) -> float:
        return 2.0 ** (-l * (2 * self.alpha + 1)) / max(l, 1)

    def mu_sequence(self) -> np.ndarray:
        return np.array([self.mu(l) for l in range(self.basis.J0, self.Jmax)])


@dataclass(frozen=True)
class ReleasedIBMPrior:
    """Repeatedly integrated Brownian motion, released at zero by an
    independent random Taylor polynomial, conditioned on sup norm <= c.

    alpha is a half-integer (1/2 gives Brownian motion itself); the path
    lives on the dyadic grid of resolution grid_J.
    """

    alpha: float
    c: float
    grid_J: int

    def __post_init__(self):
        k = self.alpha - 0.5
        if k < 0 or abs(k - round(k)) > 1e-12:
            raise ValueError("alpha must be one of 1/2, 3/2, 5/2, ...")
        if self.c <= 0:
            raise ValueError("c must be > 0")
        if self.grid_J < 8:
            raise ValueError("grid_J must be >= 8")

    @property
    def int_order(self) -> int:
        """Number of integrations applied to the Brownian path."""
        return int(self.alpha - 0.5)


PriorSpec = UniformSeriesPrior | DiagGaussianPrior | ReleasedIBMPrior


def normalize_exp(w: GridFunction) -> GridFunction:
    """Density e^w / integral(e^w); invariant under adding constants to w,
    and bounded in [e^(-2c), e^(2c)] whenever sup|w| <= c."""
    shifted = w.values - w.values.max()
    e = np.exp(shifted)
    return GridFunction(w.J, e / e.mean())


def sample_series_field(spec: UniformSeriesPrior, rng: np.random.Generator) -> GridFunction:
    """The random wavelet series itself (the log-scale field): scaling
    coefficients uniform on [-B, B], detail coefficients B-uniform times
    2^(-l(alpha+1/2)), truncated at Jmax."""
    basis, J0 = spec.basis, spec.basis.J0
    scaling = rng.uniform(-spec.B, spec.B, size=2 ** J0)
    details = tuple(
        rng.uniform(-spec.B, spec.B, size=2 ** l) * 2.0 ** (-l * (spec.alpha + 0.5))
        for l in range(J0, spec.Jmax)
    )
    return synthesize(WaveletCoeffs(basis, J0, spec.Jmax, scaling, details))


def sample_uniform_series(spec: UniformSeriesPrior, rng: np.random.Generator) -> GridFunction:
    """A random density: the exponentiated, normalized series field."""
    return normalize_exp(sample_series_field(spec, rng))


def sample_diag_gaussian(spec: DiagGaussianPrior, rng: np.random.Generator) -> WaveletCoeffs:
    basis, J0 = spec.basis, spec.basis.J0
    scaling = rng.standard_normal(2 ** J0)
    details = tuple(
        math.sqrt(spec.mu(l)) * rng.standard_normal(2 ** l)
        for l in range(J0, spec.Jmax)
    )
    return WaveletCoeffs(basis, J0, spec.Jmax, scaling, details)


def brownian_paths(grid_J: int, reps: int, rng: np.random.Generator) -> np.ndarray:
    """reps standard Brownian paths on the grid k/2^J, started at 0;
    increments are N(0, 2^-J)."""
    npts = 2 ** grid_J
    inc = rng.standard_normal((reps, npts)) * math.sqrt(2.0 ** -grid_J)
    inc[:, 0] = 0.0
    return np.cumsum(inc, axis=1)


def cumulative_trapezoid(values: np.ndarray, dx: float) -> np.ndarray:
    """Running trapezoidal integral along the last axis, starting at 0."""
    avg = 0.5 * (values[..., 1:] + values[..., :-1]) * dx
    out = np.zeros_like(values)
    np.cumsum(avg, axis=-1, out=out[..., 1:])
    return out


def integrated_paths(paths: np.ndarray, order: int, grid_J: int) -> np.ndarray:
    """order-fold repeated trapezoidal integration of each path."""
    dx = 2.0 ** -grid_J
    out = paths
    for _ in range(order):
        out = cumulative_trapezoid(out, dx)
    return out


def integrated_bm_kernel(path: np.ndarray, order: int, grid_J: int) -> np.ndarray:
    """Cross-check for integrated_paths: the k-fold integral of a path B
    equals (1/(k-1)!) int_0^t (t-s)^(k-1) B(s) ds, evaluated by trapezoidal
    quadrature.  Quadratic cost; intended for small grids."""
    if order < 1:
        raise ValueError("order must be >= 1")
    dx = 2.0 ** -grid_J
    t = np.arange(path.size) * dx
    w = np.full(path.size, dx)
    w[0] = w[-1] = dx / 2
    out = np.empty_like(path)
    k = order
    for i, ti in enumerate(t):
        ker = np.where(t <= ti, (ti - t) ** (k - 1), 0.0)
        wi = w.copy()
        wi[i] = dx / 2
        out[i] = np.sum(ker * path * wi) / math.factorial(k - 1)
    return out


def _released_paths(spec: ReleasedIBMPrior, reps: int, rng: np.random.Generator) -> np.ndarray:
    B = brownian_paths(spec.grid_J, reps, rng)
    paths = integrated_paths(B, spec.int_order, spec.grid_J)
    t = np.arange(2 ** spec.grid_J) * 2.0 ** -spec.grid_J
    Z = rng.standard_normal((reps, spec.int_order + 1))
    for k in range(spec.int_order + 1):
        paths += Z[:, k:k + 1] * t[None, :] ** k / math.factorial(k)
    return paths


def sample_released_ibm(spec: ReleasedIBMPrior, rng: np.random.Generator,
                        conditioned: bool = True, stats: dict | None = None,
                        max_tries: int = 10_000) -> GridFunction:
    """One released path; with conditioning, rejection-sample until the
    sup norm is <= spec.c.

    Raises ConditioningInfeasibleError when a trial block of max_tries
    draws produces no acceptance (acceptance rate below ~1/max_tries).
    """
    if not conditioned:
        path = _released_paths(spec, 1, rng)[0]
        if stats is not None:
            stats.update(tries=1, accepted=1, acceptance_rate=1.0)
        return GridFunction(spec.grid_J, path)
    tries = 0
    block = 64
    while tries < max_tries:
        paths = _released_paths(spec, block, rng)
        sup = np.max(np.abs(paths), axis=1)
        ok = np.nonzero(sup <= spec.c)[0]
        if ok.size:
            tries += int(ok[0]) + 1
            if stats is not None:
                stats.update(tries=tries, accepted=1, acceptance_rate=1.0 / tries)
            return GridFunction(spec.grid_J, paths[ok[0]])
        tries += block
    raise ConditioningInfeasibleError(
        f"no path with sup norm <= c={spec.c} in {tries} draws "
        f"(acceptance below {1.0 / max_tries:.0e})")


def prior_path(spec: PriorSpec, rng: np.random.Generator) -> GridFunction:
    """The raw random function behind each prior: the unconditioned released
    path, the series field, or the synthesized Gaussian series."""
    if isinstance(spec, ReleasedIBMPrior):
        return sample_released_ibm(spec, rng, conditioned=False)
    if isinstance(spec, UniformSeriesPrior):
        return sample_series_field(spec, rng)
    if isinstance(spec, DiagGaussianPrior):
        return synthesize(sample_diag_gaussian(spec, rng))
    raise TypeError(f"unknown prior spec {type(spec).__name__}")


def wilson_interval(hits: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be > 0")
    phat = hits / n
    denom = 1 + z ** 2 / n
    center = (phat + z ** 2 / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z ** 2 / (4 * n ** 2)) / denom
    lo = 0.0 if hits == 0 else max(0.0, center - half)
    hi = 1.0 if hits == n else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class SmallBallEstimate:
    estimate: float
    ci_low: float
    ci_high: float
    hits: int
    reps: int
    degenerate: bool


def _path_block(spec: PriorSpec, reps: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(spec, ReleasedIBMPrior):
        return _released_paths(spec, reps, rng)
    return np.stack([prior_path(spec, rng).values for _ in range(reps)])


def small_ball_prob(spec: PriorSpec, center: GridFunction, eps: float, reps: int,
                    rng: np.random.Generator, norm: str = "sup") -> SmallBallEstimate:
    """Monte Carlo frequency of sup|draw - center| < eps with a 95% Wilson
    interval; the zero-hit case is flagged degenerate and carries only the
    interval upper bound."""
    return small_ball_curve(spec, center, [eps], reps, rng, norm)[0]


def small_ball_curve(spec: PriorSpec, center: GridFunction, eps_list, reps: int,
                     rng: np.random.Generator, norm: str = "sup") -> list[SmallBallEstimate]:
    """Small-ball estimates at several radii on one shared set of draws
    (common random numbers make the curve monotone by construction)."""
    if norm != "sup":
        raise ValueError("only the sup norm is supported")
    if reps < 100:
        raise ValueError("reps must be >= 100")
    eps_arr = np.asarray(list(eps_list), dtype=float)
    if np.any(eps_arr <= 0):
        raise ValueError("radii must be > 0")
    hits = np.zeros(eps_arr.size, dtype=int)
    done = 0
    block = min(reps, 10_000)
    while done < reps:
        b = min(block, reps - done)
        paths = _path_block(spec, b, rng)
        if paths.shape[1] != center.values.size:
            raise ValueError("center resolution does not match the prior's grid")
        sup = np.max(np.abs(paths - center.values[None, :]), axis=1)
        hits += (sup[:, None] < eps_arr[None, :]).sum(axis=0)
        done += b
    out = []
    for e, h in zip(eps_arr, hits):
        lo, hi = wilson_interval(int(h), reps)
        out.append(SmallBallEstimate(h / reps, lo, hi, int(h), reps, degenerate=(h == 0)))
    return out


def truncate_tree(c: WaveletCoeffs, Jmax: int) -> WaveletCoeffs:
    """Drop detail levels at and above Jmax."""
    if Jmax > c.Jmax:
        raise ValueError("cannot truncate upward")
    return WaveletCoeffs(c.basis, c.J0, Jmax, c.scaling, c.details[:Jmax - c.J0])


def pad_tree(c: WaveletCoeffs, Jmax: int) -> WaveletCoeffs:
    """Extend with zero detail levels up to Jmax."""
    if Jmax < c.Jmax:
        raise ValueError("cannot pad downward")
    extra = tuple(np.zeros(2 ** l) for l in range(c.Jmax, Jmax))
    return WaveletCoeffs(c.basis, c.J0, Jmax, c.scaling, c.details + extra)


__all__ = [
    "UniformSeriesPrior", "DiagGaussianPrior", "ReleasedIBMPrior", "PriorSpec",
    "ConditioningInfeasibleError", "SmallBallEstimate",
    "normalize_exp", "sample_series_field", "sample_uniform_series",
    "sample_diag_gaussian", "sample_released_ibm", "prior_path",
    "brownian_paths", "integrated_paths", "integrated_bm_kernel",
    "cumulative_trapezoid", "small_ball_prob", "small_ball_curve",
    "wilson_interval", "truncate_tree", "pad_tree", "zero_coeffs",
]
