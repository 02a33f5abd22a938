"""Gaussian sequence model on the wavelet tree with conjugate posterior.

Observing the noise-level-n white-noise regression model coefficient-wise
gives y = theta + g / sqrt(n) with independent standard Gaussians g.  Under
independent centered Gaussian prior coefficients with variances mu, the
posterior is again diagonal Gaussian with

    mean     m = (mu / (mu + 1/n)) y
    variance v = mu / (n mu + 1)

per coefficient; scaling-block coefficients use mu = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .priors import DiagGaussianPrior, truncate_tree
from .rates import make_schedule
from .wavelets import (Basis, GridFunction, WaveletCoeffs, analyze,
                       synthesize, synthesize_batch)

INF = float("inf")


@dataclass(frozen=True, eq=False)
class NoisyCoeffs:
    """Noisy observation of a coefficient tree at noise level 1/sqrt(n)."""

    basis: Basis
    J0: int
    Jmax: int
    n: int
    y_scaling: np.ndarray
    y_details: tuple

    def levels(self) -> range:
        return range(self.J0, self.Jmax)


@dataclass(frozen=True, eq=False)
class GaussianPosterior:
    """Diagonal Gaussian posterior over the coefficient tree."""

    basis: Basis
    J0: int
    Jmax: int
    n: int
    mean_scaling: np.ndarray
    mean_details: tuple
    var_scaling: np.ndarray
    var_details: tuple

    def mean_tree(self) -> WaveletCoeffs:
        return WaveletCoeffs(self.basis, self.J0, self.Jmax,
                             self.mean_scaling, self.mean_details)

    def mean_function(self) -> GridFunction:
        return synthesize(self.mean_tree())


def observe(f0: WaveletCoeffs, n: int, rng: np.random.Generator) -> NoisyCoeffs:
    """y = theta + g/sqrt(n) on every coefficient of f0's tree."""
    if n < 1:
        raise ValueError("n must be >= 1")
    scale = 1.0 / np.sqrt(n)
    y_sc = f0.scaling + scale * rng.standard_normal(f0.scaling.size)
    y_det = tuple(d + scale * rng.standard_normal(d.size) for d in f0.details)
    return NoisyCoeffs(f0.basis, f0.J0, f0.Jmax, n, y_sc, y_det)


def posterior(mu, y: NoisyCoeffs) -> GaussianPosterior:
    """Conjugate update; mu is the per-level detail variance sequence,
    one entry for each level of y."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (y.Jmax - y.J0,):
        raise ValueError(
            f"need one detail variance per level, got {mu.size} for "
            f"{y.Jmax - y.J0} levels")
    if np.any(mu <= 0):
        raise ValueError("prior variances must be > 0")
    n = y.n
    m_sc = (n / (n + 1.0)) * y.y_scaling
    v_sc = np.full(y.y_scaling.size, 1.0 / (n + 1.0))
    m_det, v_det = [], []
    for mu_l, y_l in zip(mu, y.y_details):
        weight = n * mu_l / (n * mu_l + 1.0)
        m_det.append(weight * y_l)
        v_det.append(np.full(y_l.size, mu_l / (n * mu_l + 1.0)))
    return GaussianPosterior(y.basis, y.J0, y.Jmax, n,
                             m_sc, tuple(m_det), v_sc, tuple(v_det))


def posterior_sample(post: GaussianPosterior, rng: np.random.Generator) -> GridFunction:
    """One draw: synthesize(mean + sqrt(var) * g) with fresh standard normals."""
    return GridFunction(post.Jmax, _sample_grids(post, 1, rng)[0])


def _sample_grids(post: GaussianPosterior, reps: int,
                  rng: np.random.Generator, pad_to: int | None = None) -> np.ndarray:
    """(reps, 2^J) grid values of posterior draws, optionally zero-padded to
    a finer synthesis level pad_to."""
    sc = post.mean_scaling[None, :] + np.sqrt(post.var_scaling)[None, :] \
        * rng.standard_normal((reps, post.mean_scaling.size))
    details = [
        m[None, :] + np.sqrt(v)[None, :] * rng.standard_normal((reps, m.size))
        for m, v in zip(post.mean_details, post.var_details)
    ]
    top = post.Jmax if pad_to is None else pad_to
    if top < post.Jmax:
        raise ValueError("pad_to must be >= the posterior's Jmax")
    details += [np.zeros((reps, 2 ** l)) for l in range(post.Jmax, top)]
    return synthesize_batch(sc, details, post.basis)


def contraction_probability(post: GaussianPosterior, f0: GridFunction, radius: float,
                            r: float, reps: int, rng: np.random.Generator) -> float:
    """Monte Carlo posterior mass of {f : ||f - f0||_r > radius}."""
    if reps < 100:
        raise ValueError("reps must be >= 100")
    losses = _posterior_losses(post, f0, r, reps, rng)
    return float(np.mean(losses > radius))


def _posterior_losses(post: GaussianPosterior, f0: GridFunction, r: float,
                      reps: int, rng: np.random.Generator) -> np.ndarray:
    grids = _sample_grids(post, reps, rng, pad_to=f0.J)
    diff = np.abs(grids - f0.values[None, :])
    if r == INF:
        return np.max(diff, axis=1)
    return np.mean(diff ** r, axis=1) ** (1.0 / r)


def white_noise_cell(f0: GridFunction, basis: Basis, alpha: float, r: float, n: int,
                     reps: int, rng: np.random.Generator, gamma_log_power: float = 0.0,
                     c_res: float = 1.0, radius_mult: float = 2.0,
                     jmax_offset: int = 2) -> dict:
    """One sweep cell: observe f0 at noise level n, form the conjugate
    posterior under the matched diagonal Gaussian prior (truncated at
    J_n + jmax_offset), and summarize posterior L^r losses.

    Returns a flat row dict; losses are measured on f0's grid so prior
    truncation bias is part of the loss.
    """
    sched = make_schedule(alpha, r, n, gamma_log_power, c_res)
    Jmax = max(basis.J0 + 1, min(sched.J_n + jmax_offset, f0.J))
    prior = DiagGaussianPrior(alpha, Jmax, basis)
    theta0 = truncate_tree(analyze(f0, basis), Jmax)
    y = observe(theta0, n, rng)
    post = posterior(prior.mu_sequence(), y)
    losses = _posterior_losses(post, f0, r, reps, rng)
    radius = radius_mult * sched.eps_n
    return {
        "alpha": alpha, "r": r, "n": n,
        "eps_n": sched.eps_n, "delta_n": sched.delta_n, "J_n": sched.J_n,
        "gamma_power": gamma_log_power,
        "radius": radius,
        "posterior_prob": float(np.mean(losses > radius)),
        "loss_median": float(np.median(losses)),
        "loss_q90": float(np.quantile(losses, 0.9)),
        "loss_mean": float(np.mean(losses)),
        "prior_jmax": Jmax,
    }
