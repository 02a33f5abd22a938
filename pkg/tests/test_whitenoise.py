import numpy as np
import pytest

from contractlab.priors import DiagGaussianPrior, truncate_tree
from contractlab.spaces import make_test_function
from contractlab.wavelets import (GridFunction, analyze, haar, synthesize,
                                  zero_coeffs)
from contractlab.whitenoise import (GaussianPosterior, contraction_probability,
                                    observe, posterior, posterior_sample,
                                    white_noise_cell)

INF = float("inf")


def _rng(seed=0):
    return np.random.default_rng(seed)


def _tree(Jmax=4, seed=1):
    f = make_test_function(0.75, 1.0, Jmax, "seeded-random", seed=seed)
    return analyze(f, haar(), 0)


def _flat_y(y):
    return np.concatenate([y.y_scaling] + [d for d in y.y_details])


# ----------------------------------------------------------------- observe

def test_observe_huge_n_recovers_truth():
    theta = _tree()
    y = observe(theta, 10 ** 12, _rng(2))
    assert np.max(np.abs(y.y_scaling - theta.scaling)) < 1e-5
    for l, d in zip(theta.levels(), theta.details):
        assert np.max(np.abs(y.y_details[l] - d)) < 1e-5


def test_observe_unbiased_with_correct_variance():
    theta = _tree(Jmax=4)
    n = 16
    reps = 10_000
    rng = _rng(3)
    ys = np.stack([_flat_y(observe(theta, n, rng)) for _ in range(reps)])
    flat_theta = np.concatenate([theta.scaling] + list(theta.details))
    se_mean = np.sqrt(1.0 / n / reps)
    assert np.max(np.abs(ys.mean(axis=0) - flat_theta)) < 4 * se_mean
    var = ys.var(axis=0)
    se_var = (1.0 / n) * np.sqrt(2.0 / reps)
    assert np.max(np.abs(var - 1.0 / n)) < 4 * se_var


def test_observe_validation():
    with pytest.raises(ValueError):
        observe(_tree(), 0, _rng(4))


# --------------------------------------------------------------- posterior

def test_posterior_closed_form_point():
    # mu = 1, n = 1, y = 2: mean (1/(1+1)) * 2 = 1, variance 1/2
    y_tree = observe(zero_coeffs(haar(), 0, 1), 1, _rng(5))
    y = type(y_tree)(y_tree.basis, 0, 1, 1, np.array([0.0]),
                     (np.array([2.0]),))
    post = posterior([1.0], y)
    assert abs(post.mean_details[0][0] - 1.0) < 1e-15
    assert abs(post.var_details[0][0] - 0.5) < 1e-15


def test_posterior_limits():
    y_tree = observe(zero_coeffs(haar(), 0, 1), 1, _rng(6))
    y = type(y_tree)(y_tree.basis, 0, 1, 1000, np.array([0.0]),
                     (np.array([3.0]),))
    tiny = posterior([1e-18], y)
    assert abs(tiny.mean_details[0][0]) < 1e-12
    assert tiny.var_details[0][0] < 1e-15
    data_dom = posterior([1e6], y)
    assert abs(data_dom.mean_details[0][0] - 3.0) < 1e-6
    assert abs(data_dom.var_details[0][0] - 1.0 / 1000) < 1e-8


def test_posterior_shape_mismatch():
    y = observe(_tree(4), 10, _rng(7))
    with pytest.raises(ValueError):
        posterior([1.0, 1.0], y)


def test_posterior_variance_bound_and_shrinkage():
    theta = _tree(5)
    n = 64
    y = observe(theta, n, _rng(8))
    mu = DiagGaussianPrior(1.0, 5, haar()).mu_sequence()
    post = posterior(mu, y)
    for i, l in enumerate(range(0, 5)):
        v = post.var_details[i]
        assert np.all(v <= min(mu[i], 1.0 / n) + 1e-15)
        assert np.all(v > 0)
        m, yv = post.mean_details[i], y.y_details[i]
        assert np.all(m * yv >= 0)
        assert np.all(np.abs(m) <= np.abs(yv) + 1e-15)


def test_posterior_mean_linearity():
    theta = _tree(4)
    mu = DiagGaussianPrior(0.5, 4, haar()).mu_sequence()
    y1, y2 = observe(theta, 32, _rng(9)), observe(theta, 32, _rng(10))
    a, b = 1.7, -0.4
    combo = type(y1)(y1.basis, y1.J0, y1.Jmax, y1.n,
                     a * y1.y_scaling + b * y2.y_scaling,
                     tuple(a * u + b * v
                           for u, v in zip(y1.y_details, y2.y_details)))
    p1, p2, pc = posterior(mu, y1), posterior(mu, y2), posterior(mu, combo)
    assert np.allclose(pc.mean_scaling,
                       a * p1.mean_scaling + b * p2.mean_scaling, atol=0)
    for i in range(4):
        assert np.allclose(pc.mean_details[i],
                           a * p1.mean_details[i] + b * p2.mean_details[i],
                           atol=0)


# ----------------------------------------------------------------- sampling

def test_posterior_sample_zero_variance_returns_mean():
    theta = _tree(4)
    y = observe(theta, 100, _rng(11))
    post = posterior(DiagGaussianPrior(1.0, 4, haar()).mu_sequence(), y)
    frozen = GaussianPosterior(post.basis, post.J0, post.Jmax, post.n,
                               post.mean_scaling, post.mean_details,
                               np.zeros_like(post.var_scaling),
                               tuple(np.zeros_like(v) for v in post.var_details))
    draw = posterior_sample(frozen, _rng(12))
    assert np.max(np.abs(draw.values - post.mean_function().values)) < 1e-12


def test_posterior_sampling_oracle_equivalence():
    # empirical mean of sampled functions matches the closed-form mean
    # within 4 pointwise standard errors over the grid
    theta = _tree(5)
    y = observe(theta, 50, _rng(13))
    post = posterior(DiagGaussianPrior(0.75, 5, haar()).mu_sequence(), y)
    reps = 10_000
    rng = _rng(14)
    draws = np.stack([posterior_sample(post, rng).values for _ in range(reps)])
    mean_fn = post.mean_function().values
    se = draws.std(axis=0, ddof=1) / np.sqrt(reps)
    assert np.all(np.abs(draws.mean(axis=0) - mean_fn) <= 4 * se + 1e-12)


def test_contraction_probability_extremes_and_monotonicity():
    theta = _tree(5)
    f0 = synthesize(theta)
    y = observe(theta, 200, _rng(15))
    post = posterior(DiagGaussianPrior(0.75, 5, haar()).mu_sequence(), y)
    assert contraction_probability(post, f0, 0.0, 2, 200, _rng(16)) == 1.0
    assert contraction_probability(post, f0, 1e9, 2, 200, _rng(17)) == 0.0
    probs = [contraction_probability(post, f0, rad, INF, 500, _rng(18))
             for rad in (0.05, 0.2, 0.8)]
    assert probs[0] >= probs[1] >= probs[2]


def test_white_noise_cell_row_contract():
    f0 = make_test_function(1.0, 1.0, 10, "seeded-random", seed=0)
    row = white_noise_cell(f0, haar(), 1.0, 2.0, 2 ** 12, 100, _rng(19))
    assert row["n"] == 2 ** 12
    assert row["loss_median"] > 0
    assert row["loss_median"] <= row["loss_q90"]
    assert 0.0 <= row["posterior_prob"] <= 1.0
    assert row["J_n"] >= 1


def test_posterior_mass_outside_fixed_radius_decays_in_n():
    # the qualitative content of the exponential contraction bound:
    # at a fixed radius the outside mass falls as the noise level drops
    from contractlab.rates import make_schedule

    f0 = make_test_function(1.0, 1.0, 10, "seeded-random", seed=21)
    probs = []
    for n in (2 ** 8, 2 ** 12, 2 ** 16):
        sched = make_schedule(1.0, INF, n)
        Jmax = min(sched.J_n + 2, 10)
        theta0 = truncate_tree(analyze(f0, haar()), Jmax)
        y = observe(theta0, n, _rng(23))
        post = posterior(DiagGaussianPrior(1.0, Jmax, haar()).mu_sequence(), y)
        probs.append(contraction_probability(post, f0, 0.35, INF, 400, _rng(24)))
    assert probs[0] >= probs[1] >= probs[2]
