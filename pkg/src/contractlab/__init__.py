"""contractlab: posterior contraction-rate simulations on [0,1].

Wavelet machinery (analysis, synthesis, projections), sequence-space norms,
rate schedules, conjugate white-noise and Dirichlet-histogram posteriors,
random-function priors with small-ball estimation, kernel-projection
density tests, and a seeded batch harness with a CLI.
"""

from .density_tests import (KernelSpec, TestReport, calibrate_threshold,
                            kernel_estimate, make_sup_alternative,
                            moment_ratio_check, plugin_test, power_report,
                            talagrand_envelope)
from .harness import (ConfigError, ExperimentConfig, InsufficientDataError,
                      ModelError, RateFit, parse_config, parse_config_text,
                      rate_fit, run)
from .histogram import (DirichletHistogram, contraction_curve, flat_prior,
                        histogram_level, mean_density, posterior_update,
                        sample_histogram)
from .priors import (ConditioningInfeasibleError, DiagGaussianPrior,
                     ReleasedIBMPrior, SmallBallEstimate, UniformSeriesPrior,
                     normalize_exp, sample_diag_gaussian, sample_released_ibm,
                     sample_series_field, sample_uniform_series,
                     small_ball_curve, small_ball_prob, wilson_interval)
from .rates import (RateSchedule, contraction_exponent,
                    contraction_exponent_exact, delta_n, epsilon_n,
                    make_schedule, r_bar)
from .seeding import derive_seed, splitmix64, substream
from .spaces import (BesovIndex, besov_norm, holder_coeff_radius, lr_norm,
                     make_test_density, make_test_function,
                     sample_from_density)
from .wavelets import (Basis, GridFunction, WaveletCoeffs, analyze,
                       basis_by_name, daubechies, haar, project, synthesize)
from .whitenoise import (GaussianPosterior, NoisyCoeffs,
                         contraction_probability, observe, posterior,
                         posterior_sample)

__version__ = "0.1.0"
