"""Optimal linear estimation of the mean of stationary processes.

Exact finite-sample variances of the best linear unbiased estimator via
Toeplitz systems and orthogonal polynomials on the unit circle, competing
estimators (sample mean, parabolic, fractional Beta-weight family,
pseudo-best), their efficiencies, and exponential-decay diagnostics for
deterministic spectra.
"""

__version__ = "0.1.0"

from .covariance import (CovarianceSequence, covariance_asymptote_falpha,
                         covariance_exact_falpha, covariance_sequence)
from .deterministic import (ArcRegion, ChebyshevSolution, chebyshev_constant_estimate,
                            chebyshev_min_max, decay_rate_from_variances)
from .efficiency import (EfficiencyReport, beran_kunsch_expansion, efficiency_finite,
                         general_class_asymptote, lse_asymptotic_efficiency,
                         lse_efficiency_exact_falpha, overestimation_efficiency,
                         short_memory_variance_limit, underestimation_limit)
from .errors import (AccuracyError, NearSingularError, NearTrivialMeasureError,
                     StatmeanError, ValidationError)
from .estimators import (EstimatorWeights, FejerKernel, adenstedt_variance_closed_form,
                         adenstedt_weights, gegenbauer_optimal, lse_weights,
                         parabolic_weights, pseudo_best_weights, variance_under)
from .opuc import (OpucState, christoffel, christoffel_curve, christoffel_limit_in_disk,
                   optimal_polynomial, prediction_error, szego_function, szego_recursion)
from .simulate import PathBatch, monte_carlo_variance, sample_paths
from .spectra import (MINUS_INFINITY, ArcSupported, ArfimaFactor, Arma, FgnDensity,
                      FisherHartwig, FlatZero, FrequencyShifted, PollaczekSzego,
                      PowerAtOrigin, Product, Scaled, SpectralMeasure, SpectralModel,
                      WhiteNoise, classify, evaluate, geometric_mean, load_measure,
                      measure_from_json, model_from_json, szego_integral)
from .toeplitz import (ToeplitzSystem, blue_solve, blue_variance_curve,
                       inverse_density_approx_variance, quadratic_form, system_for)
