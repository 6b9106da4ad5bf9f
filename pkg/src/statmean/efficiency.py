"""Finite-sample and asymptotic efficiencies relative to the optimal estimator.

Efficiency of an estimator is the ratio (optimal variance)/(its variance)
under the same measure, so finite-sample values never exceed 1.  The module
also evaluates every closed-form limit law the library verifies: the
short-memory constant 2*pi*f(0), the hyperbolic constant for power-law models,
over/underestimation limits of the fractional family, and the exact and
asymptotic sample-mean efficiencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from .covariance import covariance_sequence
from .errors import ValidationError
from .estimators import EstimatorWeights, variance_under
from .spectra import TWO_PI, SpectralModel, as_measure


class SpecialValues:
    """Log-gamma, Beta, and binomial evaluators used by the closed forms."""

    @staticmethod
    def log_gamma(x):
        return gammaln(x)

    @staticmethod
    def log_beta(a, b):
        return betaln(a, b)

    @staticmethod
    def beta(a, b):
        return np.exp(betaln(a, b))

    @staticmethod
    def binomial(n, k):
        return math.exp(float(gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)))


@dataclass(frozen=True)
class EfficiencyReport:
    n: object                 # int or math.inf
    value: float
    numerator_variance: float | None
    denominator_variance: float | None
    law: str


def efficiency_finite(weights: EstimatorWeights, measure, n: int | None = None) -> EfficiencyReport:
    """Var(optimal)/Var(weights) under the same measure at finite order."""
    from .toeplitz import blue_solve, system_for
    measure = as_measure(measure)
    if n is None:
        n = weights.order
    if n != weights.order:
        raise ValidationError("order must match the weight length")
    _, best = blue_solve(system_for(measure, n))
    var = variance_under(weights, measure)
    return EfficiencyReport(n, best / var, best, var, law="finite-sample ratio")


def overestimation_efficiency(alpha: float, beta: int) -> float:
    """Limit efficiency of the order-(alpha+beta) estimator under f_alpha.

    Gamma-product closed form, evaluated in log space:
    G(2a+2) G(a+b+1)^2 G(2a+4b+2) / [C(2b,b) G(a+1) G(a+2b+1) G(2a+2b+2)^2].
    """
    if not alpha > -0.5:
        raise ValidationError("alpha must satisfy alpha > -1/2")
    if beta != int(beta) or beta < 0:
        raise ValidationError("beta must be a nonnegative integer")
    beta = int(beta)
    a, b = float(alpha), float(beta)
    log_val = (gammaln(2 * a + 2) + 2 * gammaln(a + b + 1) + gammaln(2 * a + 4 * b + 2)
               - gammaln(a + 1) - gammaln(a + 2 * b + 1) - 2 * gammaln(2 * a + 2 * b + 2)
               - (gammaln(2 * b + 1) - 2 * gammaln(b + 1)))
    return float(np.exp(log_val))


def lse_asymptotic_efficiency(alpha: float) -> float:
    """Limit efficiency of the sample mean under the power-law family.

    pi*a*(1-2a) / (B(a+1,a+1) sin(pi*a)) on (-1/2, 1/2) with the removable
    singularity at 0 filled by continuity (value 1); identically 0 for
    a >= 1/2 where the sample mean converges at a slower rate.
    """
    if not alpha > -0.5:
        raise ValidationError("alpha must satisfy alpha > -1/2")
    if alpha >= 0.5:
        return 0.0
    if alpha == 0.0:
        return 1.0
    b = math.exp(float(betaln(alpha + 1.0, alpha + 1.0)))
    return math.pi * alpha * (1.0 - 2.0 * alpha) / (b * math.sin(math.pi * alpha))


def lse_efficiency_exact_falpha(n: int, alpha: float) -> float:
    """Exact finite-order sample-mean efficiency under f_alpha.

    Product/sum expression evaluated with log-space running products.  The
    inner index runs over the number of observations N = n + 1, which makes
    the value match the direct Toeplitz/kernel ratio at order n exactly.
    """
    if not alpha > -0.5:
        raise ValidationError("alpha must satisfy alpha > -1/2")
    if n < 1:
        raise ValidationError("order must be at least 1")
    if alpha == 0.0:
        return 1.0
    N = n + 1
    a = float(alpha)
    j = np.arange(2, N + 1, dtype=float)
    log_prod = float(np.log1p(2.0 * a / j).sum())
    # running product prod_{i=1}^{k-1} (i-a)/(i+a), then one extra 1/(k+a)
    total = (1.0 - 1.0 / N) / (1.0 + a)
    running = 1.0
    for k in range(2, N):
        running *= (k - 1.0 - a) / (k - 1.0 + a)
        total += (1.0 - k / N) * running / (k + a)
    bracket = 1.0 - 2.0 * a * total
    return float(1.0 / (math.exp(log_prod) * bracket))


def beran_kunsch_expansion(alpha: float) -> float:
    """Small-alpha expansion of the sample-mean limit efficiency."""
    if abs(alpha) > 0.2:
        raise ValidationError("expansion is stated for |alpha| <= 0.2")
    return 1.0 - (1.0 - math.pi ** 2 / 12.0) * (2.0 * alpha) ** 2


def underestimation_limit(alpha: int, g: SpectralModel) -> float:
    """lim n^{2a+2} Var(order-a estimator) when the truth is f_{a+1} * g.

    Equals [(2a+1)!/a!]^2 / pi times the integral of g; the integral of g is
    its covariance value at lag zero.
    """
    if alpha != int(alpha) or alpha < 0:
        raise ValidationError("alpha must be a nonnegative integer")
    a = int(alpha)
    integral_g = covariance_sequence(as_measure(g), 0).values[0]
    factor = math.exp(float(gammaln(2 * a + 2) - gammaln(a + 1))) ** 2
    return factor / math.pi * integral_g


def short_memory_variance_limit(model: SpectralModel) -> float:
    """2*pi*f(0) for densities positive and continuous at the origin."""
    f0 = float(model.values(np.array(0.0)))
    exponent = model.origin_exponent()
    if not (f0 > 0.0 and math.isfinite(f0)) or (exponent is not None and exponent != 0.0):
        raise ValidationError(
            "density must be positive and continuous at 0; models with a "
            "power-law origin belong to the hyperbolic f_alpha pathway")
    return TWO_PI * f0


def general_class_asymptote(alpha: float, g0: float) -> float:
    """Constant of the hyperbolic law n^{2a+1} Var -> Gamma(2a+1) g(0) / B(a+1,a+1)."""
    if not alpha > -0.5:
        raise ValidationError("alpha must satisfy alpha > -1/2")
    if not g0 > 0.0:
        raise ValidationError("g0 must be positive")
    return math.exp(float(gammaln(2 * alpha + 1.0) - betaln(alpha + 1.0, alpha + 1.0))) * g0


def fit_asymptote_constant(orders, variances, power: float) -> float:
    """Fit a in Var ~ a * n^(-power) with the rate fixed by theory.

    Geometric mean of Var * n^power over the top half of the grid; fitting
    only the constant avoids conflating rate and constant estimation.
    """
    orders = np.asarray(orders, dtype=float)
    variances = np.asarray(variances, dtype=float)
    if len(orders) != len(variances) or len(orders) == 0:
        raise ValidationError("need matching nonempty grids")
    scaled = np.log(variances) + power * np.log(orders)
    top = scaled[len(scaled) // 2:]
    return float(np.exp(top.mean()))
