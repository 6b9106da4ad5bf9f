"""Symmetric Toeplitz systems for optimal mean-estimation weights.

The core routine is a Levinson-Durbin recursion generalized to the all-ones
right-hand side: one O(n^2) pass yields the optimal weights and variance at
every intermediate order, plus the reflection coefficients used for the
positive-definiteness check and a cheap condition proxy.  In double precision
the solution is polished by one step of iterative refinement with the
residual accumulated in extended (80-bit) arithmetic; the extended path runs
the same recursion in compensated double-double arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ddouble as dd
from .covariance import CovarianceSequence, covariance_sequence
from .errors import NearSingularError, ValidationError
from .quadrature import model_grid
from .spectra import TWO_PI, as_measure

#: reflection magnitude beyond which the double recursion is declared singular
BREAKDOWN_DOUBLE = 1.0 - 1e-14
BREAKDOWN_DD = 1.0 - 1e-30
#: largest order for which the refinement residual is formed in 80-bit floats
REFINE_MAX_ORDER = 2048

#: scaling applied to Fourier coefficients of 1/f in the inverse-density
#: approximation.  Pinned by exactness on constant densities: with entries
#: a(t) = CALIBRATION * integral e^{i t lam} / f(lam) dlam the quadratic form
#: of all-ones reproduces 1/variance exactly for f == const.
INVERSE_DENSITY_CALIBRATION = 1.0 / (TWO_PI * TWO_PI)


@dataclass
class ToeplitzSystem:
    """Covariance Toeplitz matrix of order n+1 (entries r(|j-k|))."""

    covariance: CovarianceSequence
    precision: str = "double"
    condition_estimate: float | None = None

    def __post_init__(self):
        if self.precision not in ("double", "dd"):
            raise ValidationError(f"unknown precision {self.precision!r}")
        if self.precision == "dd" and self.covariance.dd_values is None:
            raise ValidationError("extended precision requires a dd covariance sequence")

    @property
    def order(self) -> int:
        return self.covariance.order


def system_for(measure, n: int, precision: str = "double") -> ToeplitzSystem:
    cov = covariance_sequence(measure, n, precision=precision)
    return ToeplitzSystem(cov, precision=precision)


# ---------------------------------------------------------------------------
# double-precision Levinson with all-ones right-hand side
# ---------------------------------------------------------------------------

def _levinson_ones(r, collect_curve=False, breakdown=BREAKDOWN_DOUBLE):
    """One recursion pass; returns (x, reflections, variances or final)."""
    r = np.asarray(r, dtype=float)
    n = len(r) - 1
    a = np.empty(n + 1)
    x = np.empty(n + 1)
    a[0] = 1.0
    x[0] = 1.0 / r[0]
    e = r[0]
    refl = np.empty(n)
    variances = np.empty(n + 1)
    variances[0] = r[0]
    for m in range(1, n + 1):
        window = r[m:0:-1]
        k = -np.dot(a[:m], window) / e
        if abs(k) >= breakdown:
            raise NearSingularError(
                f"Toeplitz factorization breakdown at order {m} "
                f"(reflection {k:+.17g}); extended double-double precision "
                f"may reach further", order=m)
        refl[m - 1] = k
        a[m] = 0.0
        a[:m + 1] += k * a[:m + 1][::-1].copy()
        e *= 1.0 - k * k
        eta = 1.0 - np.dot(x[:m], window)
        x[m] = 0.0
        x[:m + 1] += (eta / e) * a[:m + 1][::-1]
        if collect_curve:
            variances[m] = 1.0 / x[:m + 1].sum()
    return x, refl, variances, e


def _refine(r, x):
    """One iterative-refinement step, residual in extended precision."""
    n = len(r) - 1
    if n > REFINE_MAX_ORDER:
        return x
    rl = np.asarray(r, dtype=np.longdouble)
    xl = np.asarray(x, dtype=np.longdouble)
    idx = np.abs(np.subtract.outer(np.arange(n + 1), np.arange(n + 1)))
    res = np.ones(n + 1, dtype=np.longdouble) - rl[idx] @ xl
    corr = _levinson_general(r, np.asarray(res, dtype=float))
    return x + corr


def _levinson_general(r, rhs):
    """Levinson recursion for an arbitrary right-hand side."""
    r = np.asarray(r, dtype=float)
    n = len(r) - 1
    a = np.empty(n + 1)
    x = np.empty(n + 1)
    a[0] = 1.0
    x[0] = rhs[0] / r[0]
    e = r[0]
    for m in range(1, n + 1):
        window = r[m:0:-1]
        k = -np.dot(a[:m], window) / e
        if abs(k) >= BREAKDOWN_DOUBLE:
            raise NearSingularError("breakdown during refinement", order=m)
        a[m] = 0.0
        a[:m + 1] += k * a[:m + 1][::-1].copy()
        e *= 1.0 - k * k
        eta = rhs[m] - np.dot(x[:m], window)
        x[m] = 0.0
        x[:m + 1] += (eta / e) * a[:m + 1][::-1]
    return x


# ---------------------------------------------------------------------------
# double-double path
# ---------------------------------------------------------------------------

def _levinson_ones_dd(rdd, collect_curve=False):
    n = len(rdd) - 1
    a = [dd.ONE]
    x = [dd.div(dd.ONE, rdd[0])]
    e = rdd[0]
    variances = [rdd[0]]
    refl = []
    for m in range(1, n + 1):
        acc = dd.ZERO
        for j in range(m):
            acc = dd.add(acc, dd.mul(a[j], rdd[m - j]))
        k = dd.neg(dd.div(acc, e))
        if abs(dd.to_float(k)) >= BREAKDOWN_DD:
            raise NearSingularError(
                f"extended-precision Toeplitz factorization breakdown at order {m}",
                order=m, extended=True)
        refl.append(k)
        rev = a[::-1]
        a = [dd.add(a[j] if j < m else dd.ZERO, dd.mul(k, rev[j - 1] if j >= 1 else dd.ZERO))
             for j in range(m + 1)]
        e = dd.mul(e, dd.sub(dd.ONE, dd.mul(k, k)))
        if dd.to_float(e) <= 0.0:
            raise NearSingularError("extended-precision pivot loss", order=m, extended=True)
        acc = dd.ZERO
        for j in range(m):
            acc = dd.add(acc, dd.mul(x[j], rdd[m - j]))
        coef = dd.div(dd.sub(dd.ONE, acc), e)
        x = [dd.add(x[j] if j < m else dd.ZERO, dd.mul(coef, a[m - j])) for j in range(m + 1)]
        if collect_curve:
            s = dd.ZERO
            for xj in x:
                s = dd.add(s, xj)
            v = dd.div(dd.ONE, s)
            if dd.to_float(v) <= 0.0:
                raise NearSingularError("extended-precision variance loss", order=m,
                                        extended=True)
            variances.append(v)
    return x, refl, variances


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def blue_solve(system: ToeplitzSystem):
    """Optimal unbiased weights and their variance for the covariance system.

    Weights are (1^T R^-1 1)^-1 1^T R^-1 with the unit-sum constraint enforced
    by a final renormalization; the variance is (1^T R^-1 1)^-1.
    """
    from .estimators import EstimatorWeights

    r = system.covariance.values
    if system.precision == "dd":
        x, refl, _ = _levinson_ones_dd(system.covariance.dd_values)
        s = dd.ZERO
        for xj in x:
            s = dd.add(s, xj)
        variance = dd.to_float(dd.div(dd.ONE, s))
        coeffs = np.array([dd.to_float(dd.div(xj, s)) for xj in x])
        refl_f = np.array([dd.to_float(k) for k in refl])
    else:
        x, refl_f, _, _ = _levinson_ones(r)
        x = _refine(r, x)
        total = x.sum()
        variance = 1.0 / total
        coeffs = x / total
    coeffs = coeffs / coeffs.sum()
    system.condition_estimate = _condition_proxy(refl_f)
    if variance <= 0.0:
        raise NearSingularError("non-positive variance from factorization",
                                order=system.order)
    return EstimatorWeights(coeffs, label="blue"), variance


def blue_variance_curve(covariance: CovarianceSequence, precision: str = "double"):
    """Variance of the optimal estimator at every order 0..n in one pass."""
    if precision == "dd":
        if covariance.dd_values is None:
            raise ValidationError("extended curve requires a dd covariance sequence")
        _, _, variances = _levinson_ones_dd(covariance.dd_values, collect_curve=True)
        return np.array([dd.to_float(v) for v in variances])
    _, _, variances, _ = _levinson_ones(covariance.values, collect_curve=True)
    return variances


def reflection_coefficients(r):
    """Reflection (Schur) coefficients of the prediction recursion."""
    _, refl, _, _ = _levinson_ones(r)
    return refl


def _condition_proxy(refl):
    """prod 1/(1-k^2): a growth proxy, reported not guaranteed."""
    refl = np.asarray(refl, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        return float(np.exp(-np.sum(np.log1p(-refl * refl))))


def quadratic_form(weights, covariance: CovarianceSequence) -> float:
    """sum_{j,k} c_j c_k r(|j-k|) via O(n) lag aggregation.

    Trailing exact zeros of the covariance are trimmed first, so short-range
    sequences (integer-exponent models) cost O(n * lags).
    """
    c = np.asarray(getattr(weights, "coefficients", weights), dtype=float)
    r = covariance.values
    if len(c) > len(r):
        raise ValidationError("weight length exceeds covariance order + 1")
    nz = np.nonzero(r)[0]
    lags = int(nz[-1]) + 1 if len(nz) else 1
    lags = min(lags, len(c))
    if lags <= 8:
        # extended accumulation keeps closed-form identities tight at n ~ 4096
        cl = c.astype(np.longdouble)
        acc = np.longdouble(r[0]) * np.dot(cl, cl)
        for t in range(1, lags):
            acc += 2.0 * np.longdouble(r[t]) * np.dot(cl[:-t], cl[t:])
        return float(acc)
    from scipy.signal import fftconvolve
    auto = fftconvolve(c, c[::-1])
    mid = len(c) - 1
    acorr = auto[mid:mid + lags]
    acorr[0] = float(np.dot(c, c))
    return float(r[0] * acorr[0] + 2.0 * np.dot(r[1:lags], acorr[1:]))


def _inverse_integrable(model) -> bool:
    """1/f integrable: no zero of order >= 1 and no vanishing on intervals."""
    if model.szego_diverges() or model.zero_density():
        return False
    for s in model.singularities():
        if s.kind == "essential":
            return False
        if s.kind == "edge":
            return False
        if s.kind == "algebraic" and s.exponent is not None and s.exponent >= 1.0:
            return False
    return True


def inverse_density_approx_variance(measure, n: int) -> float:
    """Variance approximation replacing R^-1 by the Toeplitz matrix of 1/f.

    The matrix entries are the Fourier coefficients of 1/f scaled by
    INVERSE_DENSITY_CALIBRATION, which makes the approximation exact for
    constant densities; for densities continuous and positive at the origin it
    approaches 2*pi*f(0)/n.
    """
    measure = as_measure(measure)
    model = measure.density
    if measure.atoms:
        raise ValidationError("inverse-density approximation is defined for densities only")
    if not _inverse_integrable(model):
        raise ValidationError("1/f is not integrable; inverse-density approximation undefined")
    N = n + 1
    lam, w = model_grid(model, osc_k=n)
    inv_vals = 1.0 / model.values(lam)
    from .covariance import _cosine_moments
    a = INVERSE_DENSITY_CALIBRATION * _cosine_moments(lam, w, inv_vals, n)
    t = np.arange(1, N)
    form = N * a[0] + 2.0 * np.dot(N - t, a[1:])
    if form <= 0.0:
        raise ValidationError("inverse-density quadratic form is not positive")
    return 1.0 / float(form)
