"""Orthogonal polynomials on the unit circle from trigonometric moments.

The recursion runs on plain moments of the full measure (density plus atoms),
r(k) = integral e^{i k lam} d(mu) — the same numbers that fill the covariance
Toeplitz matrix, one shared normalization pinned by the white-noise tests.
With the Lebesgue measure f == 1 the orthonormal polynomials are
z^k / sqrt(2 pi), so reciprocal Christoffel sums carry an explicit 2 pi.

For a real even measure the recursion coefficients are real and the monic
pair satisfies

    P_{k+1}(z) = z P_k(z) - a_k P*_k(z),
    P*_{k+1}(z) = P*_k(z) - a_k z P_k(z),
    ||P_{k+1}||^2 = ||P_k||^2 (1 - a_k^2),

with a_k = <z P_k, 1> / ||P_k||^2 read off the moments.  The reciprocal of
the degree-n reproducing kernel on the diagonal, 1 / S_n(xi, xi), is the
minimal squared norm over polynomials of degree <= n normalized at xi; at
xi = 1 this is exactly the optimal mean-estimation variance, which makes the
boundary evaluation here the production path and the Toeplitz solver the
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .covariance import covariance_sequence
from .errors import NearTrivialMeasureError, ValidationError
from .quadrature import model_grid
from .spectra import MINUS_INFINITY, TWO_PI, SpectralModel, as_measure, szego_integral


@dataclass
class OpucState:
    """Recursion output: coefficients, norms, and probe values up to `order`."""

    order: int
    verblunsky: np.ndarray               # a_0 .. a_{n-1}
    monic_norms: np.ndarray              # ||P_k||^2, k = 0..n
    moments: np.ndarray                  # r(0..n)
    phi_at_probes: dict                  # probe -> complex array of phi_k(probe)

    def kappa(self, m: int) -> float:
        """Leading coefficient of the orthonormal polynomial, 1/||P_m||."""
        return 1.0 / math.sqrt(self.monic_norms[m])


def szego_recursion(measure, n: int, probes=()) -> OpucState:
    """Run the moment recursion to order n, tracking values at probe points."""
    measure = as_measure(measure)
    if n < 1:
        raise ValidationError("order must be at least 1")
    measure.require_order(n)
    r = covariance_sequence(measure, n).values

    probes = tuple(complex(p) for p in probes)
    phi = {p: np.empty(n + 1, dtype=complex) for p in probes}
    pvals = {p: (1.0 + 0.0j, 1.0 + 0.0j) for p in probes}  # (P_k, P*_k) at probe

    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0                       # monic P_0 = 1
    norms = np.empty(n + 1)
    norms[0] = r[0]
    alphas = np.empty(n)

    for p in probes:
        phi[p][0] = 1.0 / math.sqrt(norms[0])

    for k in range(n):
        a_k = float(np.dot(coeffs[:k + 1], r[1:k + 2])) / norms[k]
        if abs(a_k) >= 1.0 - 1e-13:
            raise NearTrivialMeasureError(
                f"recursion coefficient {k} has modulus {abs(a_k):.17g}, numerically "
                f"at the unit bound; the measure is trivial at this order", index=k)
        alphas[k] = a_k
        reversed_part = coeffs[:k + 1][::-1].copy()
        coeffs[1:k + 2] = coeffs[:k + 1].copy()   # z * P_k
        coeffs[0] = 0.0
        coeffs[:k + 1] -= a_k * reversed_part     # minus a_k * P*_k
        norms[k + 1] = norms[k] * (1.0 - a_k * a_k)
        for p in probes:
            pk, pk_star = pvals[p]
            pvals[p] = (p * pk - a_k * pk_star, pk_star - a_k * p * pk)
            phi[p][k + 1] = pvals[p][0] / math.sqrt(norms[k + 1])

    return OpucState(order=n, verblunsky=alphas, monic_norms=norms,
                     moments=r, phi_at_probes=phi)


def christoffel(state: OpucState, probe, m: int) -> float:
    """Minimal squared norm over degree <= m polynomials with value 1 at `probe`.

    Equals the reciprocal diagonal kernel 1 / sum_{k<=m} |phi_k(probe)|^2;
    at probe = 1 this is the optimal estimator variance at order m.
    """
    probe = complex(probe)
    if probe not in state.phi_at_probes:
        raise ValidationError(f"probe {probe} was not registered in the recursion")
    if not 0 <= m <= state.order:
        raise ValidationError("m must lie within the recursion order")
    vals = state.phi_at_probes[probe][:m + 1]
    return 1.0 / float(np.sum(np.abs(vals) ** 2))


def christoffel_curve(state: OpucState, probe) -> np.ndarray:
    """All orders at once: 1 / cumulative sum of |phi_k(probe)|^2."""
    probe = complex(probe)
    if probe not in state.phi_at_probes:
        raise ValidationError(f"probe {probe} was not registered in the recursion")
    return 1.0 / np.cumsum(np.abs(state.phi_at_probes[probe]) ** 2)


def prediction_error(state: OpucState, m: int) -> float:
    """One-step-ahead prediction error from a length-m past: ||P_m||^2."""
    if not 0 <= m <= state.order:
        raise ValidationError("m must lie within the recursion order")
    return float(state.monic_norms[m])


def optimal_polynomial(state: OpucState, m: int) -> np.ndarray:
    """Coefficients of the minimizer S_m(z, 1) / S_m(1, 1); they sum to 1.

    Replays the stored recursion coefficients, accumulating the orthonormal
    coefficient vectors against their values at 1.
    """
    if not 0 <= m <= state.order:
        raise ValidationError("m must lie within the recursion order")
    coeffs = np.zeros(m + 1)
    coeffs[0] = 1.0
    p_at_one = 1.0
    acc = np.zeros(m + 1)
    acc[0] = p_at_one / state.monic_norms[0]
    for k in range(m):
        a_k = state.verblunsky[k]
        reversed_part = coeffs[:k + 1][::-1].copy()
        coeffs[1:k + 2] = coeffs[:k + 1].copy()
        coeffs[0] = 0.0
        coeffs[:k + 1] -= a_k * reversed_part
        p_at_one = (1.0 - a_k) * p_at_one
        acc[:k + 2] += (p_at_one / state.monic_norms[k + 1]) * coeffs[:k + 2]
    return acc / acc.sum()


# ---------------------------------------------------------------------------
# limits inside the disk and the outer function
# ---------------------------------------------------------------------------

def poisson_weighted_geometric_mean(model: SpectralModel, xi: complex) -> float:
    """exp of the Poisson-kernel average of ln f at xi = r e^{i theta}."""
    if szego_integral(model) is MINUS_INFINITY:
        return 0.0
    xi = complex(xi)
    rad = abs(xi)
    theta = math.atan2(xi.imag, xi.real)
    lam, w = model_grid(model, base_panels=max(16, int(8 / max(1e-3, 1 - rad))))
    integrand = (model.log_values(lam) * _poisson(rad, theta - lam)
                 + model.log_values(-lam) * _poisson(rad, theta + lam))
    return math.exp(float(np.dot(w, integrand)) / TWO_PI)


def _poisson(r, delta):
    return (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(delta) + r * r)


def christoffel_limit_in_disk(model: SpectralModel, xi: complex) -> float:
    """Limit of the Christoffel values at an interior point.

    2*pi*(1-|xi|^2) times the Poisson-weighted geometric mean of f; zero when
    the log-integral diverges.  At xi = 0 this is the classical infinite-past
    prediction error 2*pi*G(f).
    """
    xi = complex(xi)
    if abs(xi) >= 1.0:
        raise ValidationError("xi must lie strictly inside the unit disk; "
                              "boundary values go through the recursion itself")
    g = poisson_weighted_geometric_mean(model, xi)
    return TWO_PI * g * (1.0 - abs(xi) ** 2)


@dataclass(frozen=True)
class SzegoFunctionEval:
    """Outer-function value D(f, z) with the log-density Fourier tail used."""

    point: complex
    value: complex
    log_fourier: np.ndarray


def szego_function(model: SpectralModel, z: complex, tail_tol: float = 1e-10,
                   max_terms: int = 4096) -> SzegoFunctionEval:
    """D(f, z) = exp(d_0/2 + sum_{k>=1} d_k z^k) inside the disk.

    d_k are the Fourier coefficients of ln f (real and even here); the series
    is truncated adaptively once a geometric bound on the remainder falls
    below `tail_tol`.  |D|^2 has radial boundary values f, and D(f, 0)^2 is
    the geometric mean of f.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValidationError("z must lie strictly inside the unit disk")
    if szego_integral(model) is MINUS_INFINITY:
        raise ValidationError("outer function requires a convergent log-integral")
    from .spectra import is_even_density
    if not is_even_density(model):
        raise ValidationError("outer-function evaluation assumes an even density")

    lam, w = model_grid(model, osc_k=64)
    logf = model.log_values(lam)
    radius = abs(z)

    terms = 64
    d = None
    while True:
        if d is None or terms > len(d) - 1:
            lam, w = model_grid(model, osc_k=terms)
            logf = model.log_values(lam)
            from .covariance import _cosine_moments
            d = _cosine_moments(lam, w, logf, terms) / TWO_PI
        tail = np.max(np.abs(d[terms // 2:terms])) if radius == 0.0 else (
            np.max(np.abs(d[terms // 2:terms])) * radius ** (terms // 2) / (1.0 - radius))
        if tail < tail_tol or terms >= max_terms:
            break
        terms *= 2
    k = np.arange(1, terms + 1)
    log_d = 0.5 * d[0] + np.sum(d[1:terms + 1] * z ** k)
    return SzegoFunctionEval(point=z, value=np.exp(log_d), log_fourier=d[:terms + 1])
