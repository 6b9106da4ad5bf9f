"""Exponential-decay diagnostics for variances over vanishing spectra.

Two independent estimates of the same constant are produced: the n-th root of
the minimax deviation of unit-normalized polynomials on the spectrum (a
Lawson iteration), and the limit of sigma_n^{1/n} fitted from the variance
curve itself (extended precision engaged automatically as variances shrink).
Spectra vanishing near the origin on a set of positive measure give a
constant < 1 (exponential decay); spectra positive near the origin give 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .covariance import covariance_sequence
from .errors import NearSingularError, ValidationError
from .spectra import as_measure
from .toeplitz import blue_variance_curve

LAWSON_MAX_ITERATIONS = 500
LAWSON_RTOL = 1e-8
LAWSON_WEIGHT_FLOOR = 1e-14
#: switch to double-double once the predicted variance drops below this
EXTENDED_PRECISION_THRESHOLD = 1e-12
#: default order grids: double precision runs out of pivots well before the
#: extended path does (0.707^96 squared still sits inside double-double range)
DEFAULT_DOUBLE_GRID = tuple(range(8, 49, 4))
DEFAULT_EXTENDED_GRID = tuple(range(8, 97, 8))


@dataclass(frozen=True)
class ArcRegion:
    """Union of closed angle intervals within [-pi, pi]."""

    arcs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        cleaned = []
        for lo, hi in self.arcs:
            lo, hi = float(lo), float(hi)
            if not (-math.pi - 1e-12 <= lo <= hi <= math.pi + 1e-12):
                raise ValidationError("arc endpoints must satisfy -pi <= lo <= hi <= pi")
            cleaned.append((max(lo, -math.pi), min(hi, math.pi)))
        cleaned.sort()
        merged = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1] + 1e-15:
                merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
            else:
                merged.append((lo, hi))
        if not merged:
            raise ValidationError("region must be nonempty")
        object.__setattr__(self, "arcs", tuple(merged))

    @property
    def contains_one(self) -> bool:
        return any(lo <= 0.0 <= hi for lo, hi in self.arcs)

    @property
    def total_length(self) -> float:
        return sum(hi - lo for lo, hi in self.arcs)

    @classmethod
    def full_circle(cls) -> "ArcRegion":
        return cls(((-math.pi, math.pi),))

    @classmethod
    def complement_arc(cls, alpha: float) -> "ArcRegion":
        """The set {alpha <= |lambda| <= pi} (spectrum of an arc-supported density)."""
        if not 0.0 < alpha < math.pi:
            raise ValidationError("arc edge must lie in (0, pi)")
        return cls(((-math.pi, -alpha), (alpha, math.pi)))

    def grid(self, count: int) -> np.ndarray:
        """Closed uniform grid over the union, count points distributed by length."""
        pts = []
        for lo, hi in self.arcs:
            m = max(2, int(round(count * (hi - lo) / self.total_length)))
            pts.append(np.linspace(lo, hi, m))
        return np.concatenate(pts)


@dataclass
class ChebyshevSolution:
    """Minimax polynomial on a region among polynomials with value 1 at z=1."""

    order: int
    coefficients: np.ndarray
    deviation: float
    constant_estimate: float
    iterations: int
    converged: bool

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex),
                                                self.coefficients)


def chebyshev_min_max(region: ArcRegion, n: int,
                      grid_density: int | None = None) -> ChebyshevSolution:
    """min over {deg <= n, q(1) = 1} of max |q| on the discretized region.

    Lawson iteratively reweighted least squares: each step solves the
    weighted-L2 problem with the affine constraint handled by a Lagrange
    step, then multiplies the weights by the residual magnitudes.  The best
    deviation seen is reported; it is an upper bound for the true minimax
    value whether or not the iteration converged.
    """
    if n < 1:
        raise ValidationError("polynomial order must be at least 1")
    count = grid_density if grid_density else max(64 * n, 4096)
    lam = region.grid(count)
    z = np.exp(1j * lam)
    basis = z[:, None] ** np.arange(n + 1)[None, :]
    # eliminate the constraint: q = 1 + sum_{k>=1} y_k (z^k - 1), so the
    # weighted problem is a plain least squares in y (no squared conditioning)
    shifted = basis[:, 1:] - 1.0
    weights = np.full(len(lam), 1.0 / len(lam))

    best_dev = math.inf
    best_c = None
    prev_dev = math.inf
    converged = False
    iterations = 0
    for iterations in range(1, LAWSON_MAX_ITERATIONS + 1):
        sw = np.sqrt(weights)
        y, *_ = np.linalg.lstsq(shifted * sw[:, None], -sw.astype(complex), rcond=None)
        c = np.concatenate(([1.0 - y.sum()], y))
        resid = np.abs(basis @ c)
        dev = float(resid.max())
        if dev < best_dev:
            best_dev = dev
            best_c = c
        if iterations > 3 and abs(dev - prev_dev) <= LAWSON_RTOL * max(dev, 1e-300):
            converged = True
            break
        prev_dev = dev
        weights = weights * np.maximum(resid, LAWSON_WEIGHT_FLOOR)
        weights /= weights.sum()

    best_c = best_c / np.polynomial.polynomial.polyval(1.0 + 0.0j, best_c)
    coeffs = best_c.real if np.max(np.abs(best_c.imag)) < 1e-9 else best_c
    return ChebyshevSolution(order=n, coefficients=coeffs, deviation=best_dev,
                             constant_estimate=best_dev ** (1.0 / n),
                             iterations=iterations, converged=converged)


def chebyshev_constant_estimate(region: ArcRegion, n_grid) -> tuple[float, list]:
    """Estimated minimax constant: the last n-th root, with the full sequence.

    Values above 1 can occur only through discretization error on regions
    containing z=1; they are reported as computed, never clamped.
    """
    n_grid = sorted(int(n) for n in n_grid)
    if not n_grid:
        raise ValidationError("n grid must be nonempty")
    curve = [chebyshev_min_max(region, n) for n in n_grid]
    return curve[-1].constant_estimate, curve


@dataclass
class DecayReport:
    rho: float
    neutrality: str                    # "ExponentiallyNeutral" | "ExponentiallyDecreasing"
    orders: np.ndarray
    sigmas: np.ndarray                 # sqrt of variances on the reachable grid
    fit_standard_error: float
    precision: str
    warning: str | None = None


def decay_rate_from_variances(measure, n_grid=None, precision: str = "auto") -> DecayReport:
    """Fit rho = lim sigma_n^{1/n} by the ratio method on a grid of orders.

    rho is the geometric mean of sigma_{n+1}/sigma_n over the top half of the
    reachable grid.  Extended double-double precision engages automatically
    when the predicted next variance (previous point times rho^2) falls below
    1e-12; once even extended precision breaks down the grid is truncated and
    a warning recorded.
    """
    measure = as_measure(measure)
    if precision not in ("auto", "double", "dd"):
        raise ValidationError(f"unknown precision {precision!r}")
    if n_grid is None:
        n_grid = DEFAULT_DOUBLE_GRID if precision == "double" else DEFAULT_EXTENDED_GRID
    n_grid = sorted(int(n) for n in n_grid)
    if not n_grid or n_grid[0] < 1:
        raise ValidationError("order grid must be nonempty with positive entries")
    nmax = n_grid[-1] + 1

    used = "double" if precision in ("auto", "double") else "dd"
    curve, warning = _curve_with_truncation(measure, nmax, used)
    if precision == "auto" and (warning or _needs_extended(curve)):
        try:
            curve, warning = _curve_with_truncation(measure, nmax, "dd")
            used = "dd"
        except ValidationError:
            pass        # no extended covariance for this model; keep double

    reachable = len(curve) - 1
    orders = np.array([n for n in n_grid if n + 1 <= reachable])
    if len(orders) == 0:
        raise NearSingularError("no grid point reachable", order=reachable,
                                extended=used == "dd")
    if len(orders) < len(n_grid) and warning is None:
        warning = f"grid truncated at order {reachable - 1}"

    sigmas = np.sqrt(curve[orders])
    ratios = np.sqrt(curve[orders + 1]) / sigmas
    log_ratios = np.log(ratios)
    top = log_ratios[len(log_ratios) // 2:]
    bottom = log_ratios[:len(log_ratios) // 2] if len(log_ratios) > 1 else top
    rho = float(np.exp(top.mean()))
    # fit error of "constant log-ratio": sampling spread plus the drift between
    # grid halves, so sequences whose ratios are still climbing toward 1
    # (hyperbolic and flatter-than-exponential decay) read as neutral
    spread = float(np.std(top, ddof=1) / math.sqrt(len(top))) if len(top) > 1 else 0.0
    drift = abs(float(top.mean() - bottom.mean())) if len(bottom) else 0.0
    se = max(spread, drift)
    neutrality = ("ExponentiallyDecreasing" if rho <= 1.0 - 5.0 * se
                  else "ExponentiallyNeutral")
    return DecayReport(rho=rho, neutrality=neutrality, orders=orders, sigmas=sigmas,
                       fit_standard_error=se, precision=used, warning=warning)


def _curve_with_truncation(measure, nmax, precision):
    """Variance curve reaching as far as the factorization allows."""
    cov = covariance_sequence(measure, nmax, precision=precision)
    try:
        return blue_variance_curve(cov, precision=precision), None
    except NearSingularError as err:
        if err.order <= 2:
            raise
        cov = covariance_sequence(measure, err.order - 1, precision=precision)
        kind = "extended" if precision == "dd" else "double"
        return (blue_variance_curve(cov, precision=precision),
                f"grid truncated at order {err.order - 1}: factorization breakdown "
                f"in {kind} precision")


def _needs_extended(curve) -> bool:
    if curve[-1] < EXTENDED_PRECISION_THRESHOLD:
        return True
    if len(curve) > 2 and curve[-2] > 0:
        predicted = curve[-1] * (curve[-1] / curve[-2])
        if predicted < EXTENDED_PRECISION_THRESHOLD:
            return True
    return False
