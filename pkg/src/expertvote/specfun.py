"""Special functions, mixture weights and quadrature.

Every CDF used by the package bottoms out here. Scalar evaluation is
delegated to the kernel backend (compiled when available); this module
owns argument validation, tolerances and the error types.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from . import _kernels
from .errors import DomainError, QuadratureError, TruncationError


@dataclass(frozen=True)
class Tolerance:
    """Accuracy targets.

    ``abs_tol`` is the absolute error target of scalar evaluations and
    quadrature; ``series_tail`` the mixing mass allowed to be dropped from a
    Poisson or negative-binomial series; ``max_terms`` caps the number of
    series terms.
    """

    abs_tol: float = 1e-10
    series_tail: float = 1e-13
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.series_tail > 0:
            raise DomainError(f"series_tail must be positive, got {self.series_tail}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_TOL = Tolerance()
QUAD_TOL = Tolerance(abs_tol=1e-8)


@dataclass(frozen=True)
class WeightedTerms:
    """Contiguous block of mixing weights ``weights[i]`` for index ``start_index + i``."""

    start_index: int
    weights: tuple[float, ...]

    @property
    def indices(self) -> range:
        return range(self.start_index, self.start_index + len(self.weights))

    @property
    def mass(self) -> float:
        return math.fsum(self.weights)

    def items(self):
        return zip(self.indices, self.weights)


def _finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")


def _not_nan(name, value):
    if math.isnan(value):
        raise DomainError(f"{name} must not be NaN")


def normal_cdf(z: float) -> float:
    """Standard normal CDF."""
    _finite("z", z)
    return _kernels.normal_cdf(z)


def normal_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def reg_lower_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma function P(a, x).

    Series expansion below ``x = a + 1``, continued fraction above.
    """
    _not_nan("x", x)
    if not a > 0 or not math.isfinite(a):
        raise DomainError(f"shape a must be positive and finite, got {a}")
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    return _kernels.reg_lower_gamma(a, x)


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if not (a > 0 and b > 0) or not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"a and b must be positive and finite, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    return _kernels.reg_inc_beta(a, b, x)


def beta_prime_cdf(a: float, b: float, y: float) -> float:
    """CDF of the beta distribution of the second kind on (0, inf) at ``y``.

    Equals I_{y/(1+y)}(a, b); the complement ``1/(1+y)`` is passed to the
    kernel directly so that large ``y`` keeps full precision.
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"a and b must be positive, got a={a}, b={b}")
    _not_nan("y", y)
    if y < 0:
        raise DomainError(f"y must be >= 0, got {y}")
    if math.isinf(y):
        return 1.0
    return _kernels.inc_beta_xy(a, b, y / (1.0 + y), 1.0 / (1.0 + y))


def student_cdf(nu: float, t: float) -> float:
    """CDF of Student's t with ``nu`` degrees of freedom (via I_x(nu/2, 1/2))."""
    _not_nan("t", t)
    if not nu > 0 or not math.isfinite(nu):
        raise DomainError(f"degrees of freedom must be positive, got {nu}")
    return _kernels.student_cdf(nu, t)


def _walk_weights(mode, w_mode, up, down, tol, what, ratio_cap=None):
    # up(m, w) -> weight at m+1; down(m, w) -> weight at m-1 (m > 0).
    # Stops when the mass reaches 1 - series_tail or when the unvisited mass
    # is provably below series_tail: weights are unimodal, so the lo weights
    # below are each at most w_lo, and above the mode successive ratios never
    # exceed the current one (or ``ratio_cap`` when ratios increase).
    lo = hi = mode
    w_lo = w_hi = w_mode
    left, right = [], [w_mode]
    mass = w_mode
    target = 1.0 - tol.series_tail
    while mass < target:
        w_down = down(lo, w_lo) if lo > 0 else -1.0
        w_up = up(hi, w_hi)
        rho = w_up / w_hi if ratio_cap is None else ratio_cap
        if rho < 1.0 and lo * w_lo + w_hi * rho / (1.0 - rho) <= tol.series_tail:
            break
        if len(left) + len(right) >= tol.max_terms:
            raise TruncationError(
                f"{what}: mass {mass!r} short of {target!r} after {tol.max_terms} terms"
            )
        if w_down >= w_up:
            lo -= 1
            w_lo = w_down
            left.append(w_down)
            mass += w_down
        else:
            hi += 1
            w_hi = w_up
            right.append(w_up)
            mass += w_up
    return WeightedTerms(lo, tuple(reversed(left)) + tuple(right))


def poisson_weights(lam: float, tol: Tolerance = DEFAULT_TOL) -> WeightedTerms:
    """Poisson(lam) probabilities covering at least ``1 - tol.series_tail`` of the mass.

    The block starts at the mode ``floor(lam)`` and grows toward whichever
    neighbour carries more mass, so large ``lam`` does not require summing
    the negligible low-order terms.
    """
    _finite("lambda", lam)
    if lam < 0:
        raise DomainError(f"Poisson mean must be >= 0, got {lam}")
    if lam == 0:
        return WeightedTerms(0, (1.0,))
    m0, w0 = _kernels.poisson_mode_weight(lam)
    return _walk_weights(
        int(m0), w0,
        lambda m, w: w * lam / (m + 1.0),
        lambda m, w: w * m / lam,
        tol, "poisson_weights",
    )


def negative_binomial_weights(q: float, s: float,
                              tol: Tolerance = DEFAULT_TOL) -> WeightedTerms:
    """Weights Gamma(q+m)/(m! Gamma(q)) (1-s)^q s^m, m >= 0, for 0 <= s < 1."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    if not 0.0 <= s < 1.0:
        raise DomainError(f"s must lie in [0, 1), got {s}")
    if s == 0.0:
        return WeightedTerms(0, (1.0,))
    m0 = math.floor((q - 1.0) * s / (1.0 - s)) if q > 1.0 else 0
    w0 = _kernels.nbinom_pmf(m0, q, s)
    return _walk_weights(
        int(m0), w0,
        lambda m, w: w * (q + m) / (m + 1.0) * s,
        lambda m, w: w * m / ((q + m - 1.0) * s),
        tol, "negative_binomial_weights", ratio_cap=s if q < 1.0 else None,
    )


def _series_value(value, what, tol):
    if math.isnan(value):
        raise TruncationError(
            f"{what}: mixing mass not reached within {tol.max_terms} terms"
        )
    return value


def noncentral_beta_prime_cdf(p: float, q: float, theta: float, y: float,
                              tol: Tolerance = DEFAULT_TOL) -> float:
    """sum_m Poisson(theta)_m * I_{y/(1+y)}(p + m, q)."""
    return _series_value(
        _kernels.ncbeta_cdf(p, q, theta, y, tol.series_tail, tol.max_terms),
        "noncentral beta", tol,
    )


def noncentral_chi2_one_cdf(lam: float, w: float,
                            tol: Tolerance = DEFAULT_TOL) -> float:
    """Noncentral chi-square CDF, one degree of freedom, noncentrality lam^2.

    Computed as the Poisson(lam^2/2) mixture of central chi-square CDFs
    P(1/2 + m, w/2).
    """
    return _series_value(
        _kernels.chi2_one_series(lam, w, tol.series_tail, tol.max_terms),
        "noncentral chi-square", tol,
    )


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

_EPMACH = 2.220446049250313e-16


def _gk15(g, lo, hi):
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fc = g(center)
    res_k = fc * _WGK[7]
    res_g = fc * _WG[3]
    res_abs = abs(res_k)
    for j in range(7):
        dx = half * _XGK[j]
        f1 = g(center - dx)
        f2 = g(center + dx)
        res_k += _WGK[j] * (f1 + f2)
        res_abs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f1 + f2)
    integral = res_k * half
    err = abs((res_k - res_g) * half)
    return integral, max(err, 50.0 * _EPMACH * res_abs * abs(half))


def _compactify(f, a, b):
    """Map an integral over (a, b) with infinite ends to one over a finite range."""
    if math.isfinite(a) and math.isfinite(b):
        return f, a, b

    def guard(x, jac):
        if not math.isfinite(x) or jac == 0.0:
            return 0.0
        v = f(x)
        return v * jac if v != 0.0 else 0.0

    if math.isfinite(a):
        def g(t):
            s = 1.0 - t
            return guard(a + t / s, 1.0 / (s * s))
        return g, 0.0, 1.0
    if math.isfinite(b):
        def g(t):
            s = 1.0 - t
            return guard(b - t / s, 1.0 / (s * s))
        return g, 0.0, 1.0

    def g(t):
        s = 1.0 - t * t
        return guard(t / s, (1.0 + t * t) / (s * s))
    return g, -1.0, 1.0


def quadrature(f: Callable[[float], float], a: float, b: float,
               tol: Tolerance = QUAD_TOL, max_intervals: int = 2000) -> float:
    """Globally adaptive Gauss-Kronrod (7/15) integral of ``f`` over (a, b).

    Infinite endpoints are mapped to a finite range with x = t/(1-t) type
    substitutions; the integrand is never evaluated at the mapped endpoints.
    Raises :class:`QuadratureError` when the summed error estimate cannot be
    brought under ``tol.abs_tol`` with ``max_intervals`` subintervals.
    """
    _not_nan("a", a)
    _not_nan("b", b)
    if a == b:
        return 0.0
    if a > b:
        return -quadrature(f, b, a, tol, max_intervals)
    g, lo, hi = _compactify(f, a, b)

    def checked(t):
        v = g(t)
        if not math.isfinite(v):
            raise QuadratureError(f"integrand not finite near t={t}")
        return v

    n0 = 2 if (math.isinf(a) and math.isinf(b)) else 1
    heap = []
    total = 0.0
    err_total = 0.0
    edges = [lo + (hi - lo) * k / n0 for k in range(n0 + 1)]
    for left, right in zip(edges, edges[1:]):
        val, err = _gk15(checked, left, right)
        total += val
        err_total += err
        heapq.heappush(heap, (-err, left, right, val))
    while err_total > tol.abs_tol:
        if len(heap) >= max_intervals:
            raise QuadratureError(
                f"error estimate {err_total:.3g} above {tol.abs_tol:.3g} "
                f"after {max_intervals} subintervals"
            )
        neg_err, left, right, val = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        if not left < mid < right:
            raise QuadratureError("subinterval below floating-point resolution")
        v1, e1 = _gk15(checked, left, mid)
        v2, e2 = _gk15(checked, mid, right)
        total += v1 + v2 - val
        err_total += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, left, mid, v1))
        heapq.heappush(heap, (-e2, mid, right, v2))
    # re-sum to shed the drift of incremental updates
    return math.fsum(item[3] for item in heap)
