"""Strictly MLR families of positive densities on a real interval.

A family couples a parameter interval, a sample interval, a CDF
``F(theta, x)`` nonincreasing in theta, and a log-density. The catalog holds
the four families the package works with; :class:`MlrFamily` itself wraps
arbitrary callables so that test fixtures and restricted parameter ranges can
be built without subclassing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from . import _kernels
from .errors import DomainError, NumericError, ParameterError, SampleError
from .specfun import (
    DEFAULT_TOL,
    Tolerance,
    noncentral_beta_prime_cdf,
    noncentral_chi2_one_cdf,
    poisson_weights,
)

INF = math.inf
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ParamInterval:
    """Interval of the real line; infinite endpoints are always open."""

    lower: float
    upper: float
    lower_closed: bool = False
    upper_closed: bool = False

    def __post_init__(self):
        if math.isnan(self.lower) or math.isnan(self.upper):
            raise DomainError("interval endpoints must not be NaN")
        if not self.lower < self.upper:
            raise DomainError(f"need lower < upper, got [{self.lower}, {self.upper}]")
        if math.isinf(self.lower) and self.lower_closed:
            raise DomainError("an infinite endpoint cannot be closed")
        if math.isinf(self.upper) and self.upper_closed:
            raise DomainError("an infinite endpoint cannot be closed")

    @classmethod
    def real_line(cls) -> "ParamInterval":
        return cls(-INF, INF)

    @classmethod
    def positive(cls, include_zero: bool = False) -> "ParamInterval":
        return cls(0.0, INF, lower_closed=include_zero)

    def __contains__(self, v: float) -> bool:
        if math.isnan(v):
            return False
        above = v > self.lower or (self.lower_closed and v == self.lower)
        below = v < self.upper or (self.upper_closed and v == self.upper)
        return above and below

    def in_closure(self, v: float) -> bool:
        return self.lower <= v <= self.upper

    def __str__(self):
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        return f"{left}{self.lower:g},{self.upper:g}{right}"


class MlrFamily:
    """A parametric model claimed to have strictly monotone likelihood ratio.

    ``cdf(theta, x)`` and ``log_density(theta, x)`` are validated entry
    points; subclasses implement ``_cdf`` and ``_log_density``, which skip the
    checks and accept ``x`` anywhere in the closure of the support
    (including infinite ends for ``_cdf``).
    """

    family_tag = "custom"

    def __init__(self, cdf: Callable[[float, float], float],
                 log_density: Callable[[float, float], float],
                 theta_domain: ParamInterval, support: ParamInterval,
                 family_tag: str = "custom", params: dict | None = None):
        self._cdf_fn = cdf
        self._logpdf_fn = log_density
        self.theta_domain = theta_domain
        self.support = support
        self.family_tag = family_tag
        self.params = dict(params or {})

    def _cdf(self, theta, x):
        return self._cdf_fn(theta, x)

    def _log_density(self, theta, x):
        return self._logpdf_fn(theta, x)

    def check_theta(self, theta):
        if theta not in self.theta_domain:
            raise ParameterError(
                f"theta={theta} outside parameter interval {self.theta_domain}"
            )

    def check_x(self, x):
        if math.isnan(x) or not self.support.in_closure(x):
            raise SampleError(f"x={x} outside sample interval {self.support}")

    def cdf(self, theta: float, x: float) -> float:
        """F(theta, x) = P_theta(X <= x)."""
        self.check_theta(theta)
        self.check_x(x)
        return self._cdf(theta, x)

    def log_density(self, theta: float, x: float) -> float:
        self.check_theta(theta)
        self.check_x(x)
        return self._log_density(theta, x)

    def restrict(self, theta_domain: ParamInterval) -> "MlrFamily":
        """Same model with a smaller parameter interval."""
        return MlrFamily(self._cdf, self._log_density, theta_domain, self.support,
                         family_tag=self.family_tag, params=self.params)

    def describe(self) -> dict:
        return {"family": self.family_tag, **self.params}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"


class NormalLocation(MlrFamily):
    """N(theta, sigma^2), theta real: F(theta, x) = Phi((x - theta) / sigma)."""

    def __init__(self, sigma: float = 1.0):
        if not sigma > 0:
            raise ParameterError(f"sigma must be positive, got {sigma}")
        self.sigma = float(sigma)
        self.theta_domain = ParamInterval.real_line()
        self.support = ParamInterval.real_line()
        self.family_tag = "normal"
        self.params = {"sigma": self.sigma}

    def _cdf(self, theta, x):
        return _kernels.normal_cdf((x - theta) / self.sigma)

    def _log_density(self, theta, x):
        z = (x - theta) / self.sigma
        return -0.5 * z * z - LOG_SQRT_2PI - math.log(self.sigma)


class GammaScale(MlrFamily):
    """U ~ gamma(shape, scale_multiplier * upsilon), upsilon > 0.

    F(upsilon, u) = P(shape, u / (scale_multiplier * upsilon)). With
    ``shape = (n-1)/2`` and ``scale_multiplier = 2`` this is the law of
    (n-1) S^2 for a normal sample of variance upsilon.
    """

    def __init__(self, shape: float, scale_multiplier: float = 1.0):
        if not (shape > 0 and scale_multiplier > 0):
            raise ParameterError(
                f"shape and scale_multiplier must be positive, got {shape}, {scale_multiplier}"
            )
        self.shape = float(shape)
        self.scale_multiplier = float(scale_multiplier)
        self.theta_domain = ParamInterval.positive()
        self.support = ParamInterval.positive()
        self.family_tag = "gamma-scale"
        self.params = {"shape": self.shape, "scale_multiplier": self.scale_multiplier}

    def _cdf(self, theta, x):
        return _kernels.reg_lower_gamma(self.shape, x / (self.scale_multiplier * theta))

    def _log_density(self, theta, x):
        scale = self.scale_multiplier * theta
        a = self.shape
        return (-math.lgamma(a) - a * math.log(scale)
                + (a - 1.0) * math.log(x) - x / scale)


def _logsumexp(values):
    top = max(values)
    if top == -INF:
        return -INF
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


class NoncentralBeta(MlrFamily):
    """Noncentral beta of the second kind on (0, inf), noncentrality theta >= 0.

    The law of (k/l) W for a noncentral F statistic W with (k, l) degrees of
    freedom and noncentrality lambda has p = k/2, q = l/2 and
    theta = lambda^2 / 2:

        F(theta, x) = sum_m Poisson(theta)_m * I_{x/(1+x)}(p + m, q).
    """

    def __init__(self, p: float, q: float, tol: Tolerance = DEFAULT_TOL):
        if not (p > 0 and q > 0):
            raise ParameterError(f"p and q must be positive, got {p}, {q}")
        self.p = float(p)
        self.q = float(q)
        self.tol = tol
        self.theta_domain = ParamInterval.positive(include_zero=True)
        self.support = ParamInterval.positive()
        self.family_tag = "noncentral-beta"
        self.params = {"p": self.p, "q": self.q}

    def _cdf(self, theta, x):
        return noncentral_beta_prime_cdf(self.p, self.q, theta, x, self.tol)

    def _log_density(self, theta, x):
        p, q = self.p, self.q
        terms = []
        for m, w in poisson_weights(theta, self.tol).items():
            a = p + m
            terms.append(math.log(w) + math.lgamma(a + q) - math.lgamma(a)
                         - math.lgamma(q) + (a - 1.0) * math.log(x)
                         - (a + q) * math.log1p(x))
        return _logsumexp(terms)


class NoncentralChi2One(MlrFamily):
    """W = Z^2 with Z ~ N(lambda, 1), lambda >= 0.

    CDF(w) = Phi(sqrt(w) - lambda) - Phi(-sqrt(w) - lambda); evaluated here
    through the Poisson(lambda^2/2) mixture of central chi-square CDFs.
    """

    def __init__(self, tol: Tolerance = DEFAULT_TOL):
        self.tol = tol
        self.theta_domain = ParamInterval.positive(include_zero=True)
        self.support = ParamInterval.positive()
        self.family_tag = "chi2-1"
        self.params = {}

    def _cdf(self, theta, x):
        return noncentral_chi2_one_cdf(theta, x, self.tol)

    def _log_density(self, theta, x):
        r = math.sqrt(x)
        a = -0.5 * (r - theta) ** 2
        b = -0.5 * (r + theta) ** 2
        return _logsumexp([a, b]) - LOG_SQRT_2PI - math.log(2.0 * r)


def cdf(family: MlrFamily, theta: float, x: float) -> float:
    return family.cdf(theta, x)


@dataclass(frozen=True)
class MlrReport:
    """Outcome of :func:`mlr_verify`; ``violation`` is (theta', theta'', x_i, x_j)."""

    ok: bool
    violation: tuple | None = None
    drop: float = 0.0

    def __bool__(self):
        return self.ok


def mlr_verify(family: MlrFamily, theta_grid: Sequence[float],
               x_grid: Sequence[float], abs_tol: float = 1e-10) -> MlrReport:
    """Check that log p_theta'' - log p_theta' increases along ``x_grid``.

    Every pair theta' < theta'' of ``theta_grid`` is tested on consecutive
    grid points; a decrease larger than ``abs_tol`` is reported with its
    witness. Increments within ``abs_tol`` of zero count as rounding.
    """
    thetas = sorted(theta_grid)
    xs = sorted(x_grid)
    logp = {th: [family.log_density(th, x) for x in xs] for th in thetas}
    for i, t1 in enumerate(thetas):
        for t2 in thetas[i + 1:]:
            if t2 == t1:
                continue
            prev = None
            for j, x in enumerate(xs):
                diff = logp[t2][j] - logp[t1][j]
                if prev is not None and diff - prev < -abs_tol:
                    return MlrReport(False, (t1, t2, xs[j - 1], x), prev - diff)
                prev = diff
    return MlrReport(True)


def default_probes(domain: ParamInterval):
    """Sequences approaching the ends of ``domain`` that are not attained.

    Returns ``(upper_probes, lower_probes)``; a list is empty when the
    corresponding end belongs to the interval. Infinite ends are probed
    geometrically out to 1e40 so that slowly decaying CDFs (small gamma
    shapes) still reach their limit.
    """
    both_finite = math.isfinite(domain.lower) and math.isfinite(domain.upper)
    width = domain.upper - domain.lower if both_finite else 1.0
    upper, lower = [], []
    if not domain.upper_closed:
        if math.isinf(domain.upper):
            start = max(domain.lower, 0.0)
            upper = [start + 10.0 ** k for k in range(0, 41)]
        else:
            upper = [domain.upper - 10.0 ** -k * width for k in range(1, 16)]
    if not domain.lower_closed:
        if math.isinf(domain.lower):
            start = min(domain.upper, 0.0)
            lower = [start - 10.0 ** k for k in range(0, 41)]
        else:
            lower = [domain.lower + 10.0 ** -k * width for k in range(1, 16)]
    return upper, lower


@dataclass(frozen=True)
class LimitsReport:
    """Last evaluated F(theta, x) toward each open end of the parameter interval."""

    upper_ok: bool
    lower_ok: bool
    upper_value: float | None
    lower_value: float | None

    @property
    def ok(self) -> bool:
        return self.upper_ok and self.lower_ok

    @property
    def failed(self) -> list[str]:
        return [name for name, ok in (("upper", self.upper_ok), ("lower", self.lower_ok))
                if not ok]

    def __bool__(self):
        return self.ok


def _walk_probes(family, x, probes, reached):
    value = None
    for theta in probes:
        if theta not in family.theta_domain:
            continue
        try:
            value = family._cdf(theta, x)
        except NumericError:
            return False, value
        if reached(value):
            return True, value
    return False, value


def boundary_limits(family: MlrFamily, x: float,
                    upper_probes: Sequence[float] | None = None,
                    lower_probes: Sequence[float] | None = None,
                    abs_tol: float = 1e-10) -> LimitsReport:
    """Evaluate the two limit conditions for compatible neutral votes at ``x``.

    F(theta, x) must tend to 0 as theta approaches an open upper end and to 1
    as theta approaches an open lower end; ends that belong to the parameter
    interval impose nothing. Probes are visited in order and a condition
    holds once a probe gets within ``abs_tol`` of the limit (F is monotone in
    theta, so later probes stay there).
    """
    family.check_x(x)
    dom = family.theta_domain
    auto_up, auto_lo = default_probes(dom)
    up = auto_up if upper_probes is None else list(upper_probes)
    lo = auto_lo if lower_probes is None else list(lower_probes)
    upper_ok = lower_ok = True
    upper_value = lower_value = None
    if not dom.upper_closed:
        upper_ok, upper_value = _walk_probes(family, x, up, lambda v: v <= abs_tol)
    if not dom.lower_closed:
        lower_ok, lower_value = _walk_probes(family, x, lo, lambda v: v >= 1.0 - abs_tol)
    return LimitsReport(upper_ok, lower_ok, upper_value, lower_value)


def boundary_limits_check(family: MlrFamily, x: float,
                          upper_probes: Sequence[float] | None = None,
                          lower_probes: Sequence[float] | None = None,
                          abs_tol: float = 1e-10) -> bool:
    return boundary_limits(family, x, upper_probes, lower_probes, abs_tol).ok


def quantile(family: MlrFamily, theta: float, u: float,
             abs_tol: float = 1e-10, maxit: int = 400) -> float:
    """x with |F(theta, x) - u| <= abs_tol, by bisection on the monotone CDF."""
    family.check_theta(theta)
    if not 0.0 < u < 1.0:
        raise DomainError(f"u must lie in (0, 1), got {u}")
    F = family._cdf
    sup = family.support
    lo, hi = _bracket(F, theta, u, sup)
    for _ in range(maxit):
        mid = 0.5 * (lo + hi)
        f = F(theta, mid)
        if abs(f - u) <= abs_tol:
            return mid
        if not lo < mid < hi:
            break
        if f < u:
            lo = mid
        else:
            hi = mid
    raise NumericError(f"quantile of {family!r} at theta={theta}, u={u} did not converge")


def _bracket(F, theta, u, sup):
    lo, hi = sup.lower, sup.upper
    if math.isfinite(lo) and math.isfinite(hi):
        return lo, hi
    if math.isfinite(lo):
        # positive half-line: grow geometrically from 1
        step = 1.0
        while F(theta, lo + step) < u:
            lo, step = lo + step, step * 2.0
            if step > 1e300:
                raise NumericError("could not bracket the quantile")
        return lo, lo + step
    if math.isfinite(hi):
        step = 1.0
        while F(theta, hi - step) > u:
            hi, step = hi - step, step * 2.0
            if step > 1e300:
                raise NumericError("could not bracket the quantile")
        return hi - step, hi
    center = theta if math.isfinite(theta) else 0.0
    step = 1.0
    while F(theta, center - step) > u:
        step *= 2.0
        if step > 1e300:
            raise NumericError("could not bracket the quantile")
    lo = center - step
    step = 1.0
    while F(theta, center + step) < u:
        step *= 2.0
        if step > 1e300:
            raise NumericError("could not bracket the quantile")
    return lo, center + step
