"""Votes in models with a nuisance ("ghost") parameter.

Two independent statistics drive these models: T carries the parameter of
interest and U only the nuisance scale upsilon. Neutral votes on upsilon built
from U extend to an inverse-gamma inductive distribution, and the conditional
votes on theta are averaged against it.

* Normal sample, unknown variance: the average is a Student CDF.
* Noncentral gamma pair (fixed-effects ANOVA with p = k/2, q = l/2): the
  average is a negative-binomial mixture of beta-prime CDFs with an atom at
  theta = 0 equal to the F-test p-value.

Each closed form has a quadrature counterpart that integrates the
conditional votes numerically; the two share no code beyond the scalar
special functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .errors import DegenerateSampleError, DomainError, TruncationError
from .specfun import (
    QUAD_TOL,
    Tolerance,
    negative_binomial_weights,
    normal_cdf,
    poisson_weights,
    quadrature,
    reg_lower_gamma,
    student_cdf,
)

SERIES_TOL = Tolerance(abs_tol=1e-10, series_tail=1e-12, max_terms=200_000)


@dataclass(frozen=True)
class GhostSample:
    """Realizations t of T and u > 0 of U."""

    t: float
    u: float

    def __post_init__(self):
        if not self.u > 0 or not math.isfinite(self.u):
            raise DomainError(f"u must be positive and finite, got {self.u}")
        if not math.isfinite(self.t):
            raise DomainError(f"t must be finite, got {self.t}")


@dataclass(frozen=True)
class NormalSummary:
    """Sample size, mean and unbiased variance S^2 = sum (X_i - mean)^2 / (n - 1)."""

    n: int
    mean: float
    s2: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"need n >= 2, got {self.n}")
        if not self.s2 > 0:
            raise DegenerateSampleError(f"s2 must be positive, got {self.s2}")

    @property
    def shape(self) -> float:
        """(n - 1) / 2, the gamma shape of U = (n - 1) S^2."""
        return 0.5 * (self.n - 1)

    def ghost(self) -> GhostSample:
        return GhostSample(self.mean, (self.n - 1) * self.s2)


@dataclass(frozen=True)
class GammaPairModel:
    """T ~ gamma(p, upsilon) noncentral by theta/upsilon, U ~ gamma(q, upsilon)."""

    p: float
    q: float

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise DomainError(f"p and q must be positive, got p={self.p}, q={self.q}")

    @classmethod
    def from_degrees(cls, k: float, l: float) -> "GammaPairModel":
        """ANOVA numerator and denominator degrees of freedom: p = k/2, q = l/2."""
        return cls(0.5 * k, 0.5 * l)


CONVENTIONS = ("half-sum", "gamma-rate")


@dataclass(frozen=True)
class InverseGamma:
    """Law of upsilon with 1/upsilon ~ gamma(shape, 1/scale): density s^a/Gamma(a) v^(-a-1) e^(-s/v)."""

    shape: float
    scale: float
    convention: str = "gamma-rate"

    def pdf(self, v: float) -> float:
        if v <= 0:
            return 0.0
        a, s = self.shape, self.scale
        log_pdf = a * math.log(s) - math.lgamma(a) - (a + 1.0) * math.log(v) - s / v
        return math.exp(log_pdf)

    def cdf(self, v: float) -> float:
        if v <= 0:
            return 0.0
        if math.isinf(v):
            return 1.0
        return 1.0 - reg_lower_gamma(self.shape, self.scale / v)

    def mode(self) -> float:
        return self.scale / (self.shape + 1.0)


def inverse_gamma_mixing(shape: float, u: float,
                         convention: str = "half-sum") -> InverseGamma:
    """Inductive distribution of the scale upsilon given U = u.

    ``"half-sum"``: U ~ gamma(shape, 2 upsilon) (the (n-1) S^2 case), so
    1/upsilon ~ gamma(shape, 2/u). ``"gamma-rate"``: U ~ gamma(shape, upsilon),
    so 1/upsilon ~ gamma(shape, 1/u).
    """
    if not (shape > 0 and u > 0):
        raise DomainError(f"shape and u must be positive, got {shape}, {u}")
    if convention == "half-sum":
        return InverseGamma(shape, 0.5 * u, convention)
    if convention == "gamma-rate":
        return InverseGamma(shape, u, convention)
    raise DomainError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def student_vote(summary: NormalSummary, theta: float) -> float:
    """Q((-inf, theta]) = Student_{n-1} CDF at sqrt(n) (theta - mean) / sqrt(s2)."""
    z = math.sqrt(summary.n) * (theta - summary.mean) / math.sqrt(summary.s2)
    return student_cdf(summary.n - 1, z)


def student_vote_quadrature(summary: NormalSummary, theta: float,
                            tol: Tolerance = QUAD_TOL) -> float:
    """Average of Phi(sqrt(n) (theta - t) sqrt(lam)) over lam ~ gamma(p, 2/u).

    lam = 1/upsilon is the precision; p = (n-1)/2 and u = (n-1) s2.
    """
    p = summary.shape
    u = (summary.n - 1) * summary.s2
    rate = 0.5 * u
    slope = math.sqrt(summary.n) * (theta - summary.mean)
    log_norm = p * math.log(rate) - math.lgamma(p)

    def integrand(lam):
        if lam <= 0.0:
            return 0.0
        dens = math.exp(log_norm + (p - 1.0) * math.log(lam) - rate * lam)
        if dens == 0.0:
            return 0.0
        return normal_cdf(slope * math.sqrt(lam)) * dens

    # split at the mixing mode so the peak is resolved on the first pass
    mid = max(p - 1.0, 0.5) / rate
    return (quadrature(integrand, 0.0, mid, tol)
            + quadrature(integrand, mid, math.inf, tol))


def anova_point_mass(model: GammaPairModel, sample: GhostSample) -> float:
    """Q({0}) = 1 - I_{t/(t+u)}(p, q): the F-test p-value at (t/k)/(u/l)."""
    if sample.t < 0:
        raise DomainError(f"t must be >= 0, got {sample.t}")
    t, u = sample.t, sample.u
    return 1.0 - _kernels.inc_beta_xy(model.p, model.q, t / (t + u), u / (t + u))


def anova_vote_series(model: GammaPairModel, sample: GhostSample, theta: float,
                      tol: Tolerance = SERIES_TOL) -> float:
    """Q([0, theta]) as a negative-binomial mixture of beta-prime CDFs.

        1 - sum_m Gamma(q+m)/(m! Gamma(q)) theta^m u^q / (theta+u)^(q+m)
              * F_{beta'(p+m, q+m)}(t / (theta + u))

    Terms are added until the mixing weights reach 1 - ``tol.series_tail``;
    each beta-prime CDF is at most one, so the dropped tail is bounded by the
    same amount.
    """
    if sample.t < 0:
        raise DomainError(f"t must be >= 0, got {sample.t}")
    if not theta >= 0 or math.isinf(theta):
        raise DomainError(f"theta must be finite and >= 0, got {theta}")
    value = _kernels.anova_series(model.p, model.q, sample.t, sample.u, theta,
                                  tol.series_tail, tol.max_terms)
    if math.isnan(value):
        raise TruncationError(
            f"negative-binomial weights short of 1 - {tol.series_tail} "
            f"after {tol.max_terms} terms (theta={theta})"
        )
    return value


def anova_series_weights(model: GammaPairModel, sample: GhostSample, theta: float,
                         tol: Tolerance = SERIES_TOL):
    """The mixing weights of :func:`anova_vote_series` (success probability u/(theta+u))."""
    return negative_binomial_weights(model.q, theta / (theta + sample.u), tol)


def _noncentral_gamma_cdf(p, theta, upsilon, t, tol):
    # F_upsilon(theta, t): Poisson(theta/upsilon) mixture of P(p + m, t/upsilon)
    x = t / upsilon
    terms = poisson_weights(theta / upsilon, tol)
    return math.fsum(w * reg_lower_gamma(p + m, x) for m, w in terms.items())


def anova_vote_quadrature(model: GammaPairModel, sample: GhostSample, theta: float,
                          tol: Tolerance = QUAD_TOL) -> float:
    """1 - integral of F_upsilon(theta, t) against the inverse-gamma(q, u) density.

    Independent of the series route: the inner CDF is a Poisson mixture of
    incomplete gamma functions rather than incomplete beta functions.
    """
    if sample.t < 0:
        raise DomainError(f"t must be >= 0, got {sample.t}")
    mixing = inverse_gamma_mixing(model.q, sample.u, "gamma-rate")
    inner_tol = Tolerance(abs_tol=tol.abs_tol, series_tail=1e-12, max_terms=100_000)

    def integrand(v):
        dens = mixing.pdf(v)
        if dens == 0.0:
            return 0.0
        return dens * _noncentral_gamma_cdf(model.p, theta, v, sample.t, inner_tol)

    mode = mixing.mode()
    total = (quadrature(integrand, 0.0, mode, tol)
             + quadrature(integrand, mode, math.inf, tol))
    return 1.0 - total


class AnovaInductiveDistribution:
    """Q^(t,u) on theta >= 0: an atom at 0 plus a continuous part."""

    def __init__(self, model: GammaPairModel, sample: GhostSample,
                 tol: Tolerance = SERIES_TOL):
        if sample.t < 0:
            raise DomainError(f"t must be >= 0, got {sample.t}")
        self.model = model
        self.sample = sample
        self.tol = tol
        self.point_mass = anova_point_mass(model, sample)

    def cdf_at(self, theta: float) -> float:
        """Q([0, theta])."""
        if theta < 0:
            return 0.0
        if math.isinf(theta):
            return 1.0
        return anova_vote_series(self.model, self.sample, theta, self.tol)

    def atom(self, theta: float) -> float:
        return self.point_mass if theta == 0 else 0.0

    def prob(self, a: float, b: float) -> float:
        """Q([a, b])."""
        if a > b or b < 0:
            return 0.0
        upper = self.cdf_at(b)
        if a <= 0:
            return upper
        return upper - self.cdf_at(a)


def anova_inductive_distribution(model: GammaPairModel, sample: GhostSample,
                                 tol: Tolerance = SERIES_TOL) -> AnovaInductiveDistribution:
    return AnovaInductiveDistribution(model, sample, tol)

