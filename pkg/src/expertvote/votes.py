"""Expert votes on one-sided and two-sided hypotheses.

Decision ``d = 1`` stands for the lower hypothesis Theta_1 = (-inf, theta_1]
and ``d = 0`` for Theta_0 = (theta_1, inf). At a realization ``x`` the
threshold experts deciding ``d = 1`` under P_theta carry weight
1 - F(theta, x); the neutral vote takes theta at the boundary, so its two
components are the one-sided p-values. Neutral votes on all one-sided
splits extend to the inductive distribution with CDF theta -> 1 - F(theta, x)
whenever the limit conditions of :func:`expertvote.models.boundary_limits`
hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import _kernels
from .errors import CompatibilityError, DomainError
from .models import MlrFamily, NoncentralChi2One, boundary_limits
from .specfun import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class VoteResult:
    """A probability on the two decisions; ``q1`` favours Theta_1, ``q0`` Theta_0."""

    q1: float
    q0: float

    @classmethod
    def from_q1(cls, q1: float) -> "VoteResult":
        return cls(q1=q1, q0=1.0 - q1)

    @classmethod
    def from_q0(cls, q0: float) -> "VoteResult":
        return cls(q1=1.0 - q0, q0=q0)

    @property
    def alpha(self) -> float:
        """p-value of H0: theta in Theta_0 (equals ``q0``)."""
        return self.q0

    @property
    def alpha_prime(self) -> float:
        """p-value of H0': theta in Theta_1 (equals ``q1``)."""
        return self.q1


@dataclass(frozen=True)
class OneSidedSplit:
    """Theta_1 = (-inf, boundary] and Theta_0 = (boundary, inf), both cut to the family's Theta."""

    family: MlrFamily
    boundary: float

    def __post_init__(self):
        dom = self.family.theta_domain
        b = self.boundary
        if math.isnan(b):
            raise DomainError("boundary must not be NaN")
        # Theta_1 nonempty needs some theta <= b in Theta; Theta_0 some theta > b.
        lower_ok = b > dom.lower or (dom.lower_closed and b == dom.lower)
        upper_ok = b < dom.upper
        if not (lower_ok and upper_ok):
            raise DomainError(
                f"boundary {b} leaves one side of the split empty in {dom}"
            )


@dataclass(frozen=True)
class BilateralSplit:
    """Theta_0 = [theta1, theta2] against Theta_1 = its complement."""

    family: MlrFamily
    theta1: float
    theta2: float

    def __post_init__(self):
        if not self.theta1 <= self.theta2:
            raise DomainError(f"need theta1 <= theta2, got {self.theta1} > {self.theta2}")
        self.family.check_theta(self.theta1)
        self.family.check_theta(self.theta2)


def vote_at(family: MlrFamily, theta: float, boundary: float, x: float) -> VoteResult:
    """Vote of the threshold experts under P_theta: q1 = 1 - F(theta, x).

    ``boundary`` only labels the split; the weight does not depend on it.
    """
    OneSidedSplit(family, boundary)
    return VoteResult.from_q0(family.cdf(theta, x))


def neutral_vote(split: OneSidedSplit, x: float) -> VoteResult:
    """Vote at the boundary: q0 = F(theta_1, x) and q1 = 1 - F(theta_1, x).

    q0 is the p-value of the test of Theta_0 against Theta_1, q1 that of the
    reverse test.
    """
    return VoteResult.from_q0(split.family.cdf(split.boundary, x))


def coherence_check(family: MlrFamily, x: float, boundaries: Sequence[float],
                    abs_tol: float = 1e-12) -> bool:
    """True when the neutral q0 = F(theta, x) does not increase along ``boundaries``."""
    values = [family.cdf(b, x) for b in sorted(boundaries)]
    return all(later <= earlier + abs_tol for earlier, later in zip(values, values[1:]))


class InductiveDistribution:
    """Probability Q^x on the parameter interval with CDF theta -> 1 - F(theta, x).

    Closed ends of the parameter interval carry atoms: 1 - F(inf Theta, x)
    at a closed lower end and F(sup Theta, x) at a closed upper end.
    Construction fails with :class:`CompatibilityError` when an open end
    violates its limit condition.
    """

    def __init__(self, family: MlrFamily, x: float, abs_tol: float = 1e-10,
                 upper_probes=None, lower_probes=None):
        report = boundary_limits(family, x, upper_probes, lower_probes, abs_tol)
        if not report.upper_ok:
            raise CompatibilityError(
                f"F(theta, x={x}) does not tend to 0 at sup Theta "
                f"(last value {report.upper_value!r})", "upper")
        if not report.lower_ok:
            raise CompatibilityError(
                f"F(theta, x={x}) does not tend to 1 at inf Theta "
                f"(last value {report.lower_value!r})", "lower")
        self.family = family
        self.x = x
        self.domain = family.theta_domain

    def cdf_at(self, theta: float) -> float:
        """Q^x((-inf, theta])."""
        if theta >= self.domain.upper:
            return 1.0
        return 1.0 - self._survival(theta)

    def _survival(self, theta):
        # Q^x((theta, inf))
        dom = self.domain
        if theta >= dom.upper:
            return 0.0
        if theta < dom.lower or (theta == dom.lower and not dom.lower_closed):
            return 1.0
        return self.family._cdf(theta, self.x)

    def _survival_from(self, theta):
        # Q^x([theta, inf))
        dom = self.domain
        if theta <= dom.lower:
            return 1.0
        if theta > dom.upper or (theta == dom.upper and not dom.upper_closed):
            return 0.0
        return self.family._cdf(theta, self.x)

    def atom(self, theta: float) -> float:
        """Q^x({theta}); nonzero only at closed ends of the parameter interval."""
        dom = self.domain
        if dom.lower_closed and theta == dom.lower:
            return 1.0 - self.family._cdf(theta, self.x)
        if dom.upper_closed and theta == dom.upper:
            return self.family._cdf(theta, self.x)
        return 0.0

    def prob(self, a: float, b: float) -> float:
        """Q^x([a, b]); for interior a < b this is F(a, x) - F(b, x)."""
        if a > b:
            return 0.0
        if a == b:
            return self.atom(a)
        return self._survival_from(a) - self._survival(b)

    def __repr__(self):
        return f"InductiveDistribution({self.family!r}, x={self.x!r})"


def inductive_distribution(family: MlrFamily, x: float,
                           abs_tol: float = 1e-10) -> InductiveDistribution:
    return InductiveDistribution(family, x, abs_tol)


def bilateral_vote_compatible(split: BilateralSplit, x: float) -> VoteResult:
    """q0 = Q^x([theta1, theta2]); for interior bounds F(theta1, x) - F(theta2, x)."""
    dist = InductiveDistribution(split.family, x)
    return VoteResult.from_q0(dist.prob(split.theta1, split.theta2))


def bilateral_vote_symmetric_normal(c: float, lambda1: float, x: float,
                                    sigma: float = 1.0) -> VoteResult:
    """Vote on Theta_0 = [c - lambda1, c + lambda1] for N(theta, sigma^2) after symmetrization.

    With z = |x - c| / sigma and l = lambda1 / sigma,
    q1 = Phi(z - l) - Phi(-z - l) and q0 is the p-value of the unbiased test
    of Theta_0.
    """
    if not lambda1 >= 0:
        raise DomainError(f"lambda1 must be >= 0, got {lambda1}")
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    for name, v in (("c", c), ("x", x), ("lambda1", lambda1)):
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v}")
    z = abs(x - c) / sigma
    lam = lambda1 / sigma
    # both tails directly, so small p-values keep their digits
    q0 = _kernels.normal_cdf(lam - z) + _kernels.normal_cdf(-z - lam)
    return VoteResult.from_q0(q0)


def symmetric_vote_via_chi2(c: float, lambda1: float, x: float,
                            tol: Tolerance = DEFAULT_TOL) -> VoteResult:
    """Same vote as :func:`bilateral_vote_symmetric_normal` (sigma = 1), from W = (x - c)^2.

    q1 is the noncentral chi-square (one degree of freedom, noncentrality
    lambda1^2) CDF at W.
    """
    if not lambda1 >= 0:
        raise DomainError(f"lambda1 must be >= 0, got {lambda1}")
    family = NoncentralChi2One(tol)
    return VoteResult.from_q1(family.cdf(lambda1, (x - c) ** 2))
