import math

import pytest

from expertvote.errors import CompatibilityError, DomainError, ParameterError
from expertvote.models import GammaScale, NoncentralBeta, NormalLocation, ParamInterval
from expertvote.specfun import normal_cdf, reg_inc_beta, reg_lower_gamma
from expertvote.votes import (
    BilateralSplit,
    InductiveDistribution,
    OneSidedSplit,
    VoteResult,
    bilateral_vote_compatible,
    bilateral_vote_symmetric_normal,
    coherence_check,
    inductive_distribution,
    neutral_vote,
    symmetric_vote_via_chi2,
    vote_at,
)

X = 2.18
NESTED = [(0.5, 0.5), (-0.5, 0.5), (-0.82, 0.52)]


class TestVoteResult:
    def test_sum_is_one(self):
        r = VoteResult.from_q1(0.3)
        assert r.q0 + r.q1 == 1.0
        assert r.alpha == r.q0 and r.alpha_prime == r.q1


class TestOneSided:
    def test_vote_at_center(self):
        assert vote_at(NormalLocation(1.0), 0.0, 0.0, 0.0).q1 == 0.5

    def test_vote_at_boundary_value(self):
        assert round(vote_at(NormalLocation(1.0), 0.5, 0.5, X).q1, 4) == 0.0465

    def test_vote_at_far_right(self):
        assert vote_at(NormalLocation(1.0), 0.0, 0.0, 40.0).q1 == 0.0

    def test_neutral_vote(self):
        r = neutral_vote(OneSidedSplit(NormalLocation(1.0), 0.5), X)
        assert (round(r.q0, 4), round(r.q1, 4)) == (0.9535, 0.0465)
        assert r.q1 == pytest.approx(0.046478657863720, abs=1e-14)

    def test_median_is_even(self):
        r = neutral_vote(OneSidedSplit(NormalLocation(1.0), 1.3), 1.3)
        assert r.q0 == r.q1 == 0.5

    def test_classical_p_value_at_zero(self):
        fam = NoncentralBeta(2.0, 3.0)
        r = neutral_vote(OneSidedSplit(fam, 0.0), 1.2)
        assert r.q1 == pytest.approx(1.0 - reg_inc_beta(2.0, 3.0, 1.2 / 2.2), abs=1e-15)

    def test_empty_side_rejected(self):
        with pytest.raises(DomainError):
            OneSidedSplit(GammaScale(2.0), 0.0)
        with pytest.raises(DomainError):
            OneSidedSplit(NormalLocation(1.0), math.inf)
        OneSidedSplit(NoncentralBeta(2.0, 3.0), 0.0)


class TestCoherence:
    def test_schervish_boundaries(self):
        assert coherence_check(NormalLocation(1.0), X, [-0.82, 0.5, 0.52])

    def test_single_boundary(self):
        assert coherence_check(NormalLocation(1.0), X, [0.3])

    def test_gamma_grid(self):
        assert coherence_check(GammaScale(2.0, 2.0), 1.0, [0.05 * 1.5 ** k for k in range(25)])


class TestInductive:
    def test_normal_is_shifted_normal(self):
        dist = inductive_distribution(NormalLocation(1.0), X)
        for th in (-1.0, 1.18, 2.18, 3.18, 6.0):
            assert dist.cdf_at(th) == pytest.approx(normal_cdf(th - X), abs=1e-15)

    def test_gamma_scale_is_inverse_gamma(self):
        u, p = 3.0, 2.0
        dist = inductive_distribution(GammaScale(p, 2.0), u)
        for v in (0.3, 1.0, 2.5):
            assert dist.cdf_at(v) == pytest.approx(1.0 - reg_lower_gamma(p, u / (2 * v)), abs=1e-15)

    def test_total_mass(self):
        dist = inductive_distribution(NormalLocation(1.0), X)
        assert dist.prob(-math.inf, math.inf) == 1.0
        dist = inductive_distribution(NoncentralBeta(2.0, 3.0), 1.0)
        assert dist.prob(0.0, math.inf) == pytest.approx(1.0, abs=1e-15)

    def test_atom_at_closed_end(self):
        dist = inductive_distribution(NoncentralBeta(2.0, 3.0), 1.0)
        assert dist.atom(0.0) == pytest.approx(1.0 - reg_inc_beta(2.0, 3.0, 0.5), abs=1e-15)
        assert dist.atom(0.5) == 0.0
        assert dist.prob(0.0, 0.0) == dist.atom(0.0)

    def test_incompatible_truncation(self):
        fam = NormalLocation(1.0).restrict(ParamInterval(0.0, 1.0, upper_closed=True))
        with pytest.raises(CompatibilityError) as exc:
            InductiveDistribution(fam, X)
        assert exc.value.condition == "lower"

    def test_incompatible_upper(self):
        fam = NormalLocation(1.0).restrict(ParamInterval(-math.inf, 1.0))
        with pytest.raises(CompatibilityError) as exc:
            InductiveDistribution(fam, X)
        assert exc.value.condition == "upper"


class TestBilateralCompatible:
    def test_value(self):
        r = bilateral_vote_compatible(BilateralSplit(NormalLocation(1.0), -0.5, 0.5), X)
        assert r.q0 == pytest.approx(normal_cdf(2.68) - normal_cdf(1.68), abs=1e-15)
        assert r.q0 == pytest.approx(0.0428, abs=5e-4)

    def test_point_hypothesis(self):
        assert bilateral_vote_compatible(BilateralSplit(NormalLocation(1.0), 0.3, 0.3), X).q0 == 0.0

    def test_nested_nondecreasing(self):
        fam = NormalLocation(1.0)
        q0 = [bilateral_vote_compatible(BilateralSplit(fam, a, b), X).q0 for a, b in NESTED]
        assert q0[0] <= q0[1] <= q0[2]
        assert q0 == pytest.approx([0.0, 0.04279754985454507, 0.04710732823509273], abs=1e-14)

    def test_order(self):
        with pytest.raises(DomainError):
            BilateralSplit(NormalLocation(1.0), 1.0, 0.0)
        with pytest.raises(ParameterError):
            BilateralSplit(GammaScale(2.0), -1.0, 1.0)


class TestSymmetric:
    @pytest.mark.parametrize("c, lam, expected, oracle", [
        (0.5, 0.0, 0.0930, 0.09295731572744006),
        (0.0, 0.5, 0.0502, 0.05015976587289501),
        (-0.15, 0.67, 0.0498, 0.04980712429835290),
    ])
    def test_schervish(self, c, lam, expected, oracle):
        q0 = bilateral_vote_symmetric_normal(c, lam, X).q0
        assert q0 == pytest.approx(expected, abs=5e-4)
        assert q0 == pytest.approx(oracle, abs=1e-14)

    def test_incoherent_ordering(self):
        q0 = [bilateral_vote_symmetric_normal((a + b) / 2, (b - a) / 2, X).q0 for a, b in NESTED]
        assert q0[0] > q0[1] > q0[2]

    def test_at_center(self):
        r = symmetric_vote_via_chi2(1.0, 0.0, 1.0)
        assert (r.q1, r.q0) == (0.0, 1.0)

    def test_chi2_complement(self):
        assert symmetric_vote_via_chi2(0.5, 0.0, X).q1 == pytest.approx(0.9070, abs=5e-4)

    def test_sigma_scaling(self):
        a = bilateral_vote_symmetric_normal(1.0, 0.4, 3.0, sigma=2.0)
        b = bilateral_vote_symmetric_normal(0.5, 0.2, 1.5)
        assert a.q0 == pytest.approx(b.q0, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            bilateral_vote_symmetric_normal(0.0, -1.0, 1.0)
        with pytest.raises(DomainError):
            bilateral_vote_symmetric_normal(0.0, 1.0, 1.0, sigma=0.0)
