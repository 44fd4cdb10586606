import math

import pytest

from expertvote.errors import DomainError
from expertvote.models import GammaScale, NoncentralBeta, NoncentralChi2One, NormalLocation
from expertvote.oracle import (
    DecisionRule,
    expert_check,
    ks_critical_value,
    ks_uniform,
    parse_spans,
    threshold_gap,
    uniformity_check,
)

GAP_RULE = "(-inf,0)u(1,2)"


class TestDecisionRule:
    def test_parse_and_print(self):
        rule = DecisionRule.parse(GAP_RULE)
        assert str(rule) == GAP_RULE
        assert rule(-1.0) == 1 and rule(0.5) == 0 and rule(1.5) == 1 and rule(3.0) == 0

    def test_merging(self):
        rule = DecisionRule.parse("(1,2]u[2,3)u(0,1.5)")
        assert str(rule) == "(0,3)"

    def test_disjoint_sorted(self):
        rule = DecisionRule.parse("(5,6)u(-1,0)")
        assert [s.lo for s in rule.accept_one] == [-1.0, 5.0]

    def test_empty(self):
        assert DecisionRule.parse("").accept_one == ()

    @pytest.mark.parametrize("bad", ["(1,0)", "1,2", "(a,b)", "(0,1)x(2,3)"])
    def test_bad_syntax(self, bad):
        with pytest.raises(DomainError):
            parse_spans(bad)

    def test_infinite_ends_open(self):
        (span,) = parse_spans("[-inf,inf]")
        assert not span.lo_closed and not span.hi_closed


class TestThresholdGap:
    def test_threshold(self):
        assert threshold_gap(DecisionRule.parse("(-inf,1.3)")) == (1.3, 1.3)

    def test_gap_rule(self):
        assert threshold_gap(DecisionRule.parse(GAP_RULE)) == (0.0, 2.0)

    def test_empty_rule(self):
        assert threshold_gap(DecisionRule()) == (-math.inf, -math.inf)
        assert threshold_gap(DecisionRule(), GammaScale(2.0).support) == (0.0, 0.0)

    def test_half_line_support(self):
        # on (0, inf) the rule (0, 2) is the threshold rule at 2
        rule = DecisionRule.parse("(-1,2)")
        assert threshold_gap(rule, GammaScale(2.0).support) == (2.0, 2.0)


class TestExpertCheck:
    def test_threshold_passes(self):
        res = expert_check(NormalLocation(1.0), DecisionRule.parse("(-inf,1.3)"), 0.0)
        assert res.passed and res.witness is None and res.events_tried > 0

    def test_gap_rule_witness(self):
        res = expert_check(NormalLocation(1.0), DecisionRule.parse(GAP_RULE), 0.0)
        assert not res.passed
        w = res.witness
        assert w.lhs < w.rhs
        assert w.theta1 <= 0.0 < w.theta0
        # C = A u B with A in [0, t) where phi = 0, B = (t, 2] where phi = 1
        (a_lo, a_hi), (b_lo, b_hi) = w.event
        assert a_lo == 0.0 and a_hi < 1.0 and (b_lo, b_hi) == (1.0, 2.0)

    def test_witness_recomputes(self):
        fam = NormalLocation(1.0)
        res = expert_check(fam, DecisionRule.parse(GAP_RULE), 0.0)
        w = res.witness
        rule = DecisionRule.parse(GAP_RULE)

        def cond(theta):
            total = sum(fam.cdf(theta, b) - fam.cdf(theta, a) for a, b in w.event)
            ones = sum(fam.cdf(theta, b) - fam.cdf(theta, a) for a, b in w.event if rule((a + b) / 2))
            return ones / total
        assert cond(w.theta1) == pytest.approx(w.lhs, abs=1e-12)
        assert cond(w.theta0) == pytest.approx(w.rhs, abs=1e-12)

    @pytest.mark.parametrize("text", ["", "(-inf,inf)"])
    def test_trivial_rules(self, text):
        assert expert_check(NormalLocation(1.0), DecisionRule.parse(text), 0.0).passed

    def test_deterministic(self):
        fam = NormalLocation(1.0)
        a = expert_check(fam, DecisionRule.parse("(-inf,-1)u(0.2,0.4)"), 0.0)
        b = expert_check(fam, DecisionRule.parse("(-inf,-1)u(0.2,0.4)"), 0.0)
        assert a == b

    def test_reversed_threshold_is_refuted(self):
        res = expert_check(NormalLocation(1.0), DecisionRule.parse("(0.5,inf)"), 0.0)
        assert not res.passed

    @pytest.mark.parametrize("fam, boundary, t", [
        (GammaScale(2.0), 1.0, 2.5),
        (NoncentralBeta(2.0, 3.0), 1.0, 0.8),
        (NoncentralChi2One(), 1.0, 1.5),
    ])
    def test_catalog_thresholds_and_gaps(self, fam, boundary, t):
        assert expert_check(fam, DecisionRule.parse(f"(-inf,{t})"), boundary).passed
        gap = DecisionRule.parse(f"(0,{t / 2})u({t},{2 * t})")
        assert not expert_check(fam, gap, boundary).passed

    def test_pairs_must_straddle(self):
        with pytest.raises(DomainError):
            expert_check(NormalLocation(1.0), DecisionRule(), 0.0, theta_pairs=[(0.5, 1.0)])

    def test_budget_respected(self):
        res = expert_check(NormalLocation(1.0), DecisionRule.parse("(-inf,1)"), 0.0, search_budget=10)
        assert res.passed and res.events_tried == 10


class TestUniformity:
    def test_critical_value(self):
        assert ks_critical_value(10_000) == pytest.approx(1.6276 / 100, abs=1e-5)

    def test_ks_distance(self):
        assert ks_uniform([0.5]) == 0.5
        assert ks_uniform([(i + 0.5) / 100 for i in range(100)]) == pytest.approx(0.005)

    def test_noncentral_beta(self):
        rep = uniformity_check(NoncentralBeta(2.0, 3.0), 1.0, 10_000, seed=3)
        assert rep.passed
        assert abs(rep.mean_q1 - 0.5) < 3 / math.sqrt(10_000)

    def test_miscalibrated(self):
        rep = uniformity_check(NormalLocation(1.0), 0.5, 10_000, seed=3, evaluate_at=0.6)
        assert not rep.passed

    def test_reproducible(self):
        a = uniformity_check(GammaScale(2.0), 1.0, 2000, seed=11)
        b = uniformity_check(GammaScale(2.0), 1.0, 2000, seed=11)
        assert a == b

    def test_minimum_size(self):
        with pytest.raises(DomainError):
            uniformity_check(NormalLocation(1.0), 0.0, 999)
