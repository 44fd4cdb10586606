"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are printed as the tests run (visible with ``-s``) and again in the
"acceptance criteria" section of the terminal summary, together with the
runtime of the whole suite (criterion 9).
"""

import math
import time

from conftest import SUITE_BUDGET_S, elapsed
from expertvote.models import GammaScale, NormalLocation, ParamInterval, boundary_limits_check
from expertvote.nuisance import (
    GammaPairModel,
    GhostSample,
    NormalSummary,
    anova_point_mass,
    anova_vote_quadrature,
    anova_vote_series,
    student_vote,
    student_vote_quadrature,
)
from expertvote.oracle import DecisionRule, expert_check, uniformity_check
from expertvote.specfun import normal_cdf, reg_inc_beta
from expertvote.votes import (
    BilateralSplit,
    bilateral_vote_compatible,
    bilateral_vote_symmetric_normal,
    inductive_distribution,
)

X = 2.18
# (c, lambda1) for the point {0.5}, [-0.5, 0.5] and [-0.82, 0.52]
SCHERVISH = [((0.5, 0.0), 0.0930), ((0.0, 0.5), 0.0502), ((-0.15, 0.67), 0.0498)]


def test_1_schervish_triple(acceptance):
    t0 = time.perf_counter()
    got = [bilateral_vote_symmetric_normal(c, lam, X).q0 for (c, lam), _ in SCHERVISH]
    dt = time.perf_counter() - t0
    errors = [abs(g - e) for g, (_, e) in zip(got, SCHERVISH)]
    ok = max(errors) <= 5e-4 and dt < 1.0
    acceptance("1 symmetric votes at x=2.18", ok,
               f"q0=[{', '.join(f'{g:.4f}' for g in got)}] max|err|={max(errors):.2e} in {dt * 1e3:.1f} ms")
    assert ok


def test_2_incoherence_repair(acceptance):
    t0 = time.perf_counter()
    fam = NormalLocation(1.0)
    q0 = [bilateral_vote_compatible(BilateralSplit(fam, c - lam, c + lam), X).q0
          for (c, lam), _ in SCHERVISH]
    dt = time.perf_counter() - t0
    ok = q0[0] <= q0[1] <= q0[2] and dt < 1.0
    acceptance("2 compatible votes nondecreasing under nesting", ok,
               f"q0={[round(v, 6) for v in q0]} in {dt * 1e3:.1f} ms")
    assert ok


def test_3_normal_inductive(acceptance):
    dist = inductive_distribution(NormalLocation(1.0), X)
    grid = [-2.18 + 8.36 * i / 400 for i in range(401)]
    worst = max(abs(dist.cdf_at(th) - normal_cdf(th - X)) for th in grid)
    ok = worst <= 1e-10
    acceptance("3 normal inductive CDF on 401 points", ok, f"sup|err|={worst:.2e}")
    assert ok


def test_4_student_identity(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for n in (3, 5, 10):
        s = NormalSummary(n, 1.2, 0.8)
        for i in range(11):
            th = -1.8 + 0.6 * i
            worst = max(worst, abs(student_vote(s, th) - student_vote_quadrature(s, th)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and dt < 30.0
    acceptance("4 Student closed form vs quadrature", ok, f"max|diff|={worst:.2e} in {dt:.2f} s")
    assert ok


def test_5_anova_series(acceptance):
    g = GhostSample(3.0, 5.0)
    worst = worst_zero = worst_mass = 0.0
    for p, q in ((1.5, 5.0), (2.0, 2.0)):
        m = GammaPairModel(p, q)
        for th in (0.0, 0.5, 2.0, 10.0):
            worst = max(worst, abs(anova_vote_series(m, g, th) - anova_vote_quadrature(m, g, th)))
        mass = anova_point_mass(m, g)
        worst_zero = max(worst_zero, abs(anova_vote_series(m, g, 0.0) - mass))
        r = g.t / g.u
        worst_mass = max(worst_mass, abs(mass - (1.0 - reg_inc_beta(p, q, r / (1.0 + r)))))
    ok = worst <= 1e-6 and worst_zero <= 1e-12 and worst_mass <= 1e-10
    acceptance("5 ANOVA series vs quadrature oracle", ok,
               f"max|diff|={worst:.2e}, theta=0 vs atom {worst_zero:.2e}, atom vs 1-I {worst_mass:.2e}")
    assert ok


def test_6_neutrality(acceptance):
    n = 100_000
    rep = uniformity_check(NormalLocation(1.0), 0.5, n, seed=20240601, level=0.01)
    mean_ok = abs(rep.mean_q1 - 0.5) <= 0.005
    ok = mean_ok and rep.passed
    acceptance("6 neutral vote under P_theta1", ok,
               f"mean q1={rep.mean_q1:.5f}, KS={rep.ks_statistic:.5f} < {rep.critical_value:.5f}")
    assert ok


def test_7_expert_characterization(acceptance):
    fam = NormalLocation(1.0)
    thresholds = ["(-inf,1.3)", "(-inf,0)", "(-inf,-2.5)", "(-inf,4)", "", "(-inf,inf)"]
    passes = [expert_check(fam, DecisionRule.parse(t), 0.0).passed for t in thresholds]
    gap = DecisionRule.parse("(-inf,0)u(1,2)")
    first = expert_check(fam, gap, 0.0)
    second = expert_check(fam, gap, 0.0)
    ok = all(passes) and not first.passed and first == second
    w = first.witness
    acceptance("7 threshold rules pass, gap rule refuted", ok,
               f"{sum(passes)}/{len(passes)} thresholds pass; witness C={w.event if w else None} "
               f"lhs={w.lhs if w else math.nan:.4f} < rhs={w.rhs if w else math.nan:.4f}")
    assert ok


def test_8_compatibility_limits(acceptance):
    normal = [boundary_limits_check(NormalLocation(1.0), x) for x in (-3.0, 0.0, X, 7.5)]
    gamma = [boundary_limits_check(GammaScale(2.0, 2.0), u) for u in (0.1, 1.0, 4.0, 25.0)]
    truncated = NormalLocation(1.0).restrict(ParamInterval(0.0, 1.0, upper_closed=True))
    fails = not boundary_limits_check(truncated, X)
    ok = all(normal) and all(gamma) and fails
    acceptance("8 limit conditions", ok,
               f"normal {sum(normal)}/4, gamma-scale {sum(gamma)}/4, truncated fixture fails={fails}")
    assert ok


def test_9_runtime_so_far(acceptance):
    # the final figure for the whole suite is printed in the terminal summary
    spent = elapsed()
    ok = spent < SUITE_BUDGET_S
    acceptance("9 runtime budget (elapsed when reached)", ok, f"{spent:.1f} s")
    assert ok
