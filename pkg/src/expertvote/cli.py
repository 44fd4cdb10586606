"""Command-line front end.

Subcommands::

    vote            neutral, compatible or symmetric vote on one hypothesis
    inductive       table of the inductive CDF theta -> Q((-inf, theta])
    demo-schervish  symmetric and compatible votes at x = 2.18
    check           MLR, limit, neutrality and expert checks on the catalog

Intervals use ``(a,b)``, ``[a,b]``, half-open mixes and ``u`` for unions,
with ``inf`` and ``-inf`` as endpoints, e.g. ``"(-inf,0)u(1,2)"``.

Exit codes: 0 ok, 1 check failure, 2 usage, 3 numeric failure,
4 incompatible votes (a limit condition fails).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .errors import CompatibilityError, DomainError, NumericError
from .models import (
    GammaScale,
    NoncentralBeta,
    NoncentralChi2One,
    NormalLocation,
    ParamInterval,
    boundary_limits,
    mlr_verify,
)
from .nuisance import (
    SERIES_TOL,
    AnovaInductiveDistribution,
    GammaPairModel,
    GhostSample,
    NormalSummary,
    anova_point_mass,
    student_vote,
)
from .oracle import DecisionRule, expert_check, parse_spans, threshold_gap, uniformity_check
from .specfun import Tolerance
from .votes import (
    BilateralSplit,
    InductiveDistribution,
    OneSidedSplit,
    VoteResult,
    bilateral_vote_compatible,
    bilateral_vote_symmetric_normal,
    neutral_vote,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_NUMERIC, EXIT_COMPAT = 0, 1, 2, 3, 4

MLR_MODELS = ("normal", "gamma-scale", "noncentral-beta", "chi2-1")
MODELS = MLR_MODELS + ("anova", "student")
LABELS = {"q0": "p-value of H0", "q1": "p-value of H0'"}

SCHERVISH_X = 2.18
SCHERVISH_CASES = ((0.5, 0.0), (0.0, 0.5), (-0.15, 0.67))
SCHERVISH_GOLDEN = (0.0930, 0.0502, 0.0498)


class UsageError(Exception):
    pass


# -- output ----------------------------------------------------------------

def _num(v):
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    text = f"{v:.6f}"
    return "0.000000" if text == "-0.000000" else text


def dumps(obj) -> str:
    """JSON with every float written to 6 decimals."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _num(obj)


# -- config ----------------------------------------------------------------

def _tolerance(args) -> Tolerance:
    base = SERIES_TOL if args.model == "anova" else Tolerance()
    return Tolerance(
        abs_tol=base.abs_tol if args.abs_tol is None else args.abs_tol,
        series_tail=base.series_tail if args.series_tail is None else args.series_tail,
        max_terms=base.max_terms if args.max_terms is None else args.max_terms,
    )


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        flags = ", ".join("--" + n for n in missing)
        raise UsageError(f"model {args.model!r} requires {flags}")


def _interval(text: str) -> ParamInterval:
    spans = parse_spans(text)
    if len(spans) != 1:
        raise UsageError(f"--restrict needs a single interval, got {text!r}")
    s = spans[0]
    try:
        return ParamInterval(s.lo, s.hi, s.lo_closed, s.hi_closed)
    except DomainError as exc:
        raise UsageError(f"--restrict: {exc}") from None


def build_family(args):
    tol = _tolerance(args)
    if args.model == "normal":
        fam = NormalLocation(1.0 if args.sigma is None else args.sigma)
    elif args.model == "gamma-scale":
        _need(args, "shape")
        fam = GammaScale(args.shape, 1.0 if args.scale_multiplier is None else args.scale_multiplier)
    elif args.model == "noncentral-beta":
        p, q = _pq(args)
        fam = NoncentralBeta(p, q, tol)
    elif args.model == "chi2-1":
        fam = NoncentralChi2One(tol)
    else:
        raise UsageError(f"model {args.model!r} is not a one-parameter MLR family")
    if args.restrict is not None:
        fam = fam.restrict(_interval(args.restrict))
    return fam


def _pq(args):
    if args.k is not None or args.l is not None:
        if args.p is not None or args.q is not None:
            raise UsageError("give either --k/--l or --p/--q, not both")
        _need(args, "k", "l")
        m = GammaPairModel.from_degrees(args.k, args.l)
        return m.p, m.q
    _need(args, "p", "q")
    return args.p, args.q


def _model_info(args, family=None):
    if family is not None:
        info = family.describe()
        if args.restrict is not None:
            info["theta_domain"] = str(family.theta_domain)
        return info
    if args.model == "anova":
        p, q = _pq(args)
        return {"family": "anova", "p": p, "q": q}
    return {"family": "student"}


def _realization(args):
    if args.model == "anova":
        _need(args, "t", "u")
        return {"t": args.t, "u": args.u}
    if args.model == "student":
        _need(args, "n", "mean", "s2")
        return {"n": args.n, "mean": args.mean, "s2": args.s2}
    _need(args, "x")
    return args.x


# -- commands --------------------------------------------------------------

def cmd_vote(args, out):
    specs = [args.one_sided is not None, args.bilateral is not None,
             args.symmetric_c is not None, args.theta is not None]
    if sum(specs) != 1:
        raise UsageError("give exactly one of --one-sided, --bilateral, --symmetric-c, --theta")
    x = _realization(args)
    extra = {}
    if args.model in ("anova", "student"):
        if args.theta is None:
            raise UsageError(f"model {args.model!r} takes --theta")
        hyp = {"type": "one-sided", "theta1": args.theta}
        if args.model == "anova":
            p, q = _pq(args)
            model, sample = GammaPairModel(p, q), GhostSample(args.t, args.u)
            dist = AnovaInductiveDistribution(model, sample, _tolerance(args))
            result = VoteResult.from_q1(dist.cdf_at(args.theta))
            extra["point_mass"] = anova_point_mass(model, sample)
        else:
            summary = NormalSummary(args.n, args.mean, args.s2)
            result = VoteResult.from_q1(student_vote(summary, args.theta))
        info = _model_info(args)
    elif args.symmetric_c is not None:
        if args.model != "normal":
            raise UsageError("--symmetric-c is only defined for --model normal")
        if args.lambda1 is None:
            raise UsageError("--symmetric-c requires --lambda1")
        sigma = 1.0 if args.sigma is None else args.sigma
        result = bilateral_vote_symmetric_normal(args.symmetric_c, args.lambda1, x, sigma)
        hyp = {"type": "symmetric", "c": args.symmetric_c, "lambda1": args.lambda1}
        info = {"family": "normal", "sigma": sigma}
    else:
        family = build_family(args)
        info = _model_info(args, family)
        if args.one_sided is not None:
            result = neutral_vote(OneSidedSplit(family, args.one_sided), x)
            hyp = {"type": "one-sided", "theta1": args.one_sided}
        elif args.theta is not None:
            raise UsageError("--theta is for --model anova or student; use --one-sided")
        else:
            a, b = args.bilateral
            result = bilateral_vote_compatible(BilateralSplit(family, a, b), x)
            hyp = {"type": "bilateral", "theta1": a, "theta2": b}
    payload = {"model": info, "hypothesis": hyp, "x": x, "q0": result.q0, "q1": result.q1,
               "labels": LABELS, **extra}
    if args.format == "csv":
        out.write("q0,q1\n")
        out.write(f"{_num(result.q0)},{_num(result.q1)}\n")
    else:
        out.write(dumps(payload) + "\n")
    return EXIT_OK


def _grid(args):
    if args.grid is not None:
        try:
            return [float(v) for v in args.grid.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"--grid must be comma-separated numbers, got {args.grid!r}") from None
    if args.grid_range is not None:
        a, b, n = args.grid_range
        n = int(n)
        if n < 2:
            raise UsageError("--grid-range needs at least 2 points")
        return [a + (b - a) * i / (n - 1) for i in range(n)]
    raise UsageError("inductive needs --grid or --grid-range")


def cmd_inductive(args, out):
    grid = _grid(args)
    x = _realization(args)
    if args.model == "anova":
        p, q = _pq(args)
        dist = AnovaInductiveDistribution(GammaPairModel(p, q), GhostSample(args.t, args.u),
                                          _tolerance(args))
        cdf_at = dist.cdf_at
        info = _model_info(args)
    elif args.model == "student":
        summary = NormalSummary(args.n, args.mean, args.s2)
        cdf_at = lambda th: student_vote(summary, th)  # noqa: E731
        info = _model_info(args)
    else:
        family = build_family(args)
        dist = InductiveDistribution(family, x)
        for th in grid:
            if not family.theta_domain.in_closure(th):
                raise DomainError(f"grid point {th} outside parameter interval {family.theta_domain}")
        cdf_at = dist.cdf_at
        info = _model_info(args, family)
    rows = [(th, cdf_at(th)) for th in grid]
    if args.format == "csv":
        desc = " ".join(f"{k}={v}" for k, v in info.items())
        xdesc = " ".join(f"{k}={v}" for k, v in x.items()) if isinstance(x, dict) else f"x={x}"
        out.write(f"# {desc} {xdesc}\n")
        out.write("theta,cdf\n")
        for th, c in rows:
            out.write(f"{_num(th)},{_num(c)}\n")
    else:
        out.write(dumps({"model": info, "x": x,
                         "rows": [{"theta": th, "cdf": c} for th, c in rows]}) + "\n")
    return EXIT_OK


def schervish_report():
    symmetric = [bilateral_vote_symmetric_normal(c, lam, SCHERVISH_X).q0
                 for c, lam in SCHERVISH_CASES]
    family = NormalLocation(1.0)
    compatible = [bilateral_vote_compatible(BilateralSplit(family, c - lam, c + lam), SCHERVISH_X).q0
                  for c, lam in SCHERVISH_CASES]
    match = all(abs(round(v, 4) - g) < 1e-9 for v, g in zip(symmetric, SCHERVISH_GOLDEN))
    nested = all(a <= b for a, b in zip(compatible, compatible[1:]))
    return {
        "x": SCHERVISH_X,
        "hypotheses": [f"[{c - lam:g},{c + lam:g}]" for c, lam in SCHERVISH_CASES],
        "symmetric_q0": symmetric,
        "expected": list(SCHERVISH_GOLDEN),
        "compatible_q0": compatible,
        "symmetric_matches": match,
        "compatible_nondecreasing": nested,
    }


def cmd_demo_schervish(args, out):
    report = schervish_report()
    out.write(dumps(report) + "\n")
    return EXIT_OK if report["symmetric_matches"] else EXIT_MISMATCH


def _catalog():
    return [
        ("normal", NormalLocation(1.0), [-3.0, -1.0, 0.0, 0.5, 2.0, 4.0], [-4.0, -1.0, 0.0, 1.0, 2.18, 5.0]),
        ("gamma-scale", GammaScale(2.0), [0.2, 0.5, 1.0, 2.0, 5.0], [0.1, 0.5, 1.0, 3.0, 8.0]),
        ("noncentral-beta", NoncentralBeta(2.0, 3.0), [0.0, 0.5, 1.0, 3.0, 8.0], [0.05, 0.3, 1.0, 2.0, 6.0]),
        ("chi2-1", NoncentralChi2One(), [0.0, 0.5, 1.0, 2.0, 4.0], [0.05, 0.5, 1.0, 3.0, 9.0]),
    ]


def run_checks(seed: int = 0, n_samples: int = 20_000, rule_text: str | None = None,
               boundary: float = 0.0):
    checks = []

    def record(name, passed, **detail):
        checks.append({"name": name, "passed": bool(passed), **detail})

    for tag, fam, thetas, xs in _catalog():
        rep = mlr_verify(fam, thetas, xs)
        record(f"mlr:{tag}", rep.ok)
    limit_cases = [("normal", NormalLocation(1.0), 2.18), ("gamma-scale", GammaScale(2.0), 1.5),
                   ("noncentral-beta", NoncentralBeta(2.0, 3.0), 1.0), ("chi2-1", NoncentralChi2One(), 2.0)]
    for tag, fam, x in limit_cases:
        rep = boundary_limits(fam, x)
        record(f"limits:{tag}", rep.ok, failed=rep.failed)
    truncated = NormalLocation(1.0).restrict(ParamInterval(0.0, 1.0, upper_closed=True))
    rep = boundary_limits(truncated, 2.18)
    record("limits:truncated-fails", not rep.ok, failed=rep.failed)

    for tag, fam, theta in (("normal", NormalLocation(1.0), 0.5), ("noncentral-beta", NoncentralBeta(2.0, 3.0), 1.0)):
        u = uniformity_check(fam, theta, n_samples, seed)
        record(f"neutral:{tag}", u.passed, ks=u.ks_statistic, critical=u.critical_value,
               mean_q1=u.mean_q1, n=u.n_samples)

    normal = NormalLocation(1.0)
    if rule_text is None:
        for text in ("(-inf,1.3)", "(-inf,0)", "(-inf,-2)"):
            res = expert_check(normal, DecisionRule.parse(text), boundary)
            record(f"expert:threshold{text}", res.passed, events=res.events_tried)
        res = expert_check(normal, DecisionRule.parse("(-inf,0)u(1,2)"), boundary)
        record("expert:gap-rule-refuted", not res.passed,
               witness=res.witness.describe() if res.witness else None)
    else:
        rule = DecisionRule.parse(rule_text)
        res = expert_check(normal, rule, boundary)
        record(f"expert:{rule}", res.passed, gap=list(threshold_gap(rule)),
               witness=res.witness.describe() if res.witness else None, events=res.events_tried)
    return {"seed": seed, "checks": checks, "passed": all(c["passed"] for c in checks)}


def cmd_check(args, out):
    report = run_checks(args.seed, args.n_samples, args.rule, args.boundary)
    out.write(dumps(report) + "\n")
    if not report["passed"]:
        failed = ", ".join(c["name"] for c in report["checks"] if not c["passed"])
        print(f"failed: {failed}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def _add_model_args(p):
    g = p.add_argument_group("model")
    g.add_argument("--model", choices=MODELS, default="normal")
    g.add_argument("--sigma", type=float)
    g.add_argument("--shape", type=float)
    g.add_argument("--scale-multiplier", type=float)
    g.add_argument("--p", type=float)
    g.add_argument("--q", type=float)
    g.add_argument("--k", type=float, help="numerator degrees of freedom (p = k/2)")
    g.add_argument("--l", type=float, help="denominator degrees of freedom (q = l/2)")
    g.add_argument("--restrict", metavar="INTERVAL", help='parameter interval, e.g. "(0,1]"')
    r = p.add_argument_group("realization")
    r.add_argument("--x", type=float)
    r.add_argument("--t", type=float)
    r.add_argument("--u", type=float)
    r.add_argument("--n", type=int)
    r.add_argument("--mean", type=float)
    r.add_argument("--s2", type=float)
    t = p.add_argument_group("numerics")
    t.add_argument("--abs-tol", type=float)
    t.add_argument("--series-tail", type=float)
    t.add_argument("--max-terms", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expertvote", description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 2)[2], formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("vote", help="vote on one hypothesis")
    _add_model_args(v)
    h = v.add_argument_group("hypothesis (exactly one)")
    h.add_argument("--one-sided", type=float, metavar="THETA1", help="Theta_1 = (-inf, THETA1]")
    h.add_argument("--bilateral", type=float, nargs=2, metavar=("THETA1", "THETA2"),
                   help="Theta_0 = [THETA1, THETA2], compatible vote")
    h.add_argument("--symmetric-c", type=float, metavar="C",
                   help="Theta_0 = [C - LAMBDA1, C + LAMBDA1], symmetric normal vote")
    h.add_argument("--lambda1", type=float)
    h.add_argument("--theta", type=float, help="boundary for anova and student models")
    v.set_defaults(func=cmd_vote)

    i = sub.add_parser("inductive", help="inductive CDF on a grid")
    _add_model_args(i)
    i.add_argument("--grid", help="comma-separated theta values")
    i.add_argument("--grid-range", type=float, nargs=3, metavar=("START", "STOP", "N"))
    i.set_defaults(func=cmd_inductive)

    d = sub.add_parser("demo-schervish", help="symmetric vs compatible votes at x = 2.18")
    d.set_defaults(func=cmd_demo_schervish)

    c = sub.add_parser("check", help="verification suite")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--n-samples", type=int, default=20_000)
    c.add_argument("--rule", help='decision rule {phi = 1}, e.g. "(-inf,0)u(1,2)"')
    c.add_argument("--boundary", type=float, default=0.0)
    c.set_defaults(func=cmd_check)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CompatibilityError as exc:
        print(f"error: incompatible votes ({exc.condition} limit condition): {exc}", file=sys.stderr)
        return EXIT_COMPAT
    except NumericError as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
