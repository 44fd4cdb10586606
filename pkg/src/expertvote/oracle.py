"""Verification harness for expert decision rules and neutral votes.

A rule phi is an expert for Theta_1 = (-inf, b] against Theta_0 = (b, inf)
when, for every non-negligible event C and every theta1 <= b < theta0,

    P_theta1(C & {phi=1}) / P_theta1(C) >= P_theta0(C & {phi=1}) / P_theta0(C).

On a strict-MLR family exactly the threshold rules 1{x < t} qualify.
:func:`expert_check` hunts for events that break the inequality, first along
the construction that refutes non-threshold rules, then over a grid of
two-cell unions. Passing means "no witness within budget", not a proof.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError
from .models import MlrFamily, ParamInterval, quantile

INF = math.inf

MIN_EVENT_PROB = 1e-6
VIOLATION_MARGIN = 1e-9
BASE_GRID = 64
DEFAULT_BUDGET = 20_000
SUPPORT_TAIL = 1e-7


@dataclass(frozen=True)
class Span:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_fmt(self.lo)},{_fmt(self.hi)}{right}"


def _fmt(v):
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return f"{v:g}"


def _normalize(spans: Iterable[Span]) -> tuple[Span, ...]:
    # sort, drop empties, merge overlapping or touching pieces
    items = sorted((s for s in spans if s.lo < s.hi or (s.lo == s.hi and s.lo_closed and s.hi_closed)),
                   key=lambda s: (s.lo, not s.lo_closed))
    merged: list[Span] = []
    for s in items:
        if merged:
            last = merged[-1]
            touching = s.lo < last.hi or (s.lo == last.hi and (last.hi_closed or s.lo_closed))
            if touching:
                if s.hi > last.hi:
                    merged[-1] = Span(last.lo, s.hi, last.lo_closed, s.hi_closed)
                elif s.hi == last.hi and s.hi_closed and not last.hi_closed:
                    merged[-1] = Span(last.lo, last.hi, last.lo_closed, True)
                continue
        merged.append(s)
    return tuple(merged)


_SPAN_RE = re.compile(r"\s*([\[(])\s*([^,\s]+)\s*,\s*([^\])\s]+)\s*([\])])\s*")


def _parse_bound(text):
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return INF
    if t == "-inf":
        return -INF
    try:
        return float(t)
    except ValueError:
        raise DomainError(f"bad interval endpoint {text!r}") from None


def parse_spans(text: str) -> tuple[Span, ...]:
    """Parse ``(a,b)``, ``[a,b]``, ``(a,b]`` pieces joined by ``u``; ``inf`` allowed."""
    text = text.strip()
    if text in ("", "{}", "empty"):
        return ()
    spans = []
    for piece in re.split(r"\s*[uU∪]\s*(?=[\[(])", text):
        m = _SPAN_RE.fullmatch(piece)
        if not m:
            raise DomainError(f"cannot parse interval {piece!r}")
        lo, hi = _parse_bound(m.group(2)), _parse_bound(m.group(3))
        if lo > hi:
            raise DomainError(f"empty interval {piece!r}")
        lo_closed = m.group(1) == "[" and math.isfinite(lo)
        hi_closed = m.group(4) == "]" and math.isfinite(hi)
        spans.append(Span(lo, hi, lo_closed, hi_closed))
    return _normalize(spans)


@dataclass(frozen=True)
class DecisionRule:
    """Nonrandomized rule given by the set {phi = 1} as a union of intervals."""

    accept_one: tuple[Span, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "accept_one", _normalize(self.accept_one))

    @classmethod
    def parse(cls, text: str) -> "DecisionRule":
        return cls(parse_spans(text))

    @classmethod
    def threshold(cls, t: float) -> "DecisionRule":
        """1{x < t}."""
        return cls((Span(-INF, t),))

    def __call__(self, x: float) -> int:
        for s in self.accept_one:
            if (s.lo < x or (s.lo_closed and x == s.lo)) and (x < s.hi or (s.hi_closed and x == s.hi)):
                return 1
        return 0

    def clipped(self, lo: float, hi: float) -> list[tuple[float, float]]:
        """Pieces of {phi = 1} inside [lo, hi], endpoints only (closedness is null)."""
        out = []
        for s in self.accept_one:
            a, b = max(s.lo, lo), min(s.hi, hi)
            if a < b:
                out.append((a, b))
        return out

    def __str__(self):
        return "u".join(str(s) for s in self.accept_one) or "empty"


@dataclass(frozen=True)
class EventWitness:
    """Event C with lhs = P_theta1(phi=1 | C) < rhs = P_theta0(phi=1 | C)."""

    event: tuple[tuple[float, float], ...]
    theta0: float
    theta1: float
    lhs: float
    rhs: float

    def describe(self) -> dict:
        return {
            "event": "u".join(f"[{_fmt(a)},{_fmt(b)}]" for a, b in self.event),
            "theta0": self.theta0,
            "theta1": self.theta1,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass(frozen=True)
class ExpertCheck:
    passed: bool
    witness: EventWitness | None
    events_tried: int
    notes: tuple[str, ...] = field(default=())

    def __bool__(self):
        return self.passed


def threshold_gap(rule: DecisionRule, support: ParamInterval | None = None):
    """(t', t'') with t' = sup{t: f_t <= phi} and t'' = inf{t: f_t >= phi}, up to null sets.

    f_t = 1{x < t} restricted to ``support`` (the real line by default).
    Equal values mean phi is almost surely the threshold rule f_t'.
    """
    lo, hi = (support.lower, support.upper) if support is not None else (-INF, INF)
    pieces = rule.clipped(lo, hi)
    if not pieces:
        return lo, lo
    first_lo, first_hi = pieces[0]
    t_lower = first_hi if first_lo <= lo else lo
    t_upper = pieces[-1][1]
    return t_lower, t_upper


def _interval_prob(family, theta, a, b):
    F = family._cdf
    return max(F(theta, b) - F(theta, a), 0.0)


def _event_probs(family, theta, ones, zeros):
    p1 = math.fsum(_interval_prob(family, theta, a, b) for a, b in ones)
    p0 = math.fsum(_interval_prob(family, theta, a, b) for a, b in zeros)
    return p1, p0


def _ratio_test(family, ones, zeros, th1, th0):
    """Witness for C = ones u zeros under (th1, th0), or None."""
    p1a, p0a = _event_probs(family, th1, ones, zeros)
    p1b, p0b = _event_probs(family, th0, ones, zeros)
    ca, cb = p1a + p0a, p1b + p0b
    if ca < MIN_EVENT_PROB or cb < MIN_EVENT_PROB:
        return None
    lhs, rhs = p1a / ca, p1b / cb
    if rhs - lhs > VIOLATION_MARGIN:
        event = tuple(sorted(ones + zeros))
        return EventWitness(event, th0, th1, lhs, rhs)
    return None


def _split(rule, a, b):
    # [a, b] cut into the pieces where phi = 1 and where phi = 0
    ones = rule.clipped(a, b)
    zeros, cursor = [], a
    for lo, hi in ones:
        if lo > cursor:
            zeros.append((cursor, lo))
        cursor = hi
    if cursor < b:
        zeros.append((cursor, b))
    return ones, zeros


def default_theta_pairs(family: MlrFamily, boundary: float) -> list[tuple[float, float]]:
    """A few (theta1, theta0) with theta1 <= boundary < theta0 inside Theta."""
    dom = family.theta_domain
    lows = [boundary, boundary - 1.0]
    highs = [boundary + 1.0, boundary + 0.25]
    if math.isfinite(dom.upper):
        highs = [boundary + f * (dom.upper - boundary) for f in (0.5, 0.1)]
    if math.isfinite(dom.lower):
        lows = [boundary, dom.lower + 0.5 * (boundary - dom.lower)]
    pairs = []
    for t1 in lows:
        for t0 in highs:
            if t1 in dom and t0 in dom and t1 <= boundary < t0 and (t1, t0) not in pairs:
                pairs.append((t1, t0))
    return pairs


def effective_support(family: MlrFamily, thetas: Sequence[float],
                      tail: float = SUPPORT_TAIL) -> tuple[float, float]:
    """Range holding all but ``tail`` of the mass under every theta listed."""
    lo, hi = INF, -INF
    for th in thetas:
        lo = min(lo, quantile(family, th, tail))
        hi = max(hi, quantile(family, th, 1.0 - tail))
    return max(lo, family.support.lower), min(hi, family.support.upper)


def expert_check(family: MlrFamily, rule: DecisionRule, boundary: float,
                 theta_pairs: Sequence[tuple[float, float]] | None = None,
                 search_budget: int = DEFAULT_BUDGET) -> ExpertCheck:
    """Search for an event refuting the expert property of ``rule``.

    ``theta_pairs`` holds (theta1, theta0) with theta1 <= boundary < theta0.
    The search is deterministic: same inputs, same events in the same order.
    """
    pairs = list(theta_pairs) if theta_pairs is not None else default_theta_pairs(family, boundary)
    for t1, t0 in pairs:
        family.check_theta(t1)
        family.check_theta(t0)
        if not t1 <= boundary < t0:
            raise DomainError(f"pair ({t1}, {t0}) does not straddle boundary {boundary}")
    if not pairs:
        return ExpertCheck(True, None, 0, ("no admissible theta pair",))

    lo_eff, hi_eff = effective_support(family, [t for pair in pairs for t in pair])
    tried = 0

    # proof-guided events: A = [t', t) & {phi=0}, B = (t, t''] & {phi=1}
    t_lower, t_upper = threshold_gap(rule, family.support)
    g_lo, g_hi = max(t_lower, lo_eff), min(t_upper, hi_eff)
    if g_lo < g_hi:
        n = BASE_GRID
        while tried < search_budget:
            for i in range(1, n):
                t = g_lo + (g_hi - g_lo) * i / n
                left_ones, left_zeros = _split(rule, g_lo, t)
                right_ones, right_zeros = _split(rule, t, g_hi)
                for t1, t0 in pairs:
                    tried += 1
                    w = _ratio_test(family, right_ones, left_zeros, t1, t0)
                    if w is not None:
                        return ExpertCheck(False, w, tried, ("gap construction",))
                    if tried >= search_budget:
                        break
                if tried >= search_budget:
                    break
            if n * 2 * len(pairs) > search_budget:
                break
            n *= 2

    # generic events: unions of two cells of a grid on the effective support
    cells = 32
    edges = [lo_eff + (hi_eff - lo_eff) * k / cells for k in range(cells + 1)]
    parts = [_split(rule, edges[k], edges[k + 1]) for k in range(cells)]
    for i in range(cells):
        for j in range(i, cells):
            ones = parts[i][0] + (parts[j][0] if j != i else [])
            zeros = parts[i][1] + (parts[j][1] if j != i else [])
            for t1, t0 in pairs:
                if tried >= search_budget:
                    return ExpertCheck(True, None, tried, ("budget exhausted",))
                tried += 1
                w = _ratio_test(family, ones, zeros, t1, t0)
                if w is not None:
                    return ExpertCheck(False, w, tried, ("cell search",))
    return ExpertCheck(True, None, tried, ("no witness within budget",))


@dataclass(frozen=True)
class UniformityReport:
    n_samples: int
    ks_statistic: float
    critical_value: float
    level: float
    mean_q1: float

    @property
    def passed(self) -> bool:
        return self.ks_statistic < self.critical_value

    def __bool__(self):
        return self.passed


def ks_critical_value(n: int, level: float = 0.01) -> float:
    """Asymptotic Kolmogorov-Smirnov cut-off sqrt(-ln(level/2)/2) / sqrt(n)."""
    return math.sqrt(-0.5 * math.log(0.5 * level)) / math.sqrt(n)


def ks_uniform(values: Sequence[float]) -> float:
    """Kolmogorov-Smirnov distance of the empirical law of ``values`` to U(0, 1)."""
    v = sorted(values)
    n = len(v)
    return max(max((i + 1) / n - x, x - i / n) for i, x in enumerate(v))


def uniformity_check(family: MlrFamily, theta1: float, n_samples: int = 100_000,
                     seed: int = 0, level: float = 0.01,
                     evaluate_at: float | None = None) -> UniformityReport:
    """Draw X ~ P_theta1 by inversion and test F(theta, X) for uniformity.

    theta is ``theta1`` unless ``evaluate_at`` is given (a miscalibrated
    vote). Uniforms come from ``random.Random(seed)`` (Mersenne Twister), so
    a fixed seed replays exactly. ``mean_q1`` is the average neutral vote
    1 - F(theta, X_i).
    """
    if n_samples < 1000:
        raise DomainError(f"need n_samples >= 1000, got {n_samples}")
    family.check_theta(theta1)
    theta = theta1 if evaluate_at is None else evaluate_at
    family.check_theta(theta)
    rng = random.Random(seed)
    F = family._cdf
    values = []
    for _ in range(n_samples):
        u = rng.random()
        while u == 0.0:
            u = rng.random()
        x = quantile(family, theta1, u)
        values.append(F(theta, x))
    stat = ks_uniform(values)
    mean_q1 = 1.0 - math.fsum(values) / n_samples
    return UniformityReport(n_samples, stat, ks_critical_value(n_samples, level), level, mean_q1)
