import math

import pytest
from hypothesis import HealthCheck, settings

from expertvote.models import MlrFamily, ParamInterval
from expertvote.specfun import normal_cdf

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def _mixture_family(shift=6.0):
    # location family of a bimodal density: not MLR
    def cdf(theta, x):
        return 0.5 * normal_cdf(x - theta) + 0.5 * normal_cdf(x - theta - shift)

    def log_density(theta, x):
        a = -0.5 * (x - theta) ** 2
        b = -0.5 * (x - theta - shift) ** 2
        top = max(a, b)
        return top + math.log(0.5 * math.exp(a - top) + 0.5 * math.exp(b - top)) \
            - 0.5 * math.log(2 * math.pi)

    return MlrFamily(cdf, log_density, ParamInterval.real_line(), ParamInterval.real_line(),
                     family_tag="bimodal-location")


@pytest.fixture
def bimodal_family():
    return _mixture_family()


# -- acceptance report -----------------------------------------------------

import time  # noqa: E402

SUITE_BUDGET_S = 300.0
_session = {"start": None, "lines": []}


def pytest_sessionstart(session):
    _session["start"] = time.perf_counter()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion."""

    def report(label, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {label}" + (f": {detail}" if detail else "")
        _session["lines"].append(line)
        print(line)
        return passed

    return report


def elapsed():
    return time.perf_counter() - _session["start"]


def pytest_terminal_summary(terminalreporter):
    lines = _session["lines"]
    if not lines:
        return
    total = elapsed()
    ok = total < SUITE_BUDGET_S
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    terminalreporter.write_line(
        f"[{'PASS' if ok else 'FAIL'}] 9 suite runtime: {total:.1f} s (limit {SUITE_BUDGET_S:.0f} s)")
