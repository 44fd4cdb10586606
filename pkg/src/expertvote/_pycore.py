"""Pure-Python numerical kernels.

This module and the compiled ``_core`` extension expose the same functions
with the same signatures and the same algorithms; ``_kernels`` picks one at
import time. Arguments are assumed valid here: domain checks live in
:mod:`expertvote.specfun`.

Series helpers return ``nan`` when the mixing weights could not be summed
to ``1 - tail`` within ``max_terms`` terms.
"""

from math import erfc, exp, floor, inf, isinf, lgamma, log, log1p, nan, pi, sqrt

BACKEND = "python"

EPS = 1e-16
FPMIN = 1e-300
MAXIT = 100_000

SQRT1_2 = 0.7071067811865475244


def normal_cdf(z):
    return 0.5 * erfc(-z * SQRT1_2)


def _gamma_series(a, x):
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(MAXIT):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            break
    return total * exp(-x + a * log(x) - lgamma(a))


def _gamma_cfrac(a, x):
    # modified Lentz for the continued fraction of Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, MAXIT):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return exp(-x + a * log(x) - lgamma(a)) * h


def reg_lower_gamma(a, x):
    if x <= 0.0:
        return 0.0
    if isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(_gamma_series(a, x), 1.0)
    return max(1.0 - _gamma_cfrac(a, x), 0.0)


def _beta_cfrac(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAXIT):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return h


def inc_beta_xy(a, b, x, y):
    """I_x(a, b) where ``y = 1 - x`` is supplied separately for accuracy."""
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    lbt = lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log(y)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(exp(lbt) * _beta_cfrac(a, b, x) / a, 1.0)
    return max(1.0 - exp(lbt) * _beta_cfrac(b, a, y) / b, 0.0)


def reg_inc_beta(a, b, x):
    return inc_beta_xy(a, b, x, 1.0 - x)


def student_cdf(nu, t):
    if t == 0.0:
        return 0.5
    if isinf(t):
        return 1.0 if t > 0 else 0.0
    t2 = t * t
    tail = 0.5 * inc_beta_xy(0.5 * nu, 0.5, nu / (nu + t2), t2 / (nu + t2))
    return 1.0 - tail if t > 0 else tail


LN_SQRT_2PI = 0.918938533204672741780329736406
_S0, _S1, _S2, _S3, _S4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188


def stirlerr(n):
    """log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling remainder."""
    if n <= 15.0:
        return lgamma(n + 1.0) - (n + 0.5) * log(n) + n - LN_SQRT_2PI
    nn = n * n
    if n > 500.0:
        return (_S0 - _S1 / nn) / n
    if n > 80.0:
        return (_S0 - (_S1 - _S2 / nn) / nn) / n
    if n > 35.0:
        return (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / n
    return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / n


def bd0(x, np):
    """x log(x/np) + np - x without cancellation when x is close to np."""
    if abs(x - np) < 0.1 * (x + np):
        v = (x - np) / (x + np)
        total = (x - np) * v
        ej = 2.0 * x * v
        v = v * v
        j = 1
        while j < 1000:
            ej *= v
            nxt = total + ej / (2 * j + 1)
            if nxt == total:
                return nxt
            total = nxt
            j += 1
        return total
    return x * log(x / np) + np - x


def poisson_pmf(m, lam):
    """Poisson(lam) probability of m to full relative precision (saddle point form)."""
    if lam == 0.0:
        return 1.0 if m == 0 else 0.0
    if m == 0:
        return exp(-lam)
    return exp(-stirlerr(m) - bd0(m, lam)) / sqrt(2.0 * pi * m)


def nbinom_pmf(m, q, s):
    """Gamma(q+m)/(m! Gamma(q)) (1-s)^q s^m via the binomial saddle point form."""
    r = 1.0 - s
    if m == 0:
        return exp(q * log1p(-s))
    n = q + m
    lc = (stirlerr(n) - stirlerr(q) - stirlerr(m)
          - bd0(q, n * r) - bd0(m, n * s))
    lf = 2.0 * LN_SQRT_2PI + log(q) + log1p(-q / n)
    return q / n * exp(lc - 0.5 * lf)


def poisson_mode_weight(lam):
    m0 = floor(lam)
    return m0, poisson_pmf(m0, lam)


def _tail_bound(kind, q, s, lo, w_lo, w_hi, w_up):
    # Mass outside [lo, hi]. Weights are unimodal, so each of the lo weights
    # below is at most w_lo; above, successive ratios never exceed rho.
    rho = w_up / w_hi
    if kind == 1 and q < 1.0:
        rho = s
    if rho >= 1.0:
        return inf
    return lo * w_lo + w_hi * rho / (1.0 - rho)


def _walk(kind, a1, a2, tail, max_terms, term):
    """Sum ``w_m * term(m)`` walking outward from the mode of the weights.

    kind 0: Poisson weights with mean ``a1``.
    kind 1: negative-binomial weights Gamma(a2+m)/(m! Gamma(a2)) r^a2 s^m
            with ``s = a1`` and ``r = 1 - s``.
    """
    if kind == 0:
        lam = a1
        if lam == 0.0:
            return term(0)
        m0, w0 = poisson_mode_weight(lam)
    else:
        s, q = a1, a2
        if s == 0.0:
            return term(0)
        r = 1.0 - s
        m0 = floor((q - 1.0) * s / r) if q > 1.0 else 0.0
        w0 = nbinom_pmf(m0, q, s)
    lo = hi = int(m0)
    w_lo = w_hi = w0
    mass = w0
    acc = w0 * term(lo)
    target = 1.0 - tail
    n = 1
    while mass < target:
        if lo > 0:
            if kind == 0:
                w_down = w_lo * lo / lam
            else:
                w_down = w_lo * lo / ((q + lo - 1.0) * s)
        else:
            w_down = -1.0
        if kind == 0:
            w_up = w_hi * lam / (hi + 1.0)
        else:
            w_up = w_hi * (q + hi) / (hi + 1.0) * s
        if _tail_bound(kind, q if kind else 0.0, s if kind else 0.0,
                       lo, w_lo, w_hi, w_up) <= tail:
            break
        if n >= max_terms:
            return nan
        if w_down >= w_up:
            lo -= 1
            w_lo = w_down
            mass += w_down
            acc += w_down * term(lo)
        else:
            hi += 1
            w_hi = w_up
            mass += w_up
            acc += w_up * term(hi)
        n += 1
    return acc


def ncbeta_cdf(p, q, theta, y, tail, max_terms):
    """Beta-prime(p, q) CDF at ``y`` with Poisson(theta) shift of ``p``."""
    if y <= 0.0:
        return 0.0
    if isinf(y):
        return 1.0
    x = y / (1.0 + y)
    xc = 1.0 / (1.0 + y)
    return _walk(0, theta, 0.0, tail, max_terms,
                 lambda m: inc_beta_xy(p + m, q, x, xc))


def anova_series(p, q, t, u, theta, tail, max_terms):
    """1 - sum_m NB_m * I_{t/(theta+u+t)}(p+m, q+m)."""
    if t <= 0.0:
        # every incomplete-beta term vanishes
        return 1.0
    den = theta + u + t
    x = t / den
    xc = (theta + u) / den
    s = theta / (theta + u)
    total = _walk(1, s, q, tail, max_terms,
                  lambda m: inc_beta_xy(p + m, q + m, x, xc))
    return 1.0 - total


def chi2_one_series(lam, w, tail, max_terms):
    """Noncentral chi-square (1 df) CDF as a Poisson(lam^2/2) mix of gammas."""
    if w <= 0.0:
        return 0.0
    if isinf(w):
        return 1.0
    half = 0.5 * w
    return _walk(0, 0.5 * lam * lam, 0.0, tail, max_terms,
                 lambda m: reg_lower_gamma(0.5 + m, half))
