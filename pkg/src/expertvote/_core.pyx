# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Line-for-line port of ``_pycore``; both modules must return the same values
for the same arguments (checked by the backend parity tests).
"""

from libc.math cimport erfc, exp, floor, isinf, lgamma, log, log1p, fabs, sqrt, M_PI, NAN, INFINITY

BACKEND = "cython"

cdef double EPS = 1e-16
cdef double FPMIN = 1e-300
cdef long MAXIT = 100000
cdef double SQRT1_2 = 0.7071067811865475244

# term selectors for the mixture walk
cdef enum:
    TERM_BETA_P = 0      # I(p+m, q)
    TERM_BETA_PQ = 1     # I(p+m, q+m)
    TERM_GAMMA = 2       # P(p+m, x)


cpdef double normal_cdf(double z):
    return 0.5 * erfc(-z * SQRT1_2)


cdef double _gamma_series(double a, double x):
    cdef double ap = a
    cdef double term = 1.0 / a
    cdef double total = term
    cdef long i
    for i in range(MAXIT):
        ap += 1.0
        term *= x / ap
        total += term
        if fabs(term) < fabs(total) * EPS:
            break
    return total * exp(-x + a * log(x) - lgamma(a))


cdef double _gamma_cfrac(double a, double x):
    cdef double b = x + 1.0 - a
    cdef double c = 1.0 / FPMIN
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta
    cdef long i
    for i in range(1, MAXIT):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if fabs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return exp(-x + a * log(x) - lgamma(a)) * h


cpdef double reg_lower_gamma(double a, double x):
    if x <= 0.0:
        return 0.0
    if isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(_gamma_series(a, x), 1.0)
    return max(1.0 - _gamma_cfrac(a, x), 0.0)


cdef double _beta_cfrac(double a, double b, double x):
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef long m, m2
    if fabs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAXIT):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return h


cpdef double inc_beta_xy(double a, double b, double x, double y):
    """I_x(a, b) where ``y = 1 - x`` is supplied separately for accuracy."""
    cdef double lbt
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    lbt = lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log(y)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(exp(lbt) * _beta_cfrac(a, b, x) / a, 1.0)
    return max(1.0 - exp(lbt) * _beta_cfrac(b, a, y) / b, 0.0)


cpdef double reg_inc_beta(double a, double b, double x):
    return inc_beta_xy(a, b, x, 1.0 - x)


cpdef double student_cdf(double nu, double t):
    cdef double t2, tail
    if t == 0.0:
        return 0.5
    if isinf(t):
        return 1.0 if t > 0 else 0.0
    t2 = t * t
    tail = 0.5 * inc_beta_xy(0.5 * nu, 0.5, nu / (nu + t2), t2 / (nu + t2))
    return 1.0 - tail if t > 0 else tail


cdef double LN_SQRT_2PI = 0.918938533204672741780329736406
cdef double S0 = 1.0 / 12.0, S1 = 1.0 / 360.0, S2 = 1.0 / 1260.0
cdef double S3 = 1.0 / 1680.0, S4 = 1.0 / 1188.0


cpdef double stirlerr(double n):
    """log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling remainder."""
    cdef double nn
    if n <= 15.0:
        return lgamma(n + 1.0) - (n + 0.5) * log(n) + n - LN_SQRT_2PI
    nn = n * n
    if n > 500.0:
        return (S0 - S1 / nn) / n
    if n > 80.0:
        return (S0 - (S1 - S2 / nn) / nn) / n
    if n > 35.0:
        return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    return (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n


cpdef double bd0(double x, double np):
    """x log(x/np) + np - x without cancellation when x is close to np."""
    cdef double v, total, ej, nxt
    cdef int j
    if fabs(x - np) < 0.1 * (x + np):
        v = (x - np) / (x + np)
        total = (x - np) * v
        ej = 2.0 * x * v
        v = v * v
        for j in range(1, 1000):
            ej *= v
            nxt = total + ej / (2 * j + 1)
            if nxt == total:
                return nxt
            total = nxt
        return total
    return x * log(x / np) + np - x


cpdef double poisson_pmf(double m, double lam):
    """Poisson(lam) probability of m to full relative precision (saddle point form)."""
    if lam == 0.0:
        return 1.0 if m == 0.0 else 0.0
    if m == 0.0:
        return exp(-lam)
    return exp(-stirlerr(m) - bd0(m, lam)) / sqrt(2.0 * M_PI * m)


cpdef double nbinom_pmf(double m, double q, double s):
    """Gamma(q+m)/(m! Gamma(q)) (1-s)^q s^m via the binomial saddle point form."""
    cdef double r = 1.0 - s
    cdef double n, lc, lf
    if m == 0.0:
        return exp(q * log1p(-s))
    n = q + m
    lc = (stirlerr(n) - stirlerr(q) - stirlerr(m)
          - bd0(q, n * r) - bd0(m, n * s))
    lf = 2.0 * LN_SQRT_2PI + log(q) + log1p(-q / n)
    return q / n * exp(lc - 0.5 * lf)


def poisson_mode_weight(double lam):
    cdef double m0 = floor(lam)
    return m0, poisson_pmf(m0, lam)


cdef inline double _term(int which, long m, double p, double q,
                         double x, double y):
    if which == TERM_BETA_P:
        return inc_beta_xy(p + m, q, x, y)
    if which == TERM_BETA_PQ:
        return inc_beta_xy(p + m, q + m, x, y)
    return reg_lower_gamma(p + m, x)


cdef inline double _tail_bound(int kind, double q, double s, long lo,
                               double w_lo, double w_hi, double w_up):
    # mass outside [lo, hi]; see _pycore._tail_bound
    cdef double rho = w_up / w_hi
    if kind == 1 and q < 1.0:
        rho = s
    if rho >= 1.0:
        return INFINITY
    return lo * w_lo + w_hi * rho / (1.0 - rho)


cdef double _walk(int kind, double a1, double a2, double tail, long max_terms,
                  int which, double p, double q, double x, double y):
    cdef double lam = 0.0, s = 0.0, r, qq = 0.0
    cdef double m0, w0, w_lo, w_hi, w_down, w_up, mass, acc, target
    cdef long lo, hi, n
    if kind == 0:
        lam = a1
        if lam == 0.0:
            return _term(which, 0, p, q, x, y)
        m0 = floor(lam)
        w0 = poisson_pmf(m0, lam)
    else:
        s = a1
        qq = a2
        if s == 0.0:
            return _term(which, 0, p, q, x, y)
        r = 1.0 - s
        m0 = floor((qq - 1.0) * s / r) if qq > 1.0 else 0.0
        w0 = nbinom_pmf(m0, qq, s)
    lo = <long>m0
    hi = lo
    w_lo = w0
    w_hi = w0
    mass = w0
    acc = w0 * _term(which, lo, p, q, x, y)
    target = 1.0 - tail
    n = 1
    while mass < target:
        if lo > 0:
            if kind == 0:
                w_down = w_lo * lo / lam
            else:
                w_down = w_lo * lo / ((qq + lo - 1.0) * s)
        else:
            w_down = -1.0
        if kind == 0:
            w_up = w_hi * lam / (hi + 1.0)
        else:
            w_up = w_hi * (qq + hi) / (hi + 1.0) * s
        if _tail_bound(kind, qq, s, lo, w_lo, w_hi, w_up) <= tail:
            break
        if n >= max_terms:
            return NAN
        if w_down >= w_up:
            lo -= 1
            w_lo = w_down
            mass += w_down
            acc += w_down * _term(which, lo, p, q, x, y)
        else:
            hi += 1
            w_hi = w_up
            mass += w_up
            acc += w_up * _term(which, hi, p, q, x, y)
        n += 1
    return acc


cpdef double ncbeta_cdf(double p, double q, double theta, double y,
                        double tail, long max_terms):
    """Beta-prime(p, q) CDF at ``y`` with Poisson(theta) shift of ``p``."""
    if y <= 0.0:
        return 0.0
    if isinf(y):
        return 1.0
    return _walk(0, theta, 0.0, tail, max_terms, TERM_BETA_P,
                 p, q, y / (1.0 + y), 1.0 / (1.0 + y))


cpdef double anova_series(double p, double q, double t, double u, double theta,
                          double tail, long max_terms):
    """1 - sum_m NB_m * I_{t/(theta+u+t)}(p+m, q+m)."""
    cdef double den, total
    if t <= 0.0:
        return 1.0
    den = theta + u + t
    total = _walk(1, theta / (theta + u), q, tail, max_terms, TERM_BETA_PQ,
                  p, q, t / den, (theta + u) / den)
    return 1.0 - total


cpdef double chi2_one_series(double lam, double w, double tail, long max_terms):
    """Noncentral chi-square (1 df) CDF as a Poisson(lam^2/2) mix of gammas."""
    if w <= 0.0:
        return 0.0
    if isinf(w):
        return 1.0
    return _walk(0, 0.5 * lam * lam, 0.0, tail, max_terms, TERM_GAMMA,
                 0.5, 0.0, 0.5 * w, 0.0)
