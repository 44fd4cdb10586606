"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python ``_pycore`` module. Setting ``EXPERTVOTE_PURE_PYTHON=1`` forces
the fallback.
"""

import os

if os.environ.get("EXPERTVOTE_PURE_PYTHON", "") not in ("", "0"):
    from . import _pycore as _impl
else:
    try:
        from . import _core as _impl
    except ImportError:
        from . import _pycore as _impl

BACKEND = _impl.BACKEND

normal_cdf = _impl.normal_cdf
reg_lower_gamma = _impl.reg_lower_gamma
reg_inc_beta = _impl.reg_inc_beta
inc_beta_xy = _impl.inc_beta_xy
student_cdf = _impl.student_cdf
ncbeta_cdf = _impl.ncbeta_cdf
anova_series = _impl.anova_series
chi2_one_series = _impl.chi2_one_series
poisson_mode_weight = _impl.poisson_mode_weight
poisson_pmf = _impl.poisson_pmf
nbinom_pmf = _impl.nbinom_pmf
