"""Backend dispatch for the hot kernels.

SGLSS_NUMBA=0 forces the pure-numpy path; otherwise the numba path is
used when numba imports cleanly, with numpy as the silent fallback.
"""

import os

from . import _numpy

_want_numba = os.environ.get("SGLSS_NUMBA", "1") != "0"

HAS_NUMBA = False
if _want_numba:
    try:
        from . import _numba

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

if HAS_NUMBA:
    BACKEND = "numba"
    matern52_gram = _numba.matern52_gram
    site_moments_logtheta = _numba.site_moments_logtheta
    tau_from_logtheta = _numba.tau_from_logtheta
    beta_from_moments = _numba.beta_from_moments
else:
    BACKEND = "numpy"
    matern52_gram = _numpy.matern52_gram
    site_moments_logtheta = _numpy.site_moments_logtheta
    tau_from_logtheta = _numpy.tau_from_logtheta
    beta_from_moments = _numpy.beta_from_moments

__all__ = [
    "BACKEND",
    "HAS_NUMBA",
    "matern52_gram",
    "site_moments_logtheta",
    "tau_from_logtheta",
    "beta_from_moments",
]
