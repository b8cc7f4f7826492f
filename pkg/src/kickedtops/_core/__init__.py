"""Hot kernels with a compiled backend and a numpy fallback.

The Cython extension ``_kernels`` is preferred. If it was not built, or the
environment variable ``KICKEDTOPS_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python versions in ``_fallback`` are used instead.
Both expose:

hyp3f2_series(a1, a2, a3, b1, b2, z, rtol, max_terms) -> (value, n_terms)
spectral_entropies(spectra, neg_tol) -> (s_vn, s_lin)
factored_trajectory(a0, coupling, u1, u2, steps) -> states
"""
import os

from . import _fallback

_force_python = os.environ.get("KICKEDTOPS_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback

hyp3f2_series = _impl.hyp3f2_series
spectral_entropies = _impl.spectral_entropies
factored_trajectory = _impl.factored_trajectory
BACKEND = _impl.BACKEND

__all__ = ["hyp3f2_series", "spectral_entropies", "factored_trajectory", "BACKEND"]
