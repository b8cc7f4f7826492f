"""Pure-Python/numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` argument for argument and are used whenever the
compiled extension is unavailable or ``KICKEDTOPS_PURE_PYTHON`` is set.
"""
import numpy as np


def hyp3f2_series(a1, a2, a3, b1, b2, z, rtol=1e-14, max_terms=1_000_000):
    """Sum the 3F2 power series term by term.

    Returns ``(value, n_terms)``. Raises ``ArithmeticError`` if the relative
    increment never drops below ``rtol`` within ``max_terms`` terms.
    """
    total = 1.0
    term = 1.0
    for n in range(max_terms):
        term *= (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1.0)) * z
        total += term
        if abs(term) <= rtol * abs(total):
            return total, n + 2
    raise ArithmeticError(f"3F2 series did not converge within {max_terms} terms")


def spectral_entropies(spectra, neg_tol=1e-12):
    """Von Neumann and linear entropies for each row of ``spectra``.

    Rows are eigenvalue lists of density matrices. Entries in
    ``[-neg_tol, 0)`` are clamped to zero and every row is renormalised to unit
    sum before the entropies are taken. Returns ``(s_vn, s_lin)`` as float64
    arrays of length ``spectra.shape[0]``.
    """
    lam = np.array(spectra, dtype=np.float64, ndmin=2, copy=True)
    if lam.size and lam.min() < -neg_tol:
        raise ValueError(f"eigenvalue {lam.min():.3e} below clamp window -{neg_tol:g}")
    lam[lam < 0.0] = 0.0
    sums = lam.sum(axis=1)
    if np.any(sums <= 0.0):
        raise ValueError("spectrum with zero total weight")
    lam /= sums[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(lam > 0.0, lam * np.log(lam), 0.0)
    s_vn = -plogp.sum(axis=1)
    s_lin = 1.0 - (lam * lam).sum(axis=1)
    return s_vn, s_lin


def factored_trajectory(a0, coupling, u1, u2, steps):
    """Iterate ``A -> u1 @ (coupling * A) @ u2.T`` for ``steps`` periods.

    ``a0`` is the N x M amplitude matrix, ``coupling`` the N x M diagonal of the
    two-body phase, and ``u1``/``u2`` the single-top one-period unitaries.
    Returns a ``(steps + 1, N, M)`` complex array including the initial state.
    """
    a = np.ascontiguousarray(a0, dtype=np.complex128)
    c = np.ascontiguousarray(coupling, dtype=np.complex128)
    u1 = np.ascontiguousarray(u1, dtype=np.complex128)
    u2t = np.ascontiguousarray(np.transpose(u2), dtype=np.complex128)
    out = np.empty((steps + 1,) + a.shape, dtype=np.complex128)
    out[0] = a
    for t in range(1, steps + 1):
        out[t] = u1 @ (c * out[t - 1]) @ u2t
    return out


BACKEND = "python"

__all__ = ["hyp3f2_series", "spectral_entropies", "factored_trajectory", "BACKEND"]
