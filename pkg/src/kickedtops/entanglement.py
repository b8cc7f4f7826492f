"""Reduced density matrices, Schmidt spectra and entanglement entropies.

Entropies are in nats.
"""
from dataclasses import dataclass

import numpy as np

from . import _core

CLAMP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Descending, clamped, unit-sum eigenvalues of the smaller RDM."""

    values: np.ndarray

    def __post_init__(self):
        lam = np.array(self.values, dtype=np.float64).ravel()
        lam = clamp_spectrum(lam)
        lam = np.sort(lam)[::-1].copy()
        lam.setflags(write=False)
        object.__setattr__(self, "values", lam)

    def __len__(self):
        return self.values.size


def clamp_spectrum(lam, tol=CLAMP_TOL):
    """Zero out tiny negatives (``>= -tol``) and renormalise to unit sum."""
    lam = np.array(lam, dtype=np.float64)
    if lam.size == 0:
        raise ValueError("empty spectrum")
    if lam.min(initial=0.0) < -tol:
        raise ValueError(f"eigenvalue {lam.min():.3e} below clamp window -{tol:g}")
    lam[lam < 0.0] = 0.0
    total = lam.sum(axis=-1, keepdims=True)
    if np.any(total <= 0.0):
        raise ValueError("spectrum with zero total weight")
    return lam / total


def reduced_density_matrix(psi, subsystem="first"):
    """``A A^dagger`` (first, N x N) or ``A^dagger A`` (second, M x M).

    For the second subsystem the transposed convention ``(A^dagger A)^T`` is
    the partial trace over the first factor; the two share a spectrum, and
    we return the transposed form so it matches an index-summed ``Tr_1``.
    """
    a = psi.matrix
    if subsystem == "first":
        rho = a @ a.conj().T
    elif subsystem == "second":
        rho = a.T @ a.conj()
    else:
        raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")
    return 0.5 * (rho + rho.conj().T)


def rdm_eigenvalues(matrices, subsystem="first"):
    """Raw ascending RDM eigenvalues for a stack of amplitude matrices.

    ``matrices`` has shape ``(..., N, M)``; the result has shape ``(..., N)``
    for ``first`` and ``(..., M)`` for ``second``.
    """
    a = np.asarray(matrices)
    if subsystem == "first":
        rho = a @ np.swapaxes(a.conj(), -1, -2)
    elif subsystem == "second":
        rho = np.swapaxes(a, -1, -2) @ a.conj()
    else:
        raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")
    return np.linalg.eigvalsh(rho)


def _smaller_side(n_dim, m_dim):
    return "first" if n_dim <= m_dim else "second"


def schmidt_spectrum(psi):
    lam = rdm_eigenvalues(psi.matrix, _smaller_side(psi.n_dim, psi.m_dim))
    return SchmidtSpectrum(lam)


def schmidt_spectra(matrices):
    """Clamped, renormalised, descending spectra for a stack ``(K, N, M)``."""
    a = np.asarray(matrices)
    lam = rdm_eigenvalues(a, _smaller_side(a.shape[-2], a.shape[-1]))
    return clamp_spectrum(lam)[..., ::-1]


def von_neumann_entropy(s):
    lam = s.values
    nz = lam[lam > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def linear_entropy(s):
    return float(1.0 - np.sum(s.values**2))


def entropies(matrices):
    """``(S_V, S_R)`` arrays for a stack of amplitude matrices ``(K, N, M)``.

    Uses the batched kernel; this is the path for trajectories, eigenstate
    ensembles and Monte Carlo samples.
    """
    a = np.asarray(matrices)
    if a.ndim == 2:
        a = a[None]
    lam = rdm_eigenvalues(a, _smaller_side(a.shape[-2], a.shape[-1]))
    return _core.spectral_entropies(lam.reshape(-1, lam.shape[-1]), CLAMP_TOL)
