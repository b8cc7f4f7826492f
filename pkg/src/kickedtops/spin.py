"""Spin-j angular momentum matrices and the single-top factors of the map.

All matrices are in the ``|j, m>`` basis with ``m`` running from ``j`` down
to ``-j``. Units have hbar = 1 and a unit kick period.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True, eq=False)
class SpinOperators:
    """Angular momentum matrices for a single spin ``j``."""

    j: float
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def dim(self):
        return self.jz.shape[0]

    @property
    def m(self):
        """Magnetic quantum numbers, descending."""
        return np.real(np.diag(self.jz))


def as_spin(j):
    """Validate ``j`` as a positive half-integer and return it as a float."""
    try:
        twice = Fraction(j) * 2
    except (TypeError, ValueError):
        raise ValueError(f"spin must be a number, got {j!r}") from None
    if twice.denominator != 1 or twice <= 0:
        raise ValueError(f"spin must be a positive half-integer, got {j!r}")
    return float(twice) / 2


def build_spin_operators(j):
    """Return ``SpinOperators`` for spin ``j``.

    ``jx = (J+ + J-)/2`` and ``jy = (J+ - J-)/(2i)`` with the standard ladder
    elements ``<m+1|J+|m> = sqrt(j(j+1) - m(m+1))``.
    """
    j = as_spin(j)
    m = np.arange(j, -j - 1, -1.0)
    # J+ raises m, so in descending order it sits on the first superdiagonal.
    ladder = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jplus = np.diag(ladder, 1).astype(np.complex128)
    jminus = jplus.conj().T
    jx = 0.5 * (jplus + jminus)
    jy = -0.5j * (jplus - jminus)
    jz = np.diag(m).astype(np.complex128)
    for mat in (jx, jy, jz):
        mat.setflags(write=False)
    return SpinOperators(j=j, jx=jx, jy=jy, jz=jz)


def hermitian_expm(generator, scale):
    """``exp(scale * H)`` for Hermitian ``H`` and complex ``scale``, via eigh."""
    evals, vecs = np.linalg.eigh(generator)
    return (vecs * np.exp(scale * evals)) @ vecs.conj().T


def free_precession_unitary(ops):
    """``exp(-i (pi/2) Jy)``, a quarter turn about the y axis."""
    return hermitian_expm(ops.jy, -0.5j * np.pi)


def kick_phases(ops, k, alpha):
    """Diagonal of the torsion kick ``exp(-i k (Jz + alpha)^2 / 2j)``."""
    if not (np.isfinite(k) and np.isfinite(alpha)):
        raise ValueError("kick strength and phase must be finite")
    return np.exp(-1j * k * (ops.m + alpha) ** 2 / (2 * ops.j))


def kick_unitary(ops, k, alpha):
    """Torsion kick about z as a dense diagonal matrix."""
    return np.diag(kick_phases(ops, k, alpha))


def coupling_phases(ops1, ops2, epsilon):
    """N x M array of ``exp(-i eps m1 m2 / sqrt(j1 j2))``.

    Flattened in C order this is the diagonal of the two-body kick in the
    product basis ``idx = row(m1) * M + row(m2)``.
    """
    if not np.isfinite(epsilon):
        raise ValueError("coupling strength must be finite")
    scale = epsilon / np.sqrt(ops1.j * ops2.j)
    return np.exp(-1j * scale * np.outer(ops1.m, ops2.m))


def coupling_unitary(ops1, ops2, epsilon):
    """Two-body spin-spin kick as a dense (N*M) x (N*M) diagonal matrix."""
    return np.diag(coupling_phases(ops1, ops2, epsilon).ravel())


def unitarity_defect(u):
    """Max-abs entry of ``U^dagger U - I``."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
