"""Floquet eigenproblem, eigenstate entanglement, level spacings, symmetries."""
from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from .entanglement import entropies, rdm_eigenvalues
from .rmt import MPDensity, default_edges, histogram_spectra
from .spin import build_spin_operators, hermitian_expm

TWO_PI = 2 * np.pi


@dataclass(frozen=True, eq=False)
class FloquetSpectrum:
    """Eigenangles in [0, 2 pi), ascending, with matching eigenvector columns."""

    eigenangles: np.ndarray
    eigenstates: np.ndarray

    @property
    def dim(self):
        return self.eigenangles.size


def diagonalize_floquet(u):
    """Full eigendecomposition of a unitary matrix.

    Uses the complex Schur form, which for a normal matrix is diagonal and
    comes with an exactly unitary basis, so eigenvectors stay orthonormal even
    inside degenerate subspaces.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("expected a square matrix")
    t, z = linalg.schur(u, output="complex")
    angles = np.mod(np.angle(np.diag(t)), TWO_PI)
    # mod can return exactly 2 pi for angles a hair below zero.
    angles[angles >= TWO_PI] = 0.0
    order = np.argsort(angles, kind="stable")
    return FloquetSpectrum(angles[order], z[:, order])


def eigen_residuals(u, spec):
    """Per-column ``|U v - e^{i theta} v|_max``."""
    v = spec.eigenstates
    return np.max(np.abs(u @ v - v * np.exp(1j * spec.eigenangles)[None, :]), axis=0)


def _eigen_matrices(spec, n_dim, m_dim):
    d = spec.dim
    if d != n_dim * m_dim:
        raise ValueError(f"spectrum dimension {d} != {n_dim} x {m_dim}")
    return spec.eigenstates.T.reshape(d, n_dim, m_dim)


@dataclass(frozen=True)
class EigenstateEntanglement:
    mean_sv: float
    mean_sr: float
    se_sv: float
    se_sr: float
    s_vn: np.ndarray
    s_lin: np.ndarray


def eigenstate_entanglement_average(spec, n_dim, m_dim):
    """Unweighted mean S_V and S_R over all eigenstates (plus standard errors)."""
    s_vn, s_lin = entropies(_eigen_matrices(spec, n_dim, m_dim))
    root = np.sqrt(s_vn.size)
    se = lambda x: float(x.std(ddof=1) / root) if x.size > 1 else 0.0  # noqa: E731
    return EigenstateEntanglement(
        mean_sv=float(s_vn.mean()),
        mean_sr=float(s_lin.mean()),
        se_sv=se(s_vn),
        se_sr=se(s_lin),
        s_vn=s_vn,
        s_lin=s_lin,
    )


def pooled_eigenstate_rdm_spectrum(spec, n_dim, m_dim, bins=60, edges=None):
    """Histogram of all eigenstates' RDM eigenvalues against f(lam)'s support."""
    lam = rdm_eigenvalues(_eigen_matrices(spec, n_dim, m_dim))
    d = MPDensity.from_dims(n_dim, m_dim)
    if edges is None:
        edges = default_edges(d, bins)
    return histogram_spectra(lam, d, edges)


def wigner_surmise_pdf(s):
    s = np.asarray(s, dtype=float)
    return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s**2)


def wigner_surmise_cdf(s):
    s = np.asarray(s, dtype=float)
    return 1.0 - np.exp(-0.25 * np.pi * s**2)


def unfolded_spacings(angles):
    """Nearest-neighbour spacings on the circle, unfolded to unit mean.

    Includes the wrap-around gap, so ``d`` angles give ``d`` spacings.
    """
    theta = np.sort(np.mod(np.asarray(angles, dtype=float), TWO_PI))
    d = theta.size
    if d < 2:
        raise ValueError("need at least two eigenangles")
    gaps = np.diff(np.append(theta, theta[0] + TWO_PI))
    return gaps * d / TWO_PI


@dataclass(frozen=True)
class SpacingStats:
    spacings: np.ndarray
    edges: np.ndarray
    density: np.ndarray
    mean_spacing: float
    ks_distance: float
    n_sectors: int


def nnsd(angles_or_spec, sectors=None, bins=30, s_max=4.0):
    """Spacing histogram and Kolmogorov-Smirnov distance to the Wigner surmise.

    ``sectors`` optionally labels each eigenangle with a symmetry quantum
    number; spacings are then taken within each sector (unfolded by the
    sector's own size) and pooled.
    """
    angles = getattr(angles_or_spec, "eigenangles", angles_or_spec)
    angles = np.asarray(angles, dtype=float)
    if sectors is None:
        groups = [angles]
    else:
        sectors = np.asarray(sectors)
        if sectors.shape != angles.shape:
            raise ValueError("sector labels must match the eigenangles")
        groups = [angles[sectors == lab] for lab in np.unique(sectors)]
    spacings = np.concatenate([unfolded_spacings(g) for g in groups])
    edges = np.linspace(0.0, s_max, bins + 1)
    counts, _ = np.histogram(spacings, bins=edges)
    density = counts / (spacings.size * np.diff(edges))
    ks = stats.kstest(spacings, wigner_surmise_cdf).statistic
    return SpacingStats(
        spacings=spacings,
        edges=edges,
        density=density,
        mean_spacing=float(spacings.mean()),
        ks_distance=float(ks),
        n_sectors=len(groups),
    )


def parity_operator(j1, j2):
    """``R = exp(i pi Jy1) (x) exp(i pi Jy2)``, a pi turn of both tops about y."""
    r1 = hermitian_expm(build_spin_operators(j1).jy, 1j * np.pi)
    r2 = hermitian_expm(build_spin_operators(j2).jy, 1j * np.pi)
    return np.kron(r1, r2)


def commutant_residual(u, sym):
    """``|S U S^dagger - U|_max`` for a unitary symmetry candidate ``S``."""
    return float(np.max(np.abs(sym @ u @ sym.conj().T - u)))


def exchange_operator(n_dim):
    """SWAP of two equal tops in the product basis."""
    d = n_dim * n_dim
    idx = np.arange(d)
    swapped = (idx % n_dim) * n_dim + idx // n_dim
    p = np.zeros((d, d))
    p[swapped, idx] = 1.0
    return p


def time_reversal_unitary(j1, j2, form="xy"):
    """Unitary part ``V`` of the antiunitary ``T = V K``.

    ``form="xy"``:
    ``V = [exp(i pi Jx) exp(i pi Jy / 2)]`` on each top. This reverses the
    map only when the kick is even in ``Jz`` (``alpha = 0``).

    ``form="yz"``:
    ``V = [exp(-i pi Jy / 2) exp(i pi Jz)]`` on each top. It conjugates the
    (real, diagonal) kick and coupling to themselves and the precession to
    its inverse, so it holds for any ``alpha``.
    """
    if form not in ("xy", "yz"):
        raise ValueError(f"unknown time-reversal form {form!r}")
    parts = []
    for j in (j1, j2):
        ops = build_spin_operators(j)
        if form == "xy":
            parts.append(hermitian_expm(ops.jx, 1j * np.pi) @ hermitian_expm(ops.jy, 0.5j * np.pi))
        else:
            parts.append(hermitian_expm(ops.jy, -0.5j * np.pi) @ hermitian_expm(ops.jz, 1j * np.pi))
    return np.kron(*parts)


def time_reversal_check(u, j1, j2, form="xy"):
    """``|V conj(U) V^dagger - U^dagger|_max``; small means ``T U T^-1 = U^-1``."""
    v = time_reversal_unitary(j1, j2, form)
    u = np.asarray(u)
    return float(np.max(np.abs(v @ u.conj() @ v.conj().T - u.conj().T)))


def _degenerate_clusters(angles, tol):
    """Index groups of (circularly) consecutive angles closer than ``tol``."""
    d = angles.size
    if d == 0:
        return []
    breaks = np.diff(angles) > tol
    clusters, start = [], 0
    for i, brk in enumerate(breaks):
        if brk:
            clusters.append(list(range(start, i + 1)))
            start = i + 1
    clusters.append(list(range(start, d)))
    if len(clusters) > 1 and angles[0] + TWO_PI - angles[-1] <= tol:
        clusters[0] = clusters.pop() + clusters[0]
    return clusters


def resolve_symmetry(spec, sym, tol=1e-9):
    """Rotate degenerate eigenvectors into eigenvectors of ``sym``.

    Returns the adjusted spectrum and each column's ``sym`` eigenvalue
    ``<v|S|v>``. Non-degenerate eigenvectors of a commuting ``S`` are already
    ``S`` eigenvectors and are left untouched.
    """
    vecs = spec.eigenstates.copy()
    for idx in _degenerate_clusters(spec.eigenangles, tol):
        if len(idx) < 2:
            continue
        sub = vecs[:, idx]
        block = sub.conj().T @ sym @ sub
        _, w = linalg.schur(block, output="complex")
        vecs[:, idx] = sub @ w
    values = np.einsum("ij,ik,kj->j", vecs.conj(), sym, vecs)
    return FloquetSpectrum(spec.eigenangles, vecs), values


def parity_labels(spec, j1, j2, tol=1e-9):
    """+-1 parity of each eigenvector (after resolving degeneracies).

    ``R^2 = (-1)^(2 j1 + 2 j2)``, so the raw eigenvalues are +-1 or +-i; the
    labels divide out that common phase.
    """
    r = parity_operator(j1, j2)
    resolved, values = resolve_symmetry(spec, r, tol)
    base = 1.0 if int(round(2 * j1 + 2 * j2)) % 2 == 0 else 1j
    labels = np.where(np.real(values / base) >= 0.0, 1, -1)
    return resolved, labels, values
