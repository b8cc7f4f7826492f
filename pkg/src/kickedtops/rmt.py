"""Random bipartite states and the large-N predictions for their RDM spectra.

The eigenvalue density of an N x N reduced density matrix of a random state
in C^N (x) C^M, with Q = M/N, is

    f(lam) = N Q / (2 pi) * sqrt((lam_max - lam)(lam - lam_min)) / lam,
    lam_max/min = (1 + 1/Q +- 2/sqrt(Q)) / N,

normalised so that ``N f(lam) dlam`` counts eigenvalues. Its entropy
``-N int f lam ln lam`` equals ``ln(gamma(Q) N)``, with ``gamma`` given in
closed form through 3F2(1, 1, 3/2; 2, 3; 4Q/(Q+1)^2).
"""
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import _core
from .entanglement import entropies, rdm_eigenvalues
from .tops import BipartiteState

QUAD_TOL = 1e-9


class EnsembleKind(str, enum.Enum):
    """Gaussian amplitude class: real (orthogonal) or complex (unitary)."""

    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class MPDensity:
    n_dim: float
    q_ratio: float

    def __post_init__(self):
        if not self.n_dim >= 1:
            raise ValueError(f"N must be >= 1, got {self.n_dim}")
        if not (self.q_ratio >= 1 and np.isfinite(self.q_ratio)):
            raise ValueError(f"Q must be finite and >= 1, got {self.q_ratio}")

    @classmethod
    def from_dims(cls, n_dim, m_dim):
        return cls(n_dim, m_dim / n_dim)

    @property
    def lambda_min(self):
        q = self.q_ratio
        # (1 - 1/sqrt(Q))^2 avoids cancellation near Q = 1.
        return (1.0 - 1.0 / math.sqrt(q)) ** 2 / self.n_dim

    @property
    def lambda_max(self):
        q = self.q_ratio
        return (1.0 + 1.0 / math.sqrt(q)) ** 2 / self.n_dim

    @property
    def width(self):
        return 4.0 / (math.sqrt(self.q_ratio) * self.n_dim)

    def _u_of(self, lam):
        x = np.clip((np.asarray(lam, dtype=float) - self.lambda_min) / self.width, 0.0, 1.0)
        return np.arcsin(np.sqrt(x))

    def _mass_integrand(self, u):
        # f(lam) dlam under lam = lam_min + width sin^2 u.
        s2 = math.sin(u) ** 2
        c2 = 1.0 - s2
        pref = self.n_dim * self.q_ratio / math.pi * self.width
        if self.lambda_min == 0.0:
            return pref * c2
        return pref * self.width * s2 * c2 / (self.lambda_min + self.width * s2)

    def _mass_breakpoints(self):
        # For 0 < lam_min << width the mass integrand rises from 0 to its bulk
        # value within u ~ sqrt(lam_min / width); quad can step over that
        # edge and still report a tiny error, so mark its scale explicitly.
        if self.lambda_min == 0.0:
            return ()
        scale = math.sqrt(self.lambda_min / self.width)
        return tuple(scale * f for f in (1.0, 10.0, 100.0, 1000.0) if scale * f < 0.1)

    def _lam_integrand(self, u, power, with_log):
        # lam^power f(lam) [ln lam] dlam, for power >= 1 (no 1/lam left).
        s2 = math.sin(u) ** 2
        lam = self.lambda_min + self.width * s2
        val = self.n_dim * self.q_ratio / math.pi * self.width**2 * s2 * (1.0 - s2)
        val *= lam ** (power - 1)
        if with_log:
            val *= math.log(lam) if lam > 0.0 else 0.0
        return val


def _quad(func, a, b, args=(), points=()):
    inner = [p for p in points if a < p < b] or None
    val, err = integrate.quad(
        func, a, b, args=args, epsabs=1e-14, epsrel=1e-12, limit=200, points=inner
    )
    if not err <= QUAD_TOL:
        raise ArithmeticError(f"quadrature did not reach {QUAD_TOL:g} (error estimate {err:.2e})")
    return val


def mp_density_at(d, lam):
    """Evaluate f(lam); zero off the support, ``inf`` at lam = 0 when Q = 1."""
    lam = np.asarray(lam, dtype=float)
    lo, hi = d.lambda_min, d.lambda_max
    inside = (lam >= lo) & (lam <= hi)
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.sqrt(np.clip((hi - lam) * (lam - lo), 0.0, None))
        val = d.n_dim * d.q_ratio / (2 * np.pi) * root / lam
    val = np.where(inside, val, 0.0)
    if lo == 0.0:
        val = np.where(lam == 0.0, np.inf, val)
    return val[()] if val.ndim == 0 else val


def mp_normalization(d):
    """Integral of f over its support (should be 1)."""
    return _quad(d._mass_integrand, 0.0, math.pi / 2, points=d._mass_breakpoints())


def mp_moment(d, power=1):
    """``int lam^power f(lam) dlam`` for ``power >= 1``."""
    if power < 1:
        raise ValueError("power must be >= 1")
    return _quad(d._lam_integrand, 0.0, math.pi / 2, args=(power, False))


def entropy_bound_quadrature(d):
    """``-N int f(lam) lam ln(lam) dlam`` by adaptive quadrature."""
    integral = _quad(d._lam_integrand, 0.0, math.pi / 2, args=(1, True))
    return -d.n_dim * integral


def mp_bin_masses(d, edges):
    """Probability mass of f inside each histogram bin."""
    edges = np.asarray(edges, dtype=float)
    us = d._u_of(edges)
    return np.array(
        [
            _quad(d._mass_integrand, a, b, points=d._mass_breakpoints()) if b > a else 0.0
            for a, b in zip(us[:-1], us[1:])
        ]
    )


def hyp3f2_series(a1, a2, a3, b1, b2, z):
    """Generalised hypergeometric 3F2(a1, a2, a3; b1, b2; z) for 0 <= z <= 1.

    Summed directly until the relative increment drops below 1e-14 (at most
    10^6 terms). At ``z = 1`` the series needs ``b1 + b2 - a1 - a2 - a3 > 0``.
    The tail at ``z = 1`` decays algebraically; for (1, 1, 3/2; 2, 3) the
    truncation error is a few parts in 10^9.
    """
    for b in (b1, b2):
        if b <= 0 and float(b).is_integer():
            raise ValueError(f"lower parameter {b} is a non-positive integer")
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    if z == 1.0 and b1 + b2 + 1 - a1 - a2 - a3 <= 1:
        raise ValueError("series diverges at z = 1 for these parameters")
    value, _ = _core.hyp3f2_series(
        float(a1), float(a2), float(a3), float(b1), float(b2), float(z), 1e-14, 1_000_000
    )
    return value


def gamma_factor(q):
    """The constant ``gamma(Q)`` in the typical entanglement ``ln(gamma N)``."""
    q = float(q)
    if not (q >= 1.0 and math.isfinite(q)):
        raise ValueError(f"Q must be finite and >= 1, got {q}")
    z = 4 * q / (q + 1) ** 2
    # Rounding can push z a hair above 1 right at Q = 1.
    z = min(z, 1.0)
    f32 = hyp3f2_series(1.0, 1.0, 1.5, 2.0, 3.0, z)
    return q / (q + 1) * math.exp(q / (2 * (q + 1) ** 2) * f32)


def mean_linear_entropy(n_dim, m_dim):
    """Ensemble-average linear entropy ``1 - (M + N + 1)/(MN + 2)``, real states."""
    if n_dim < 1 or m_dim < 1:
        raise ValueError("dimensions must be >= 1")
    return 1.0 - (m_dim + n_dim + 1) / (m_dim * n_dim + 2)


def page_mean_entropy(n_dim, m_dim):
    """Exact mean von Neumann entropy of Haar-random (complex) states.

    ``sum_{k=M+1}^{NM} 1/k - (N-1)/(2M)`` with ``N <= M``. Used as an
    independent oracle for the complex ensemble.
    """
    n, m = sorted((int(n_dim), int(m_dim)))
    k = np.arange(m + 1, n * m + 1, dtype=float)
    return float(np.sum(1.0 / k) - (n - 1) / (2 * m))


def _draw(rng, size, kind):
    kind = EnsembleKind(kind)
    if kind is EnsembleKind.REAL:
        return rng.standard_normal(size).astype(np.complex128)
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def _check_dims(n_dim, m_dim):
    if not 1 <= n_dim <= m_dim:
        raise ValueError(f"need 1 <= N <= M, got N={n_dim}, M={m_dim}")


def sample_random_state(n_dim, m_dim, kind, seed):
    """Normalised Gaussian random state, deterministic in ``seed``."""
    _check_dims(n_dim, m_dim)
    amps = _draw(np.random.default_rng(seed), n_dim * m_dim, kind)
    return BipartiteState(n_dim, m_dim, amps / np.linalg.norm(amps))


def _trial_matrices(n_dim, m_dim, kind, seed, trial_ids):
    # One child stream per trial index so results do not depend on chunking.
    root = np.random.SeedSequence(seed)
    out = np.empty((len(trial_ids), n_dim, m_dim), dtype=np.complex128)
    for row, trial in enumerate(trial_ids):
        child = np.random.SeedSequence(root.entropy, spawn_key=(int(trial),))
        amps = _draw(np.random.default_rng(child), n_dim * m_dim, kind)
        out[row] = (amps / np.linalg.norm(amps)).reshape(n_dim, m_dim)
    return out


def _map_chunks(func, trials, chunk, workers):
    starts = range(0, trials, chunk)
    ids = [np.arange(s, min(s + chunk, trials)) for s in starts]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(func, ids))
    return [func(i) for i in ids]


@dataclass(frozen=True)
class Histogram:
    """Density-normalised histogram of pooled RDM eigenvalues.

    ``density`` is normalised by the *total* number of pooled values, so mass
    falling outside ``edges`` is lost rather than redistributed.
    """

    edges: np.ndarray
    density: np.ndarray
    n_values: int
    n_out_of_range: int
    support_leakage: float
    below_min: float

    @property
    def centers(self):
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def widths(self):
        return np.diff(self.edges)


def default_edges(d, bins=60):
    if bins < 2:
        raise ValueError("need at least 2 bins")
    return np.linspace(0.0, 1.2 * d.lambda_max, bins + 1)


def histogram_spectra(values, d, edges):
    """Pool eigenvalues into ``edges`` and measure leakage outside the MP support."""
    values = np.asarray(values, dtype=float).ravel()
    counts, _ = np.histogram(values, bins=edges)
    n = values.size
    density = counts / (n * np.diff(edges))
    eps = 1e-12
    below = values < d.lambda_min - eps
    outside = below | (values > d.lambda_max + eps)
    return Histogram(
        edges=np.asarray(edges, dtype=float),
        density=density,
        n_values=n,
        n_out_of_range=int(n - counts.sum()),
        support_leakage=float(outside.mean()),
        below_min=float(below.mean()),
    )


def l1_to_mp(hist, d):
    """L1 distance between the histogram and f, compared bin by bin."""
    masses = mp_bin_masses(d, hist.edges)
    outside_mass = max(0.0, 1.0 - masses.sum())
    return float(np.sum(np.abs(hist.density * hist.widths - masses)) + outside_mass)


def monte_carlo_rdm_histogram(n_dim, m_dim, kind, trials, bins=60, seed=0, workers=1):
    """Histogram of the pooled Schmidt spectra of ``trials`` random states."""
    _check_dims(n_dim, m_dim)
    if trials < 1:
        raise ValueError("need at least one trial")
    d = MPDensity.from_dims(n_dim, m_dim)
    edges = default_edges(d, bins)

    def chunk(ids):
        return rdm_eigenvalues(_trial_matrices(n_dim, m_dim, kind, seed, ids))

    lam = np.concatenate([c.ravel() for c in _map_chunks(chunk, trials, 256, workers)])
    return histogram_spectra(lam, d, edges)


@dataclass(frozen=True)
class EnsembleMeans:
    mean_sv: float
    mean_sr: float
    se_sv: float
    se_sr: float
    trials: int


def monte_carlo_mean_entropies(n_dim, m_dim, kind, trials, seed=0, workers=1):
    """Sample means and standard errors of S_V and S_R over random states."""
    _check_dims(n_dim, m_dim)
    if trials < 2:
        raise ValueError("need at least two trials for a standard error")

    def chunk(ids):
        return entropies(_trial_matrices(n_dim, m_dim, kind, seed, ids))

    parts = _map_chunks(chunk, trials, 256, workers)
    sv = np.concatenate([p[0] for p in parts])
    sr = np.concatenate([p[1] for p in parts])
    root_n = math.sqrt(trials)
    return EnsembleMeans(
        mean_sv=float(sv.mean()),
        mean_sr=float(sr.mean()),
        se_sv=float(sv.std(ddof=1) / root_n),
        se_sr=float(sr.std(ddof=1) / root_n),
        trials=trials,
    )
