"""Two coupled kicked tops: Floquet operator, initial states, time evolution.

Bipartite amplitudes are stored flat with index ``row(m1) * M + row(m2)``
(both ``m`` descending), so ``amplitudes.reshape(N, M)`` is the amplitude
matrix ``A`` without a copy.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .spin import (
    as_spin,
    build_spin_operators,
    coupling_phases,
    free_precession_unitary,
    hermitian_expm,
    kick_phases,
)

log = logging.getLogger(__name__)

NORM_TOL = 1e-10
RENORM_TRIGGER = 1e-12


@dataclass(frozen=True)
class TopConfig:
    """Physical parameters of the coupled-top map.

    The first top is always the smaller one (``N = 2 j1 + 1 <= M = 2 j2 + 1``).
    """

    j1: float
    j2: float
    k: float
    epsilon: float
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "j1", as_spin(self.j1))
        object.__setattr__(self, "j2", as_spin(self.j2))
        if self.j1 > self.j2:
            raise ValueError(f"need j1 <= j2 (N <= M), got j1={self.j1}, j2={self.j2}")
        for name in ("k", "epsilon", "alpha1", "alpha2"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def n_dim(self):
        return int(round(2 * self.j1)) + 1

    @property
    def m_dim(self):
        return int(round(2 * self.j2)) + 1

    @property
    def dim(self):
        return self.n_dim * self.m_dim

    @property
    def q_ratio(self):
        return self.m_dim / self.n_dim


@dataclass(frozen=True, eq=False)
class BipartiteState:
    n_dim: int
    m_dim: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).ravel()
        if amps.size != self.n_dim * self.m_dim:
            raise ValueError(
                f"{amps.size} amplitudes cannot be split as {self.n_dim} x {self.m_dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalised (norm = {norm:.15g})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def matrix(self):
        """The N x M amplitude matrix ``A`` (a view)."""
        return self.amplitudes.reshape(self.n_dim, self.m_dim)


@dataclass(frozen=True)
class FloquetFactors:
    """The pieces of one period: ``U_T = (U1 (x) U2) diag(coupling)``.

    ``u1``/``u2`` already include their kicks (``U_i = U_i^f U_i^k``).
    """

    u1: np.ndarray
    u2: np.ndarray
    coupling: np.ndarray

    def dense(self):
        return np.kron(self.u1, self.u2) * self.coupling.ravel()[None, :]


def floquet_factors(cfg):
    ops1 = build_spin_operators(cfg.j1)
    ops2 = build_spin_operators(cfg.j2)
    u1 = free_precession_unitary(ops1) * kick_phases(ops1, cfg.k, cfg.alpha1)[None, :]
    u2 = free_precession_unitary(ops2) * kick_phases(ops2, cfg.k, cfg.alpha2)[None, :]
    return FloquetFactors(u1=u1, u2=u2, coupling=coupling_phases(ops1, ops2, cfg.epsilon))


def build_floquet(cfg):
    """Dense one-period Floquet operator of dimension ``N*M``.

    Acting on a state, the coupling kick is applied first, then the single
    top kicks, then the free precessions.
    """
    return floquet_factors(cfg).dense()


def coherent_state(j, theta, phi):
    """Spin coherent state ``exp(i theta (Jx sin phi - Jy cos phi)) |j, j>``."""
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    if not 0.0 <= phi < 2 * np.pi:
        raise ValueError(f"phi must lie in [0, 2 pi), got {phi}")
    ops = build_spin_operators(j)
    gen = ops.jx * np.sin(phi) - ops.jy * np.cos(phi)
    rot = hermitian_expm(gen, 1j * theta)
    vec = rot[:, 0].copy()
    return vec / np.linalg.norm(vec)


def product_state(v1, v2):
    v1 = np.asarray(v1, dtype=np.complex128).ravel()
    v2 = np.asarray(v2, dtype=np.complex128).ravel()
    for name, v in (("v1", v1), ("v2", v2)):
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise ValueError(f"{name} is not normalised")
    return BipartiteState(v1.size, v2.size, np.outer(v1, v2).ravel())


def maximally_entangled_state(n_dim, m_dim):
    """``sum_m |m>|m> / sqrt(N)`` over the N shared top-most basis rows.

    Both factors are indexed from the top (``m = j`` first), so for ``N < M``
    the diagonal pairs row ``i`` of the small top with row ``i`` of the large.
    """
    if n_dim < 1 or n_dim > m_dim:
        raise ValueError(f"need 1 <= N <= M, got N={n_dim}, M={m_dim}")
    a = np.zeros((n_dim, m_dim), dtype=np.complex128)
    a[np.arange(n_dim), np.arange(n_dim)] = 1.0 / np.sqrt(n_dim)
    return BipartiteState(n_dim, m_dim, a.ravel())


class Trajectory:
    """States ``psi_0 ... psi_T`` of a stroboscopic evolution.

    Indexing yields ``BipartiteState``; ``states`` is the raw ``(T+1, d)``
    array and ``renormalizations`` counts steps where norm drift exceeded
    ``1e-12`` and the state was rescaled.
    """

    def __init__(self, states, n_dim, m_dim, renormalizations=0):
        self.states = states
        self.n_dim = n_dim
        self.m_dim = m_dim
        self.renormalizations = renormalizations

    def __len__(self):
        return self.states.shape[0]

    def __getitem__(self, t):
        return BipartiteState(self.n_dim, self.m_dim, self.states[t])

    def __iter__(self):
        return (self[t] for t in range(len(self)))

    def matrices(self):
        """``(T+1, N, M)`` view of the amplitude matrices."""
        return self.states.reshape(len(self), self.n_dim, self.m_dim)


def _renormalize(states):
    norms = np.linalg.norm(states, axis=-1)
    drift = np.abs(norms - 1.0) > RENORM_TRIGGER
    states[drift] /= norms[drift, None]
    return int(drift.sum())


def evolve(u, psi0, steps):
    """Iterate ``psi -> U psi`` ``steps`` times by matrix-vector products."""
    u = np.asarray(u)
    d = psi0.amplitudes.size
    if u.shape != (d, d):
        raise ValueError(f"operator shape {u.shape} does not act on dimension {d}")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    states = np.empty((steps + 1, d), dtype=np.complex128)
    states[0] = psi0.amplitudes
    renorms = 0
    psi = states[0]
    for t in range(1, steps + 1):
        psi = u @ psi
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > RENORM_TRIGGER:
            psi = psi / norm
            renorms += 1
        states[t] = psi
    if renorms:
        log.debug("renormalised %d of %d steps", renorms, steps)
    return Trajectory(states, psi0.n_dim, psi0.m_dim, renorms)


def evolve_factored(factors, psi0, steps):
    """Same map as ``evolve`` but applied factor by factor on the N x M matrix.

    Costs ``O(NM(N+M))`` per step instead of ``O(N^2 M^2)`` and never forms
    the dense Floquet matrix. Uses the compiled stepper when available.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if factors.coupling.shape != (psi0.n_dim, psi0.m_dim):
        raise ValueError("factor dimensions do not match the state")
    mats = _core.factored_trajectory(
        psi0.matrix, factors.coupling, factors.u1, factors.u2, steps
    )
    states = mats.reshape(steps + 1, -1)
    renorms = _renormalize(states[1:])
    return Trajectory(states, psi0.n_dim, psi0.m_dim, renorms)
