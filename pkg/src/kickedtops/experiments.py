"""Experiment runners behind the command line.

Each ``run_*`` function is pure computation and returns a result object;
``write_*`` turns a result into a CSV (with ``#`` metadata header) plus a
JSON summary. Keeping the two apart lets the acceptance tests drive the
runners directly.
"""
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from . import rmt
from .entanglement import entropies
from .output import summary_path, write_csv, write_json
from .spectral import (
    diagonalize_floquet,
    eigenstate_entanglement_average,
    nnsd,
    parity_labels,
    pooled_eigenstate_rdm_spectrum,
    wigner_surmise_pdf,
)
from .tops import (
    TopConfig,
    build_floquet,
    coherent_state,
    evolve,
    evolve_factored,
    floquet_factors,
    maximally_entangled_state,
    product_state,
)

DEFAULT_DIM_CAP = 4000


class DimensionCapError(RuntimeError):
    """Requested Hilbert space is larger than the configured cap."""


def _check_cap(dim, cap):
    if dim > cap:
        raise DimensionCapError(
            f"Hilbert space dimension {dim} exceeds the cap {cap}; raise --dim-cap to allow it"
        )


def _pmap(func, items, workers):
    if workers and workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(func, items))
    return [func(x) for x in items]


def _metadata(command, cfg, **extra):
    meta = {"kickedtops": __version__, "command": command}
    meta.update(asdict(cfg))
    meta.update(extra)
    return meta


# -- evolve -------------------------------------------------------------------


@dataclass(frozen=True)
class EvolveConfig:
    j1: float = 10
    j2: float = 10
    k: float = 3.0
    epsilon: float = 0.1
    alpha1: float = 0.47
    alpha2: float = 0.47
    steps: int = 4000
    initial: str = "product"
    theta: float = 2.25
    phi: float = 1.1
    window_start: int = None
    stepper: str = "dense"
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if self.initial not in ("product", "entangled"):
            raise ValueError(f"initial must be 'product' or 'entangled', got {self.initial!r}")
        if self.stepper not in ("dense", "factored"):
            raise ValueError(f"stepper must be 'dense' or 'factored', got {self.stepper!r}")
        if self.window_start is None:
            object.__setattr__(self, "window_start", self.steps // 2)
        if not 0 <= self.window_start <= self.steps:
            raise ValueError("window_start must lie in [0, steps]")
        self.top()

    def top(self):
        return TopConfig(self.j1, self.j2, self.k, self.epsilon, self.alpha1, self.alpha2)


def reference_values(n_dim, m_dim):
    q = m_dim / n_dim
    return {
        "ln_0p6N": math.log(0.6 * n_dim),
        "ln_gammaN": math.log(rmt.gamma_factor(q) * n_dim),
        "ln_N": math.log(n_dim),
        "linear_1_minus_2_over_N": 1.0 - 2.0 / n_dim,
        "linear_1_minus_1_over_N": 1.0 - 1.0 / n_dim,
        "linear_rmt_mean": rmt.mean_linear_entropy(n_dim, m_dim),
    }


@dataclass
class EvolveResult:
    config: EvolveConfig
    t: np.ndarray
    s_vn: np.ndarray
    s_lin: np.ndarray
    renormalizations: int
    plateau: dict
    references: dict


def run_evolve(cfg):
    top = cfg.top()
    _check_cap(top.dim, cfg.dim_cap)
    if cfg.initial == "product":
        psi0 = product_state(
            coherent_state(top.j1, cfg.theta, cfg.phi),
            coherent_state(top.j2, cfg.theta, cfg.phi),
        )
    else:
        psi0 = maximally_entangled_state(top.n_dim, top.m_dim)
    if cfg.stepper == "dense":
        traj = evolve(build_floquet(top), psi0, cfg.steps)
    else:
        traj = evolve_factored(floquet_factors(top), psi0, cfg.steps)
    s_vn, s_lin = entropies(traj.matrices())
    win = slice(cfg.window_start, None)
    plateau = {
        "window_start": cfg.window_start,
        "window_length": int(s_vn[win].size),
        "s_vn_mean": float(s_vn[win].mean()),
        "s_vn_std": float(s_vn[win].std()),
        "s_lin_mean": float(s_lin[win].mean()),
        "s_lin_std": float(s_lin[win].std()),
    }
    return EvolveResult(
        config=cfg,
        t=np.arange(cfg.steps + 1),
        s_vn=s_vn,
        s_lin=s_lin,
        renormalizations=traj.renormalizations,
        plateau=plateau,
        references=reference_values(top.n_dim, top.m_dim),
    )


def write_evolve(res, out):
    meta = _metadata("evolve", res.config, renormalizations=res.renormalizations)
    csv = write_csv(out, {"t": res.t, "s_vn": res.s_vn, "s_lin": res.s_lin}, meta)
    js = write_json(
        summary_path(out),
        {"metadata": meta, "plateau": res.plateau, "references": res.references},
    )
    return [csv, js]


# -- Q sweeps (eigenstates, rdm-spectrum, nnsd) --------------------------------


@dataclass(frozen=True)
class SweepConfig:
    j1: float = 6
    k: float = 9.0
    epsilon: float = 10.0
    alpha1: float = 0.47
    alpha2: float = 0.47
    q_list: tuple = (1, 2, 3, 4)
    trials: int = 2000
    bins: int = 60
    seed: int = 0
    ensemble: str = "real"
    dim_cap: int = DEFAULT_DIM_CAP
    parity_variants: bool = False
    split_parity: bool = False
    diagnostic: str = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "q_list", tuple(self.q_list))
        if not self.q_list:
            raise ValueError("q_list is empty")
        rmt.EnsembleKind(self.ensemble)
        if self.bins < 2:
            raise ValueError("need at least 2 bins")
        if self.diagnostic not in (None, "picket", "poisson"):
            raise ValueError(f"unknown diagnostic mode {self.diagnostic!r}")
        for q in self.q_list:
            self.dims(q)

    @property
    def n_dim(self):
        return TopConfig(self.j1, self.j1, 0.0, 0.0).n_dim

    def dims(self, q):
        n = self.n_dim
        m = q * n
        if q < 1 or abs(m - round(m)) > 1e-9:
            raise ValueError(f"Q = {q} does not give an integer M >= N for N = {n}")
        return n, int(round(m))

    def top(self, q, alpha1=None, alpha2=None):
        n, m = self.dims(q)
        return TopConfig(
            self.j1,
            (m - 1) / 2,
            self.k,
            self.epsilon,
            self.alpha1 if alpha1 is None else alpha1,
            self.alpha2 if alpha2 is None else alpha2,
        )

    def check_caps(self):
        for q in self.q_list:
            n, m = self.dims(q)
            _check_cap(n * m, self.dim_cap)


def _eigen_row(cfg, q, alpha1, alpha2):
    top = cfg.top(q, alpha1, alpha2)
    n, m = top.n_dim, top.m_dim
    spec = diagonalize_floquet(build_floquet(top))
    ent = eigenstate_entanglement_average(spec, n, m)
    row = {
        "q": q,
        "n": n,
        "m": m,
        "alpha1": top.alpha1,
        "alpha2": top.alpha2,
        "mean_s_vn": ent.mean_sv,
        "se_s_vn": ent.se_sv,
        "mean_s_lin": ent.mean_sr,
        "se_s_lin": ent.se_sr,
        "gamma": rmt.gamma_factor(m / n),
        "ln_gammaN": math.log(rmt.gamma_factor(m / n) * n),
        "ln_N": math.log(n),
        "s_lin_rmt": rmt.mean_linear_entropy(n, m),
    }
    if cfg.trials >= 2:
        mc = rmt.monte_carlo_mean_entropies(n, m, cfg.ensemble, cfg.trials, cfg.seed)
        row.update(
            mc_mean_s_vn=mc.mean_sv,
            mc_se_s_vn=mc.se_sv,
            mc_mean_s_lin=mc.mean_sr,
            mc_se_s_lin=mc.se_sr,
        )
    else:
        row.update(mc_mean_s_vn=math.nan, mc_se_s_vn=math.nan,
                   mc_mean_s_lin=math.nan, mc_se_s_lin=math.nan)
    return row


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list


def run_eigenstates(cfg):
    """Spectrally averaged eigenstate entanglement for each Q, with theory and RMT."""
    cfg.check_caps()
    points = [(q, cfg.alpha1, cfg.alpha2) for q in cfg.q_list]
    if cfg.parity_variants:
        points += [(q, 0.0, 0.0) for q in cfg.q_list]
    rows = _pmap(lambda p: _eigen_row(cfg, *p), points, cfg.workers)
    return SweepResult(cfg, rows)


def write_eigenstates(res, out):
    meta = _metadata("eigenstates", res.config)
    names = list(res.rows[0])
    cols = {n: [r[n] for r in res.rows] for n in names}
    csv = write_csv(out, cols, meta)
    js = write_json(summary_path(out), {"metadata": meta, "rows": res.rows})
    return [csv, js]


@dataclass
class RdmSpectrumBlock:
    q: float
    n: int
    m: int
    edges: np.ndarray
    kicked: rmt.Histogram
    monte_carlo: rmt.Histogram
    theory_bin_density: np.ndarray
    l1_kicked: float
    l1_monte_carlo: float
    below_min_kicked: float
    below_min_monte_carlo: float
    curve_lambda: np.ndarray
    curve_density: np.ndarray


def _rdm_block(cfg, q):
    top = cfg.top(q)
    n, m = top.n_dim, top.m_dim
    d = rmt.MPDensity.from_dims(n, m)
    edges = rmt.default_edges(d, cfg.bins)
    spec = diagonalize_floquet(build_floquet(top))
    kicked = pooled_eigenstate_rdm_spectrum(spec, n, m, edges=edges)
    mc = rmt.monte_carlo_rdm_histogram(n, m, cfg.ensemble, cfg.trials, cfg.bins, cfg.seed)
    masses = rmt.mp_bin_masses(d, edges)
    grid = np.linspace(0.0, edges[-1], 401)[1:]
    return RdmSpectrumBlock(
        q=q,
        n=n,
        m=m,
        edges=edges,
        kicked=kicked,
        monte_carlo=mc,
        theory_bin_density=masses / np.diff(edges),
        l1_kicked=rmt.l1_to_mp(kicked, d),
        l1_monte_carlo=rmt.l1_to_mp(mc, d),
        below_min_kicked=kicked.below_min,
        below_min_monte_carlo=mc.below_min,
        curve_lambda=grid,
        curve_density=rmt.mp_density_at(d, grid),
    )


@dataclass
class RdmSpectrumResult:
    config: SweepConfig
    blocks: list


def run_rdm_spectrum(cfg):
    """Pooled eigenstate RDM spectra vs Monte Carlo vs f(lam), per Q."""
    if cfg.trials < 1:
        raise ValueError("rdm-spectrum needs at least one Monte Carlo trial")
    cfg.check_caps()
    blocks = _pmap(lambda q: _rdm_block(cfg, q), list(cfg.q_list), cfg.workers)
    return RdmSpectrumResult(cfg, blocks)


def write_rdm_spectrum(res, out):
    meta = _metadata("rdm-spectrum", res.config)
    cols = {k: [] for k in (
        "q", "bin_left", "bin_right", "kicked_density", "monte_carlo_density", "theory_density"
    )}
    curve = {"q": [], "lambda": [], "f": []}
    summary = []
    for b in res.blocks:
        nb = b.edges.size - 1
        cols["q"] += [b.q] * nb
        cols["bin_left"] += list(b.edges[:-1])
        cols["bin_right"] += list(b.edges[1:])
        cols["kicked_density"] += list(b.kicked.density)
        cols["monte_carlo_density"] += list(b.monte_carlo.density)
        cols["theory_density"] += list(b.theory_bin_density)
        curve["q"] += [b.q] * b.curve_lambda.size
        curve["lambda"] += list(b.curve_lambda)
        curve["f"] += list(b.curve_density)
        d = rmt.MPDensity.from_dims(b.n, b.m)
        summary.append({
            "q": b.q, "n": b.n, "m": b.m,
            "lambda_min": d.lambda_min, "lambda_max": d.lambda_max,
            "l1_kicked": b.l1_kicked, "l1_monte_carlo": b.l1_monte_carlo,
            "leakage_kicked": b.kicked.support_leakage,
            "leakage_monte_carlo": b.monte_carlo.support_leakage,
            "below_min_kicked": b.below_min_kicked,
            "below_min_monte_carlo": b.below_min_monte_carlo,
        })
    csv = write_csv(out, cols, meta)
    curve_csv = write_csv(summary_path(out, "_theory").with_suffix(".csv"), curve, meta)
    js = write_json(summary_path(out), {"metadata": meta, "per_q": summary})
    return [csv, curve_csv, js]


@dataclass
class NnsdResult:
    config: SweepConfig
    q: float
    stats: object
    warnings: list = field(default_factory=list)


def run_nnsd(cfg):
    """Level spacing statistics for the first Q of the sweep (or a diagnostic)."""
    notes = []
    q = cfg.q_list[0]
    sectors = None
    if cfg.diagnostic == "picket":
        angles = np.linspace(0.0, 2 * np.pi, 600, endpoint=False)
    elif cfg.diagnostic == "poisson":
        angles = np.random.default_rng(cfg.seed).uniform(0.0, 2 * np.pi, 600)
    else:
        top = cfg.top(q)
        _check_cap(top.dim, cfg.dim_cap)
        spec = diagonalize_floquet(build_floquet(top))
        parity_intact = top.alpha1 == 0.0 and top.alpha2 == 0.0
        if parity_intact and cfg.split_parity:
            spec, sectors, _ = parity_labels(spec, top.j1, top.j2)
        elif parity_intact:
            msg = "alpha1 = alpha2 = 0 without --split-parity: parity sectors are mixed"
            notes.append(msg)
            warnings.warn(msg, stacklevel=2)
        if top.j1 == top.j2 and top.alpha1 == top.alpha2:
            msg = "j1 = j2 and alpha1 = alpha2: exchange symmetry leaves sectors mixed"
            notes.append(msg)
            warnings.warn(msg, stacklevel=2)
        angles = spec.eigenangles
    stats = nnsd(angles, sectors=sectors, bins=cfg.bins)
    return NnsdResult(cfg, q, stats, notes)


def write_nnsd(res, out):
    meta = _metadata("nnsd", res.config, q=res.q, warnings=res.warnings)
    s = res.stats
    centers = 0.5 * (s.edges[1:] + s.edges[:-1])
    csv = write_csv(
        out,
        {
            "bin_left": s.edges[:-1],
            "bin_right": s.edges[1:],
            "density": s.density,
            "wigner_density": wigner_surmise_pdf(centers),
        },
        meta,
    )
    sp = write_csv(summary_path(out, "_spacings").with_suffix(".csv"), {"s": s.spacings}, meta)
    js = write_json(
        summary_path(out),
        {
            "metadata": meta,
            "ks_distance": s.ks_distance,
            "mean_spacing": s.mean_spacing,
            "n_spacings": int(s.spacings.size),
            "n_sectors": s.n_sectors,
        },
    )
    return [csv, sp, js]


# -- theory ---------------------------------------------------------------------


@dataclass(frozen=True)
class TheoryConfig:
    q_list: tuple = (1, 2, 3, 4)
    n: int = 33
    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "q_list", tuple(self.q_list))
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        for q in self.q_list:
            if not q >= 1:
                raise ValueError(f"Q must be >= 1, got {q}")
        if self.n < 1:
            raise ValueError("N must be >= 1")
        for n, m in self.pairs:
            if not 1 <= n <= m:
                raise ValueError(f"pair {n}x{m} needs 1 <= N <= M")


@dataclass
class TheoryResult:
    config: TheoryConfig
    rows: list


def _theory_row(n, m, q):
    d = rmt.MPDensity(n, q)
    g = rmt.gamma_factor(q)
    return {
        "q": q,
        "n": n,
        "m": m,
        "gamma": g,
        "ln_gammaN": math.log(g * n),
        "lambda_min": d.lambda_min,
        "lambda_max": d.lambda_max,
        "s_lin_rmt": rmt.mean_linear_entropy(n, m),
    }


def run_theory(cfg):
    rows = [_theory_row(cfg.n, q * cfg.n, q) for q in cfg.q_list]
    rows += [_theory_row(n, m, m / n) for n, m in cfg.pairs]
    return TheoryResult(cfg, rows)


def write_theory(res, out):
    meta = _metadata("theory", res.config)
    names = list(res.rows[0]) if res.rows else []
    csv = write_csv(out, {n: [r[n] for r in res.rows] for n in names}, meta)
    js = write_json(summary_path(out), {"metadata": meta, "rows": res.rows})
    return [csv, js]
