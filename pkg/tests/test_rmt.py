import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kickedtops import rmt
from kickedtops.rmt import MPDensity

log_q = st.floats(min_value=0.0, max_value=2.0).map(lambda x: 10.0**x)


def test_support_endpoints():
    d = MPDensity(13, 4.0)
    assert d.lambda_min == pytest.approx(0.25 / 13, rel=1e-15)
    assert d.lambda_max == pytest.approx(2.25 / 13, rel=1e-15)
    assert d.lambda_max - d.lambda_min == pytest.approx(d.width, rel=1e-14)
    assert MPDensity(7, 1.0).lambda_min == 0.0
    assert MPDensity.from_dims(13, 52) == d


@pytest.mark.parametrize("n, q", [(0, 1.0), (5, 0.5), (5, math.inf), (5, math.nan)])
def test_density_rejects(n, q):
    with pytest.raises(ValueError):
        MPDensity(n, q)


def test_density_values():
    d = MPDensity(10, 2.0)
    mid = 0.5 * (d.lambda_min + d.lambda_max)
    expected = 10 * 2 / (2 * math.pi) * math.sqrt((d.lambda_max - mid) * (mid - d.lambda_min)) / mid
    assert rmt.mp_density_at(d, mid) == pytest.approx(expected, rel=1e-14)
    assert rmt.mp_density_at(d, d.lambda_min / 2) == 0.0
    assert rmt.mp_density_at(d, 2 * d.lambda_max) == 0.0
    assert rmt.mp_density_at(MPDensity(10, 1.0), 0.0) == math.inf


@settings(max_examples=30, deadline=None)
@given(log_q, st.integers(1, 64))
def test_density_normalisation_and_moments(q, n):
    d = MPDensity(n, q)
    assert rmt.mp_normalization(d) == pytest.approx(1.0, abs=1e-8)
    # Unit trace: mean eigenvalue 1/N. Purity: N <lam^2> = (1 + 1/Q)/N.
    assert rmt.mp_moment(d, 1) * n == pytest.approx(1.0, abs=1e-8)
    assert rmt.mp_moment(d, 2) * n * n == pytest.approx(1.0 + 1.0 / q, abs=1e-8)


@pytest.mark.parametrize("q", [1 + 1e-12, 1 + 1e-9, 10.0**1e-5, 1 + 1e-3])
def test_normalisation_just_above_unit_ratio(q):
    # lam_min is tiny but nonzero: the integrand has a very narrow edge at u ~ 0.
    for n in (1, 33):
        d = MPDensity(n, q)
        assert rmt.mp_normalization(d) == pytest.approx(1.0, abs=1e-8)
        assert rmt.mp_moment(d, 2) * n * n == pytest.approx(1.0 + 1.0 / q, abs=1e-8)
        assert rmt.mp_bin_masses(d, rmt.default_edges(d, 60)).sum() == pytest.approx(1.0, abs=1e-8)


def test_bin_masses_sum_to_one():
    d = MPDensity(32, 1.0)
    masses = rmt.mp_bin_masses(d, rmt.default_edges(d, 60))
    assert masses.sum() == pytest.approx(1.0, abs=1e-8)
    assert np.all(masses >= 0)
    assert masses[0] == masses.max()


def test_hyp3f2_validation():
    with pytest.raises(ValueError):
        rmt.hyp3f2_series(1, 1, 1.5, 0, 3, 0.5)
    with pytest.raises(ValueError):
        rmt.hyp3f2_series(1, 1, 1.5, 2, 3, 1.01)
    with pytest.raises(ValueError):
        rmt.hyp3f2_series(1, 1, 3, 2, 3, 1.0)


def test_gamma_at_one():
    assert rmt.gamma_factor(1) == pytest.approx(math.exp(-0.5), abs=1e-8)


@pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 32.0, 100.0])
def test_gamma_three_ways(q):
    # Closed form (series), quadrature of the density, and the exact value
    # exp(-1/(2Q)) obtained by integrating -lam ln lam against f analytically.
    g = rmt.gamma_factor(q)
    n = 33
    bound = rmt.entropy_bound_quadrature(MPDensity(n, q))
    assert math.log(g * n) == pytest.approx(bound, abs=1e-8)
    assert g == pytest.approx(math.exp(-1 / (2 * q)), abs=1e-8)
    z = 4 * q / (q + 1) ** 2
    ref = q / (q + 1) * mpmath.exp(q / (2 * (q + 1) ** 2) * mpmath.hyp3f2(1, 1, 1.5, 2, 3, z))
    assert g == pytest.approx(float(ref), abs=1e-8)


def test_gamma_monotone_to_one():
    qs = [1, 1.5, 2, 4, 10, 100, 1e4]
    gs = [rmt.gamma_factor(q) for q in qs]
    assert all(a < b for a, b in zip(gs, gs[1:]))
    assert gs[-1] == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(ValueError):
        rmt.gamma_factor(0.5)


def test_mean_linear_entropy_values():
    assert rmt.mean_linear_entropy(16, 16) == pytest.approx(1 - 33 / 258, abs=1e-15)
    assert rmt.mean_linear_entropy(1, 1) == 0.0
    # Single qubit pair: purity of a real random state in R^2 x R^2.
    assert rmt.mean_linear_entropy(2, 2) == pytest.approx(1 - 5 / 6)


def test_page_formula_small_values():
    assert rmt.page_mean_entropy(1, 5) == pytest.approx(0.0, abs=1e-15)
    assert rmt.page_mean_entropy(2, 2) == pytest.approx(1 / 3 + 1 / 4 - 1 / 4)  # sum_{k=3}^{4} 1/k - 1/4


def test_sample_random_state_deterministic():
    a = rmt.sample_random_state(3, 4, "real", 7)
    b = rmt.sample_random_state(3, 4, "real", 7)
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
    assert np.all(a.amplitudes.imag == 0)
    c = rmt.sample_random_state(3, 4, "complex", 7)
    assert np.any(c.amplitudes.imag != 0)
    with pytest.raises(ValueError):
        rmt.sample_random_state(4, 3, "real", 0)
    with pytest.raises(ValueError):
        rmt.sample_random_state(2, 3, "quaternion", 0)


def test_monte_carlo_linear_entropy_real():
    mc = rmt.monte_carlo_mean_entropies(8, 8, "real", 3000, seed=1)
    target = rmt.mean_linear_entropy(8, 8)
    assert abs(mc.mean_sr - target) <= 3 * mc.se_sr


def test_monte_carlo_page_complex():
    for n, m in [(4, 4), (4, 12)]:
        mc = rmt.monte_carlo_mean_entropies(n, m, "complex", 3000, seed=2)
        assert abs(mc.mean_sv - rmt.page_mean_entropy(n, m)) <= 3 * mc.se_sv


def test_monte_carlo_independent_of_workers():
    a = rmt.monte_carlo_mean_entropies(5, 10, "real", 700, seed=3, workers=1)
    b = rmt.monte_carlo_mean_entropies(5, 10, "real", 700, seed=3, workers=3)
    assert a == b
    assert rmt.monte_carlo_mean_entropies(5, 10, "real", 700, seed=4) != a


def test_standard_error_shrinks_like_root_trials():
    small = rmt.monte_carlo_mean_entropies(6, 6, "real", 400, seed=5)
    large = rmt.monte_carlo_mean_entropies(6, 6, "real", 6400, seed=5)
    assert small.se_sr / large.se_sr == pytest.approx(4.0, rel=0.15)


def test_monte_carlo_needs_trials():
    with pytest.raises(ValueError):
        rmt.monte_carlo_mean_entropies(2, 2, "real", 1)
    with pytest.raises(ValueError):
        rmt.monte_carlo_rdm_histogram(2, 2, "real", 0)


def test_histogram_one_by_one():
    h = rmt.monte_carlo_rdm_histogram(1, 1, "real", 5, bins=10)
    assert h.n_values == 5
    assert h.n_out_of_range == 0
    masses = h.density * h.widths
    assert masses.sum() == pytest.approx(1.0)
    hit = np.searchsorted(h.edges, 1.0, side="right") - 1
    assert masses[hit] == pytest.approx(1.0)


def test_histogram_accounting():
    d = MPDensity(10, 1.0)
    edges = rmt.default_edges(d, 20)
    vals = np.array([0.01, 0.02, 0.5, 2.0])
    h = rmt.histogram_spectra(vals, d, edges)
    assert h.n_out_of_range == 2
    assert np.sum(h.density * h.widths) == pytest.approx(0.5)
    assert h.support_leakage == pytest.approx(0.5)
    assert h.below_min == 0.0


def test_l1_distance_shrinks_with_samples():
    d = MPDensity(16, 1.0)
    small = rmt.l1_to_mp(rmt.monte_carlo_rdm_histogram(16, 16, "complex", 20, 30, seed=6), d)
    large = rmt.l1_to_mp(rmt.monte_carlo_rdm_histogram(16, 16, "complex", 2000, 30, seed=6), d)
    assert large < small / 2
