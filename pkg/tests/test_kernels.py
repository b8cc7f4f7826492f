import math

import mpmath
import numpy as np
import pytest

from kickedtops._core import _fallback

try:
    from kickedtops._core import _kernels
except ImportError:  # extension not built
    _kernels = None

BACKENDS = [pytest.param(_fallback, id="python")]
BACKENDS.append(
    pytest.param(
        _kernels,
        id="cython",
        marks=pytest.mark.skipif(_kernels is None, reason="extension not built"),
    )
)


@pytest.fixture(params=BACKENDS)
def impl(request):
    return request.param


@pytest.mark.parametrize(
    "params",
    [
        (1.0, 1.0, 1.5, 2.0, 3.0, 0.5),
        (1.0, 1.0, 1.5, 2.0, 3.0, 0.96),
        (0.5, 2.0, 1.5, 3.0, 4.5, 0.3),
        (1.0, 1.0, 1.5, 2.0, 3.0, 4 * 8 / 81),
    ],
)
def test_hyp3f2_matches_mpmath(impl, params):
    value, _ = impl.hyp3f2_series(*params)
    expected = float(mpmath.hyp3f2(*params))
    assert value == pytest.approx(expected, rel=1e-13)


def test_hyp3f2_unit_argument(impl):
    # gamma(1) = exp(-1/2) forces 3F2(1,1,3/2;2,3;1) = 8(ln 2 - 1/2).
    value, nterms = impl.hyp3f2_series(1.0, 1.0, 1.5, 2.0, 3.0, 1.0)
    assert value == pytest.approx(8 * (math.log(2) - 0.5), abs=1e-8)
    assert value == pytest.approx(float(mpmath.hyp3f2(1, 1, 1.5, 2, 3, 1)), abs=1e-8)
    assert nterms > 1000


def test_hyp3f2_zero_argument(impl):
    assert impl.hyp3f2_series(1.0, 1.0, 1.5, 2.0, 3.0, 0.0)[0] == 1.0


def test_hyp3f2_term_cap(impl):
    with pytest.raises(ArithmeticError):
        impl.hyp3f2_series(1.0, 1.0, 1.5, 2.0, 3.0, 1.0, 1e-14, 50)


def test_spectral_entropies_known_rows(impl):
    spectra = np.array(
        [
            [1.0, 0.0, 0.0],
            [1 / 3, 1 / 3, 1 / 3],
            [0.5, 0.25, 0.25],
            [0.5, 0.5, -1e-13],
        ]
    )
    s_vn, s_lin = impl.spectral_entropies(spectra, 1e-12)
    np.testing.assert_allclose(s_vn, [0.0, math.log(3), 1.5 * math.log(2), math.log(2)], atol=1e-14)
    np.testing.assert_allclose(s_lin, [0.0, 2 / 3, 1 - 0.375, 0.5], atol=1e-14)


def test_spectral_entropies_rejects_large_negative(impl):
    with pytest.raises(ValueError):
        impl.spectral_entropies(np.array([[1.0, -1e-6]]), 1e-12)


def test_spectral_entropies_does_not_mutate_input(impl):
    spectra = np.array([[0.6, 0.4, -1e-14]])
    before = spectra.copy()
    impl.spectral_entropies(spectra, 1e-12)
    np.testing.assert_array_equal(spectra, before)


def _random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.mark.parametrize("shape", [(1, 1), (2, 3), (5, 5), (4, 9)])
def test_factored_trajectory_matches_dense(impl, shape):
    rng = np.random.default_rng(7)
    n, m = shape
    a0 = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    a0 /= np.linalg.norm(a0)
    coupling = np.exp(1j * rng.uniform(0, 2 * np.pi, shape))
    u1, u2 = _random_unitary(rng, n), _random_unitary(rng, m)
    out = impl.factored_trajectory(a0, coupling, u1, u2, 6)
    dense = np.kron(u1, u2) @ np.diag(coupling.ravel())
    psi = a0.ravel()
    for t in range(7):
        np.testing.assert_allclose(out[t].ravel(), psi, atol=1e-13)
        psi = dense @ psi


def test_backends_agree():
    if _kernels is None:
        pytest.skip("extension not built")
    rng = np.random.default_rng(3)
    spectra = rng.dirichlet(np.ones(8), size=50)
    for a, b in zip(_fallback.spectral_entropies(spectra), _kernels.spectral_entropies(spectra)):
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-15)
    args = (1.0, 1.0, 1.5, 2.0, 3.0, 0.999)
    assert _fallback.hyp3f2_series(*args) == _kernels.hyp3f2_series(*args)


def test_backend_selection_env(monkeypatch):
    import importlib

    import kickedtops._core as core

    monkeypatch.setenv("KICKEDTOPS_PURE_PYTHON", "1")
    try:
        reloaded = importlib.reload(core)
        assert reloaded.BACKEND == "python"
    finally:
        monkeypatch.delenv("KICKEDTOPS_PURE_PYTHON")
        importlib.reload(core)
