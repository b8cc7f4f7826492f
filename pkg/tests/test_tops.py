import numpy as np
import pytest
from scipy.linalg import expm

from kickedtops.entanglement import entropies
from kickedtops.spin import build_spin_operators, unitarity_defect
from kickedtops.tops import (
    BipartiteState,
    TopConfig,
    build_floquet,
    coherent_state,
    evolve,
    evolve_factored,
    floquet_factors,
    maximally_entangled_state,
    product_state,
)


def test_config_properties():
    cfg = TopConfig(6, 25.5, 9.0, 10.0, 0.47, 0.47)
    assert (cfg.n_dim, cfg.m_dim, cfg.dim) == (13, 52, 676)
    assert cfg.q_ratio == 4.0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(j1=2, j2=1, k=1.0, epsilon=1.0),
        dict(j1=0.3, j2=1, k=1.0, epsilon=1.0),
        dict(j1=1, j2=1, k=np.nan, epsilon=1.0),
        dict(j1=1, j2=1, k=1.0, epsilon=np.inf),
    ],
)
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        TopConfig(**kwargs)


def test_bipartite_state_validation():
    with pytest.raises(ValueError):
        BipartiteState(2, 2, np.ones(4))
    with pytest.raises(ValueError):
        BipartiteState(2, 3, np.ones(4) / 2)
    psi = BipartiteState(2, 3, np.arange(6) / np.linalg.norm(np.arange(6)))
    assert psi.matrix.shape == (2, 3)
    assert np.shares_memory(psi.matrix, psi.amplitudes)


def test_floquet_spin_half_pair_by_hand():
    # Oracle: explicit products of Pade exponentials of the generators.
    cfg = TopConfig(0.5, 0.5, 1.3, 0.7, 0.2, -0.1)
    s = build_spin_operators(0.5)
    eye = np.eye(2)
    h1 = cfg.k / (2 * 0.5) * (s.jz + 0.2 * eye) @ (s.jz + 0.2 * eye)
    h2 = cfg.k / (2 * 0.5) * (s.jz - 0.1 * eye) @ (s.jz - 0.1 * eye)
    u1 = expm(-0.5j * np.pi * s.jy) @ expm(-1j * h1)
    u2 = expm(-0.5j * np.pi * s.jy) @ expm(-1j * h2)
    u12 = expm(-1j * cfg.epsilon / 0.5 * np.kron(s.jz, s.jz))
    np.testing.assert_allclose(build_floquet(cfg), np.kron(u1, u2) @ u12, atol=1e-13)


def test_floquet_is_unitary():
    cfg = TopConfig(6, 12.5, 9.0, 10.0, 0.47, 0.47)
    u = build_floquet(cfg)
    assert u.shape == (338, 338)
    assert unitarity_defect(u) <= 1e-10


@pytest.mark.parametrize("j", [0.5, 1, 3.5, 10])
def test_coherent_state_expectations(j):
    theta, phi = 2.25, 1.1
    ops = build_spin_operators(j)
    v = coherent_state(j, theta, phi)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-14)
    expect = [np.vdot(v, op @ v).real for op in (ops.jx, ops.jy, ops.jz)]
    direction = [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    np.testing.assert_allclose(expect, j * np.array(direction), atol=1e-12)


def test_coherent_state_poles():
    v = coherent_state(3, 0.0, 0.0)
    np.testing.assert_allclose(np.abs(v), np.eye(7)[0], atol=1e-14)
    v = coherent_state(3, np.pi, 0.4)
    np.testing.assert_allclose(np.abs(v), np.eye(7)[-1], atol=1e-12)


@pytest.mark.parametrize("theta, phi", [(-0.1, 0.0), (3.2, 0.0), (1.0, 2 * np.pi), (1.0, -1.0)])
def test_coherent_state_rejects_angles(theta, phi):
    with pytest.raises(ValueError):
        coherent_state(2, theta, phi)


def test_product_state_has_no_entanglement():
    psi = product_state(coherent_state(2, 1.0, 0.3), coherent_state(3, 2.0, 1.0))
    s_vn, s_lin = entropies(psi.matrix)
    assert abs(s_vn[0]) <= 1e-12 and abs(s_lin[0]) <= 1e-12


def test_product_state_rejects_unnormalised():
    with pytest.raises(ValueError):
        product_state([1.0, 1.0], [1.0, 0.0])


@pytest.mark.parametrize("n, m", [(1, 1), (3, 3), (4, 7), (21, 21)])
def test_maximally_entangled_state(n, m):
    psi = maximally_entangled_state(n, m)
    assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-14)
    s_vn, s_lin = entropies(psi.matrix)
    assert s_vn[0] == pytest.approx(np.log(n), abs=1e-12)
    assert s_lin[0] == pytest.approx(1 - 1 / n, abs=1e-12)


def test_maximally_entangled_rejects():
    with pytest.raises(ValueError):
        maximally_entangled_state(4, 3)


def test_evolve_identity_and_shape():
    psi = maximally_entangled_state(2, 3)
    traj = evolve(np.eye(6), psi, 5)
    assert len(traj) == 6
    for state in traj:
        np.testing.assert_array_equal(state.amplitudes, psi.amplitudes)
    assert traj.matrices().shape == (6, 2, 3)


def test_evolve_rejects():
    psi = maximally_entangled_state(2, 2)
    with pytest.raises(ValueError):
        evolve(np.eye(3), psi, 1)
    with pytest.raises(ValueError):
        evolve(np.eye(4), psi, -1)


def test_factored_matches_dense():
    cfg = TopConfig(3, 4.5, 3.0, 1.2, 0.47, 0.3)
    psi = product_state(coherent_state(3, 2.25, 1.1), coherent_state(4.5, 2.25, 1.1))
    dense = evolve(build_floquet(cfg), psi, 200)
    fact = evolve_factored(floquet_factors(cfg), psi, 200)
    np.testing.assert_allclose(fact.states, dense.states, atol=1e-11)


def test_zero_coupling_keeps_product_state():
    cfg = TopConfig(4, 4, 3.0, 0.0, 0.47, 0.47)
    psi = product_state(coherent_state(4, 2.25, 1.1), coherent_state(4, 1.0, 0.2))
    s_vn, _ = entropies(evolve(build_floquet(cfg), psi, 300).matrices())
    assert np.max(np.abs(s_vn)) <= 1e-9


def test_norm_preserved_long_run():
    cfg = TopConfig(5, 5, 3.0, 0.1, 0.47, 0.47)
    psi = product_state(coherent_state(5, 2.25, 1.1), coherent_state(5, 2.25, 1.1))
    traj = evolve_factored(floquet_factors(cfg), psi, 10_000)
    norms = np.linalg.norm(traj.states, axis=1)
    assert np.max(np.abs(norms - 1.0)) <= 1e-10
