import math

import numpy as np
import pytest
from scipy.special import gammaln

from knr.analytic import photon_distribution
from knr.errors import SingularSystem, TruncationNotConverged, VacuumState
from knr.model import KnrParams
from knr.oracle import (
    OracleConfig,
    SteadyStateDensityMatrix,
    annihilation,
    build_hamiltonian,
    build_liouvillian,
    oracle_observables,
    oracle_wigner,
    steady_state,
)
import knr.oracle as oracle_mod


def vec(rho):
    return rho.reshape(-1)


def fock(n, dim):
    rho = np.zeros((dim, dim), dtype=complex)
    rho[n, n] = 1.0
    return rho


def coherent(alpha, dim):
    n = np.arange(dim)
    amp = np.exp(-abs(alpha) ** 2 / 2 + n * np.log(alpha + 0j) - 0.5 * gammaln(n + 1))
    return np.outer(amp, amp.conj())


def test_operators():
    a = annihilation(4).toarray()
    np.testing.assert_allclose(a @ np.eye(4)[:, 2], math.sqrt(2) * np.eye(4)[:, 1])
    h = build_hamiltonian(KnrParams(chi=3.0, delta=1.0, omega_drive=0.5), 4).toarray()
    np.testing.assert_allclose(np.diag(h), [0, 1, 2 + 6, 3 + 18])
    assert h[0, 1] == h[1, 0] == 0.5
    with pytest.raises(ValueError):
        build_liouvillian(KnrParams(chi=1.0), 1)


def test_vacuum_is_dark_state():
    liou = build_liouvillian(KnrParams(chi=7.0), 2)
    assert np.abs(liou @ vec(fock(0, 2))).max() == 0.0


@pytest.mark.parametrize("p", [
    KnrParams(chi=2.0, delta=-3.0, omega_drive=1.5),
    KnrParams(chi=0.0, delta=1.0, omega_drive=0.7, n_bath=0.3),
])
def test_trace_is_left_null_vector(p):
    dim = 12
    liou = build_liouvillian(p, dim).toarray()
    trace = vec(np.eye(dim))
    assert np.abs(trace @ liou).max() < 1e-12


def test_vacuum_steady_state():
    r = steady_state(KnrParams(chi=5.0, delta=2.0))
    assert r.residual < 1e-13
    np.testing.assert_allclose(r.elements, fock(0, r.dim), atol=1e-15)
    obs = oracle_observables(r)
    assert obs.mean_n == 0.0 and obs.probs[0] == 1.0
    with pytest.raises(VacuumState):
        obs.g2


def test_thermal_steady_state():
    nb = 0.5
    r = steady_state(KnrParams(chi=3.0, n_bath=nb))
    q = nb / (nb + 1)
    want = (1 - q) * q ** np.arange(r.dim)
    np.testing.assert_allclose(r.probs, want, atol=1e-12)
    assert oracle_observables(r).mean_n == pytest.approx(nb, rel=1e-9)


@pytest.mark.parametrize("delta,omega", [(0.0, 1.0), (3.0, 2.0), (-1.5, 0.4), (-7.0, 4.0), (0.3, 0.9)])
def test_linear_cavity_coherent_state(delta, omega):
    p = KnrParams(chi=0.0, delta=delta, omega_drive=omega)
    # edge_tol = 1e-10 leaves ~2e-10 relative truncation error in <n> at some points
    r = steady_state(p, OracleConfig(edge_tol=1e-14))
    want = omega ** 2 / (delta ** 2 + 0.25)
    assert oracle_observables(r).mean_n == pytest.approx(want, rel=1e-10)
    alpha = -1j * omega / (0.5 + 1j * delta)
    want_rho = coherent(alpha, r.dim)
    np.testing.assert_allclose(r.probs, want_rho.diagonal().real, atol=1e-10)
    # coherences with the edge states only converge like sqrt(edge population)
    np.testing.assert_allclose(r.elements[:8, :8], want_rho[:8, :8], atol=1e-10)


@pytest.mark.parametrize("p", [
    KnrParams(chi=2.0, delta=-10.0, omega_drive=10.0),
    KnrParams(chi=20.0, delta=-40.0, omega_drive=20.0),
    KnrParams(chi=1.0, delta=-5.0, omega_drive=3.0, n_bath=0.2),
])
def test_steady_state_certificates(p):
    r = steady_state(p)
    assert r.residual < 1e-10
    assert r.edge_occupancy < 1e-10
    np.testing.assert_allclose(r.elements, r.elements.conj().T, atol=0)
    assert r.elements.trace().real == pytest.approx(1.0, abs=1e-14)
    assert np.linalg.eigvalsh(r.elements).min() > -1e-10
    # doubling the basis does not move the mean
    big = steady_state(p, OracleConfig(n_trunc_init=2 * r.dim, n_trunc_max=2 * r.dim))
    assert oracle_observables(big).mean_n == pytest.approx(oracle_observables(r).mean_n, rel=1e-9)


def test_blockade_populations():
    r = steady_state(KnrParams(chi=20.0, delta=0.0, omega_drive=5.0),
                     OracleConfig(n_trunc_init=20, n_trunc_max=20))
    assert r.probs[0] == pytest.approx(0.5, abs=0.02)
    assert r.probs[1] == pytest.approx(0.5, abs=0.02)


def test_matches_closed_form():
    p = KnrParams(chi=10.0, delta=-20.0, omega_drive=20.0)
    got = steady_state(p).probs
    want = photon_distribution(p).padded(len(got))
    assert np.abs(got - want).max() < 1e-9


def test_truncation_not_converged():
    with pytest.raises(TruncationNotConverged):
        steady_state(KnrParams(chi=0.0, omega_drive=5.0), OracleConfig(n_trunc_init=10, n_trunc_max=12))


def test_singular_system(monkeypatch):
    def boom(*args, **kw):
        raise RuntimeError("Factor is exactly singular")
    monkeypatch.setattr(oracle_mod.spla, "spsolve", boom)
    with pytest.raises(SingularSystem):
        steady_state(KnrParams(chi=1.0, omega_drive=1.0))


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(n_trunc_init=2)
    with pytest.raises(ValueError):
        OracleConfig(growth_factor=1.0)
    with pytest.raises(ValueError):
        OracleConfig(n_trunc_init=30, n_trunc_max=20)


def test_fixture_statistics():
    one = oracle_observables(SteadyStateDensityMatrix.from_matrix(fock(1, 6)))
    assert one.mean_n == 1.0 and one.g2 == 0.0
    coh = oracle_observables(SteadyStateDensityMatrix.from_matrix(coherent(1.0, 40)))
    assert coh.mean_n == pytest.approx(1.0, rel=1e-12)
    assert coh.g2 == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        SteadyStateDensityMatrix.from_matrix(np.zeros((2, 3)))


def test_vacuum_wigner():
    grid = oracle_wigner(SteadyStateDensityMatrix.from_matrix(fock(0, 4)),
                         window=(-2, 2, -2, 2), resolution=(41, 41), normalize=False)
    assert grid.values.max() == pytest.approx(2 / math.pi, abs=1e-6)
    want = 2 / math.pi * np.exp(-2 * np.abs(grid.alpha()) ** 2)
    np.testing.assert_allclose(grid.values, want, atol=1e-12)


def test_one_photon_wigner():
    grid = oracle_wigner(SteadyStateDensityMatrix.from_matrix(fock(1, 4)),
                         window=(-2, 2, -2, 2), resolution=(41, 41), normalize=False)
    assert grid.values[20, 20] == pytest.approx(-2 / math.pi, abs=1e-6)
    r2 = np.abs(grid.alpha()) ** 2
    want = 2 / math.pi * (4 * r2 - 1) * np.exp(-2 * r2)
    np.testing.assert_allclose(grid.values, want, atol=1e-12)


def test_coherent_wigner_is_displaced_gaussian():
    alpha = 1.2 - 0.5j
    grid = oracle_wigner(SteadyStateDensityMatrix.from_matrix(coherent(alpha, 40)),
                         resolution=(61, 61), normalize=False)
    want = 2 / math.pi * np.exp(-2 * np.abs(grid.alpha() - alpha) ** 2)
    np.testing.assert_allclose(grid.values, want, atol=1e-10)
    # the [-4, 4] window clips ~1e-8 of the Gaussian tail
    assert grid.norm_estimate == pytest.approx(1.0, abs=1e-7)
