import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knr.analytic import (
    ObservableSet,
    g2_zero_delay,
    mean_photon_number,
    observables,
    phase_space_axes,
    photon_distribution,
    wigner,
)
from knr.errors import DegenerateWindow, InvalidParams, VacuumState
from knr.model import KnrParams

# oracle steady state at a fixed n_trunc = 80 (edge population 1.6e-29)
ORACLE_MEAN_CHI2_DM35_OM20 = 0.5036315719053386
ORACLE_G2_CHI2_DM35_OM20 = 6.594865425258682

finite = dict(allow_nan=False, allow_infinity=False)
points = st.builds(
    KnrParams,
    chi=st.floats(1.0, 40.0, **finite),
    delta=st.floats(-80.0, 40.0, **finite),
    omega_drive=st.floats(0.1, 25.0, **finite),
)


def test_undriven_cavity_is_vacuum():
    p = KnrParams(chi=20.0, delta=-7.0)
    dist = photon_distribution(p)
    assert dist.p(0) == 1.0 and dist.p(1) == dist.p(2) == 0.0
    assert mean_photon_number(p) == 0.0
    with pytest.raises(VacuumState):
        g2_zero_delay(p)


def test_resonant_blockade_populations():
    dist = photon_distribution(KnrParams(chi=20.0, delta=0.0, omega_drive=5.0))
    assert dist.p(0) == pytest.approx(0.5, abs=0.02)
    assert dist.p(1) == pytest.approx(0.5, abs=0.02)
    assert dist.probs[2:].sum() < 0.02


def test_mean_pinned_against_oracle():
    p = KnrParams(chi=2.0, delta=-35.0, omega_drive=20.0)
    assert mean_photon_number(p) == pytest.approx(ORACLE_MEAN_CHI2_DM35_OM20, rel=1e-8)
    assert g2_zero_delay(p) == pytest.approx(ORACLE_G2_CHI2_DM35_OM20, rel=1e-8)


def test_analytic_path_guards():
    with pytest.raises(InvalidParams):
        photon_distribution(KnrParams(chi=0.0, omega_drive=1.0))
    with pytest.raises(InvalidParams):
        mean_photon_number(KnrParams(chi=1.0, omega_drive=1.0, n_bath=0.2))


def test_distribution_accessors():
    dist = photon_distribution(KnrParams(chi=2.0, delta=-10.0, omega_drive=10.0))
    assert dist.n_max == len(dist.probs) - 1
    assert dist.p(dist.n_max + 5) == 0.0
    with pytest.raises(IndexError):
        dist.p(-1)
    pad = dist.padded(dist.n_max + 4)
    assert pad.shape == (dist.n_max + 4,) and pad[-1] == 0.0
    assert dist.padded(3).shape == (3,)
    # the last three populations are below the cutoff
    assert (dist.probs[-3:] < 1e-12).all()


@settings(max_examples=100, deadline=None)
@given(points)
def test_normalization(p):
    dist = photon_distribution(p)
    assert abs(dist.probs.sum() + dist.tail_mass - 1.0) < 1e-12
    # the unrescaled series already sums to one
    assert abs(dist.raw_norm - 1.0) < 1e-9
    assert (dist.probs >= 0).all()


@settings(max_examples=100, deadline=None)
@given(points)
def test_moment_consistency(p):
    dist = photon_distribution(p)
    s1, s2 = dist.moments()
    mean = mean_photon_number(p)
    assert mean == pytest.approx(s1, rel=1e-9, abs=1e-13)
    assert g2_zero_delay(p) == pytest.approx(s2 / s1 ** 2, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(points)
def test_variance_identity(p):
    dist = photon_distribution(p)
    n = np.arange(len(dist.probs))
    s1 = float(np.dot(n, dist.probs))
    var = float(np.dot((n - s1) ** 2, dist.probs))
    obs = observables(p)
    assert obs.variance_n == pytest.approx(var, rel=1e-9, abs=1e-13)


@settings(max_examples=50, deadline=None)
@given(points)
def test_drive_sign_symmetry(p):
    q = p.replace(omega_drive=-p.omega_drive)
    a, b = photon_distribution(p), photon_distribution(q)
    np.testing.assert_array_equal(a.probs, b.probs)
    assert mean_photon_number(p) == mean_photon_number(q)
    assert g2_zero_delay(p) == g2_zero_delay(q)


def test_drive_sign_rotates_wigner():
    p = KnrParams(chi=20.0, delta=-40.0, omega_drive=20.0)
    w = wigner(p, resolution=(81, 81))
    w_flip = wigner(p.replace(omega_drive=-20.0), resolution=(81, 81))
    # symmetric window: alpha -> -alpha is a flip of both axes
    np.testing.assert_allclose(w_flip.values, w.values[::-1, ::-1], rtol=1e-12, atol=1e-15)


def test_observable_set_identity():
    obs = ObservableSet.from_moments(2.0, 0.75)
    assert obs.variance_n == 2.0 + 4.0 * (0.75 - 1.0)


@pytest.mark.parametrize("omega,delta", [(5.0, 0.0), (20.0, -40.0), (10.0, -20.0)])
def test_wigner_positive_and_normalized(omega, delta):
    grid = wigner(KnrParams(chi=20.0, delta=delta, omega_drive=omega))
    assert grid.values.shape == (201, 201)
    assert grid.values.min() >= -1e-6
    assert grid.norm_estimate == pytest.approx(1.0, abs=1e-6)
    assert grid.integrate() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("p", [
    KnrParams(chi=20.0, delta=0.0, omega_drive=5.0),
    KnrParams(chi=20.0, delta=-40.0, omega_drive=20.0),
    KnrParams(chi=2.0, delta=-10.0, omega_drive=6.0),
])
def test_wigner_number_moment(p):
    # symmetric ordering: <|alpha|^2>_W = <n> + 1/2
    grid = wigner(p, window=(-6, 6, -6, 6), resolution=(241, 241))
    moment = grid.integrate(lambda a: np.abs(a) ** 2 - 0.5)
    assert moment == pytest.approx(mean_photon_number(p), rel=1e-6)


def test_wigner_order_independent():
    p = KnrParams(chi=20.0, delta=-20.0, omega_drive=10.0)
    full = wigner(p, resolution=(41, 31))
    # evaluating a sub-window reproduces the same samples
    part = wigner(p, window=(full.x_axis[10], full.x_axis[20], full.y_axis[5], full.y_axis[25]),
                  resolution=(11, 21), normalize=False)
    raw = full.values * full.norm_estimate
    np.testing.assert_allclose(part.values, raw[10:21, 5:26], rtol=1e-12)


def test_wigner_unnormalized_has_closed_form_scale():
    grid = wigner(KnrParams(chi=20.0, omega_drive=5.0), normalize=False)
    assert grid.integrate() == pytest.approx(grid.norm_estimate, rel=1e-15)
    assert grid.norm_estimate == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("window,res", [
    ((1, 1, -1, 1), (5, 5)), ((-1, 1, 2, 0), (5, 5)), ((-1, 1, -1, 1), (1, 5)),
])
def test_degenerate_window(window, res):
    with pytest.raises(DegenerateWindow):
        phase_space_axes(window, res)
    with pytest.raises(DegenerateWindow):
        wigner(KnrParams(chi=1.0, omega_drive=1.0), window, res)


def test_vacuum_wigner():
    grid = wigner(KnrParams(chi=5.0), resolution=(41, 41), normalize=False)
    want = 2 / math.pi * np.exp(-2 * np.abs(grid.alpha()) ** 2)
    np.testing.assert_allclose(grid.values, want, rtol=1e-14)
