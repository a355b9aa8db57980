import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import linear_response_reflection
from dkmemory.errors import DomainError
from dkmemory.params import FrequencyGrid, Scheme, SchemeGeometry, SystemParams
from dkmemory.presets import get_preset
from dkmemory.reflection import (
    RegimeWarning,
    c_pi,
    center_reflectivity,
    center_reflectivity_at_cpi,
    onoff_phase_error_estimate,
    onoff_phase_error_exact,
    onoff_phase_error_unsimplified,
    phase_report,
    reflection_coefficient,
    reflection_spectrum,
    resonance_peaks,
)

params_st = st.builds(
    SystemParams,
    kappa=st.just(1.0),
    kappa_j=st.floats(0, 2),
    gamma=st.floats(1e-3, 10),
    g=st.floats(0, 20),
    delta_c=st.floats(-5, 5),
    delta_1=st.floats(-50, 50),
    delta_2=st.floats(-50, 50),
)


@given(p=params_st, omega=st.lists(st.floats(-30, 30), min_size=1, max_size=5))
def test_closed_form_matches_linear_response(p, omega):
    """The rational formula equals the steady-state solution of the amplitude equations."""
    w = np.array(omega)
    for dj in (p.delta_1, p.delta_2):
        np.testing.assert_allclose(
            reflection_coefficient(p, dj, w), linear_response_reflection(p, dj, w), rtol=1e-10, atol=1e-12
        )


@given(p=params_st)
def test_passive_reflection_bounded(p):
    w = np.linspace(-40, 40, 401)
    assert np.all(np.abs(reflection_coefficient(p, p.delta_1, w)) <= 1 + 1e-12)


@given(p=params_st)
def test_lossless_mode_unitary(p):
    grid = FrequencyGrid.symmetric(60.0, 4097)
    r = reflection_coefficient(p, p.delta_1, grid.samples, lossless=True)
    assert np.max(np.abs(np.abs(r) - 1)) < 1e-12


def test_lossless_mode_matches_zero_loss_oracle():
    p = SystemParams(kappa_j=0.2, gamma=0.5, g=3.0, delta_1=1.5)
    w = np.linspace(-10, 10, 41)
    np.testing.assert_allclose(
        reflection_coefficient(p, 1.5, w, lossless=True),
        linear_response_reflection(p, 1.5, w, kappa_j=0.0, gamma=1e-300),
        atol=1e-12,
    )


def test_uncoupled_atom_leaves_bare_cavity():
    p = SystemParams(kappa_j=0.1, gamma=0.3, g=0.0)
    w = np.linspace(-5, 5, 11)
    expected = (1 - 0.1 + 1j * w) / (1 + 0.1 - 1j * w)
    np.testing.assert_allclose(reflection_coefficient(p, 7.0, w), expected, rtol=1e-14)


def test_on_resonance_center_value():
    # C = 10 with kappa = gamma = 1: r = (1 - 10) / (1 + 10)
    p = SystemParams(gamma=1.0).with_cooperativity(10.0)
    assert reflection_coefficient(p, 0.0, 0.0) == pytest.approx(-9 / 11, abs=1e-14)


def test_strong_coupling_limit_reflects_with_minus_sign():
    p = SystemParams(kappa_j=0.05, gamma=0.1).with_cooperativity(1e8)
    assert reflection_coefficient(p, 0.0, 0.0) == pytest.approx(-1, abs=1e-6)


@given(p=params_st)
def test_center_reflectivity_formula(p):
    p = SystemParams(kappa=1.0, kappa_j=p.kappa_j, gamma=p.gamma, g=p.g, delta_1=p.delta_1)
    assert center_reflectivity(p, p.delta_1) == pytest.approx(complex(reflection_coefficient(p, p.delta_1, 0.0)), abs=1e-12)


def test_center_reflectivity_needs_resonant_cavity():
    with pytest.raises(DomainError):
        center_reflectivity(SystemParams(delta_c=0.1), 0.0)


@pytest.mark.parametrize(
    "name, expected, tol",
    [("fig5-pushpull", 50.01, 0.01), ("fig8a", 2.48, 0.01), ("fig8b", 2.75, 0.01), ("fig7a", 25.0, 0.1), ("fig7b", 10.0, 0.1)],
)
def test_c_pi_matches_published_values(name, expected, tol):
    assert abs(get_preset(name).c_pi() - expected) <= tol


@given(
    kj=st.floats(0, 0.99),
    gamma=st.floats(1e-3, 10),
    delta=st.floats(1e-2, 200),
)
def test_c_pi_gives_pure_imaginary_opposite_center_reflectivities(kj, gamma, delta):
    base = SystemParams(kappa_j=kj, gamma=gamma).with_geometry(SchemeGeometry(Scheme.PUSH_PULL, delta))
    p = base.with_cooperativity(c_pi(base, base.delta_1))
    r1 = complex(reflection_coefficient(p, p.delta_1, 0.0))
    r2 = complex(reflection_coefficient(p, p.delta_2, 0.0))
    assert abs(r1.real) < 1e-10 and abs(r2.real) < 1e-10
    assert abs(r1 + r2) < 1e-10
    assert abs(r1 - center_reflectivity_at_cpi(p, p.delta_1)) < 1e-10
    assert abs(r2 - center_reflectivity_at_cpi(p, p.delta_2)) < 1e-10


def test_c_pi_lossless_limit():
    # kappa_j = 0: C_pi = sqrt(1 + (delta_1/gamma)^2)
    p = SystemParams(gamma=1.0)
    assert c_pi(p, 50.0) == pytest.approx(math.sqrt(2501), rel=1e-15)


def test_c_pi_domain():
    with pytest.raises(DomainError):
        c_pi(SystemParams(kappa_j=1.5), 1.0)


@pytest.mark.parametrize("name", ["fig5-pushpull", "fig6", "fig8a", "fig8b"])
def test_push_pull_mirror_symmetry(name):
    pr = get_preset(name)
    p = pr.params("push-pull")
    for half_span in (1.0, 30.0, 300.0):
        grid = FrequencyGrid.symmetric(half_span * max(1.0, pr.delta), 4097)
        rs = reflection_spectrum(p, None, grid)
        assert np.max(np.abs(rs.r2[::-1] - np.conj(rs.r1))) < 1e-12


def test_on_off_breaks_mirror_symmetry():
    pr = get_preset("fig6")
    p = pr.params("on-off", C=20.0)
    grid = FrequencyGrid.symmetric(30.0, 4097)
    rs = reflection_spectrum(p, None, grid)
    assert np.max(np.abs(rs.r2[::-1] - np.conj(rs.r1))) > 1e-3


def test_phase_report_at_c_pi():
    p = get_preset("fig5-pushpull").params("push-pull")
    rs = reflection_spectrum(p, None, FrequencyGrid.symmetric(200.0, 4097))
    ph = phase_report(rs)
    assert abs(abs(ph.delta_phase_at_0) - math.pi) < 1e-10
    assert not ph.undefined.any()
    # unwrapped difference has no 2 pi jumps between neighbours
    assert np.max(np.abs(np.diff(ph.delta_phase))) < math.pi


def test_phase_report_flags_zero_reflectivity():
    # kappa_j = kappa with no atom makes r vanish at omega = 0
    p = SystemParams(kappa_j=1.0, g=0.0)
    rs = reflection_spectrum(p, None, FrequencyGrid.symmetric(1.0, 11))
    ph = phase_report(rs)
    assert ph.undefined[rs.grid.center_index]
    assert math.isnan(ph.delta_phase_at_0)


class TestOnOffPhaseError:
    def test_estimate_within_factor_two_of_exact(self):
        p = SystemParams(gamma=1.0).with_cooperativity(10.0)
        est = onoff_phase_error_estimate(p, 1000.0)
        exact = onoff_phase_error_exact(p, 1000.0)
        assert 0.5 <= est / exact <= 2.0
        # frozen: linear-response evaluation gives a departure of 0.0199993
        assert exact == pytest.approx(0.019999313377, rel=1e-9)

    def test_fig5_departure(self):
        p = SystemParams(gamma=1.0).with_cooperativity(10.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            est = onoff_phase_error_estimate(p, 100.0)
        r_on = linear_response_reflection(p, 0.0, 0.0)[0]
        r_off = linear_response_reflection(p, 100.0, 0.0)[0]
        oracle = abs(abs(np.angle(r_on / r_off)) - math.pi)
        assert onoff_phase_error_exact(p, 100.0) == pytest.approx(oracle, abs=1e-13)
        assert oracle == pytest.approx(0.199318, abs=1e-6)
        assert est == pytest.approx(0.2, rel=1e-12)

    def test_unsimplified_close_to_simplified(self):
        p = SystemParams(gamma=1.0).with_cooperativity(10.0)
        a = onoff_phase_error_estimate(p, 1000.0)
        b = onoff_phase_error_unsimplified(p, 1000.0)
        assert b == pytest.approx(a, rel=1e-3)

    def test_warns_outside_regime(self):
        p = SystemParams(gamma=1.0).with_cooperativity(2.0)
        with pytest.warns(RegimeWarning):
            onoff_phase_error_estimate(p, 1000.0)


def test_vacuum_rabi_doublet_location():
    """Loss maxima of the resonant state, located independently on a dense oracle scan."""
    p = SystemParams(gamma=1.0).with_cooperativity(10.0).with_geometry(SchemeGeometry(Scheme.ON_OFF, 100.0))
    grid = FrequencyGrid.symmetric(10.0, 20001)
    peaks = resonance_peaks(reflection_spectrum(p, None, grid), 1)
    w = np.linspace(2.0, 4.0, 2001)
    loss = 1 - np.abs(linear_response_reflection(p, 0.0, w)) ** 2
    w_star = w[np.argmax(loss)]
    assert len(peaks) == 2
    np.testing.assert_allclose(peaks, [-w_star, w_star], atol=2e-3)
    assert w_star == pytest.approx(3.0, abs=1e-3)
