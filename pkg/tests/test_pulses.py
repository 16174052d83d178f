import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate
from scipy.special import erf

from blochfsm.errors import DomainError
from blochfsm.pulses import (
    Constant,
    Detuning,
    DynamicallyDecoupled,
    Gaussian,
    Zero,
    amplitude,
    dd_transform,
    detuning_integral,
    pulse_area,
)

from conftest import GAUSS_AREA

times = st.floats(min_value=-20, max_value=30, allow_nan=False)


def test_amplitude_examples():
    assert amplitude(Gaussian(1.0, 5.0, 1.0), 5.0) == 1.0
    assert amplitude(Zero(), 3.7) == 0.0
    assert amplitude(DynamicallyDecoupled(Constant(1.0), 1.0), 1.5) == -1.0
    assert amplitude(DynamicallyDecoupled(Constant(1.0), 1.0), 0.5) == 1.0


def test_amplitude_vectorized():
    t = np.linspace(0, 10, 11)
    np.testing.assert_allclose(amplitude(Gaussian(2.0, 5.0, 1.0), t), 2 * np.exp(-((t - 5) ** 2)))


@pytest.mark.parametrize("kwargs", [dict(sigma=0.0), dict(sigma=-1.0), dict(tau=math.inf)])
def test_gaussian_validation(kwargs):
    args = dict(omega0=1.0, tau=5.0, sigma=1.0) | kwargs
    with pytest.raises(DomainError):
        Gaussian(**args)


def test_dd_period_validation():
    with pytest.raises(DomainError):
        DynamicallyDecoupled(Constant(1.0), 0.0)


def test_gaussian_area_example():
    # closed form sqrt(pi) * erf(5); this sits 2.7e-12 below sqrt(pi)
    area = pulse_area(Gaussian(1.0, 5.0, 1.0), 0.0, 10.0)
    assert area == pytest.approx(GAUSS_AREA, abs=1e-15)
    assert area == pytest.approx(1.7724539, abs=1e-7)
    assert abs(area - math.sqrt(math.pi)) < 3e-12


def test_gaussian_area_simpson_oracle():
    t = np.linspace(0.0, 10.0, 1_000_001)
    simpson = integrate.simpson(np.exp(-((t - 5.0) ** 2)), x=t)
    assert pulse_area(Gaussian(1.0, 5.0, 1.0), 0.0, 10.0) == pytest.approx(simpson, abs=1e-12)


def test_trivial_areas():
    assert pulse_area(Zero(), -3.0, 8.0) == 0.0
    assert pulse_area(Constant(2.0), 0.0, math.pi / 4) == pytest.approx(math.pi / 2, abs=1e-15)


def test_detuning_examples():
    assert detuning_integral(Detuning(0.0), 0.0, 10.0) == 0.0
    assert detuning_integral(Detuning(0.5), 0.0, 4.0) == 2.0
    assert detuning_integral(Detuning(1.0), 3.0, 3.0) == 0.0


@pytest.mark.parametrize("fn,arg", [(pulse_area, Zero()), (detuning_integral, Detuning(1.0))])
def test_inverted_interval(fn, arg):
    with pytest.raises(DomainError):
        fn(arg, 2.0, 1.0)


pulses = st.one_of(
    st.builds(Gaussian, st.floats(-3, 3), st.floats(0, 10), st.floats(0.2, 3)),
    st.builds(Constant, st.floats(-3, 3)),
    st.just(Zero()),
    st.builds(
        DynamicallyDecoupled,
        st.builds(Gaussian, st.floats(-3, 3), st.floats(0, 10), st.floats(0.2, 3)),
        st.floats(0.1, 4),
    ),
)


@settings(max_examples=200, deadline=None)
@given(pulses, times, times, times)
def test_area_additive(p, a, b, c):
    a, b, c = sorted((a, b, c))
    assert pulse_area(p, a, c) == pytest.approx(pulse_area(p, a, b) + pulse_area(p, b, c), abs=1e-11)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 3), st.floats(0, 10), st.floats(0.2, 3), times, times)
def test_gaussian_closed_form_matches_quadrature(omega0, tau, sigma, a, b):
    a, b = sorted((a, b))
    p = Gaussian(omega0, tau, sigma)
    quad, _ = integrate.quad(p, a, b, epsabs=1e-13, epsrel=1e-13, points=[tau] if a < tau < b else None, limit=200)
    assert pulse_area(p, a, b) == pytest.approx(quad, abs=1e-10)


def test_gaussian_erf_form():
    p = Gaussian(1.3, 2.0, 0.7)
    want = 1.3 * 0.7 * math.sqrt(math.pi) / 2 * (erf((4.0 - 2.0) / 0.7) - erf((1.0 - 2.0) / 0.7))
    assert pulse_area(p, 1.0, 4.0) == pytest.approx(want, rel=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(0.05, 5), st.integers(1, 20))
def test_dd_full_periods_cancel(omega0, T, k):
    p = dd_transform(Constant(omega0), T)
    assert abs(pulse_area(p, 0.0, 2 * k * T)) < 1e-12


def test_dd_area_matches_quadrature():
    p = DynamicallyDecoupled(Gaussian(1.0, 5.0, 1.0), 0.75)
    edges = [n * 0.75 for n in range(0, 14)]
    quad, _ = integrate.quad(p, 0.0, 10.0, points=edges, epsabs=1e-13, limit=500)
    assert pulse_area(p, 0.0, 10.0) == pytest.approx(quad, abs=1e-11)


def test_custom_callable_uses_quadrature():
    area = pulse_area(lambda t: np.sin(t) ** 2, 0.0, math.pi)
    assert area == pytest.approx(math.pi / 2, abs=1e-12)
