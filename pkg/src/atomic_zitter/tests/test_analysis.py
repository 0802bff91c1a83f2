import math

import numpy as np
import pytest

from atomic_zitter.analysis import (
    breakdown_time,
    first_period,
    fit_linear_drift,
    local_extrema,
    zero_crossing_frequency,
    zero_crossings,
)
from atomic_zitter.errors import PreconditionError


@pytest.fixture
def tau():
    return np.linspace(0, 20, 2001)


def test_zero_crossings_of_sine(tau):
    crossings = zero_crossings(tau, np.sin(tau + 0.1))
    np.testing.assert_allclose(crossings, np.arange(1, 7) * math.pi - 0.1, atol=1e-4)


@pytest.mark.parametrize("omega", [0.8, 2.0, 6.0])
def test_zero_crossing_frequency(tau, omega):
    assert zero_crossing_frequency(tau, np.sin(omega * tau + 0.3)) == pytest.approx(
        omega, rel=1e-4
    )


def test_zero_crossing_frequency_needs_two_crossings(tau):
    with pytest.raises(PreconditionError) as excinfo:
        zero_crossing_frequency(tau, np.exp(-tau))
    assert "[analysis]" in str(excinfo.value)


def test_local_extrema_refined_between_samples():
    tau = np.linspace(0, 10, 41)
    extrema = local_extrema(tau, np.cos(tau - 0.33))
    assert extrema.is_max[0]
    assert extrema.tau[0] == pytest.approx(0.33, abs=5e-3)
    assert not extrema.is_max[1]
    assert extrema.tau[1] == pytest.approx(math.pi + 0.33, abs=5e-3)
    assert extrema.value[1] == pytest.approx(-1.0, abs=1e-3)


def test_fit_linear_drift():
    tau = np.linspace(0, 50, 501)
    slope, intercept = fit_linear_drift(tau, 0.04 * tau + 1.5 + 0.01 * np.sin(7 * tau))
    assert slope == pytest.approx(0.04, abs=5e-5)
    assert intercept == pytest.approx(1.5, abs=1e-3)


def test_first_period_counts_start_as_minimum(tau):
    # 1 - cos starts at its minimum
    assert first_period(tau, 1 - np.cos(1.5 * tau)) == pytest.approx(2 * math.pi / 1.5, rel=1e-4)


def test_first_period_of_rising_sine(tau):
    assert first_period(tau, np.sin(tau)) == pytest.approx(2 * math.pi, rel=1e-4)


@pytest.mark.parametrize("phase", [0.3, math.pi / 4, 2.0, -1.0])
def test_first_period_ignores_phase(tau, phase):
    signal = 0.2 + np.cos(2.2 * tau + phase)
    assert first_period(tau, signal) == pytest.approx(2 * math.pi / 2.2, rel=1e-4)


def test_first_period_starting_at_maximum(tau):
    assert first_period(tau, np.cos(0.9 * tau)) == pytest.approx(2 * math.pi / 0.9, rel=1e-4)


def test_first_period_needs_full_cycle():
    tau = np.linspace(0, 1, 11)
    with pytest.raises(PreconditionError):
        first_period(tau, np.sin(tau))


def test_breakdown_time_of_damped_signal():
    tau = np.linspace(0, 40, 8001)
    signal = np.exp(-tau / 10) * np.sin(2 * tau)
    # first extremum near pi/4, half its height reached after about 10 ln 2
    found = breakdown_time(tau, signal)
    assert found is not None
    expected = math.pi / 4 + 10 * math.log(2)
    assert expected - math.pi / 2 < found < expected + math.pi / 2


def test_breakdown_time_none_when_undamped(tau):
    assert breakdown_time(tau, np.sin(2 * tau)) is None


def test_series_validation():
    with pytest.raises(PreconditionError):
        fit_linear_drift([0.0, 1.0], [0.0, 1.0])
    with pytest.raises(PreconditionError):
        zero_crossings([0.0, 1.0, 2.0], [0.0, 1.0])
