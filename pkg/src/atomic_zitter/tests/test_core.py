import logging
import math

import numpy as np
import pytest

from atomic_zitter.core import (
    DimensionlessParams,
    GaussianSpec,
    PhysicalParams,
    SpinorK,
    from_position,
    gaussian_amplitude,
    make_k_grid,
    recoil_energy,
    recoil_velocity,
    reduce_params,
    sample_gaussian,
    time_unit,
    to_position,
    width_to_delta,
)
from atomic_zitter.errors import (
    InvalidBoundsError,
    PreconditionError,
    TruncationError,
)


def _v1_for_unit_gap(theta: float) -> float:
    """Trap offset V1 - V3 (in recoil units) that makes the reduced gap equal to 1."""
    s2 = math.sin(theta) ** 2
    return (2 - s2 + math.sin(2 * theta) ** 2 / 4) / s2


# --- grids ---


def test_make_k_grid_five_nodes():
    grid = make_k_grid(-8.0, 8.0, 5)
    np.testing.assert_allclose(grid.nodes, [-8, -4, 0, 4, 8])
    assert grid.dk == 4.0


def test_make_k_grid_default_spacing():
    grid = make_k_grid(-8.0, 8.0, 4096)
    assert grid.dk == pytest.approx(0.003907, abs=1e-6)
    assert grid.nodes[0] == -grid.nodes[-1]


@pytest.mark.parametrize("k_min, k_max, n", [(8, -8, 4), (1, 1, 8), (-1, 1, 1)])
def test_make_k_grid_rejects_invalid_bounds(k_min, k_max, n):
    with pytest.raises(InvalidBoundsError) as excinfo:
        make_k_grid(k_min, k_max, n)
    assert "[core]" in str(excinfo.value)


def test_make_k_grid_logs_non_power_of_two(caplog):
    with caplog.at_level(logging.DEBUG, logger="atomic_zitter.core.grid"):
        make_k_grid(-8.0, 8.0, 5)
    assert "not a power of two" in caplog.text


def test_position_grid_is_conjugate():
    grid = make_k_grid(-8.0, 8.0, 4096)
    xgrid = grid.position_grid()
    assert xgrid.n == 4096
    assert xgrid.dx * grid.dk * grid.n == pytest.approx(2 * math.pi)
    assert 0.0 in xgrid.nodes


# --- Gaussian sampling ---


def test_gaussian_peak_before_renormalisation():
    spec = GaussianSpec(0.0, 0.1, 1.0, 0.0)
    peak = gaussian_amplitude(spec, np.array([0.0]))[0] ** 2
    assert peak == pytest.approx(1 / (0.1 * math.sqrt(math.pi)))
    assert peak == pytest.approx(5.6419, abs=1e-4)


def test_spec_rejects_unnormalised_weights():
    with pytest.raises(PreconditionError):
        GaussianSpec(0.0, 0.1, 1.0, 1.0)


def test_spec_rejects_non_positive_width():
    with pytest.raises(PreconditionError):
        GaussianSpec(0.0, 0.0)


def test_superposition_weights():
    spec = GaussianSpec.superposition(1.0, 0.05, math.pi / 4)
    np.testing.assert_allclose(
        spec.weights, np.array([1, np.exp(1j * math.pi / 4)]) / math.sqrt(2)
    )


def test_sample_gaussian_unit_norm(grid):
    state = sample_gaussian(GaussianSpec(1.0, 0.05), grid)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k0, delta", [(0.0, 0.01), (2.0, 0.3), (-1.5, 0.05)])
def test_sample_gaussian_norm_any_valid_spec(grid, k0, delta):
    state = sample_gaussian(GaussianSpec.superposition(k0, delta, 0.3), grid)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_sample_gaussian_truncation():
    narrow = make_k_grid(-0.5, 0.5, 256)
    with pytest.raises(TruncationError):
        sample_gaussian(GaussianSpec(0.0, 0.2), narrow)


def test_sample_gaussian_coarse_grid_truncation():
    coarse = make_k_grid(-8.0, 8.0, 64)
    with pytest.raises(TruncationError):
        sample_gaussian(GaussianSpec(0.0, 0.01), coarse)


def test_spinor_is_read_only(grid):
    state = sample_gaussian(GaussianSpec(0.0, 0.1), grid)
    with pytest.raises(ValueError):
        state.amplitudes[0, 0] = 1.0


# --- Fourier transforms ---


def test_position_density_is_fourier_pair(grid):
    delta = 0.1
    psi = to_position(sample_gaussian(GaussianSpec(0.0, delta), grid))
    x = psi.grid.nodes
    expected = delta / math.sqrt(math.pi) * np.exp(-((x * delta) ** 2))
    np.testing.assert_allclose(psi.density, expected, atol=1e-10)


def test_width_mapping_matches_position_width(grid):
    # |phi|^2 ~ exp(-2 x^2 / sigma^2) has its 1/e point at x = sigma / sqrt(2)
    sigma = 10.0
    delta = width_to_delta(sigma, 1.0)
    psi = to_position(sample_gaussian(GaussianSpec(0.0, delta), grid))
    x = psi.grid.nodes
    centre = psi.density[np.argmin(np.abs(x))]
    at_width = np.interp(sigma / math.sqrt(2), x, psi.density)
    assert at_width / centre == pytest.approx(math.exp(-1), rel=2e-3)


def test_momentum_shift_leaves_position_density(grid):
    rest = to_position(sample_gaussian(GaussianSpec(0.0, 0.2), grid))
    moving = to_position(sample_gaussian(GaussianSpec(1.3, 0.2), grid))
    np.testing.assert_allclose(moving.density, rest.density, atol=1e-10)


def test_parseval_random_spinor(small_grid):
    # random smooth packets: sums of Gaussians with random centres, widths and weights
    rng = np.random.default_rng(7)
    k = small_grid.nodes
    amplitudes = np.zeros((2, small_grid.n), dtype=complex)
    for component in range(2):
        for _ in range(5):
            centre, width = rng.uniform(-1.0, 1.0), rng.uniform(0.1, 0.3)
            weight = complex(*rng.normal(size=2))
            amplitudes[component] += weight * np.exp(-((k - centre) ** 2) / (2 * width**2))
    state = SpinorK(small_grid, amplitudes)
    state = SpinorK(small_grid, amplitudes / math.sqrt(state.norm()))
    assert to_position(state).norm() == pytest.approx(state.norm(), abs=1e-10)


def test_transform_round_trip(grid):
    state = sample_gaussian(GaussianSpec.superposition(0.5, 0.1, 1.0), grid)
    back = from_position(to_position(state))
    np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-10)


# --- parameters ---


def test_physical_params_validation():
    with pytest.raises(PreconditionError):
        PhysicalParams(mass=-1.0, kappa=1.0, theta=0.1, v1=0.0, v3=0.0)
    with pytest.raises(PreconditionError):
        PhysicalParams(mass=1.0, kappa=1.0, theta=2.0, v1=0.0, v3=0.0)


def test_dimensionless_params_validation():
    with pytest.raises(PreconditionError):
        DimensionlessParams(v_z=1.0, c_theta=1.5)


@pytest.mark.parametrize("gap", [1.0, 3.0])
def test_reduce_params_gap(gap):
    theta = math.pi / 4
    base = PhysicalParams.rb87(theta, 0.0, 0.0)
    e_r = recoil_energy(base)
    # unit gap needs V1 - V3 = 3.5 E_r at 45 degrees; each further unit adds 2 E_r / sin^2
    offset = _v1_for_unit_gap(theta) + (gap - 1) * 2 / math.sin(theta) ** 2
    reduced = reduce_params(PhysicalParams.rb87(theta, offset * e_r, 0.0))
    assert reduced.v_z == pytest.approx(gap, rel=1e-12)
    assert reduced.c_theta == pytest.approx(math.cos(theta))


def test_reduce_params_right_angle():
    reduced = reduce_params(PhysicalParams.rb87(math.pi / 2, 0.0, 0.0))
    assert reduced.c_theta == 0.0


def test_reduce_params_scale_invariant():
    theta = 0.6
    p = PhysicalParams(mass=1.4e-25, kappa=8.0e6, theta=theta, v1=3e-30, v3=1e-30)
    scaled = PhysicalParams(
        mass=p.mass, kappa=2 * p.kappa, theta=theta, v1=4 * p.v1, v3=4 * p.v3
    )
    assert reduce_params(scaled).v_z == pytest.approx(reduce_params(p).v_z, rel=1e-12)


def test_rb87_units():
    p = PhysicalParams.rb87(0.2, 0.0, 0.0)
    assert recoil_velocity(p) == pytest.approx(5.886e-3, rel=1e-3)
    assert time_unit(p) == pytest.approx(p.hbar / recoil_energy(p))
    assert width_to_delta(1e-5, p.kappa) == pytest.approx(0.01756, rel=1e-3)
