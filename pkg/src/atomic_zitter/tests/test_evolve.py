import math

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.linalg import expm

from atomic_zitter.analysis import zero_crossing_frequency
from atomic_zitter.core import (
    DimensionlessParams,
    GaussianSpec,
    gaussian_amplitude,
    sample_gaussian,
)
from atomic_zitter.errors import PreconditionError, UnsupportedRegimeError
from atomic_zitter.evolve import (
    Limit,
    closed_form_spinor,
    evolve_series,
    hamiltonian_k,
    mode_frequency,
    mode_propagator,
    mode_zb_trajectory,
    pauli_exponential,
    propagate,
)


def test_hamiltonian_at_rest(unit_params):
    h = hamiltonian_k(0.0, unit_params, Limit.FULL)
    np.testing.assert_allclose(h.matrix, np.diag([1, -1]))


def test_hamiltonian_dirac_without_gap():
    h = hamiltonian_k(1.0, DimensionlessParams(v_z=0.0), Limit.DIRAC)
    np.testing.assert_allclose(h.matrix, [[0, 2], [2, 0]])
    np.testing.assert_allclose(h.eigenvalues, [-2, 2])


@pytest.mark.parametrize("limit", list(Limit))
def test_hamiltonian_splitting(unit_params, limit):
    h = hamiltonian_k(1.0, unit_params, limit)
    np.testing.assert_array_equal(h.matrix, h.matrix.conj().T)
    assert np.ptp(h.eigenvalues) == pytest.approx(2 * math.sqrt(5))


def test_mode_frequency_bounded_by_gap():
    params = DimensionlessParams(v_z=-1.5, c_theta=0.6)
    omega = mode_frequency(np.linspace(-3, 3, 31), params)
    assert np.all(omega >= 1.5)
    assert mode_frequency(1.0, DimensionlessParams(v_z=1.0)) == pytest.approx(math.sqrt(5))


def test_pauli_exponential_matches_expm():
    rng = np.random.default_rng(3)
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1, -1])
    for _ in range(20):
        a, bx, by, bz = rng.normal(size=4)
        tau = rng.uniform(0, 10)
        h = a * np.eye(2) + bx * sx + by * sy + bz * sz
        np.testing.assert_allclose(
            pauli_exponential(a, bx, by, bz, tau), expm(-1j * h * tau), atol=1e-12
        )


def test_pauli_exponential_zero_field():
    u = pauli_exponential(0.5, 0.0, 0.0, 0.0, 2.0)
    np.testing.assert_allclose(u, np.exp(-1j) * np.eye(2), atol=1e-15)


def test_propagate_identity_at_zero(grid, equal_spec, unit_params):
    state = sample_gaussian(equal_spec, grid)
    np.testing.assert_allclose(propagate(state, 0.0, unit_params).amplitudes, state.amplitudes)


def test_propagate_free_particle_keeps_density(grid):
    state = sample_gaussian(GaussianSpec.superposition(0.5, 0.1, 0.4), grid)
    free = DimensionlessParams(v_z=0.0, c_theta=0.0)
    for tau in (1.0, 17.0):
        evolved = propagate(state, tau, free)
        np.testing.assert_allclose(
            np.abs(evolved.amplitudes) ** 2, np.abs(state.amplitudes) ** 2, atol=1e-14
        )


@pytest.mark.parametrize("limit", list(Limit))
def test_propagate_is_unitary(grid, equal_spec, unit_params, limit):
    state = sample_gaussian(equal_spec, grid)
    for tau in np.linspace(0.0, 100.0, 11):
        assert propagate(state, tau, unit_params, limit).norm() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("limit", list(Limit))
def test_propagate_composes(grid, phase_spec, limit):
    params = DimensionlessParams(v_z=3.0, c_theta=0.7)
    state = sample_gaussian(phase_spec, grid)
    twice = propagate(propagate(state, 1.25, params, limit), 2.5, params, limit)
    once = propagate(state, 3.75, params, limit)
    np.testing.assert_allclose(twice.amplitudes, once.amplitudes, atol=1e-11)


def test_evolve_series_matches_propagate(grid, equal_spec, unit_params):
    state = sample_gaussian(equal_spec, grid)
    taus = [0.0, 0.5, 3.0]
    for tau, evolved in zip(taus, evolve_series(state, taus, unit_params)):
        np.testing.assert_array_equal(
            evolved.amplitudes, propagate(state, tau, unit_params).amplitudes
        )


def test_limits_differ_only_by_phase(grid, unit_params):
    for delta in (0.2, 0.1, 0.05):
        state = sample_gaussian(GaussianSpec.superposition(0.0, delta), grid)
        for tau in (1.0, 5.0):
            full = propagate(state, tau, unit_params, Limit.FULL)
            dirac = propagate(state, tau, unit_params, Limit.DIRAC)
            np.testing.assert_allclose(
                np.abs(full.amplitudes), np.abs(dirac.amplitudes), atol=1e-12
            )


@pytest.mark.parametrize("limit", list(Limit))
def test_closed_form_matches_propagate(grid, equal_spec, unit_params, limit):
    state = sample_gaussian(equal_spec, grid)
    evolved = propagate(state, 2.0, unit_params, limit)
    closed = closed_form_spinor(equal_spec, grid.nodes, 2.0, unit_params, limit)
    # sampled states carry the discrete renormalisation factor
    envelope = gaussian_amplitude(equal_spec, grid.nodes)
    scale = 1 / math.sqrt(trapezoid(envelope**2, dx=grid.dk))
    np.testing.assert_allclose(evolved.amplitudes, scale * closed, atol=1e-10)


def test_closed_form_random_modes():
    rng = np.random.default_rng(5)
    params = DimensionlessParams(v_z=1.7)
    for _ in range(20):
        k, tau, phase = rng.uniform(-2, 2), rng.uniform(0, 20), rng.uniform(0, 2 * math.pi)
        spec = GaussianSpec.superposition(k, 0.1, phase)
        closed = closed_form_spinor(spec, k, tau, params)
        direct = mode_propagator(k, tau, params) @ spec.weights * gaussian_amplitude(spec, k)
        np.testing.assert_allclose(np.abs(closed), np.abs(direct), atol=1e-12)


def test_closed_form_at_rest_is_pure_phase(unit_params):
    spec = GaussianSpec(0.0, 0.1, 1.0, 0.0)
    closed = closed_form_spinor(spec, 0.0, 0.8, unit_params)
    envelope = gaussian_amplitude(spec, 0.0)
    assert abs(closed[0]) == pytest.approx(envelope)
    assert closed[1] == 0


def test_closed_form_restores_populations_after_half_period(unit_params):
    spec = GaussianSpec.superposition(1.0, 0.1, 0.3)
    k = 1.0
    tau = math.pi / float(mode_frequency(k, unit_params))
    closed = closed_form_spinor(spec, k, tau, unit_params)
    initial = spec.weights * gaussian_amplitude(spec, k)
    np.testing.assert_allclose(np.abs(closed) ** 2, np.abs(initial) ** 2, atol=1e-12)


def test_closed_form_needs_unit_coupling():
    with pytest.raises(UnsupportedRegimeError):
        closed_form_spinor(
            GaussianSpec(0.0, 0.1), 0.0, 1.0, DimensionlessParams(v_z=1.0, c_theta=0.5)
        )


def test_mode_trajectory_eigenvector_has_no_oscillation(unit_params):
    k = 0.7
    _, vectors = np.linalg.eigh(hamiltonian_k(k, unit_params, Limit.DIRAC).matrix)
    c1, c2 = vectors[:, 1]
    trajectory = mode_zb_trajectory(k, c1, c2, unit_params, np.linspace(0, 10, 101))
    np.testing.assert_allclose(trajectory.oscillation(), 0.0, atol=1e-12)
    assert trajectory.velocity != 0


def test_mode_trajectory_at_rest(unit_params):
    w = 1 / math.sqrt(2)
    tau = np.linspace(0, 10, 201)
    trajectory = mode_zb_trajectory(0.0, w, w, unit_params, tau)
    assert trajectory.velocity == 0
    np.testing.assert_allclose(trajectory.displacement, np.sin(2 * tau), atol=1e-12)


@pytest.mark.parametrize("k", [0.0, 0.5, 1.0])
@pytest.mark.parametrize("v_z", [1.0, 3.0])
def test_mode_trajectory_frequency(k, v_z):
    params = DimensionlessParams(v_z=v_z)
    w = 1 / math.sqrt(2)
    tau = np.linspace(0, 20, 8001)
    trajectory = mode_zb_trajectory(k, w, w, params, tau)
    measured = zero_crossing_frequency(tau, trajectory.oscillation())
    assert measured == pytest.approx(2 * float(mode_frequency(k, params)), rel=1e-3)


def test_mode_trajectory_needs_normalised_spinor(unit_params):
    with pytest.raises(PreconditionError):
        mode_zb_trajectory(0.0, 1.0, 1.0, unit_params, [0.0, 1.0])
