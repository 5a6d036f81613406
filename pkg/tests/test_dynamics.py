import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photonwave import grid
from photonwave.core.algebra import apply_hamiltonian
from photonwave.core.modes import ModeSpec, mode_on_grid
from photonwave.fields import dynamics
from photonwave.fields.dynamics import FieldState, ShapeMismatch, UnstableStep

component = st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False)


def test_spectral_evolution_is_unitary_and_reversible(real_state):
    box = real_state.box
    norm = grid.grid_norm(real_state.psi, box)
    evolved = dynamics.evolve_spectral(real_state, 2.5)
    assert abs(grid.grid_norm(evolved.psi, box) - norm) / norm < 1e-12
    back = dynamics.evolve_spectral(evolved, -2.5)
    assert np.max(np.abs(back.psi - real_state.psi)) < 1e-12 * np.max(np.abs(real_state.psi))
    assert back.time == pytest.approx(0.0)


def test_single_mode_picks_up_its_phase(box8):
    mode = ModeSpec(box=box8, n=(1, 2, 0), lam=-1)
    state = FieldState(box=box8, psi=mode_on_grid(mode, 0.0))
    evolved = dynamics.evolve_spectral(state, 0.9)
    np.testing.assert_allclose(evolved.psi, mode_on_grid(mode, 0.9), atol=1e-13)


def test_curl_integrator_converges_at_second_order(box8):
    state = dynamics.random_transverse_field(box8, seed=5)
    E, B = dynamics.to_EB(state)
    E_ref, _ = dynamics.to_EB(dynamics.evolve_spectral(state, 1.0))
    errors = []
    for steps in (64, 128, 256):
        E_num, _ = dynamics.evolve_curl(E.real, B.real, box8, 1.0 / steps, steps)
        assert np.isrealobj(E_num)
        errors.append(np.max(np.abs(E_num - E_ref.real)) / np.max(np.abs(E_ref)))
    order = math.log2(errors[1] / errors[2])
    assert order == pytest.approx(2.0, abs=0.1)
    assert errors[-1] < 1e-3


def test_curl_integrator_refuses_unstable_steps(box8):
    E = np.zeros((3,) + box8.shape)
    with pytest.raises(UnstableStep):
        dynamics.evolve_curl(E, E, box8, 1.0, 1)


def test_field_state_checks_shape(box8):
    with pytest.raises(ShapeMismatch):
        FieldState(box=box8, psi=np.zeros((6, 4, 4, 4), dtype=complex))


def test_conserved_quantities_over_one_period():
    box = grid.cubic_box(24.0, 32)
    k0 = 2 * np.pi * 5 / 24.0
    duration = 2 * np.pi / k0
    state = dynamics.gaussian_packet(box, (k0, 0.0, 0.0), 0.6, center=(-duration / 2, 0.0, 0.0))
    report = dynamics.track(state, duration, samples=4)
    drift = report.drift()
    assert drift["energy"] < 1e-8
    assert drift["momentum"] < 1e-8
    assert drift["angular_momentum"] < 1e-8
    assert not any(report.boundary_flags)


def test_packet_is_transverse_and_scaled(box16):
    state = dynamics.gaussian_packet(box16, (2.0, 0.0, 0.0), 0.8, amplitude=0.5)
    E, _ = dynamics.to_EB(state)
    assert dynamics.transversality(state) < 1e-12
    assert np.max(np.abs(E)) == pytest.approx(0.5)


def test_packet_has_only_positive_frequencies(box16):
    state = dynamics.gaussian_packet(box16, (2.0, 0.0, 0.0), 0.8)
    psi_hat = grid.fft(state.psi)
    k_norm = np.linalg.norm(grid.wave_vectors(box16), axis=0)
    positive = grid.ifft(k_norm * psi_hat)
    residual = np.max(np.abs(apply_hamiltonian(state.psi, box16) - positive))
    assert residual < 1e-12 * np.max(np.abs(positive))


def test_momentum_points_along_the_carrier(box16):
    state = dynamics.gaussian_packet(box16, (0.0, 3.0, 0.0), 0.8)
    p = dynamics.momentum(state)
    assert p[1] > 0
    assert abs(p[0]) < 1e-10 * p[1] and abs(p[2]) < 1e-10 * p[1]


def test_real_fields_carry_no_angular_momentum(real_state):
    assert np.max(np.abs(dynamics.angular_momentum(real_state))) < 1e-12 * dynamics.energy(
        real_state
    )


def test_matrix_form_and_duality(real_state):
    assert dynamics.maxwell_matrix_form_residual(real_state) < 1e-12
    dual = dynamics.duality_transform(real_state)
    assert dynamics.maxwell_matrix_form_residual(dual) < 1e-12
    E, B = dynamics.to_EB(real_state)
    E_dual, B_dual = dynamics.to_EB(dual)
    np.testing.assert_allclose(E_dual, B, atol=1e-14)
    np.testing.assert_allclose(B_dual, -E, atol=1e-14)


def test_transverse_fields_have_no_longitudinal_content(real_state):
    content = dynamics.longitudinal_field_content(real_state)
    assert content.electric < 1e-12 and content.magnetic < 1e-12


def test_gradient_field_is_longitudinal(box8, rng):
    potential = grid.random_band_limited(box8, rng, 1, cutoff=2, transverse=False, real=True)[0]
    E = grid.gradient(potential, box8).real
    state = dynamics.from_EB(E, np.zeros_like(E), box8)
    content = dynamics.longitudinal_field_content(state)
    assert content.electric > 0.1
    assert content.magnetic < 1e-12


@settings(max_examples=50, deadline=None)
@given(component, component, component, component)
def test_second_order_factorization(w, k1, k2, k3):
    k = np.array([k1, k2, k3])
    assert dynamics.factorization_residual(k) < 1e-12 * max(1.0, k @ k)
    assert dynamics.factorization_residual(k, w) < 1e-12 * max(1.0, k @ k + w * w)


def test_zero_state_has_no_energy(box8):
    assert dynamics.energy(dynamics.zero_state(box8)) == 0.0
