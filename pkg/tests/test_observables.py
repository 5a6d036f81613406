import numpy as np
import pytest

from photonwave import grid
from photonwave.fields import dynamics, observables
from photonwave.fields.observables import NonRealField


def test_decomposition_reconstructs_real_fields(real_state):
    amps = observables.decompose(real_state)
    rebuilt = observables.reconstruct(amps)
    assert np.max(np.abs(rebuilt.psi - real_state.psi)) < 1e-12 * np.max(np.abs(real_state.psi))


def test_real_fields_pair_negative_and_positive_amplitudes(real_state):
    amps = observables.decompose(real_state)
    assert amps.reality_defect() < 1e-12 * np.max(np.abs(amps.positive))


def test_complex_fields_are_rejected(complex_state):
    with pytest.raises(NonRealField):
        observables.decompose(complex_state)
    amps = observables.decompose(complex_state, require_real=False)
    assert len(amps.labels) == 2 * len(list(grid.iter_mode_labels(complex_state.box)))


def test_energy_agrees_three_ways(real_state):
    field_energy = dynamics.energy(real_state)
    amps = observables.decompose(real_state)
    hamiltonian, _ = observables.four_momentum(real_state)
    assert amps.energy() == pytest.approx(field_energy, rel=1e-10)
    assert hamiltonian == pytest.approx(field_energy, rel=1e-10)


def test_momentum_agrees_with_mode_sum(real_state):
    energy = dynamics.energy(real_state)
    amps = observables.decompose(real_state)
    _, canonical = observables.four_momentum(real_state)
    np.testing.assert_allclose(canonical, amps.momentum(), atol=1e-10 * energy)
    np.testing.assert_allclose(dynamics.momentum(real_state), amps.momentum(), atol=1e-10 * energy)


def test_pseudo_lagrangian_vanishes_on_shell(real_state):
    density = observables.pseudo_lagrangian_density(real_state)
    scale = np.max(np.abs(real_state.psi)) ** 2 * dynamics.max_wave_number(real_state.box)
    assert np.max(np.abs(density)) < 1e-12 * scale


def test_pseudo_lagrangian_detects_wrong_time_derivative(real_state):
    density = observables.pseudo_lagrangian_density(real_state, np.zeros_like(real_state.psi))
    assert np.max(np.abs(density)) > 1e-3


def test_euler_lagrange_finite_differences(real_state):
    report = observables.euler_lagrange_check(real_state, seed=2)
    assert report.relative_error < 1e-6
    assert report.step in report.errors


def test_canonical_momentum_keeps_transverse_content(real_state):
    conjugate = observables.canonical_momentum(real_state)
    assert conjugate.discarded_fraction < 1e-12
    assert conjugate.pi.shape == real_state.psi.shape


def test_transverse_delta_symbol_is_a_projector():
    k = np.array([1.0, -2.0, 0.5])
    delta = observables.transverse_delta_symbol(k)
    np.testing.assert_allclose(delta @ delta, delta, atol=1e-15)
    np.testing.assert_allclose(delta @ k, np.zeros(3), atol=1e-15)
    np.testing.assert_array_equal(observables.transverse_delta_symbol(np.zeros(3)), np.eye(3))


def test_transverse_part_removes_gradients(box8, rng):
    E = grid.random_band_limited(box8, rng, 3, cutoff=2, transverse=False, real=True)
    state = dynamics.from_EB(E, np.zeros_like(E), box8)
    projected = observables.transverse_part(state)
    assert dynamics.transversality(projected) < 1e-12


def test_amplitude_export(tmp_path, real_state):
    amps = observables.decompose(real_state)
    path = observables.export_amplitudes(amps, tmp_path / "amps.csv")
    header = path.read_text().splitlines()[0]
    assert header == "n1,n2,n3,lambda,re_a,im_a,omega"
    assert len(path.read_text().splitlines()) == len(amps.labels) + 1
