import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photonwave import grid
from photonwave.relativity import dirac

label = st.tuples(*(st.integers(min_value=-3, max_value=3) for _ in range(3)))
mass = st.floats(min_value=0.0, max_value=3.0, allow_nan=False)


def test_clifford_algebra():
    assert dirac.clifford_defect() < 1e-15


@settings(max_examples=40, deadline=None)
@given(label, st.sampled_from([0.5, -0.5]), st.sampled_from([1, -1]), mass)
def test_plane_waves_solve_the_dirac_equation(n, spin, sign, m):
    box8 = grid.cubic_box(2 * np.pi, 8)
    p = grid.wave_vector(box8, n)
    if m == 0.0 and not np.any(p):
        return
    wave = dirac.dirac_plane_wave(p, spin, sign, m)
    assert np.linalg.norm(wave.spinor) == pytest.approx(1.0)
    h = dirac.hamiltonian_symbol(p, m)
    np.testing.assert_allclose(h @ wave.spinor, sign * wave.energy * wave.spinor, atol=1e-12)
    psi, dpsi = wave.field(box8, t=0.4)
    residual = dirac.dirac_residual(psi, dpsi, box8, m)
    assert np.max(np.abs(residual)) < 1e-12 * (1.0 + wave.energy)


def test_rest_frame_has_no_small_component():
    for sign in (1, -1):
        wave = dirac.dirac_plane_wave(np.zeros(3), 0.5, sign, 1.0)
        assert wave.small_to_large() == 0.0
    np.testing.assert_array_equal(
        dirac.dirac_plane_wave(np.zeros(3), -0.5, 1, 2.0).spinor, [0, 1, 0, 0]
    )


def test_small_component_ratio():
    p = np.array([0.3, -0.2, 0.5])
    wave = dirac.dirac_plane_wave(p, -0.5, 1, 1.0)
    assert wave.small_to_large() == pytest.approx(np.linalg.norm(p) / (wave.energy + 1.0))


def test_plane_wave_arguments_are_checked():
    with pytest.raises(ValueError):
        dirac.dirac_plane_wave((1.0, 0.0, 0.0), 1.0, 1, 1.0)
    with pytest.raises(ValueError):
        dirac.dirac_plane_wave((1.0, 0.0, 0.0), 0.5, 0, 1.0)
    with pytest.raises(ValueError):
        dirac.dirac_plane_wave((1.0, 0.0, 0.0), 0.5, 1, -1.0)
    with pytest.raises(ValueError):
        dirac.dirac_plane_wave((0.0, 0.0, 0.0), 0.5, 1, 0.0)


def test_four_component_residual_splits_into_two(box8):
    psi = dirac.random_dirac_field(box8, seed=3)
    noise = dirac.random_dirac_field(box8, seed=4)
    assert dirac.equivalence_defect(psi, noise, box8, 0.7) < 1e-12


def test_massless_equations_are_symmetric_in_the_two_spinors(box8):
    chi = dirac.random_dirac_field(box8, seed=5)[:2]
    dchi = dirac.random_dirac_field(box8, seed=6)[:2]
    r1, r2 = dirac.maxwell_like_residual(chi, chi, dchi, dchi, box8, 0.0)
    np.testing.assert_array_equal(r1, r2)


def test_evolution_matches_plane_waves(box8):
    p = grid.wave_vector(box8, (1, -1, 2))
    for sign in (1, -1):
        wave = dirac.dirac_plane_wave(p, 0.5, sign, 0.8)
        psi, _ = wave.field(box8)
        expected, _ = wave.field(box8, t=1.3)
        np.testing.assert_allclose(dirac.dirac_evolve(psi, box8, 0.8, 1.3), expected, atol=1e-12)


def test_evolution_conserves_the_number(box8):
    psi = dirac.random_dirac_field(box8, seed=8)
    evolved = dirac.dirac_evolve(psi, box8, 1.0, 2.1)
    before = grid.integrate(dirac.number_density(psi), box8)
    after = grid.integrate(dirac.number_density(evolved), box8)
    assert after == pytest.approx(before, rel=1e-12)
    assert np.max(np.abs(dirac.time_derivative(psi, box8, 1.0))) > 0.0


def test_boost_rescales_the_scalar_density(box8):
    psi = dirac.random_dirac_field(box8, seed=9)
    eps = 1e-2
    boosted = dirac.boost_spinor(psi, 1, eps)
    np.testing.assert_allclose(
        dirac.density_difference(boosted),
        (1 - eps**2 / 4) * dirac.density_difference(psi),
        rtol=1e-12,
        atol=1e-14,
    )


def test_analogy_suite(box8):
    report = dirac.analogy_suite(box8, mass=1.0, seed=0, rapidity=1e-3)
    assert report.coupling == pytest.approx(np.sqrt(2.0))
    assert report.swap_residual < 1e-12
    assert report.photon_swap < 1e-13
    assert report.boost_ratio == pytest.approx(4.0, rel=1e-6)
    assert report.number_drift < 1e-10
    assert report.component_ratio < 1e-10
    assert set(report.as_dict()) >= {"coupling", "boost_ratio"}
