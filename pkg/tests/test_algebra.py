import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photonwave import grid
from photonwave.core import algebra
from photonwave.core.modes import dispersion_spectrum
from photonwave.grid import NonTransverse

finite = st.floats(min_value=-20, max_value=20, allow_nan=False, allow_infinity=False)


def test_tau_commutators_are_exact():
    m = algebra.build_matrix_set()
    for l in range(3):
        for n in range(3):
            expected = 1j * np.einsum("k,kab->ab", algebra.LEVI_CIVITA[l, n], m.tau)
            assert np.array_equal(algebra.commutator(m.tau[l], m.tau[n]), expected)


def test_beta0_squares_to_identity_and_spin_casimir():
    m = algebra.build_matrix_set()
    assert np.array_equal(m.beta0 @ m.beta0, np.eye(6))
    assert np.array_equal(sum(s @ s for s in m.spin), 2 * np.eye(6))


def test_generator_table_layout():
    m = algebra.build_matrix_set()
    for l in range(3):
        assert np.array_equal(m.sigma[l + 1, 0], 1j * m.chi[l])
        assert np.array_equal(m.sigma[0, l + 1], -m.sigma[l + 1, 0])
        for n in range(3):
            rotation = m.sigma[l + 1, n + 1]
            assert not np.any(algebra.commutator(m.beta0, rotation))


def test_lowered_beta_flips_spatial_sign():
    m = algebra.build_matrix_set()
    assert np.array_equal(m.beta_lower(0), m.beta_upper(0))
    for i in range(1, 4):
        assert np.array_equal(m.beta_lower(i), -m.beta_upper(i))


def test_matrix_set_is_read_only():
    m = algebra.build_matrix_set()
    with pytest.raises(ValueError):
        m.beta0[0, 0] = 2.0


@settings(max_examples=100, deadline=None)
@given(finite, finite, finite)
def test_hamiltonian_symbol_spectrum(k1, k2, k3):
    k = np.array([k1, k2, k3])
    norm = np.linalg.norm(k)
    expected = norm * np.array([1, 1, 0, 0, -1, -1])
    np.testing.assert_allclose(dispersion_spectrum(k), expected, atol=1e-12 * max(norm, 1.0))


def test_hamiltonian_symbol_rejects_non_finite():
    with pytest.raises(ValueError):
        algebra.hamiltonian_symbol([np.nan, 0.0, 1.0])


def test_spectral_hamiltonian_matches_symbol_on_plane_wave(box8):
    n = (1, -2, 0)
    k = grid.wave_vector(box8, n)
    x = grid.positions(box8)
    spinor = np.arange(6) + 1j
    psi = spinor.reshape(6, 1, 1, 1) * np.exp(1j * np.einsum("i,i...->...", k, x))
    direct = np.einsum("ab,b...->a...", algebra.hamiltonian_symbol(k), psi)
    np.testing.assert_allclose(algebra.apply_hamiltonian(psi, box8), direct, atol=1e-12)


def test_spin_orbit_commutator_vanishes_on_transverse_fields(box8):
    assert algebra.verify_spin_orbit_commutator(box8, seed=3) < 1e-10


def test_spin_orbit_commutator_needs_transverse_field(box8, rng):
    psi = grid.random_band_limited(box8, rng, 6, cutoff=2, transverse=False)
    with pytest.raises(NonTransverse):
        algebra.verify_spin_orbit_commutator(box8, psi=psi)


def test_spin_orbit_commutator_needs_resolution():
    with pytest.raises(ValueError):
        algebra.verify_spin_orbit_commutator(grid.cubic_box(2 * np.pi, 4))
