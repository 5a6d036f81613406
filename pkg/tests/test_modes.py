import numpy as np
import pytest
from pydantic import ValidationError

from photonwave import grid
from photonwave.core import modes
from photonwave.core.modes import MixedBox, ModeSpec
from photonwave.core.polarization import helicity_operator


def _both_signs(box, cutoff=1):
    return [
        ModeSpec(box=box, n=m.n, lam=m.lam, freq_sign=sign)
        for m in modes.transverse_modes(box, cutoff)
        for sign in (1, -1)
    ]


def test_g_spinor_is_helicity_times_f():
    k = np.array([0.4, -1.1, 2.0])
    for lam in (-1, 1):
        assert np.array_equal(modes.g_spinor(k, lam), lam * modes.f_spinor(k, lam))


def test_block_swap_maps_f_to_g():
    k = np.array([1.0, 2.0, 0.0])
    for lam in (-1, 0, 1):
        np.testing.assert_allclose(modes.block_swap(modes.f_spinor(k, lam)), modes.g_spinor(k, lam))


def test_orthonormality_on_grid(box8):
    both = _both_signs(box8)
    gram = modes.orthonormality_check(box8, both, t=0.37, normalization="canonical")
    assert np.max(np.abs(gram)) < 1e-12 * max(m.omega for m in both)


def test_orthonormality_with_number_normalization(box8):
    both = _both_signs(box8)
    gram = modes.orthonormality_check(box8, both, t=1.3, normalization="number")
    assert np.max(np.abs(gram)) < 1e-12


def test_every_mode_solves_the_wave_equation(box8):
    for mode in _both_signs(box8):
        assert modes.dirac_residual(mode, 0.8, normalization="canonical") < 1e-12


def test_longitudinal_modes_carry_no_amplitude_by_default(box8):
    mode = ModeSpec(box=box8, n=(1, 0, 0), lam=0)
    assert mode.omega == 0.0
    assert modes.amplitude(mode, "canonical", unit_longitudinal=False) == 0.0
    assert modes.amplitude(mode, "canonical", unit_longitudinal=True) == pytest.approx(
        1 / np.sqrt(box8.volume)
    )


def test_completeness_symmetrized_and_single_k(box8):
    for k in ([1.0, 0.0, 0.0], [0.3, -0.4, 1.2], [1e-9, 0.0, -2.0]):
        report = modes.completeness_check(box8, k, "canonical")
        assert np.max(np.abs(report.symmetrized)) < 1e-12
        np.testing.assert_allclose(report.single_k_off_diagonal, helicity_operator(k), atol=1e-12)


def test_dispersion_has_zero_frequency_pair():
    spectrum = modes.dispersion_spectrum([0.0, 3.0, 4.0])
    np.testing.assert_allclose(spectrum, [5, 5, 0, 0, -5, -5], atol=1e-12)


def test_mixed_boxes_are_rejected(box8):
    other = grid.cubic_box(3.0, 8)
    mixed = [ModeSpec(box=box8, n=(1, 0, 0)), ModeSpec(box=other, n=(1, 0, 0))]
    with pytest.raises(MixedBox):
        modes.orthonormality_check(box8, mixed)


def test_mode_spec_validation(box8):
    with pytest.raises(ValidationError):
        ModeSpec(box=box8, n=(1, 0, 0), lam=2)
    with pytest.raises(ValidationError):
        ModeSpec(box=box8, n=(1, 0, 0), freq_sign=0)


def test_enumeration_covers_every_label(box8):
    listed = modes.positive_and_negative_modes(box8, 1)
    assert len(listed) == 26 * 3 * 2
    assert listed[0].freq_sign == 1 and listed[-1].freq_sign == -1
    assert {m.lam for m in listed} == {-1, 0, 1}
