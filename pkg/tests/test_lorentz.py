import numpy as np
import pytest

from photonwave import grid
from photonwave.fields.dynamics import FieldState, from_EB
from photonwave.grid import NonTransverse
from photonwave.relativity import lorentz
from photonwave.relativity.lorentz import InfinitesimalLorentz


def test_generator_identities_hold_exactly():
    for name, value in lorentz.generator_identities().items():
        assert value < 1e-14, name


def test_parameters_must_be_antisymmetric():
    with pytest.raises(ValueError):
        InfinitesimalLorentz(np.eye(4))
    with pytest.raises(ValueError):
        InfinitesimalLorentz(np.zeros((3, 3)))


def test_rotation_and_boost_parameters():
    rotation = InfinitesimalLorentz.rotation(2, 0.1)
    assert rotation.eps[1, 2] == 0.1 and rotation.eps[2, 1] == -0.1
    boost = InfinitesimalLorentz.boost(0, 0.2)
    assert boost.eps[1, 0] == 0.2 and boost.eps[0, 1] == -0.2
    assert boost.magnitude == 0.2
    np.testing.assert_array_equal(InfinitesimalLorentz.identity().matrix(), np.eye(6))


def test_finite_rotation_matrix_turns_x_into_y():
    rotated = lorentz.rotation_matrix(2, np.pi / 2) @ [1, 0, 0]
    np.testing.assert_allclose(rotated, [0, 1, 0], atol=1e-15)


def test_small_rotation_rotates_both_blocks(complex_state):
    defect = lorentz.rotation_defect(complex_state.psi, 1, 1e-6)
    assert defect < 1e-10 * np.max(np.abs(complex_state.psi))


def test_invariance_condition_for_transverse_fields(complex_state):
    report = lorentz.delta_L_check(complex_state)
    assert len(report.mismatches) == 6
    assert report.rotation < 1e-12
    assert report.boost < 1e-12
    assert report.boost_bilinear < 1e-12


def test_boost_needs_a_transverse_field(box8, rng):
    psi = grid.random_band_limited(box8, rng, 6, cutoff=2, transverse=False)
    state = FieldState(box=box8, psi=psi)
    with pytest.raises(NonTransverse):
        lorentz.delta_L_check(state)
    with pytest.raises(NonTransverse):
        lorentz.delta_L_scaling(state)


def test_uniform_fields_are_rejected(box8, complex_state):
    E = np.zeros((3,) + box8.shape)
    E[0] = 1.0
    uniform = from_EB(E, np.zeros_like(E), box8)
    assert grid.transversality_residual(uniform.psi, box8) < 1e-14
    with pytest.raises(NonTransverse):
        lorentz.delta_L_check(uniform)
    with pytest.raises(NonTransverse):
        lorentz.delta_L_scaling(uniform)

    offset = FieldState(box=box8, psi=complex_state.psi + 1e-6)
    with pytest.raises(NonTransverse):
        lorentz.delta_L_check(offset)


def test_boost_bilinear_is_the_divergence_for_longitudinal_fields(box8, rng):
    psi = grid.random_band_limited(box8, rng, 6, cutoff=2, transverse=False)
    state = FieldState(box=box8, psi=psi)
    assert np.max(np.abs(lorentz.boost_bilinear(state, 0))) > 1e-3


@pytest.mark.parametrize("kind", ["boost", "rotation"])
def test_lagrangian_change_is_second_order(complex_state, kind):
    report = lorentz.delta_L_scaling(complex_state, kind, axis=1)
    assert min(report.orders) > 1.9


def test_identity_leaves_the_lagrangian_unchanged(complex_state):
    assert lorentz.delta_L(complex_state, InfinitesimalLorentz.identity()) == 0.0


@pytest.mark.parametrize(
    "build", [InfinitesimalLorentz.boost, InfinitesimalLorentz.rotation], ids=["boost", "rotation"]
)
def test_pseudo_unitarity_defect_is_second_order(build):
    small = lorentz.pseudo_unitarity_defect(build(1, 1e-3))
    large = lorentz.pseudo_unitarity_defect(build(1, 2e-3))
    assert small > 0.0
    assert large / small == pytest.approx(4.0, rel=1e-6)


def test_boost_response(complex_state):
    first = lorentz.boost_response(complex_state, 2, 1e-3)
    second = lorentz.boost_response(complex_state, 2, 2e-3)
    assert second.invariant_change / first.invariant_change == pytest.approx(4.0, rel=1e-6)
    assert second.energy_change / first.energy_change == pytest.approx(2.0, rel=1e-2)


def test_scalar_invariants_agree(real_state, complex_state):
    for state in (real_state, complex_state):
        invariants = lorentz.invariants_of_state(state)
        assert invariants.consistency < 1e-12
