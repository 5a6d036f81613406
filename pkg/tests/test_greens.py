import numpy as np
import pytest
from pydantic import ValidationError

from photonwave.grid import BudgetExceeded
from photonwave.quantum import greens
from photonwave.quantum.greens import PropagatorLattice, ZeroSpatialK


@pytest.fixture()
def lattice():
    return PropagatorLattice(dims=(8, 8, 8, 8), epsilon=1e-4)


def test_scalar_multiplier_values():
    assert greens.scalar_propagator_multiplier((2.0, 1.0, 0.0, 0.0), 1e-14) == pytest.approx(1j / 3)
    # on the light cone only the regulator is left
    assert greens.scalar_propagator_multiplier((1.0, 0.0, 1.0, 0.0), 1e-3) == pytest.approx(1e3)


def test_scalar_multiplier_is_even():
    k4 = np.array([0.7, -0.2, 1.3, 0.4])
    assert greens.scalar_propagator_multiplier(k4, 1e-2) == greens.scalar_propagator_multiplier(
        -k4, 1e-2
    )


def test_regulator_must_be_positive():
    with pytest.raises(ValueError):
        greens.scalar_propagator_multiplier((1.0, 0.0, 0.0, 0.5), 0.0)
    with pytest.raises(ValidationError):
        PropagatorLattice(epsilon=-1.0)
    with pytest.raises(ValidationError):
        PropagatorLattice(dims=(8, 7, 8, 8))


def test_transverse_multiplier_needs_spatial_k():
    with pytest.raises(ZeroSpatialK):
        greens.transverse_green_multiplier((1.0, 0.0, 0.0, 0.0), 1e-3)


def test_defining_property(rng):
    for _ in range(10):
        report = greens.green_defining_property(rng.standard_normal(4), 1e-3)
        assert report.exact < 1e-10
        assert report.factorization < 1e-11
        assert report.omega_kills_projector < 1e-11


def test_defining_property_limit_is_linear_in_epsilon():
    k4 = (1.3, 0.2, -0.5, 0.4)
    small = greens.green_defining_property(k4, 1e-6).limit
    large = greens.green_defining_property(k4, 2e-6).limit
    assert large / small == pytest.approx(2.0, rel=1e-3)


def test_wave_operator_on_the_lattice(lattice):
    report = greens.wave_operator_check(lattice)
    assert report.regulated < 1e-10
    assert report.excluded_sites >= 1


def test_position_space_propagator_is_even(lattice):
    assert greens.evenness_residual(lattice) < 1e-10


def test_epsilon_sweep_is_linear(lattice):
    first, second = greens.epsilon_sweep(lattice, (1e-4, 1e-3))
    assert second.change / first.change == pytest.approx(10.0, rel=0.05)
    with pytest.raises(ValueError):
        greens.epsilon_sweep(lattice, (0.0,))


def test_doubling_epsilon_only_matters_near_the_light_cone(lattice):
    report = greens.regulator_doubling(lattice)
    assert report.near_sites > 0 and report.far_sites > 0
    assert report.far_field <= lattice.epsilon
    assert report.near_cone > 5 * report.far_field
    # the smallest |k^2| on this lattice is 16 / golden^2 - 6
    smallest = 16 / greens.GOLDEN**2 - 6
    assert report.near_cone == pytest.approx(1e-4 / abs(smallest + 2e-4j), rel=1e-9)
    with pytest.raises(ValueError):
        greens.regulator_doubling(lattice, band=0.0)


def test_lattice_budget():
    with pytest.raises(BudgetExceeded):
        greens.check_lattice_budget(PropagatorLattice(dims=(40, 32, 32, 32)))


def test_propagator_export(tmp_path):
    small = PropagatorLattice(dims=(2, 2, 2, 2))
    path = greens.export_propagator(greens.position_space_propagator(small), tmp_path / "p.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "it,ix,iy,iz,re,im"
    assert len(lines) == 17
