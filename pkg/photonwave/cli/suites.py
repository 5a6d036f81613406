"""Named checks grouped per task.

Every check becomes one summary row ``(name, value, tolerance, passed)``. ``kind`` says how the
value is compared: ``max`` (value <= tolerance), ``min`` (value >= tolerance) or ``near``
(``|value - target| <= tolerance``).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from photonwave import export, grid
from photonwave.cli.schemas import RunConfig
from photonwave.core import algebra, modes, polarization
from photonwave.fields import dynamics, observables
from photonwave.grid import BoxSpec
from photonwave.quantum import greens, quantization
from photonwave.relativity import dirac, lorentz

logger = logging.getLogger(__name__)

PLANE_WAVE_LABEL = (1, 0, 1)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    kind: str = "max"
    target: float | None = None

    def as_dict(self) -> dict:
        row = {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "kind": self.kind,
        }
        if self.target is not None:
            row["target"] = self.target
        return row


def at_most(name: str, value: float, tolerance: float) -> CheckResult:
    value = float(value)
    return CheckResult(name, value, tolerance, bool(value <= tolerance))


def at_least(name: str, value: float, bound: float) -> CheckResult:
    value = float(value)
    return CheckResult(name, value, bound, bool(value >= bound), kind="min")


def near(name: str, value: float, target: float, width: float) -> CheckResult:
    value = float(value)
    return CheckResult(
        name, value, width, bool(abs(value - target) <= width), kind="near", target=target
    )


def build_box(config: RunConfig) -> BoxSpec:
    box = BoxSpec(lengths=config.box.lengths, grid_points=config.box.points)
    grid.check_budget(box)
    return box


def _small_box(config: RunConfig) -> BoxSpec:
    return BoxSpec(lengths=config.box.lengths, grid_points=(8, 8, 8))


def _sample_wave_vectors(seed: int, count: int = 100) -> np.ndarray:
    rng = np.random.default_rng(seed)
    ks = rng.standard_normal((count, 3))
    ks[:4] = [(1e-9, 2e-9, 1.0), (-3e-10, 1e-9, -2.0), (0.0, 0.0, 1.5), (0.0, 0.0, -0.7)]
    return ks


def algebra_checks(config: RunConfig) -> list[CheckResult]:
    tol = config.effective_tolerances
    m = algebra.build_matrix_set()
    tau_defect = 0.0
    for l in range(3):
        for n in range(3):
            expected = 1j * np.einsum("k,kab->ab", algebra.LEVI_CIVITA[l, n], m.tau)
            tau_defect = max(
                tau_defect, float(np.max(np.abs(algebra.commutator(m.tau[l], m.tau[n]) - expected)))
            )
    casimir = sum(s @ s for s in m.spin)
    results = [
        at_most("algebra.tau_commutator", tau_defect, tol.exact),
        at_most("algebra.beta0_square", np.max(np.abs(m.beta0 @ m.beta0 - np.eye(6))), tol.exact),
        at_most("algebra.spin_casimir", np.max(np.abs(casimir - 2 * np.eye(6))), tol.exact),
    ]
    for name, value in lorentz.generator_identities().items():
        results.append(at_most(f"algebra.{name}", value, tol.exact))
    results.append(
        at_most(
            "algebra.spin_orbit_commutator",
            algebra.verify_spin_orbit_commutator(_small_box(config), seed=config.seed),
            tol.spin_orbit,
        )
    )
    return results


def mode_checks(config: RunConfig) -> list[CheckResult]:
    tol = config.effective_tolerances
    ks = _sample_wave_vectors(config.seed)
    dispersion = max(
        float(
            np.max(
                np.abs(
                    modes.dispersion_spectrum(k)
                    - np.linalg.norm(k) * np.array([1, 1, 0, 0, -1, -1])
                )
            )
        )
        for k in ks
    )
    reports = [polarization.verify_polarization_identities(k) for k in ks]

    box = _small_box(config)
    helicities = (-1, 0, 1) if config.unit_longitudinal else (-1, 1)
    both_signs = [
        modes.ModeSpec(box=box, n=n, lam=lam, freq_sign=sign)
        for n in grid.iter_mode_labels(box, config.modes.cutoff)
        for lam in helicities
        for sign in (1, -1)
    ]
    norms = {"normalization": config.normalization, "unit_longitudinal": config.unit_longitudinal}
    gram = modes.orthonormality_check(box, both_signs, t=0.37, **norms)
    residual = max(modes.dirac_residual(m, 0.37, **norms) for m in both_signs)
    relation = max(
        float(np.max(np.abs(modes.g_spinor(k, lam) - lam * modes.f_spinor(k, lam))))
        for k in ks[:10]
        for lam in (-1, 1)
    )
    completeness = [modes.completeness_check(box, k, config.normalization) for k in ks[:10]]
    off_diagonal = max(
        float(np.max(np.abs(c.single_k_off_diagonal - polarization.helicity_operator(k))))
        for c, k in zip(completeness, ks[:10])
    )
    return [
        at_most("modes.dispersion", dispersion, tol.dispersion),
        at_most(
            "polarization.orthonormality",
            max(r.orthonormality for r in reports),
            tol.polarization,
        ),
        at_most(
            "polarization.completeness", max(r.completeness for r in reports), tol.polarization
        ),
        at_most("polarization.helicity", max(r.helicity for r in reports), tol.polarization),
        at_most(
            "modes.orthonormality",
            np.max(np.abs(gram)) / max(m.omega for m in both_signs),
            tol.orthonormality,
        ),
        at_most("modes.wave_equation", residual, tol.mode_residual),
        at_most("modes.helicity_relation", relation, tol.exact),
        at_most(
            "modes.completeness_symmetrized",
            max(float(np.max(np.abs(c.symmetrized))) for c in completeness),
            tol.completeness,
        ),
        at_most("modes.completeness_single_k_off_diagonal", off_diagonal, tol.completeness),
    ]


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) / (float(np.max(np.abs(b))) or 1.0)


def dynamics_checks(config: RunConfig, box: BoxSpec | None = None) -> list[CheckResult]:
    tol = config.effective_tolerances
    box = box or build_box(config)
    state = dynamics.random_transverse_field(box, seed=config.seed)
    duration = 1.0
    evolved = dynamics.evolve_spectral(state, duration)
    back = dynamics.evolve_spectral(evolved, -duration)
    norm0 = grid.grid_norm(state.psi, box)

    E, B = dynamics.to_EB(state)
    E_ref, B_ref = dynamics.to_EB(evolved)
    errors = []
    steps = config.evolve.curl_steps
    for count in steps:
        E_num, B_num = dynamics.evolve_curl(E.real, B.real, box, duration / count, count)
        errors.append(max(_relative(E_num, E_ref.real), _relative(B_num, B_ref.real)))
    orders = [
        math.log(errors[i] / errors[i + 1]) / math.log(steps[i + 1] / steps[i])
        for i in range(len(steps) - 1)
    ]

    return [
        at_most(
            "dynamics.unitarity",
            abs(grid.grid_norm(evolved.psi, box) - norm0) / norm0,
            tol.unitarity,
        ),
        at_most("dynamics.reversibility", _relative(back.psi, state.psi), tol.reversibility),
        at_most("dynamics.curl_agreement", errors[-1], tol.curl_agreement),
        near(
            "dynamics.curl_order",
            orders[-1],
            config.orders.curl_order,
            config.orders.curl_order_width,
        ),
        at_most(
            "dynamics.matrix_form",
            dynamics.maxwell_matrix_form_residual(state),
            tol.mode_residual,
        ),
        at_most(
            "dynamics.duality",
            dynamics.maxwell_matrix_form_residual(dynamics.duality_transform(state)),
            tol.mode_residual,
        ),
        at_most(
            "dynamics.factorization", dynamics.grid_factorization_residual(box), tol.exact * 1e3
        ),
    ]


def conservation_packet() -> tuple[dynamics.FieldState, float]:
    """Circularly polarized packet that stays clear of the box faces for one period."""

    box = grid.cubic_box(24.0, 32)
    k0 = 2 * np.pi * 5 / 24.0
    duration = 2 * np.pi / k0
    state = dynamics.gaussian_packet(box, (k0, 0.0, 0.0), 0.6, center=(-duration / 2, 0.0, 0.0))
    return state, duration


def conservation_checks(config: RunConfig) -> list[CheckResult]:
    tol = config.effective_tolerances
    state, duration = conservation_packet()
    drift = dynamics.track(state, duration, config.evolve.samples).drift()
    return [
        at_most(f"dynamics.conservation.{name}", value, tol.conservation)
        for name, value in drift.items()
    ]


def observable_checks(config: RunConfig) -> list[CheckResult]:
    tol = config.effective_tolerances
    box = _small_box(config)
    state = dynamics.random_transverse_field(box, seed=config.seed)
    scale = float(np.max(np.abs(state.psi))) ** 2 * dynamics.max_wave_number(box)
    density = observables.pseudo_lagrangian_density(state)
    hamiltonian, momentum = observables.four_momentum(state)
    amps = observables.decompose(state)
    field_energy = dynamics.energy(state)
    report = observables.euler_lagrange_check(state, seed=config.seed)
    return [
        at_most("observables.lagrangian_on_shell", np.max(np.abs(density)) / scale, tol.lagrangian),
        at_most(
            "observables.hamiltonian_vs_field_energy",
            abs(hamiltonian - field_energy) / field_energy,
            tol.hamiltonian,
        ),
        at_most(
            "observables.mode_energy",
            abs(amps.energy() - field_energy) / field_energy,
            tol.hamiltonian,
        ),
        at_most(
            "observables.momentum",
            float(np.max(np.abs(momentum - amps.momentum()))) / field_energy,
            tol.hamiltonian,
        ),
        at_most(
            "observables.reality",
            amps.reality_defect() / (float(np.max(np.abs(amps.positive))) or 1.0),
            tol.orthonormality,
        ),
        at_most("observables.euler_lagrange", report.relative_error, tol.euler_lagrange),
    ]


def quantization_checks(config: RunConfig) -> list[CheckResult]:
    tol = config.effective_tolerances
    box = _small_box(config)
    model = quantization.FockModel.from_labels(
        box, config.quantize.labels, n_max=config.quantize.n_max
    )
    n_max = config.quantize.n_max
    expected = np.ones(n_max + 1)
    expected[-1] = -n_max
    ladder = float(np.max(np.abs(quantization.ladder_commutator_diagonal(n_max) - expected)))

    omegas = model.frequencies
    levels = quantization.spectrum(model)
    ladder_spacing = max(
        abs(level.energy - float(np.dot(np.asarray(level.occupations) + 0.5, omegas)))
        for level in levels
    )
    commutator_box = grid.cubic_box(config.box.lengths[0], config.quantize.commutator_points)
    report = quantization.field_commutator_check(commutator_box)
    return [
        at_most("quantization.ladder_commutator", ladder, tol.exact),
        at_most("quantization.spectrum", ladder_spacing / float(np.sum(omegas)), tol.spectrum),
        at_most(
            "quantization.ground_energy",
            abs(levels[0].energy - 0.5 * float(np.sum(omegas))),
            tol.spectrum,
        ),
        at_most(
            "quantization.heisenberg",
            quantization.heisenberg_evolution_check(model),
            tol.heisenberg,
        ),
        at_most("quantization.field_commutator", report.deviation, tol.commutator),
        at_most("quantization.commutator_cross_block", report.cross_block, tol.commutator),
    ]


def lorentz_checks(config: RunConfig) -> list[CheckResult]:
    tol = config.effective_tolerances
    box = _small_box(config)
    state = dynamics.random_transverse_field(box, seed=config.seed, real=False)
    report = lorentz.delta_L_check(state)
    scaling = lorentz.delta_L_scaling(
        state, "boost", config.lorentz.axis, config.lorentz.parameters
    )
    e = config.lorentz.parameters[1]
    first = lorentz.boost_response(state, config.lorentz.axis, e)
    second = lorentz.boost_response(state, config.lorentz.axis, 2 * e)
    E, B = dynamics.to_EB(state)
    return [
        at_most("lorentz.rotation_pairs", report.rotation, tol.lorentz),
        at_most("lorentz.boost_pairs", report.boost, tol.lorentz),
        at_most("lorentz.boost_bilinear", report.boost_bilinear, tol.lorentz),
        at_least("lorentz.delta_L_order", min(scaling.orders), config.orders.delta_L_order),
        near(
            "lorentz.invariant_boost_ratio",
            second.invariant_change / first.invariant_change,
            config.orders.boost_ratio,
            config.orders.boost_ratio_width,
        ),
        near(
            "lorentz.boost_density_order",
            second.energy_change / first.energy_change,
            config.orders.density_ratio,
            config.orders.boost_ratio_width,
        ),
        at_most(
            "lorentz.scalar_invariant_consistency",
            lorentz.scalar_invariants(E, B).consistency,
            tol.exact * 1e2,
        ),
        at_most(
            "lorentz.rotation_first_order",
            lorentz.rotation_defect(state.psi, 2, 1e-6) / float(np.max(np.abs(state.psi))),
            1e-10,
        ),
    ]


def dirac_checks(config: RunConfig) -> list[CheckResult]:
    tol = config.effective_tolerances
    box = _small_box(config)
    mass = config.dirac.mass
    wave = dirac.dirac_plane_wave(grid.wave_vector(box, PLANE_WAVE_LABEL), 0.5, 1, mass)
    psi, dpsi = wave.field(box)
    field = dirac.random_dirac_field(box, config.seed)
    noise = dirac.random_dirac_field(box, config.seed + 1)
    rest = dirac.dirac_plane_wave(np.zeros(3), 0.5, 1, mass) if mass > 0 else None
    p = np.asarray(config.dirac.momentum, dtype=float)
    moving = dirac.dirac_plane_wave(p, -0.5, 1, mass)
    analogies = dirac.analogy_suite(box, mass, config.seed, config.dirac.rapidity)
    results = [
        at_most("dirac.clifford", dirac.clifford_defect(), tol.exact),
        at_most(
            "dirac.plane_wave",
            np.max(np.abs(dirac.dirac_residual(psi, dpsi, box, mass))),
            tol.dirac,
        ),
        at_most("dirac.equivalence", dirac.equivalence_defect(field, noise, box, mass), tol.dirac),
        at_most(
            "dirac.component_ratio",
            abs(moving.small_to_large() - np.linalg.norm(p) / (moving.energy + mass)),
            tol.dirac_ratio,
        ),
        at_most("dirac.swap_symmetry", analogies.swap_residual, tol.dirac),
        at_most("dirac.photon_block_swap", analogies.photon_swap, tol.exact),
        near(
            "dirac.boost_ratio",
            analogies.boost_ratio,
            config.orders.boost_ratio,
            config.orders.boost_ratio_width,
        ),
        at_most("dirac.number_conservation", analogies.number_drift, tol.dirac_number),
        at_least("dirac.coupling", analogies.coupling, tol.exact),
    ]
    if rest is not None:
        results.append(at_most("dirac.rest_small_component", rest.small_to_large(), tol.exact))
    return results


def propagator_lattice(config: RunConfig) -> greens.PropagatorLattice:
    settings = {"dims": config.propagator.dims, "epsilon": config.propagator.epsilon}
    if config.propagator.extents is not None:
        settings["extents"] = config.propagator.extents
    lattice = greens.PropagatorLattice(**settings)
    greens.check_lattice_budget(lattice)
    return lattice


def green_checks(config: RunConfig) -> list[CheckResult]:
    tol = config.effective_tolerances
    lattice = propagator_lattice(config)
    rng = np.random.default_rng(config.seed)
    properties = [greens.green_defining_property(rng.standard_normal(4), 1e-3) for _ in range(10)]
    wave = greens.wave_operator_check(lattice)
    sweep = greens.epsilon_sweep(lattice, config.propagator.sweep)
    doubling = greens.regulator_doubling(lattice)
    linearity = max(
        abs(b.change / a.change * a.epsilon / b.epsilon - 1.0) for a, b in zip(sweep, sweep[1:])
    )
    results = [
        at_most(
            "greens.multiplier_factorization",
            max(p.factorization for p in properties),
            tol.exact * 1e2,
        ),
        at_most("greens.defining_property", max(p.exact for p in properties), tol.green),
        at_most(
            "greens.projector_annihilated",
            max(p.omega_kills_projector for p in properties),
            tol.exact * 1e2,
        ),
        at_most("greens.wave_operator", wave.regulated, tol.green),
        at_most("greens.evenness", greens.evenness_residual(lattice), tol.green),
        at_most("greens.epsilon_linearity", linearity, tol.epsilon_linearity),
        at_most("greens.far_field_doubling", doubling.far_field, doubling.epsilon / doubling.band),
    ]
    if doubling.near_sites:
        results.append(
            at_least("greens.near_cone_doubling", doubling.near_cone, doubling.far_field)
        )
    return results


SuiteFunction = Callable[[RunConfig], list[CheckResult]]

TASK_SUITES: dict[str, tuple[SuiteFunction, ...]] = {
    "check": (
        algebra_checks,
        mode_checks,
        dynamics_checks,
        conservation_checks,
        observable_checks,
        quantization_checks,
        lorentz_checks,
        dirac_checks,
        green_checks,
    ),
    "evolve": (dynamics_checks, conservation_checks),
    "modes": (mode_checks, observable_checks),
    "quantize": (quantization_checks,),
    "lorentz": (algebra_checks, lorentz_checks),
    "dirac": (dirac_checks,),
    "propagator": (green_checks,),
}


def run_suites(config: RunConfig) -> list[CheckResult]:
    results: list[CheckResult] = []
    for suite in TASK_SUITES[config.task]:
        batch = suite(config)
        logger.info("%s: %d checks", suite.__name__, len(batch))
        results.extend(batch)
    return results


def _packet_state(config: RunConfig, box: BoxSpec) -> tuple[dynamics.FieldState, float]:
    packet = config.packet
    k0 = grid.wave_vector(box, packet.n)
    if packet.sigma_k == 0.0:
        mode = modes.ModeSpec(box=box, n=packet.n, lam=packet.helicity)
        psi = modes.mode_on_grid(mode, normalization="number") * np.sqrt(box.volume)
        state = dynamics.FieldState(box=box, psi=packet.amplitude * psi)
    else:
        state = dynamics.gaussian_packet(box, k0, packet.sigma_k, amplitude=packet.amplitude)
    return state, config.evolve.periods * 2 * np.pi / float(np.linalg.norm(k0))


def evolve_artifacts(config: RunConfig, out: Path) -> list[CheckResult]:
    box = build_box(config)
    state, duration = _packet_state(config, box)
    report = dynamics.track(state, duration, config.evolve.samples)
    rows = [
        (t, e, *p, *j)
        for t, e, p, j in zip(
            report.times, report.energy, report.momentum, report.total_angular_momentum
        )
    ]
    export.write_table(
        out / "conserved.csv", ("t", "energy", "px", "py", "pz", "jx", "jy", "jz"), rows
    )
    export.write_snapshot(dynamics.evolve_spectral(state, duration), out / "final.snap")
    drift = report.drift()
    tolerance = config.effective_tolerances.energy_drift
    return [at_most("evolve.energy_drift", drift["energy"], tolerance)]


def modes_artifacts(config: RunConfig, out: Path) -> list[CheckResult]:
    box = build_box(config)
    state = dynamics.random_transverse_field(box, seed=config.seed, cutoff=config.modes.cutoff)
    amps = observables.decompose(state)
    observables.export_amplitudes(amps, out / "amplitudes.csv")
    rebuilt = observables.reconstruct(amps)
    return [
        at_most(
            "modes.reconstruction",
            _relative(rebuilt.psi, state.psi),
            config.effective_tolerances.orthonormality,
        )
    ]


def quantize_artifacts(config: RunConfig, out: Path) -> list[CheckResult]:
    model = quantization.FockModel.from_labels(
        _small_box(config), config.quantize.labels, n_max=config.quantize.n_max
    )
    quantization.export_spectrum(model, out / "spectrum.csv")
    return []


def propagator_artifacts(config: RunConfig, out: Path) -> list[CheckResult]:
    propagator = greens.position_space_propagator(propagator_lattice(config))
    greens.export_propagator(propagator, out / "propagator.csv")
    return []


TASK_ARTIFACTS: dict[str, Callable[[RunConfig, Path], list[CheckResult]]] = {
    "evolve": evolve_artifacts,
    "modes": modes_artifacts,
    "quantize": quantize_artifacts,
    "propagator": propagator_artifacts,
}
