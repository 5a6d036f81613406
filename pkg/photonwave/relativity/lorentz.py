"""Infinitesimal Lorentz transformations of the six-component field.

``Lambda = I - (i/2) eps^{mu nu} Sigma_{mu nu}`` with the generator table of
:func:`photonwave.core.algebra.build_matrix_set`. A rotation with ``eps^{12} = theta`` gives
``I - i theta S_3``, a rotation by ``+theta`` about z; a boost with ``eps^{l0} = e`` gives
``I + e chi_l``. ``psi_bar = psi^dagger beta0`` throughout.

Only first-order transformations are applied. The coordinate change enters through the
transformed derivatives ``d'_mu = d_mu - eps^nu_mu d_nu`` rather than by resampling the field.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from photonwave import grid
from photonwave.core.algebra import LEVI_CIVITA, apply_hamiltonian, build_matrix_set, commutator
from photonwave.fields.dynamics import FieldState, to_EB
from photonwave.grid import NonTransverse

logger = logging.getLogger(__name__)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
TRANSVERSE_TOLERANCE = 1e-10


@dataclass(frozen=True)
class InfinitesimalLorentz:
    """Antisymmetric ``eps^{mu nu}`` (upper indices)."""

    eps: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.eps, dtype=float)
        if eps.shape != (4, 4):
            raise ValueError("Lorentz parameters form a 4x4 table")
        if not np.allclose(eps, -eps.T, rtol=0.0, atol=1e-15):
            raise ValueError("Lorentz parameters must be antisymmetric")
        object.__setattr__(self, "eps", eps)

    @classmethod
    def identity(cls) -> "InfinitesimalLorentz":
        return cls(np.zeros((4, 4)))

    @classmethod
    def rotation(cls, axis: int, angle: float) -> "InfinitesimalLorentz":
        """Rotation about spatial axis ``axis`` (0, 1, 2 for x, y, z)."""

        eps = np.zeros((4, 4))
        for l in range(3):
            for m in range(3):
                eps[l + 1, m + 1] = angle * LEVI_CIVITA[l, m, axis]
        return cls(eps)

    @classmethod
    def boost(cls, axis: int, rapidity: float) -> "InfinitesimalLorentz":
        eps = np.zeros((4, 4))
        eps[axis + 1, 0] = rapidity
        eps[0, axis + 1] = -rapidity
        return cls(eps)

    @property
    def magnitude(self) -> float:
        return float(np.max(np.abs(self.eps)))

    def matrix(self) -> np.ndarray:
        sigma = build_matrix_set().sigma
        return np.eye(6) - 0.5j * np.einsum("mn,mnab->ab", self.eps, sigma)

    def mixed(self) -> np.ndarray:
        """``eps^mu_nu = eps^{mu rho} g_{rho nu}``."""

        return self.eps @ METRIC


def spinor_transform(psi: np.ndarray, transform: InfinitesimalLorentz) -> np.ndarray:
    return np.einsum("ab,b...->a...", transform.matrix(), psi)


def rotation_matrix(axis: int, angle: float) -> np.ndarray:
    """Finite SO(3) rotation by ``angle`` about ``axis``."""

    generator = np.zeros((3, 3))
    for a in range(3):
        for b in range(3):
            generator[a, b] = -LEVI_CIVITA[axis, a, b]
    c, s = np.cos(angle), np.sin(angle)
    return np.eye(3) + s * generator + (1 - c) * generator @ generator


def rotation_defect(psi: np.ndarray, axis: int, angle: float) -> float:
    """Distance between ``Lambda psi`` and both 3-blocks rotated by the exact SO(3) matrix."""

    rotated = spinor_transform(psi, InfinitesimalLorentz.rotation(axis, angle))
    r = rotation_matrix(axis, angle)
    expected = np.concatenate(
        [np.einsum("ab,b...->a...", r, psi[:3]), np.einsum("ab,b...->a...", r, psi[3:])]
    )
    return float(np.max(np.abs(rotated - expected)))


def pseudo_unitarity_defect(transform: InfinitesimalLorentz) -> float:
    """``|| beta0 Lambda^dagger beta0 Lambda - I ||``, second order in the parameters."""

    beta0 = build_matrix_set().beta0
    lam = transform.matrix()
    return float(np.max(np.abs(beta0 @ lam.conj().T @ beta0 @ lam - np.eye(6))))


def generator_identities() -> dict[str, float]:
    """Exact matrix identities of the generator table; every entry should be 0."""

    m = build_matrix_set()
    out = {
        "sigma_rotation": 0.0,
        "sigma_boost": 0.0,
        "beta0_commutes_rotation": 0.0,
        "beta0_flips_chi": 0.0,
        "rotation_pair_coefficients": 0.0,
    }
    for l in range(3):
        out["sigma_boost"] = max(
            out["sigma_boost"], float(np.max(np.abs(m.sigma[l + 1, 0] - 1j * m.chi[l])))
        )
        out["beta0_flips_chi"] = max(
            out["beta0_flips_chi"], float(np.max(np.abs(m.beta0 @ m.chi[l] @ m.beta0 + m.chi[l])))
        )
        for mm in range(3):
            expected = np.einsum("n,nab->ab", LEVI_CIVITA[l, mm], m.spin)
            out["sigma_rotation"] = max(
                out["sigma_rotation"], float(np.max(np.abs(m.sigma[l + 1, mm + 1] - expected)))
            )
            out["beta0_commutes_rotation"] = max(
                out["beta0_commutes_rotation"],
                float(np.max(np.abs(commutator(m.beta0, m.sigma[l + 1, mm + 1])))),
            )
            out["rotation_pair_coefficients"] = max(
                out["rotation_pair_coefficients"], _rotation_pair_defect(l + 1, mm + 1)
            )
    return out


def _rotation_pair_defect(rho: int, lam: int) -> float:
    """Per-mu coefficients of ``i [beta^mu, Sigma_{rho lam}] d_mu`` vs ``beta_rho d_lam - ...``."""

    m = build_matrix_set()
    worst = 0.0
    for mu in range(4):
        lhs = 1j * commutator(m.beta_upper(mu), m.sigma[rho, lam])
        rhs = np.zeros((6, 6), dtype=complex)
        if mu == lam:
            rhs = rhs + m.beta_lower(rho)
        if mu == rho:
            rhs = rhs - m.beta_lower(lam)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def derivatives(state: FieldState, dpsi_dt: np.ndarray | None = None) -> np.ndarray:
    """``d_mu psi`` for mu = 0..3, shape ``(4, 6, Nx, Ny, Nz)``; on shell by default."""

    if dpsi_dt is None:
        dpsi_dt = -1j * apply_hamiltonian(state.psi, state.box)
    return np.concatenate([dpsi_dt[np.newaxis], grid.gradient(state.psi, state.box)])


def _bar(psi: np.ndarray) -> np.ndarray:
    return np.einsum("ab,a...->b...", build_matrix_set().beta0, psi.conj())


def _bilinear(psi_bar: np.ndarray, matrix: np.ndarray, column: np.ndarray) -> np.ndarray:
    return np.einsum("a...,ab,b...->...", psi_bar, matrix, column)


@dataclass(frozen=True)
class DeltaLReport:
    """Largest pointwise mismatch between the two sides of the invariance condition per pair."""

    mismatches: dict[tuple[int, int], float]
    boost_bilinear: float
    scale: float

    @property
    def rotation(self) -> float:
        return max(v for (r, l), v in self.mismatches.items() if r > 0 and l > 0)

    @property
    def boost(self) -> float:
        return max(v for (r, l), v in self.mismatches.items() if r == 0 or l == 0)


def invariance_mismatch(
    state: FieldState, rho: int, lam: int, d: np.ndarray | None = None
) -> np.ndarray:
    """``psi_bar (beta_rho d_lam - beta_lam d_rho) psi - psi_bar i [beta^mu, Sigma] d_mu psi``."""

    m = build_matrix_set()
    if d is None:
        d = derivatives(state)
    psi_bar = _bar(state.psi)
    lhs = _bilinear(psi_bar, m.beta_lower(rho), d[lam]) - _bilinear(
        psi_bar, m.beta_lower(lam), d[rho]
    )
    rhs = sum(
        _bilinear(psi_bar, 1j * commutator(m.beta_upper(mu), m.sigma[rho, lam]), d[mu])
        for mu in range(4)
    )
    return lhs - rhs


def boost_bilinear(state: FieldState, axis: int) -> np.ndarray:
    """``psi_bar (beta^j chi_l d_j - beta0 d_l) psi``; ``-psi_l^* div psi`` per block."""

    m = build_matrix_set()
    grad = grid.gradient(state.psi, state.box)
    psi_bar = _bar(state.psi)
    total = -_bilinear(psi_bar, m.beta0, grad[axis])
    for j in range(3):
        total = total + _bilinear(psi_bar, m.beta[j] @ m.chi[axis], grad[j])
    return total


def _field_scale(state: FieldState) -> float:
    k_max = float(np.max(np.linalg.norm(grid.wave_vectors(state.box), axis=0)))
    return float(np.max(np.abs(state.psi))) ** 2 * max(k_max, 1.0)


def require_transverse(state: FieldState) -> None:
    """Reject longitudinal and uniform content above ``TRANSVERSE_TOLERANCE``."""

    if grid.transversality_residual(state.psi, state.box) > TRANSVERSE_TOLERANCE:
        raise NonTransverse("Boost invariance requires a transverse field")
    if grid.uniform_fraction(state.psi, state.box) > TRANSVERSE_TOLERANCE:
        raise NonTransverse("Boost invariance requires a field without a uniform part")


def delta_L_check(state: FieldState) -> DeltaLReport:
    require_transverse(state)
    d = derivatives(state)
    scale = _field_scale(state) or 1.0
    mismatches = {}
    for rho, lam in combinations(range(4), 2):
        mismatch = invariance_mismatch(state, rho, lam, d)
        mismatches[(rho, lam)] = float(np.max(np.abs(mismatch))) / scale
    bilinear = max(float(np.max(np.abs(boost_bilinear(state, l)))) for l in range(3)) / scale
    logger.info("Invariance mismatches %s", mismatches)
    return DeltaLReport(mismatches=mismatches, boost_bilinear=bilinear, scale=scale)


def transformed_lagrangian_density(
    state: FieldState, transform: InfinitesimalLorentz, d: np.ndarray | None = None
) -> np.ndarray:
    """``psi'_bar i beta^mu d'_mu psi'`` with ``psi' = Lambda psi`` and first-order ``d'``."""

    m = build_matrix_set()
    if d is None:
        d = derivatives(state)
    lam = transform.matrix()
    mixed = transform.mixed()
    primed = np.einsum("ab,b...->a...", lam, state.psi)
    psi_bar = _bar(primed)
    total = np.zeros(state.box.shape, dtype=complex)
    for mu in range(4):
        d_prime = d[mu] - sum(mixed[nu, mu] * d[nu] for nu in range(4))
        total = total + _bilinear(psi_bar, 1j * m.beta_upper(mu) @ lam, d_prime)
    return total


def delta_L(state: FieldState, transform: InfinitesimalLorentz) -> float:
    d = derivatives(state)
    original = transformed_lagrangian_density(state, InfinitesimalLorentz.identity(), d)
    changed = transformed_lagrangian_density(state, transform, d)
    return float(np.max(np.abs(changed - original)))


@dataclass(frozen=True)
class ScalingReport:
    parameters: list[float]
    values: list[float]

    @property
    def orders(self) -> list[float]:
        out = []
        for (e1, v1), (e2, v2) in zip(
            zip(self.parameters, self.values), zip(self.parameters[1:], self.values[1:])
        ):
            out.append(float(np.log(v1 / v2) / np.log(e1 / e2)))
        return out


def delta_L_scaling(
    state: FieldState, kind: str = "boost", axis: int = 0, parameters=(1e-2, 1e-3, 1e-4)
) -> ScalingReport:
    """``max |L_T - L|`` over a sweep of transformation sizes."""

    require_transverse(state)
    build = InfinitesimalLorentz.boost if kind == "boost" else InfinitesimalLorentz.rotation
    values = [delta_L(state, build(axis, e)) for e in parameters]
    return ScalingReport(parameters=list(parameters), values=values)


@dataclass(frozen=True)
class ScalarInvariants:
    s1: np.ndarray
    density: np.ndarray

    @property
    def consistency(self) -> float:
        """``max |s1 - 2 Re(psi_bar psi)|``."""

        return float(np.max(np.abs(self.s1 - 2 * self.density.real)))


def scalar_invariants(E: np.ndarray, B: np.ndarray) -> ScalarInvariants:
    E = np.asarray(E)
    B = np.asarray(B)
    s1 = np.sum(np.abs(E) ** 2, axis=0) - np.sum(np.abs(B) ** 2, axis=0)
    psi = np.concatenate([E, 1j * B]).astype(complex) / np.sqrt(2.0)
    density = np.sum(_bar(psi) * psi, axis=0)
    return ScalarInvariants(s1=s1, density=density)


@dataclass(frozen=True)
class BoostResponse:
    """Pointwise max change of ``psi_bar psi`` and ``psi^dagger psi`` under a boost."""

    invariant_change: float
    energy_change: float


def boost_response(state: FieldState, axis: int, rapidity: float) -> BoostResponse:
    boosted = spinor_transform(state.psi, InfinitesimalLorentz.boost(axis, rapidity))
    psi = state.psi
    invariant = np.sum(_bar(boosted) * boosted, axis=0) - np.sum(_bar(psi) * psi, axis=0)
    energy = np.sum(np.abs(boosted) ** 2, axis=0) - np.sum(np.abs(psi) ** 2, axis=0)
    return BoostResponse(
        invariant_change=float(np.max(np.abs(invariant))),
        energy_change=float(np.max(np.abs(energy))),
    )


def invariants_of_state(state: FieldState) -> ScalarInvariants:
    E, B = to_EB(state)
    return scalar_invariants(E, B)
