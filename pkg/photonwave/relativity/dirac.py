"""Free Dirac equation in the representation where it splits like Maxwell's equations.

    gamma0 = diag(I, -I),  gamma^j = ((0, sigma_j), (-sigma_j, 0)),  Psi = (chi; phi)

With these matrices ``(i gamma^mu d_mu - m) Psi = 0`` is equivalent to

    (sigma . grad) chi = (-d_t + i m) phi
    (sigma . grad) phi = (-d_t - i m) chi

and the residual of the first equals ``(i r2; -i r1)`` in terms of the two residuals above.
Positive-energy rest solutions have ``chi`` as the large component in this representation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from photonwave import grid
from photonwave.core.modes import block_swap, f_spinor, g_spinor
from photonwave.grid import BoxSpec

logger = logging.getLogger(__name__)

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
I2 = np.eye(2, dtype=complex)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def gamma_matrices() -> np.ndarray:
    zero = np.zeros((2, 2), dtype=complex)
    gamma0 = np.block([[I2, zero], [zero, -I2]])
    spatial = [np.block([[zero, PAULI[j]], [-PAULI[j], zero]]) for j in range(3)]
    return np.stack([gamma0, *spatial])


def clifford_defect() -> float:
    """``max |{gamma^mu, gamma^nu} - 2 g^{mu nu} I|``; 0 exactly."""

    gamma = gamma_matrices()
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            anti = gamma[mu] @ gamma[nu] + gamma[nu] @ gamma[mu]
            worst = max(worst, float(np.max(np.abs(anti - 2 * METRIC[mu, nu] * np.eye(4)))))
    return worst


def alpha_matrices() -> np.ndarray:
    gamma = gamma_matrices()
    return np.stack([gamma[0] @ gamma[j + 1] for j in range(3)])


def hamiltonian_symbol(p, mass: float) -> np.ndarray:
    """``alpha . p + beta m``."""

    p = np.asarray(p, dtype=float)
    return np.einsum("j,jab->ab", p, alpha_matrices()) + mass * gamma_matrices()[0]


def _sigma_dot(p) -> np.ndarray:
    return np.einsum("j,jab->ab", np.asarray(p, dtype=float), PAULI)


@dataclass(frozen=True)
class DiracPlaneWave:
    """``spinor * exp(i p.x - i sign E t)``."""

    p: np.ndarray
    mass: float
    sign: int
    spinor: np.ndarray

    @property
    def energy(self) -> float:
        return float(np.sqrt(self.p @ self.p + self.mass**2))

    @property
    def chi(self) -> np.ndarray:
        return self.spinor[:2]

    @property
    def phi(self) -> np.ndarray:
        return self.spinor[2:]

    def small_to_large(self) -> float:
        small, large = (self.phi, self.chi) if self.sign == 1 else (self.chi, self.phi)
        return float(np.linalg.norm(small) / np.linalg.norm(large))

    def field(self, box: BoxSpec, t: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
        """Samples on ``box`` and their time derivative."""

        x = grid.positions(box)
        phase = np.exp(1j * np.einsum("j,j...->...", self.p, x) - 1j * self.sign * self.energy * t)
        psi = self.spinor.reshape(4, 1, 1, 1) * phase
        return psi, -1j * self.sign * self.energy * psi


def dirac_plane_wave(p, spin: float, sign: int, mass: float) -> DiracPlaneWave:
    if spin not in (0.5, -0.5):
        raise ValueError("Spin projection must be +1/2 or -1/2")
    if sign not in (1, -1):
        raise ValueError("Energy sign must be +1 or -1")
    if mass < 0:
        raise ValueError("Mass must be non-negative")
    p = np.asarray(p, dtype=float)
    energy = float(np.sqrt(p @ p + mass**2))
    if energy == 0.0:
        raise ValueError("A massless plane wave needs a non-zero momentum")
    xi = np.array([1, 0], dtype=complex) if spin > 0 else np.array([0, 1], dtype=complex)
    lower = _sigma_dot(p) @ xi / (energy + mass)
    if sign == 1:
        spinor = np.concatenate([xi, lower])
    else:
        spinor = np.concatenate([-lower, xi])
    spinor = spinor / np.linalg.norm(spinor)
    return DiracPlaneWave(p=p, mass=float(mass), sign=sign, spinor=spinor)


def _sigma_grad(two_spinor: np.ndarray, box: BoxSpec) -> np.ndarray:
    grad = grid.gradient(two_spinor, box)
    return np.einsum("jab,jb...->a...", PAULI, grad)


def maxwell_like_residual(
    chi: np.ndarray,
    phi: np.ndarray,
    dchi_dt: np.ndarray,
    dphi_dt: np.ndarray,
    box: BoxSpec,
    mass: float,
) -> tuple[np.ndarray, np.ndarray]:
    r1 = _sigma_grad(chi, box) - (-dphi_dt + 1j * mass * phi)
    r2 = _sigma_grad(phi, box) - (-dchi_dt - 1j * mass * chi)
    return r1, r2


def dirac_residual(psi: np.ndarray, dpsi_dt: np.ndarray, box: BoxSpec, mass: float) -> np.ndarray:
    """``(i gamma^mu d_mu - m) Psi`` with spectral space derivatives."""

    gamma = gamma_matrices()
    grad = grid.gradient(psi, box)
    out = 1j * np.einsum("ab,b...->a...", gamma[0], dpsi_dt) - mass * psi
    for j in range(3):
        out = out + 1j * np.einsum("ab,b...->a...", gamma[j + 1], grad[j])
    return out


def equivalence_defect(psi: np.ndarray, dpsi_dt: np.ndarray, box: BoxSpec, mass: float) -> float:
    """Distance between the four-component residual and ``(i r2; -i r1)``."""

    r1, r2 = maxwell_like_residual(psi[:2], psi[2:], dpsi_dt[:2], dpsi_dt[2:], box, mass)
    recombined = np.concatenate([1j * r2, -1j * r1])
    return float(np.max(np.abs(dirac_residual(psi, dpsi_dt, box, mass) - recombined)))


def dirac_evolve(psi: np.ndarray, box: BoxSpec, mass: float, duration: float) -> np.ndarray:
    """``exp(-i H t)`` per Fourier mode, using ``H^2 = E^2``."""

    k = grid.wave_vectors(box)
    psi_hat = grid.fft(psi)
    h_psi = np.einsum("jab,j...,b...->a...", alpha_matrices(), k, psi_hat)
    h_psi = h_psi + mass * np.einsum("ab,b...->a...", gamma_matrices()[0], psi_hat)
    energy = np.sqrt(np.sum(k**2, axis=0) + mass**2)
    evolved = np.cos(energy * duration) * psi_hat - 1j * duration * np.sinc(
        energy * duration / np.pi
    ) * h_psi
    return grid.ifft(evolved)


def time_derivative(psi: np.ndarray, box: BoxSpec, mass: float) -> np.ndarray:
    gamma = gamma_matrices()
    grad = grid.gradient(psi, box)
    h_psi = -1j * np.einsum("jab,jb...->a...", alpha_matrices(), grad)
    h_psi = h_psi + mass * np.einsum("ab,b...->a...", gamma[0], psi)
    return -1j * h_psi


def swap_components(psi: np.ndarray) -> np.ndarray:
    """``chi <-> phi``; together with ``m -> -m`` it maps solutions to solutions."""

    return np.concatenate([psi[2:], psi[:2]])


def boost_spinor(psi: np.ndarray, axis: int, rapidity: float) -> np.ndarray:
    """First-order boost ``S = I + (eps/2) alpha_l``."""

    generator = np.eye(4) + 0.5 * rapidity * alpha_matrices()[axis]
    return np.einsum("ab,b...->a...", generator, psi)


def density_difference(psi: np.ndarray) -> np.ndarray:
    """``phi^dagger phi - chi^dagger chi``."""

    return np.sum(np.abs(psi[2:]) ** 2, axis=0) - np.sum(np.abs(psi[:2]) ** 2, axis=0)


def number_density(psi: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(psi) ** 2, axis=0)


def random_dirac_field(box: BoxSpec, seed: int = 0, cutoff: int = 2) -> np.ndarray:
    return grid.random_band_limited(
        box, np.random.default_rng(seed), 4, cutoff=cutoff, transverse=False
    )


@dataclass(frozen=True)
class AnalogyReport:
    coupling: float
    swap_residual: float
    photon_swap: float
    boost_change: float
    boost_ratio: float
    number_drift: float
    component_ratio: float

    def as_dict(self) -> dict[str, float]:
        return dict(vars(self))


def analogy_suite(
    box: BoxSpec | None = None, mass: float = 1.0, seed: int = 0, rapidity: float = 1e-3
) -> AnalogyReport:
    box = box or grid.cubic_box(2 * np.pi, 8)
    p = grid.wave_vector(box, (1, 0, 1))

    # sigma.p couples chi to phi: its spectral norm is |p|
    coupling = float(np.linalg.norm(hamiltonian_symbol(p, mass)[:2, 2:], 2))

    wave = dirac_plane_wave(p, 0.5, 1, mass)
    psi, dpsi = wave.field(box)
    swapped, dswapped = swap_components(psi), swap_components(dpsi)
    r1, r2 = maxwell_like_residual(
        swapped[:2], swapped[2:], dswapped[:2], dswapped[2:], box, -mass
    )
    swap_residual = float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))

    k = grid.wave_vector(box, (1, 2, 0))
    photon_swap = max(
        float(np.max(np.abs(block_swap(f_spinor(k, lam)) - g_spinor(k, lam))))
        for lam in (-1, 0, 1)
    )

    field = random_dirac_field(box, seed)
    base = grid.integrate(density_difference(field), box)
    first = grid.integrate(density_difference(boost_spinor(field, 0, rapidity)), box) - base
    second = grid.integrate(density_difference(boost_spinor(field, 0, 2 * rapidity)), box) - base
    boost_ratio = float(second / first) if first != 0 else float("nan")

    period = 2 * np.pi / wave.energy
    evolved = dirac_evolve(field, box, mass, period)
    n0 = float(grid.integrate(number_density(field), box))
    number_drift = abs(float(grid.integrate(number_density(evolved), box)) - n0) / n0

    small = dirac_plane_wave(1e-3 * p / np.linalg.norm(p), 0.5, 1, mass)
    expected = np.linalg.norm(small.p) / (small.energy + mass)
    report = AnalogyReport(
        coupling=coupling,
        swap_residual=swap_residual,
        photon_swap=photon_swap,
        boost_change=abs(float(first)) / abs(float(base)) if base else abs(float(first)),
        boost_ratio=boost_ratio,
        number_drift=number_drift,
        component_ratio=abs(small.small_to_large() - expected),
    )
    logger.info("Dirac analogy checks %s", report.as_dict())
    return report
