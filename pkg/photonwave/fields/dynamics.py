"""Time evolution of the six-component photon field on a periodic grid.

``psi = (E; iB) / sqrt(2)``. The spectral propagator applies ``exp(-i H(k) t)`` per Fourier mode;
because ``H(k)^3 = |k|^2 H(k)`` the exponential closes on ``{I, H, H^2}``:

    exp(-i H t) = I - i sin(K t)/K H + (cos(K t) - 1)/K^2 H^2,   K = |k|

which equals ``P0 + exp(-iKt) P+ + exp(iKt) P-`` with the eigenprojectors of ``H(k)`` for the
eigenvalues ``0, +K, -K``. Both coefficients are entire in ``K^2`` so ``k = 0`` needs no special
branch.

The classical oracle integrates the curl equations ``dB/dt = -curl E``, ``dE/dt = curl B`` with a
kick-drift-kick leapfrog and spectral curls.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from photonwave import grid
from photonwave.core.algebra import (
    apply_hamiltonian,
    apply_symbol,
    build_matrix_set,
    hamiltonian_symbol,
)
from photonwave.grid import BoxSpec

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)
BOUNDARY_LAYER = 0.1
BOUNDARY_MASS_LIMIT = 1e-6


class ShapeMismatch(ValueError):
    pass


class UnstableStep(RuntimeError):
    pass


@dataclass(frozen=True)
class FieldState:
    box: BoxSpec
    psi: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        expected = (6,) + self.box.shape
        if self.psi.shape != expected:
            raise ShapeMismatch(f"Field has shape {self.psi.shape}, expected {expected}")

    @property
    def upper(self) -> np.ndarray:
        return self.psi[:3]

    @property
    def lower(self) -> np.ndarray:
        return self.psi[3:]

    def with_psi(self, psi: np.ndarray, time: float | None = None) -> "FieldState":
        return replace(self, psi=psi, time=self.time if time is None else time)


def from_EB(E: np.ndarray, B: np.ndarray, box: BoxSpec, time: float = 0.0) -> FieldState:
    E = np.asarray(E)
    B = np.asarray(B)
    expected = (3,) + box.shape
    if E.shape != expected or B.shape != expected:
        raise ShapeMismatch(f"E {E.shape} and B {B.shape} must both have shape {expected}")
    psi = np.concatenate([E, 1j * B]).astype(complex) / SQRT2
    return FieldState(box=box, psi=psi, time=time)


def to_EB(state: FieldState) -> tuple[np.ndarray, np.ndarray]:
    return SQRT2 * state.upper, -1j * SQRT2 * state.lower


def zero_state(box: BoxSpec) -> FieldState:
    return FieldState(box=box, psi=np.zeros((6,) + box.shape, dtype=complex))


def _propagator_coefficients(k_norm: np.ndarray, duration: float) -> tuple[np.ndarray, np.ndarray]:
    # sin(Kt)/K and (cos(Kt) - 1)/K^2 through sinc, finite at K = 0
    first = duration * np.sinc(k_norm * duration / np.pi)
    half = np.sinc(k_norm * duration / (2 * np.pi))
    second = -0.5 * duration**2 * half**2
    return first, second


def evolve_spectral(state: FieldState, duration: float) -> FieldState:
    box = state.box
    k = grid.wave_vectors(box)
    chi = build_matrix_set().chi
    psi_hat = grid.fft(state.psi)
    h_psi = apply_symbol(chi, k, psi_hat)
    hh_psi = apply_symbol(chi, k, h_psi)
    first, second = _propagator_coefficients(np.linalg.norm(k, axis=0), duration)
    evolved = psi_hat - 1j * first * h_psi + second * hh_psi
    return state.with_psi(grid.ifft(evolved), state.time + duration)


def max_wave_number(box: BoxSpec) -> float:
    return float(np.max(np.linalg.norm(grid.wave_vectors(box), axis=0)))


def evolve_curl(
    E: np.ndarray, B: np.ndarray, box: BoxSpec, dt: float, steps: int
) -> tuple[np.ndarray, np.ndarray]:
    """Leapfrog (half kick of B, full step of E, half kick of B) with spectral curls.

    Each mode is a harmonic oscillator of frequency ``|k|``, so the scheme is stable while
    ``dt * k_max < 2``.
    """

    k_max = max_wave_number(box)
    if dt * k_max >= 2.0:
        raise UnstableStep(f"dt={dt:g} violates dt * k_max < 2 with k_max={k_max:.4g}")
    if steps < 0:
        raise ValueError("Step count must be non-negative")

    k = grid.wave_vectors(box)
    e_hat = grid.fft(np.asarray(E, dtype=complex))
    b_hat = grid.fft(np.asarray(B, dtype=complex))
    for _ in range(steps):
        b_hat = b_hat - 0.5 * dt * 1j * np.cross(k, e_hat, axis=0)
        e_hat = e_hat + dt * 1j * np.cross(k, b_hat, axis=0)
        b_hat = b_hat - 0.5 * dt * 1j * np.cross(k, e_hat, axis=0)
    E_out, B_out = grid.ifft(e_hat), grid.ifft(b_hat)
    if np.isrealobj(E) and np.isrealobj(B):
        return E_out.real, B_out.real
    return E_out, B_out


def omega_apply(state: FieldState) -> FieldState:
    """``Omega psi`` with ``Omega = I2 (x) grad grad^T``."""

    k = grid.wave_vectors(state.box)
    return state.with_psi(grid.ifft(grid.omega_multiplier_apply(grid.fft(state.psi), k)))


def transversality(state: FieldState) -> float:
    return grid.transversality_residual(state.psi, state.box)


def omega_symbol(k) -> np.ndarray:
    """``I2 (x) k k^T``, the sign-adjusted Fourier image of ``Omega``."""

    k = np.asarray(k, dtype=float)
    return np.kron(np.eye(2), np.outer(k, k))


def four_symbol(omega: float, k) -> np.ndarray:
    """``beta^mu k_mu = beta0 w - beta . k``."""

    matrices = build_matrix_set()
    k = np.asarray(k, dtype=float)
    return omega * matrices.beta0 - np.einsum("i,iab->ab", k, matrices.beta)


def factorization_residual(k, omega: float | None = None) -> float:
    """Residual of the second-order factorization as a per-k matrix identity.

    Static form: ``(chi.k)^2 + I2 (x) k k^T = |k|^2 I6``. With a frequency:
    ``(beta^mu k_mu)^2 = (w^2 - |k|^2) I6 + I2 (x) k k^T``.
    """

    k = np.asarray(k, dtype=float)
    k2 = float(k @ k)
    if omega is None:
        h = hamiltonian_symbol(k)
        lhs = h @ h + omega_symbol(k)
        rhs = k2 * np.eye(6)
    else:
        b = four_symbol(omega, k)
        lhs = b @ b
        rhs = (omega**2 - k2) * np.eye(6) + omega_symbol(k)
    return float(np.max(np.abs(lhs - rhs)))


def grid_factorization_residual(box: BoxSpec, omega: float | None = None) -> float:
    k = grid.wave_vectors(box).reshape(3, -1).T
    return max(factorization_residual(kv, omega) for kv in k)


@dataclass(frozen=True)
class ConservedRow:
    time: float
    energy: float
    momentum: np.ndarray
    angular_momentum: np.ndarray
    transversality: float
    boundary_mass: float

    @property
    def boundary_flag(self) -> bool:
        return self.boundary_mass > BOUNDARY_MASS_LIMIT


def boundary_mass_fraction(state: FieldState, layer: float = BOUNDARY_LAYER) -> float:
    density = np.sum(np.abs(state.psi) ** 2, axis=0)
    total = float(np.sum(density))
    if total == 0.0:
        return 0.0
    x = grid.positions(state.box, centered=True)
    limits = (0.5 - layer) * np.asarray(state.box.lengths).reshape(3, 1, 1, 1)
    outer = np.any(np.abs(x) > limits, axis=0)
    return float(np.sum(density[outer])) / total


def energy(state: FieldState) -> float:
    return float(np.real(grid.integrate(np.sum(np.abs(state.psi) ** 2, axis=0), state.box)))


def momentum(state: FieldState) -> np.ndarray:
    """``int Re(E x conj(B))``; the Poynting momentum for real fields."""

    E, B = to_EB(state)
    return np.real(grid.integrate(np.cross(E, B.conj(), axis=0), state.box))


def angular_momentum(state: FieldState) -> np.ndarray:
    """``Re <psi|x x (-i grad) + S|psi>`` about the box center."""

    psi = state.psi
    box = state.box
    x = grid.positions(box, centered=True)
    grad = grid.gradient(psi, box)
    spin = build_matrix_set().spin
    total = np.zeros(3)
    for j in range(3):
        a, b = (j + 1) % 3, (j + 2) % 3
        orbital = -1j * (x[a] * grad[b] - x[b] * grad[a])
        spin_part = np.einsum("ab,b...->a...", spin[j], psi)
        density = np.sum(psi.conj() * (orbital + spin_part), axis=0)
        total[j] = float(np.real(grid.integrate(density, box)))
    return total


def conserved_quantities(state: FieldState) -> ConservedRow:
    row = ConservedRow(
        time=state.time,
        energy=energy(state),
        momentum=momentum(state),
        angular_momentum=angular_momentum(state),
        transversality=transversality(state),
        boundary_mass=boundary_mass_fraction(state),
    )
    if row.boundary_flag:
        logger.warning(
            "Field has %.2e of its mass in the boundary layer; angular momentum is unreliable",
            row.boundary_mass,
        )
    return row


@dataclass
class EvolutionReport:
    times: list[float] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)
    momentum: list[np.ndarray] = field(default_factory=list)
    total_angular_momentum: list[np.ndarray] = field(default_factory=list)
    transversality_residual: list[float] = field(default_factory=list)
    boundary_flags: list[bool] = field(default_factory=list)

    def append(self, row: ConservedRow) -> None:
        self.times.append(row.time)
        self.energy.append(row.energy)
        self.momentum.append(row.momentum)
        self.total_angular_momentum.append(row.angular_momentum)
        self.transversality_residual.append(row.transversality)
        self.boundary_flags.append(row.boundary_flag)

    def drift(self) -> dict[str, float]:
        """Largest deviation from the first row, relative to ``max(E0, |P0|, |J0|)``."""

        if not self.times:
            return {"energy": 0.0, "momentum": 0.0, "angular_momentum": 0.0}
        e0 = self.energy[0]
        p0 = self.momentum[0]
        j0 = self.total_angular_momentum[0]
        scale_p = max(float(np.linalg.norm(p0)), e0) or 1.0
        scale_j = max(float(np.linalg.norm(j0)), e0) or 1.0
        return {
            "energy": max(abs(e - e0) for e in self.energy) / (abs(e0) or 1.0),
            "momentum": max(float(np.linalg.norm(p - p0)) for p in self.momentum) / scale_p,
            "angular_momentum": max(
                float(np.linalg.norm(j - j0)) for j in self.total_angular_momentum
            )
            / scale_j,
        }


def track(state: FieldState, duration: float, samples: int = 4) -> EvolutionReport:
    """Evolve spectrally and record the conserved quantities at ``samples + 1`` equal steps."""

    report = EvolutionReport()
    report.append(conserved_quantities(state))
    step = duration / samples
    current = state
    for _ in range(samples):
        current = evolve_spectral(current, step)
        report.append(conserved_quantities(current))
    logger.info(
        "Tracked %d samples over t=%.4g on grid %s", samples, duration, state.box.grid_points
    )
    return report


def maxwell_matrix_form_residual(state: FieldState, dpsi_dt: np.ndarray | None = None) -> float:
    """Residual of ``(tau.grad) B = i dE/dt`` and ``(tau.grad) E = -i dB/dt``.

    ``(tau.grad) v = i curl v``. Without an explicit time derivative the Schrodinger form
    ``dpsi/dt = -i H psi`` supplies it.
    """

    if dpsi_dt is None:
        dpsi_dt = -1j * apply_hamiltonian(state.psi, state.box)
    E, B = to_EB(state)
    dE, dB = SQRT2 * dpsi_dt[:3], -1j * SQRT2 * dpsi_dt[3:]
    tau = build_matrix_set().tau
    k = grid.wave_vectors(state.box)

    def tau_grad(v: np.ndarray) -> np.ndarray:
        return grid.ifft(apply_symbol(tau, 1j * k, grid.fft(v)))

    first = tau_grad(B) - 1j * dE
    second = tau_grad(E) + 1j * dB
    scale = float(np.max(np.abs(state.psi))) or 1.0
    return max(float(np.max(np.abs(first))), float(np.max(np.abs(second)))) / scale


def duality_transform(state: FieldState) -> FieldState:
    """``E -> B, B -> -E``; maps solutions of the source-free equations to solutions."""

    E, B = to_EB(state)
    return from_EB(B, -E, state.box, state.time)


@dataclass(frozen=True)
class LongitudinalContent:
    electric: float
    magnetic: float


def longitudinal_field_content(state: FieldState) -> LongitudinalContent:
    """Grid norms of the curl-free parts of E and B."""

    box = state.box
    k = grid.wave_vectors(box)
    E, B = to_EB(state)

    def longitudinal_norm(v: np.ndarray) -> float:
        v_hat = grid.fft(v)
        part = v_hat - grid.transverse_project(v_hat, k)
        return grid.grid_norm(grid.ifft(part), box)

    return LongitudinalContent(electric=longitudinal_norm(E), magnetic=longitudinal_norm(B))


def gaussian_packet(
    box: BoxSpec,
    k0,
    sigma_k: float,
    center=(0.0, 0.0, 0.0),
    polarization=(0.0, 1.0, 1j),
    amplitude: float = 1.0,
) -> FieldState:
    """Smooth forward-moving packet around wave vector ``k0``.

    ``E_hat = (i/|k0|) k x a G(k)`` and ``B_hat = k_hat x E_hat`` with a Gaussian spectral envelope
    ``G`` centered on ``k0``. Every Fourier component is transverse and of positive frequency, so
    the packet has no backward-moving part. Near ``k0`` it is a plane wave ``E ~ a``,
    ``B ~ k0_hat x E``. ``center`` is measured from the box center.
    """

    k0 = np.asarray(k0, dtype=float)
    k0_norm = float(np.linalg.norm(k0))
    if k0_norm == 0.0:
        raise ValueError("Packet carrier wave vector must be non-zero")
    a = np.asarray(polarization, dtype=complex)
    a = a / np.linalg.norm(a)

    k = grid.wave_vectors(box)
    shift = k - k0.reshape(3, 1, 1, 1)
    origin = box.center + np.asarray(center, dtype=float)
    phase = np.exp(-1j * np.einsum("i,i...->...", origin, k))
    envelope = np.exp(-np.sum(shift**2, axis=0) / (2 * sigma_k**2)) * phase
    envelope[grid.nyquist_mask(box)] = 0.0

    e_hat = 1j / k0_norm * np.cross(k, a.reshape(3, 1, 1, 1), axis=0) * envelope
    k_norm = np.linalg.norm(k, axis=0)
    b_hat = np.cross(k, e_hat, axis=0) / np.where(k_norm > 0, k_norm, 1.0)
    E, B = grid.ifft(e_hat), grid.ifft(b_hat)
    scale = amplitude / float(np.max(np.abs(E)))
    return from_EB(E * scale, B * scale, box)


def random_transverse_field(
    box: BoxSpec, seed: int = 0, cutoff: int = 2, real: bool = True
) -> FieldState:
    rng = np.random.default_rng(seed)
    E = grid.random_band_limited(box, rng, 3, cutoff=cutoff, transverse=True, real=real)
    B = grid.random_band_limited(box, rng, 3, cutoff=cutoff, transverse=True, real=real)
    return from_EB(E, B, box)
