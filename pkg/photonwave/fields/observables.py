"""Mode amplitudes, the pseudo-Lagrangian and the 4-momentum functionals of a field.

The expansion used throughout is

    psi = (1/sqrt(2)) sum_{k, lam=+-1} [a(k, lam) phi+(k, lam) + b(k, lam) phi-(k, lam)]

with the canonical modes of :mod:`photonwave.core.modes`. For fields with real E and B the
negative-frequency amplitudes are fixed by the positive ones: ``b(k, -lam) = -lam conj(a(k, lam))``.

The conjugate field is ``pi = i (H+ psi)^dagger`` where ``H+`` is the pseudo-inverse of the
spectral Hamiltonian; it is ``(-i d_t)^-1`` on every nonzero-frequency component and removes the
zero-frequency (uniform and longitudinal) content.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from photonwave import export, grid
from photonwave.core.algebra import apply_hamiltonian, apply_symbol, build_matrix_set
from photonwave.core.modes import f_spinor, g_spinor
from photonwave.fields.dynamics import FieldState, to_EB
from photonwave.grid import BoxSpec

logger = logging.getLogger(__name__)

HELICITY_ORDER = (-1, 1)
REALITY_TOLERANCE = 1e-12
STEP_SCAN = (1e-4, 1e-5, 1e-6, 1e-7)


class NonRealField(ValueError):
    pass


@dataclass
class ModeAmplitudes:
    """Amplitudes per ``(n, lam)`` label, lexicographic order, Nyquist planes and k = 0 excluded."""

    box: BoxSpec
    time: float
    labels: list[tuple[tuple[int, int, int], int]] = field(default_factory=list)
    positive: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    negative: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    omega: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __getitem__(self, key: tuple[tuple[int, int, int], int]) -> complex:
        return complex(self.positive[self.labels.index(key)])

    def negative_at(self, key: tuple[tuple[int, int, int], int]) -> complex:
        return complex(self.negative[self.labels.index(key)])

    def nonzero(self, tol: float = 1e-12) -> dict[tuple[tuple[int, int, int], int], complex]:
        return {
            label: complex(a) for label, a in zip(self.labels, self.positive) if abs(a) > tol
        }

    def energy(self) -> float:
        """``1/2 sum w (|a|^2 + |b|^2)``; equals ``sum w |a|^2`` for real fields."""

        weights = np.abs(self.positive) ** 2 + np.abs(self.negative) ** 2
        return float(0.5 * np.sum(self.omega * weights))

    def momentum(self) -> np.ndarray:
        weights = 0.5 * (np.abs(self.positive) ** 2 + np.abs(self.negative) ** 2)
        total = np.zeros(3)
        for (n, _), w in zip(self.labels, weights):
            total += grid.wave_vector(self.box, n) * w
        return total

    def reality_defect(self) -> float:
        """Max of ``|b(k, -lam) + lam conj(a(k, lam))|``; zero for real fields."""

        worst = 0.0
        for (n, lam), a in zip(self.labels, self.positive):
            b = self.negative_at((n, -lam))
            worst = max(worst, abs(b + lam * np.conj(a)))
        return worst


def _check_real(state: FieldState) -> None:
    E, B = to_EB(state)
    scale = max(float(np.max(np.abs(state.psi))), 1.0)
    imaginary = max(float(np.max(np.abs(E.imag))), float(np.max(np.abs(B.imag))))
    if imaginary > REALITY_TOLERANCE * scale:
        raise NonRealField(f"E or B has an imaginary part of {imaginary:.3e}")


def decompose(state: FieldState, require_real: bool = True) -> ModeAmplitudes:
    if require_real:
        _check_real(state)
    box = state.box
    psi_hat = grid.fft(state.psi)
    amps = ModeAmplitudes(box=box, time=state.time)
    positive, negative, omegas = [], [], []
    for n in grid.iter_mode_labels(box):
        k = grid.wave_vector(box, n)
        omega = float(np.linalg.norm(k))
        factor = np.sqrt(2.0 / (omega * box.volume)) * box.cell_volume
        plus = psi_hat[(slice(None),) + grid.grid_index(box, n)]
        minus = psi_hat[(slice(None),) + grid.grid_index(box, tuple(-ni for ni in n))]
        for lam in HELICITY_ORDER:
            amps.labels.append((n, lam))
            omegas.append(omega)
            positive.append(
                factor * np.exp(1j * omega * state.time) * np.vdot(f_spinor(k, lam), plus)
            )
            negative.append(
                factor * np.exp(-1j * omega * state.time) * np.vdot(g_spinor(k, lam), minus)
            )
    amps.positive = np.asarray(positive, dtype=complex)
    amps.negative = np.asarray(negative, dtype=complex)
    amps.omega = np.asarray(omegas, dtype=float)
    logger.debug("Decomposed field into %d mode amplitudes", len(amps.labels))
    return amps


def reconstruct(amps: ModeAmplitudes) -> FieldState:
    box = amps.box
    psi_hat = np.zeros((6,) + box.shape, dtype=complex)
    t = amps.time
    for ((n, lam), a, b, omega) in zip(amps.labels, amps.positive, amps.negative, amps.omega):
        k = grid.wave_vector(box, n)
        weight = np.sqrt(omega / box.volume) * box.size / np.sqrt(2.0)
        plus = (slice(None),) + grid.grid_index(box, n)
        minus = (slice(None),) + grid.grid_index(box, tuple(-ni for ni in n))
        psi_hat[plus] += weight * a * np.exp(-1j * omega * t) * f_spinor(k, lam)
        psi_hat[minus] += weight * b * np.exp(1j * omega * t) * g_spinor(k, lam)
    return FieldState(box=box, psi=grid.ifft(psi_hat), time=t)


def transverse_part(state: FieldState) -> FieldState:
    """Nonuniform transverse part, Nyquist planes removed: what :func:`reconstruct` recovers."""

    box = state.box
    k = grid.wave_vectors(box)
    psi_hat = grid.fft(state.psi)
    out = np.empty_like(psi_hat)
    for block in (slice(0, 3), slice(3, 6)):
        out[block] = grid.transverse_project(psi_hat[block], k)
    out[..., 0, 0, 0] = 0.0
    out[:, grid.nyquist_mask(box)] = 0.0
    return state.with_psi(grid.ifft(out))


def export_amplitudes(amps: ModeAmplitudes, path: str | os.PathLike) -> Path:
    rows = [
        (n[0], n[1], n[2], lam, float(a.real), float(a.imag), float(omega))
        for (n, lam), a, omega in zip(amps.labels, amps.positive, amps.omega)
    ]
    return export.write_table(path, ("n1", "n2", "n3", "lambda", "re_a", "im_a", "omega"), rows)


def time_derivative(state: FieldState) -> np.ndarray:
    """``dpsi/dt = -i H psi``, the on-shell derivative."""

    return -1j * apply_hamiltonian(state.psi, state.box)


def pseudo_lagrangian_density(
    state: FieldState, dpsi_dt: np.ndarray | None = None, psi_bar: np.ndarray | None = None
) -> np.ndarray:
    """``psi_bar (i beta^mu d_mu) psi`` pointwise.

    With ``psi_bar = psi^dagger beta0`` this is ``i psi^dagger (dpsi/dt + chi . grad psi)``. The
    density is complex pointwise; off shell with a frozen field it equals ``-psi^dagger H psi``.
    ``psi_bar`` may be given as an independent row field (shape ``(6, ...)``) for variations.
    """

    if dpsi_dt is None:
        dpsi_dt = time_derivative(state)
    beta0 = build_matrix_set().beta0
    if psi_bar is None:
        psi_bar = np.einsum("ab,a...->b...", beta0, state.psi.conj())
    # i beta^mu d_mu psi = i beta0 (dpsi/dt + chi.grad psi)
    chi_grad = 1j * apply_hamiltonian(state.psi, state.box)
    operator_psi = 1j * np.einsum("ab,b...->a...", beta0, dpsi_dt + chi_grad)
    return np.sum(psi_bar * operator_psi, axis=0)


def lagrangian(state: FieldState, dpsi_dt: np.ndarray | None = None, psi_bar=None) -> complex:
    return complex(grid.integrate(pseudo_lagrangian_density(state, dpsi_dt, psi_bar), state.box))


def euler_lagrange_gradient(state: FieldState, dpsi_dt: np.ndarray | None = None) -> np.ndarray:
    """Functional derivative with respect to ``psi_bar``: ``i beta^mu d_mu psi``."""

    if dpsi_dt is None:
        dpsi_dt = time_derivative(state)
    chi_grad = 1j * apply_hamiltonian(state.psi, state.box)
    return 1j * np.einsum("ab,b...->a...", build_matrix_set().beta0, dpsi_dt + chi_grad)


@dataclass(frozen=True)
class EulerLagrangeReport:
    relative_error: float
    step: float
    errors: dict[float, float]


def euler_lagrange_check(
    state: FieldState,
    dpsi_dt: np.ndarray | None = None,
    seed: int = 0,
    steps=STEP_SCAN,
) -> EulerLagrangeReport:
    """Central finite differences of the action along a random smooth ``psi_bar`` direction.

    The step scan picks the step whose error is smallest (the plateau between truncation and
    cancellation). Errors are relative to the larger of the predicted directional derivative and
    the size of the terms that cancel on shell.
    """

    if dpsi_dt is None:
        dpsi_dt = time_derivative(state)
    box = state.box
    rng = np.random.default_rng(seed)
    direction = grid.random_band_limited(box, rng, 6, cutoff=2, transverse=False)
    psi_bar = np.einsum("ab,a...->b...", build_matrix_set().beta0, state.psi.conj())
    gradient = euler_lagrange_gradient(state, dpsi_dt)
    predicted = complex(grid.integrate(np.sum(direction * gradient, axis=0), box))
    # the two terms of the gradient cancel on shell, so measure against their size
    term = max(grid.grid_norm(dpsi_dt, box), grid.grid_norm(apply_hamiltonian(state.psi, box), box))
    scale = max(abs(predicted), grid.grid_norm(direction, box) * term) or 1.0

    errors: dict[float, float] = {}
    for h in steps:
        plus = lagrangian(state, dpsi_dt, psi_bar + h * direction)
        minus = lagrangian(state, dpsi_dt, psi_bar - h * direction)
        estimate = (plus - minus) / (2 * h)
        errors[h] = abs(estimate - predicted) / scale
    best = min(errors, key=errors.__getitem__)
    return EulerLagrangeReport(relative_error=errors[best], step=best, errors=errors)


def _pseudo_inverse_apply(psi: np.ndarray, box: BoxSpec) -> tuple[np.ndarray, float]:
    k = grid.wave_vectors(box)
    k2 = np.sum(k * k, axis=0)
    safe = np.where(k2 > 0, k2, 1.0)
    chi = build_matrix_set().chi
    psi_hat = grid.fft(psi)
    h_psi = apply_symbol(chi, k, psi_hat)
    inverse = np.where(k2 > 0, 1.0 / safe, 0.0) * h_psi
    nonzero_part = np.where(k2 > 0, 1.0 / safe, 0.0) * apply_symbol(chi, k, h_psi)
    discarded = psi_hat - nonzero_part
    total = float(np.sum(np.abs(psi_hat) ** 2))
    fraction = float(np.sum(np.abs(discarded) ** 2)) / total if total else 0.0
    return grid.ifft(inverse), fraction


@dataclass(frozen=True)
class ConjugateField:
    """``pi`` stored as the components of the row covector (already conjugated)."""

    box: BoxSpec
    pi: np.ndarray
    discarded_fraction: float = 0.0

    def contract(self, column: np.ndarray) -> np.ndarray:
        return np.sum(self.pi * column, axis=0)


def canonical_momentum(state: FieldState) -> ConjugateField:
    inverse, fraction = _pseudo_inverse_apply(state.psi, state.box)
    # squared rounding error of the transforms sits near 1e-32
    if fraction > 1e-24:
        logger.info("Dropped zero-frequency content (%.3e of the field norm)", fraction)
    return ConjugateField(box=state.box, pi=1j * inverse.conj(), discarded_fraction=fraction)


def shifted_lagrangian_density(
    state: FieldState, conjugate: ConjugateField, dpsi_dt: np.ndarray
) -> np.ndarray:
    """``L' = ((-i d_t)^-1 psi)_bar i beta^mu d_mu psi = pi (dpsi/dt + i H psi)``; zero on shell."""

    h_psi = apply_hamiltonian(state.psi, state.box)
    return conjugate.contract(dpsi_dt + 1j * h_psi)


def four_momentum(
    state: FieldState, dpsi_dt: np.ndarray | None = None
) -> tuple[float, np.ndarray]:
    """``H = int (pi dpsi/dt - L')`` and ``p = -int pi grad psi``."""

    if dpsi_dt is None:
        dpsi_dt = time_derivative(state)
    box = state.box
    conjugate = canonical_momentum(state)
    density = conjugate.contract(dpsi_dt) - shifted_lagrangian_density(state, conjugate, dpsi_dt)
    energy = float(np.real(grid.integrate(density, box)))
    grad = grid.gradient(state.psi, box)
    momentum = np.array(
        [-float(np.real(grid.integrate(conjugate.contract(grad[j]), box))) for j in range(3)]
    )
    return energy, momentum


@dataclass(frozen=True)
class TransverseDelta:
    """Fourier multiplier ``delta_ij - k_i k_j / |k|^2``; the identity at k = 0."""

    box: BoxSpec
    multiplier: np.ndarray

    def apply(self, vector_field: np.ndarray) -> np.ndarray:
        return grid.ifft(np.einsum("ij...,j...->i...", self.multiplier, grid.fft(vector_field)))

    def at(self, n) -> np.ndarray:
        return self.multiplier[(slice(None), slice(None)) + grid.grid_index(self.box, n)]


def transverse_delta_symbol(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    k2 = float(k @ k)
    if k2 == 0.0:
        return np.eye(3)
    return np.eye(3) - np.outer(k, k) / k2


def transverse_delta(box: BoxSpec) -> TransverseDelta:
    k = grid.wave_vectors(box)
    k2 = np.sum(k * k, axis=0)
    safe = np.where(k2 > 0, k2, 1.0)
    projector = np.eye(3).reshape(3, 3, 1, 1, 1) - np.einsum("i...,j...->ij...", k, k) / safe
    return TransverseDelta(box=box, multiplier=projector)
