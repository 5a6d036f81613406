"""Truncated Fock spaces for a handful of transverse modes.

Each mode ``(n, lam)`` gets a ladder operator on ``C^(n_max + 1)``; the full space is the Kronecker
product over modes with the first mode leftmost, modes ordered lexicographically in ``(n, lam)``.

The quantized field is the mode expansion with the negative-frequency amplitudes tied to the
positive ones as for real fields:

    psi(x) = (1/sqrt(2)) sum_{k, lam} [a(k, lam) phi+(k, lam) + lam a^dag(k, -lam) phi-(k, lam)]

so both the 1/sqrt(2) of ``psi = (E; iB)/sqrt(2)`` and the one of the expansion reach the equal-time
commutator, which comes out as half the band-limited transverse delta.
"""

from __future__ import annotations

import itertools
import logging
import os
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from photonwave import export, grid
from photonwave.core.modes import ModeSpec, f_spinor, mode_field, mode_on_grid
from photonwave.fields.dynamics import FieldState
from photonwave.fields.observables import canonical_momentum, transverse_delta_symbol
from photonwave.grid import BoxSpec, BudgetExceeded

logger = logging.getLogger(__name__)

MAX_FOCK_DIMENSION = 256

Label = tuple[tuple[int, int, int], int]


class FockTooLarge(BudgetExceeded):
    pass


@dataclass(frozen=True)
class FockModel:
    box: BoxSpec
    labels: tuple[Label, ...]
    n_max: int = 3

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("Each mode needs at least two occupation levels")
        if any(lam not in (-1, 1) for _, lam in self.labels):
            raise ValueError("Only transverse modes (lam = +-1) are quantized")
        if list(self.labels) != sorted(self.labels):
            raise ValueError("Mode labels must be in lexicographic (n, lam) order")
        if self.dimension > MAX_FOCK_DIMENSION:
            raise FockTooLarge(
                f"Fock dimension {self.dimension} exceeds the cap of {MAX_FOCK_DIMENSION}"
            )

    @classmethod
    def from_labels(cls, box: BoxSpec, labels: Sequence[Label], n_max: int = 3) -> "FockModel":
        return cls(
            box=box,
            labels=tuple(sorted((tuple(n), lam) for n, lam in labels)),  # type: ignore[misc]
            n_max=n_max,
        )

    @property
    def levels(self) -> int:
        return self.n_max + 1

    @property
    def dimension(self) -> int:
        return self.levels ** len(self.labels)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array(
            [np.linalg.norm(grid.wave_vector(self.box, n)) for n, _ in self.labels], dtype=float
        )

    @property
    def wave_vectors(self) -> np.ndarray:
        return np.array([grid.wave_vector(self.box, n) for n, _ in self.labels]).reshape(-1, 3)

    def occupations(self) -> list[tuple[int, ...]]:
        """Occupation tuples in basis order (first mode most significant)."""

        return list(itertools.product(range(self.levels), repeat=len(self.labels)))

    @cached_property
    def ladders(self) -> list[tuple[sp.csr_matrix, sp.csr_matrix]]:
        return ladder_operators(self)


def single_mode_annihilator(n_max: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1, format="csr")


def ladder_operators(model: FockModel) -> list[tuple[sp.csr_matrix, sp.csr_matrix]]:
    """``(a_m, a_m^dag)`` per mode as Kronecker products over the mode ordering."""

    a = single_mode_annihilator(model.n_max)
    count = len(model.labels)
    pairs = []
    for m in range(count):
        left = sp.identity(model.levels**m, format="csr")
        right = sp.identity(model.levels ** (count - m - 1), format="csr")
        annihilator = sp.kron(sp.kron(left, a), right, format="csr")
        pairs.append((annihilator, annihilator.conj().T.tocsr()))
    return pairs


def commutator(x: sp.spmatrix, y: sp.spmatrix) -> sp.csr_matrix:
    return (x @ y - y @ x).tocsr()


def ladder_commutator_diagonal(n_max: int) -> np.ndarray:
    """Diagonal of ``[a, a^dag]`` for one mode: ``(1, ..., 1, -n_max)``."""

    a = single_mode_annihilator(n_max)
    return commutator(a, a.T.tocsr()).diagonal()


def hamiltonian_operator(
    model: FockModel, frequencies: Sequence[float] | None = None
) -> sp.csr_matrix:
    """``sum_m w_m (a_m^dag a_m + 1/2)``; diagonal in the occupation basis."""

    omegas = model.frequencies if frequencies is None else np.asarray(frequencies, dtype=float)
    total = sp.csr_matrix((model.dimension, model.dimension), dtype=float)
    identity = sp.identity(model.dimension, format="csr")
    for omega, (a, a_dag) in zip(omegas, model.ladders):
        total = total + omega * (a_dag @ a + 0.5 * identity)
    return total.tocsr()


def momentum_operator(model: FockModel) -> list[sp.csr_matrix]:
    """``sum_m k_m a_m^dag a_m`` per Cartesian component (no zero-point term)."""

    numbers = [a_dag @ a for a, a_dag in model.ladders]
    out = []
    for j in range(3):
        total = sp.csr_matrix((model.dimension, model.dimension), dtype=float)
        for k, number in zip(model.wave_vectors, numbers):
            total = total + k[j] * number
        out.append(total.tocsr())
    return out


@dataclass(frozen=True)
class SpectrumLevel:
    energy: float
    occupations: tuple[int, ...]


def spectrum(model: FockModel, frequencies: Sequence[float] | None = None) -> list[SpectrumLevel]:
    h = hamiltonian_operator(model, frequencies)
    energies = h.diagonal().real
    levels = [SpectrumLevel(float(e), occ) for e, occ in zip(energies, model.occupations())]
    return sorted(levels, key=lambda level: (level.energy, level.occupations))


def export_spectrum(model: FockModel, path: str | os.PathLike) -> Path:
    header = ["index", "energy"] + [f"n{m + 1}" for m in range(len(model.labels))]
    rows = [(i, level.energy, *level.occupations) for i, level in enumerate(spectrum(model))]
    return export.write_table(path, header, rows)


def _mode_pair(model: FockModel, label: Label) -> tuple[ModeSpec, ModeSpec]:
    n, lam = label
    plus = ModeSpec(box=model.box, n=n, lam=lam, freq_sign=1)
    minus = ModeSpec(box=model.box, n=n, lam=lam, freq_sign=-1)
    return plus, minus


def field_operator(
    model: FockModel, x, t: float = 0.0
) -> tuple[list[sp.csr_matrix], list[sp.csr_matrix]]:
    """Components of ``psi(x, t)`` and of its analytic time derivative as Fock-space matrices.

    A label ``(n, lam)`` contributes ``a(n, lam)`` with ``phi+(n, lam)`` and ``lam a^dag(n, -lam)``
    with ``phi-(n, lam)``. Without its partner ``(n, -lam)`` in the model a label contributes only
    the positive-frequency term.
    """

    x = np.asarray(x, dtype=float)
    index = {label: m for m, label in enumerate(model.labels)}
    psi = [sp.csr_matrix((model.dimension, model.dimension), dtype=complex) for _ in range(6)]
    dpsi = [sp.csr_matrix((model.dimension, model.dimension), dtype=complex) for _ in range(6)]
    for label in model.labels:
        n, lam = label
        a, _ = model.ladders[index[label]]
        partner = index.get((n, -lam))
        partner_dag = None if partner is None else model.ladders[partner][1]
        plus, minus = _mode_pair(model, label)
        phi_plus = mode_field(plus, x, t, normalization="canonical") / np.sqrt(2.0)
        phi_minus = mode_field(minus, x, t, normalization="canonical") / np.sqrt(2.0)
        omega = plus.omega
        for c in range(6):
            psi[c] = psi[c] + phi_plus[c] * a
            dpsi[c] = dpsi[c] - 1j * omega * phi_plus[c] * a
            if partner_dag is not None:
                psi[c] = psi[c] + lam * phi_minus[c] * partner_dag
                dpsi[c] = dpsi[c] + 1j * omega * lam * phi_minus[c] * partner_dag
    return psi, dpsi


def heisenberg_evolution_check(model: FockModel, points=None, t: float = 0.0) -> float:
    """Max entry of ``i [H, psi(x)] - d psi/dt`` over sample points and components."""

    if points is None:
        rng = np.random.default_rng(0)
        points = rng.uniform(0.0, 1.0, size=(3, 3)) * np.asarray(model.box.lengths)
    h = hamiltonian_operator(model).astype(complex)
    worst = 0.0
    for x in np.atleast_2d(points):
        psi, dpsi = field_operator(model, x, t)
        for component, derivative in zip(psi, dpsi):
            residual = 1j * commutator(h, component) - derivative
            if residual.nnz:
                worst = max(worst, float(np.max(np.abs(residual.data))))
    return worst


def vacuum_vector(model: FockModel) -> np.ndarray:
    vacuum = np.zeros(model.dimension, dtype=complex)
    vacuum[0] = 1.0
    return vacuum


def vacuum_expectation(model: FockModel, x, t: float = 0.0) -> np.ndarray:
    psi, _ = field_operator(model, x, t)
    vacuum = vacuum_vector(model)
    return np.array([np.vdot(vacuum, component @ vacuum) for component in psi])


@dataclass(frozen=True)
class TwoPoint:
    fock: np.ndarray
    mode_sum: np.ndarray

    @property
    def deviation(self) -> float:
        return float(np.max(np.abs(self.fock - self.mode_sum)))


def vacuum_two_point(model: FockModel, x, x_prime, t: float = 0.0) -> TwoPoint:
    """``<0| psi_a(x) psi_b^dag(x') |0>`` from the Fock model and as a mode sum.

    The mode sum is ``sum (w / 2V) f f^dag exp(i k.r)`` with ``r = x - x'``.
    """

    psi_x, _ = field_operator(model, x, t)
    psi_y, _ = field_operator(model, x_prime, t)
    vacuum = vacuum_vector(model)
    left = np.array([component.conj().T @ vacuum for component in psi_x])
    right = np.array([component.conj().T @ vacuum for component in psi_y])
    fock = left.conj() @ right.T

    r = np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)
    mode_sum = np.zeros((6, 6), dtype=complex)
    for n, lam in model.labels:
        k = grid.wave_vector(model.box, n)
        omega = float(np.linalg.norm(k))
        f = f_spinor(k, lam)
        mode_sum += omega / (2 * model.box.volume) * np.outer(f, f.conj()) * np.exp(1j * k @ r)
    return TwoPoint(fock=fock, mode_sum=mode_sum)


@dataclass(frozen=True)
class CommutatorReport:
    """Equal-time ``[psi_i(x), pi_j(x')]`` as a function of ``r = x - x'``.

    ``deviation`` compares with ``+i delta_T / 2`` on the upper block and
    ``opposite_sign_deviation`` with ``-i delta_T / 2``; ``cross_block`` is the largest
    off-diagonal-block entry.
    """

    commutator: np.ndarray
    reference: np.ndarray
    deviation: float
    opposite_sign_deviation: float
    cross_block: float


def expansion_coefficients(box: BoxSpec, n, lam: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid coefficients of ``a(n, lam)`` and ``a^dag(n, lam)`` in the expansion of ``psi``.

    ``a^dag(n, lam)`` enters through the label ``(n, -lam)`` with weight ``-lam``.
    """

    plus = ModeSpec(box=box, n=n, lam=lam, freq_sign=1)
    minus = ModeSpec(box=box, n=n, lam=-lam, freq_sign=-1)
    alpha = mode_on_grid(plus, normalization="canonical") / np.sqrt(2.0)
    beta = -lam * mode_on_grid(minus, normalization="canonical") / np.sqrt(2.0)
    return alpha, beta


def _commutator_mode_sum(box: BoxSpec, labels: Sequence[tuple[int, int, int]]) -> np.ndarray:
    """``[psi_i(x), pi_j(0)]`` on the grid from the operator expansions, shape ``(6, 6, N...)``.

    Each ladder operator carries a coefficient in ``psi`` and one in ``pi = i (H+ psi)^dagger``;
    the pair is weighted by the vacuum value of the matching ladder commutator.
    """

    a = single_mode_annihilator(1)
    a_dag = a.T.tocsr()
    forward = commutator(a, a_dag).toarray()[0, 0]
    backward = commutator(a_dag, a).toarray()[0, 0]
    origin = (slice(None), 0, 0, 0)
    result = np.zeros((6, 6) + box.shape, dtype=complex)
    for n in labels:
        for lam in (-1, 1):
            alpha, beta = expansion_coefficients(box, n, lam)
            # psi coefficient of a pairs with the pi coefficient of a^dag and vice versa
            pi_of_a_dag = canonical_momentum(FieldState(box=box, psi=alpha)).pi[origin]
            pi_of_a = canonical_momentum(FieldState(box=box, psi=beta)).pi[origin]
            result += forward * np.einsum("i...,j->ij...", alpha, pi_of_a_dag)
            result += backward * np.einsum("i...,j->ij...", beta, pi_of_a)
    return result


def band_limited_transverse_delta(
    box: BoxSpec, labels: Sequence[tuple[int, int, int]]
) -> np.ndarray:
    """``(1/V) sum_q delta_T(q) exp(i q.r)`` over the given labels, shape ``(3, 3, Nx, Ny, Nz)``."""

    coeffs = np.zeros((3, 3) + box.shape, dtype=complex)
    for n in labels:
        site = (slice(None), slice(None)) + grid.grid_index(box, n)
        coeffs[site] += transverse_delta_symbol(grid.wave_vector(box, n)) / box.volume
    return grid.ifft(coeffs) * box.size


def field_commutator_check(box: BoxSpec, cutoff: int | None = None) -> CommutatorReport:
    labels = list(grid.iter_mode_labels(box, cutoff))
    result = _commutator_mode_sum(box, labels)
    delta = band_limited_transverse_delta(box, labels)
    reference = np.zeros_like(result)
    reference[:3, :3] = 0.5j * delta
    reference[3:, 3:] = 0.5j * delta
    scale = float(np.max(np.abs(reference)))
    upper = result[:3, :3]
    report = CommutatorReport(
        commutator=result,
        reference=reference,
        deviation=float(np.max(np.abs(result - reference))) / scale,
        opposite_sign_deviation=float(np.max(np.abs(upper + 0.5j * delta))) / scale,
        cross_block=max(
            float(np.max(np.abs(result[:3, 3:]))), float(np.max(np.abs(result[3:, :3])))
        ),
    )
    logger.info(
        "Equal-time commutator over %d labels: deviation %.3e", len(labels), report.deviation
    )
    return report


def commutator_cutoff_sweep(box: BoxSpec, cutoffs: Sequence[int]) -> list[float]:
    """Max-norm distance of the truncated commutator to ``i delta_T / 2`` on the full grid."""

    full = band_limited_transverse_delta(box, list(grid.iter_mode_labels(box)))
    scale = float(np.max(np.abs(full)))
    deviations = []
    for cutoff in cutoffs:
        result = _commutator_mode_sum(box, list(grid.iter_mode_labels(box, cutoff)))
        deviations.append(float(np.max(np.abs(result[:3, :3] - 0.5j * full))) / (0.5 * scale))
    return deviations
