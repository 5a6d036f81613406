"""Plane-wave solutions of the Dirac-like equation on a periodic box.

A positive-frequency mode labelled ``(n, lam)`` is ``N f(k, lam) exp(-i(w t - k.x))`` and the
negative-frequency mode with the same label is ``N g(k, lam) exp(+i(w t - k.x))`` where
``k = 2 pi n / L`` and ``w = |k|`` for ``lam = +-1``. The prefactor ``N`` is ``sqrt(w / V)``
(canonical) or ``1 / sqrt(V)`` (number normalization).

The ``lam = 0`` solutions are eigenvectors of ``H(k)`` with eigenvalue zero. They are kept for
algebraic checks but synthesize as zero fields under the canonical normalization because their
frequency vanishes; ``unit_longitudinal`` gives them amplitude ``1 / sqrt(V)`` for tests of that
sector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from photonwave import grid
from photonwave.core.algebra import apply_hamiltonian, build_matrix_set, hamiltonian_symbol
from photonwave.core.polarization import ZeroWaveVector, polarization
from photonwave.grid import BoxSpec

logger = logging.getLogger(__name__)

NORMALIZATIONS = ("canonical", "number")
DEFAULT_NORMALIZATION = "canonical"


class MixedBox(ValueError):
    pass


class ModeSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    box: BoxSpec
    n: tuple[int, int, int]
    lam: int = 1
    freq_sign: int = 1

    @field_validator("lam")
    @classmethod
    def validate_lam(cls, value: int):
        if value not in (-1, 0, 1):
            raise ValueError("Helicity must be -1, 0 or +1")
        return value

    @field_validator("freq_sign")
    @classmethod
    def validate_sign(cls, value: int):
        if value not in (-1, 1):
            raise ValueError("Frequency sign must be +1 or -1")
        return value

    @property
    def k(self) -> np.ndarray:
        return grid.wave_vector(self.box, self.n)

    @property
    def omega(self) -> float:
        """``|k|`` for transverse modes, zero for the longitudinal/scalar sector."""

        return 0.0 if self.lam == 0 else float(np.linalg.norm(self.k))

    @property
    def is_zero_frequency(self) -> bool:
        return self.lam == 0


def f_spinor(k, lam: int) -> np.ndarray:
    eps = polarization(k, lam)
    return np.concatenate([eps, lam * eps]) / np.sqrt(1 + lam**2)


def g_spinor(k, lam: int) -> np.ndarray:
    eps = polarization(k, lam)
    return np.concatenate([lam * eps, eps]) / np.sqrt(1 + lam**2)


def amplitude(
    mode: ModeSpec, normalization: str | None = None, unit_longitudinal: bool = False
) -> float:
    normalization = normalization or DEFAULT_NORMALIZATION
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"Normalization must be one of {NORMALIZATIONS}")
    volume = mode.box.volume
    if mode.lam == 0:
        if unit_longitudinal or normalization == "number":
            return 1.0 / np.sqrt(volume)
        return 0.0
    if normalization == "number":
        return 1.0 / np.sqrt(volume)
    return float(np.sqrt(mode.omega / volume))


def mode_spinor(mode: ModeSpec) -> np.ndarray:
    if mode.freq_sign == 1:
        return f_spinor(mode.k, mode.lam)
    return g_spinor(mode.k, mode.lam)


def mode_field(
    mode: ModeSpec,
    x: np.ndarray,
    t: float = 0.0,
    *,
    normalization: str | None = None,
    unit_longitudinal: bool = False,
) -> np.ndarray:
    """Evaluate the mode at positions ``x`` of shape ``(3, ...)``; returns ``(6, ...)``."""

    x = np.asarray(x, dtype=float)
    k = mode.k.reshape((3,) + (1,) * (x.ndim - 1))
    phase = mode.omega * t - np.sum(k * x, axis=0)
    factor = amplitude(mode, normalization, unit_longitudinal) * np.exp(
        -1j * mode.freq_sign * phase
    )
    spinor = mode_spinor(mode).reshape((6,) + (1,) * (x.ndim - 1))
    return spinor * factor


def mode_on_grid(mode: ModeSpec, t: float = 0.0, **kwargs) -> np.ndarray:
    return mode_field(mode, grid.positions(mode.box), t, **kwargs)


def dirac_residual(mode: ModeSpec, t: float = 0.0, **kwargs) -> float:
    """Max-norm of ``i d_t phi - H phi`` with the spatial part differentiated spectrally."""

    phi = mode_on_grid(mode, t, **kwargs)
    time_derivative = -1j * mode.freq_sign * mode.omega * phi
    residual = 1j * time_derivative - apply_hamiltonian(phi, mode.box)
    return float(np.max(np.abs(residual)))


def transverse_modes(box: BoxSpec, cutoff: int | None = None) -> list[ModeSpec]:
    """All positive-frequency ``lam = +-1`` modes, lexicographic in ``(n, lam)``."""

    return [
        ModeSpec(box=box, n=n, lam=lam)
        for n in grid.iter_mode_labels(box, cutoff)
        for lam in (-1, 1)
    ]


def _shared_box(modes: Sequence[ModeSpec], box: BoxSpec) -> None:
    for mode in modes:
        if mode.box != box:
            raise MixedBox("All modes must live in the same box")


def orthonormality_check(
    box: BoxSpec,
    modes: Sequence[ModeSpec],
    t: float = 0.0,
    normalization: str | None = None,
    unit_longitudinal: bool = False,
) -> np.ndarray:
    """Gram matrix of the modes minus its expected value ``w delta``.

    Positive/negative-frequency overlaps are expected to vanish, so with a list containing both
    signs the returned matrix covers both lines of the orthonormality relations.
    """

    _shared_box(modes, box)
    normalization = normalization or DEFAULT_NORMALIZATION
    x = grid.positions(box)
    fields = np.stack(
        [
            mode_field(m, x, t, normalization=normalization, unit_longitudinal=unit_longitudinal)
            for m in modes
        ]
    )
    flat = fields.reshape(len(modes), -1)
    gram = flat.conj() @ flat.T * box.cell_volume

    expected = np.zeros_like(gram)
    for i, mode in enumerate(modes):
        weight = amplitude(mode, normalization, unit_longitudinal) ** 2 * box.volume
        for j, other in enumerate(modes):
            if (mode.n, mode.lam, mode.freq_sign) == (other.n, other.lam, other.freq_sign):
                expected[i, j] = weight
    return gram - expected


@dataclass(frozen=True)
class CompletenessReport:
    omega: float
    single_k: np.ndarray
    symmetrized: np.ndarray

    @property
    def single_k_off_diagonal(self) -> np.ndarray:
        return self.single_k[:3, 3:] / self.omega


def _projector_sum(k) -> np.ndarray:
    total = np.zeros((6, 6), dtype=complex)
    for lam in (1, 0, -1):
        f = f_spinor(k, lam)
        g = g_spinor(k, lam)
        total += np.outer(f, f.conj()) + np.outer(g, g.conj())
    return total


def completeness_check(box: BoxSpec, k, normalization: str | None = None) -> CompletenessReport:
    """Deviation of ``w sum_lam (f f^dag + g g^dag)`` from ``w I6``.

    Summed at a single k the off-diagonal blocks equal ``w tau . k_hat``; averaging the sums at k
    and -k cancels them.
    """

    k = np.asarray(k, dtype=float)
    omega = float(np.linalg.norm(k))
    if omega == 0.0:
        raise ZeroWaveVector("Completeness needs a non-zero wave vector")
    weight = 1.0 if (normalization or DEFAULT_NORMALIZATION) == "number" else omega
    single = weight * _projector_sum(k)
    paired = 0.5 * weight * (_projector_sum(k) + _projector_sum(-k))
    identity = weight * np.eye(6)
    logger.debug("Completeness evaluated for k=%s in box %s", k, box.lengths)
    return CompletenessReport(
        omega=weight, single_k=single - identity, symmetrized=paired - identity
    )


def dispersion_spectrum(k) -> np.ndarray:
    """Eigenvalues of ``chi . k`` sorted descending: ``{|k|, |k|, 0, 0, -|k|, -|k|}``."""

    return np.sort(np.linalg.eigvalsh(hamiltonian_symbol(k)))[::-1]


def block_swap(spinor: np.ndarray) -> np.ndarray:
    return build_matrix_set().block_swap @ spinor


def modes_from_labels(
    box: BoxSpec, labels: Iterable[tuple[int, int, int]], lam: int = 1
) -> list[ModeSpec]:
    return [ModeSpec(box=box, n=tuple(n), lam=lam) for n in labels]


def positive_and_negative_modes(box: BoxSpec, n_max: int | None = None) -> list[ModeSpec]:
    """Every non-Nyquist grid mode with ``max|n_i| <= n_max``: both frequency signs, all helicities.

    Ordering is lexicographic in ``(n, lam)`` with the positive-frequency block first.
    """

    labels = list(grid.iter_mode_labels(box, n_max))
    return [
        ModeSpec(box=box, n=n, lam=lam, freq_sign=sign)
        for sign in (1, -1)
        for n in labels
        for lam in (-1, 0, 1)
    ]
