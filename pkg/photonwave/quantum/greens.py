"""Massless scalar propagator and the transverse photon Green function as Fourier multipliers.

Sign convention: ``d_mu <-> -i k_mu`` with ``k.x = w t - k.x`` (bold k spatial), so the symbol of
``i beta^mu d_mu`` is ``beta^mu k_mu = beta0 w - beta.k`` and ``d^2`` becomes ``-k^2`` with
``k^2 = w^2 - |k|^2``.

On a periodic spacetime lattice

    i Delta(t, x) = (1 / (T V)) sum_{w, k} exp(-i (w t - k.x)) i / (k^2 + i eps)

Sites with ``k4 = 0`` or ``|k^2|`` below :data:`LIGHT_CONE_TOLERANCE` are excluded and counted.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.fft
from pydantic import BaseModel, ConfigDict, field_validator

from photonwave import export
from photonwave.config import settings
from photonwave.fields.dynamics import factorization_residual, four_symbol, omega_symbol
from photonwave.fields.observables import transverse_delta_symbol
from photonwave.grid import BudgetExceeded

logger = logging.getLogger(__name__)

MAX_LATTICE_POINTS = 32**4
LIGHT_CONE_TOLERANCE = 1e-12
LIGHT_CONE_BAND = 1.0
GOLDEN = (1 + 5**0.5) / 2


class ZeroSpatialK(ValueError):
    pass


def _check_epsilon(epsilon: float) -> None:
    if not epsilon > 0:
        raise ValueError("The i epsilon regulator must be positive")


def minkowski_square(k4) -> float:
    k4 = np.asarray(k4, dtype=float)
    return float(k4[0] ** 2 - k4[1:] @ k4[1:])


def scalar_propagator_multiplier(k4, epsilon: float) -> complex:
    _check_epsilon(epsilon)
    return 1j / (minkowski_square(k4) + 1j * epsilon)


def block_transverse_delta(k) -> np.ndarray:
    """``I2 (x) (I3 - k_hat k_hat^T)``."""

    return np.kron(np.eye(2), transverse_delta_symbol(k))


def transverse_green_multiplier(k4, epsilon: float) -> np.ndarray:
    """``(beta^mu k_mu) delta_T(k) i / (k^2 + i eps)``, the symbol of ``i R_T``."""

    k4 = np.asarray(k4, dtype=float)
    if not np.any(k4[1:]):
        raise ZeroSpatialK("The transverse projector is undefined for a zero spatial wave vector")
    return (
        four_symbol(k4[0], k4[1:])
        @ block_transverse_delta(k4[1:])
        * scalar_propagator_multiplier(k4, epsilon)
    )


@dataclass(frozen=True)
class GreenPropertyReport:
    """``exact`` compares ``(beta k) R_T`` with ``k^2/(k^2 + i eps) delta_T``; ``limit`` with
    ``delta_T`` itself, which it approaches linearly in eps off the light cone."""

    exact: float
    limit: float
    factorization: float
    omega_kills_projector: float


def green_defining_property(k4, epsilon: float) -> GreenPropertyReport:
    k4 = np.asarray(k4, dtype=float)
    omega, k = k4[0], k4[1:]
    k2 = minkowski_square(k4)
    delta = block_transverse_delta(k)
    product = four_symbol(omega, k) @ (-1j * transverse_green_multiplier(k4, epsilon))
    return GreenPropertyReport(
        exact=float(np.max(np.abs(product - k2 / (k2 + 1j * epsilon) * delta))),
        limit=float(np.max(np.abs(product - delta))),
        factorization=factorization_residual(k, omega),
        omega_kills_projector=float(np.max(np.abs(omega_symbol(k) @ delta))),
    )


class PropagatorLattice(BaseModel):
    model_config = ConfigDict(frozen=True)

    dims: tuple[int, int, int, int] = (8, 8, 8, 8)
    extents: tuple[float, float, float, float] = (
        2 * np.pi * GOLDEN,
        2 * np.pi,
        2 * np.pi,
        2 * np.pi,
    )
    epsilon: float = 1e-3

    @field_validator("dims")
    @classmethod
    def validate_dims(cls, value: tuple[int, int, int, int]):
        if any(n < 2 or n % 2 for n in value):
            raise ValueError("Lattice dimensions must be positive even integers")
        return value

    @field_validator("extents")
    @classmethod
    def validate_extents(cls, value: tuple[float, float, float, float]):
        if any(not np.isfinite(v) or v <= 0 for v in value):
            raise ValueError("Lattice extents must be positive and finite")
        return value

    @field_validator("epsilon")
    @classmethod
    def validate_epsilon(cls, value: float):
        _check_epsilon(value)
        return value

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    @property
    def spacetime_volume(self) -> float:
        return float(np.prod(self.extents))

    def with_epsilon(self, epsilon: float) -> "PropagatorLattice":
        return self.model_copy(update={"epsilon": epsilon})

    def frequencies(self) -> np.ndarray:
        """``(w, kx, ky, kz)`` on the lattice in FFT ordering, shape ``(4, Nt, Nx, Ny, Nz)``."""

        axes = [2 * np.pi * np.fft.fftfreq(n, d=ext / n) for n, ext in zip(self.dims, self.extents)]
        return np.stack(np.meshgrid(*axes, indexing="ij"))


def check_lattice_budget(lattice: PropagatorLattice, limit: int = MAX_LATTICE_POINTS) -> None:
    if lattice.size > limit:
        raise BudgetExceeded(f"Lattice of {lattice.size} points exceeds the cap of {limit}")


def _included_sites(k4: np.ndarray) -> np.ndarray:
    k2 = k4[0] ** 2 - np.sum(k4[1:] ** 2, axis=0)
    origin = np.all(k4 == 0, axis=0)
    return ~origin & (np.abs(k2) >= LIGHT_CONE_TOLERANCE)


def _synthesize(lattice: PropagatorLattice, multiplier: np.ndarray) -> np.ndarray:
    # exp(-i w t) is the forward transform in t, exp(+i k.x) the inverse in x
    spatial_points = int(np.prod(lattice.dims[1:]))
    field = scipy.fft.ifftn(multiplier, axes=(1, 2, 3), workers=settings.threads) * spatial_points
    field = scipy.fft.fft(field, axis=0, workers=settings.threads)
    return field / lattice.spacetime_volume


def _analyze(lattice: PropagatorLattice, field: np.ndarray) -> np.ndarray:
    spatial_points = int(np.prod(lattice.dims[1:]))
    multiplier = scipy.fft.ifft(field, axis=0, workers=settings.threads)
    multiplier = scipy.fft.fftn(multiplier, axes=(1, 2, 3), workers=settings.threads)
    return multiplier * lattice.spacetime_volume / spatial_points


@dataclass(frozen=True)
class PropagatorField:
    lattice: PropagatorLattice
    values: np.ndarray
    excluded_sites: int

    def reflected(self) -> np.ndarray:
        """``values(-x)`` on the periodic lattice."""

        return np.roll(np.flip(self.values, axis=(0, 1, 2, 3)), 1, axis=(0, 1, 2, 3))


def position_space_propagator(
    lattice: PropagatorLattice, epsilon: float | None = None
) -> PropagatorField:
    """``i Delta`` on the lattice; ``epsilon`` overrides the lattice regulator (zero allowed)."""

    check_lattice_budget(lattice)
    eps = lattice.epsilon if epsilon is None else epsilon
    k4 = lattice.frequencies()
    included = _included_sites(k4)
    k2 = k4[0] ** 2 - np.sum(k4[1:] ** 2, axis=0)
    safe = np.where(included, k2, 1.0)
    multiplier = np.where(included, 1j / (safe + 1j * eps), 0.0)
    excluded = int(included.size - np.count_nonzero(included))
    if excluded > 1:
        logger.warning("Excluded %d light-cone sites from the propagator lattice", excluded - 1)
    return PropagatorField(
        lattice=lattice, values=_synthesize(lattice, multiplier), excluded_sites=excluded
    )


@dataclass(frozen=True)
class WaveOperatorReport:
    """``d^2 (i Delta)`` against ``-i`` times the regulated and the plain band-limited delta."""

    regulated: float
    unregulated: float
    excluded_sites: int


def wave_operator_check(lattice: PropagatorLattice) -> WaveOperatorReport:
    propagator = position_space_propagator(lattice)
    k4 = lattice.frequencies()
    included = _included_sites(k4)
    k2 = k4[0] ** 2 - np.sum(k4[1:] ** 2, axis=0)
    box_wave = _synthesize(lattice, -k2 * _analyze(lattice, propagator.values))

    regulated_delta = _synthesize(
        lattice, np.where(included, k2 / (np.where(included, k2, 1.0) + 1j * lattice.epsilon), 0)
    )
    plain_delta = _synthesize(lattice, included.astype(complex))
    scale = float(np.max(np.abs(plain_delta)))
    return WaveOperatorReport(
        regulated=float(np.max(np.abs(box_wave + 1j * regulated_delta))) / scale,
        unregulated=float(np.max(np.abs(box_wave + 1j * plain_delta))) / scale,
        excluded_sites=propagator.excluded_sites,
    )


def evenness_residual(lattice: PropagatorLattice) -> float:
    propagator = position_space_propagator(lattice)
    scale = float(np.max(np.abs(propagator.values)))
    return float(np.max(np.abs(propagator.values - propagator.reflected()))) / scale


@dataclass(frozen=True)
class EpsilonStep:
    epsilon: float
    change: float


def epsilon_sweep(lattice: PropagatorLattice, epsilons: Sequence[float]) -> list[EpsilonStep]:
    """Relative max-norm change of ``i Delta`` against the unregulated lattice sum."""

    reference = position_space_propagator(lattice, epsilon=0.0).values
    scale = float(np.max(np.abs(reference)))
    steps = []
    for eps in epsilons:
        _check_epsilon(eps)
        values = position_space_propagator(lattice, epsilon=eps).values
        steps.append(EpsilonStep(eps, float(np.max(np.abs(values - reference))) / scale))
    return steps


@dataclass(frozen=True)
class DoublingReport:
    """Relative change of the lattice multiplier when ``epsilon`` is doubled.

    ``near_cone`` covers sites with ``0 < |k^2| < band`` and ``far_field`` the rest. Far from the
    cone the change is ``epsilon / |k^2 + 2 i epsilon|``, at most ``epsilon / band``.
    """

    epsilon: float
    band: float
    near_cone: float
    far_field: float
    near_sites: int
    far_sites: int


def regulator_doubling(
    lattice: PropagatorLattice, epsilon: float | None = None, band: float = LIGHT_CONE_BAND
) -> DoublingReport:
    eps = lattice.epsilon if epsilon is None else epsilon
    _check_epsilon(eps)
    if not band > 0:
        raise ValueError("The light-cone band must be positive")
    k4 = lattice.frequencies()
    included = _included_sites(k4)
    k2 = np.where(included, k4[0] ** 2 - np.sum(k4[1:] ** 2, axis=0), 1.0)
    single = 1j / (k2 + 1j * eps)
    doubled = 1j / (k2 + 2j * eps)
    change = np.abs(doubled - single) / np.abs(single)
    near = included & (np.abs(k2) < band)
    far = included & ~near
    report = DoublingReport(
        epsilon=eps,
        band=band,
        near_cone=float(np.max(change[near], initial=0.0)),
        far_field=float(np.max(change[far], initial=0.0)),
        near_sites=int(np.count_nonzero(near)),
        far_sites=int(np.count_nonzero(far)),
    )
    logger.info(
        "Doubling epsilon=%g: near-cone change %.3e over %d sites, far-field %.3e over %d",
        eps,
        report.near_cone,
        report.near_sites,
        report.far_field,
        report.far_sites,
    )
    return report


def export_propagator(propagator: PropagatorField, path: str | os.PathLike) -> Path:
    values = propagator.values
    rows = (
        (*index, float(values[index].real), float(values[index].imag))
        for index in np.ndindex(values.shape)
    )
    return export.write_table(path, ("it", "ix", "iy", "iz", "re", "im"), rows)
