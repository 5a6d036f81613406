"""Periodic rectangular grids and the spectral toolkit shared by the field modules.

Fields are stored component-first: a scalar field has shape ``(Nx, Ny, Nz)``, a 3-vector field
``(3, Nx, Ny, Nz)`` and a 6-spinor field ``(6, Nx, Ny, Nz)``. Fourier transforms always act on
the last three axes. Plane waves carry the spatial factor ``exp(+i k.x)`` so the gradient is the
multiplier ``+i k``.
"""

from __future__ import annotations

import logging
from typing import Iterator

import numpy as np
import scipy.fft
from pydantic import BaseModel, ConfigDict, field_validator

from photonwave.config import settings

logger = logging.getLogger(__name__)

MAX_GRID_POINTS = 32**3
SPATIAL_AXES = (-3, -2, -1)


class BudgetExceeded(RuntimeError):
    pass


class BoxSpec(BaseModel):
    """Periodic box: ``V = Lx Ly Lz`` and allowed wave vectors ``k = 2 pi n / L``."""

    model_config = ConfigDict(frozen=True)

    lengths: tuple[float, float, float]
    grid_points: tuple[int, int, int] = (8, 8, 8)

    @field_validator("lengths")
    @classmethod
    def validate_lengths(cls, value: tuple[float, float, float]):
        if any(not np.isfinite(length) or length <= 0 for length in value):
            raise ValueError("Box lengths must be positive and finite")
        return value

    @field_validator("grid_points")
    @classmethod
    def validate_grid_points(cls, value: tuple[int, int, int]):
        if any(n < 2 or n % 2 for n in value):
            raise ValueError("Grid points must be positive even integers")
        return value

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.grid_points

    @property
    def size(self) -> int:
        return int(np.prod(self.grid_points))

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))

    @property
    def cell_volume(self) -> float:
        return self.volume / self.size

    @property
    def spacing(self) -> np.ndarray:
        return np.asarray(self.lengths) / np.asarray(self.grid_points)

    @property
    def center(self) -> np.ndarray:
        return np.asarray(self.lengths) / 2.0


def cubic_box(length: float = 2 * np.pi, points: int = 8) -> BoxSpec:
    return BoxSpec(lengths=(length, length, length), grid_points=(points, points, points))


def check_budget(box: BoxSpec, limit: int = MAX_GRID_POINTS) -> None:
    if box.size > limit:
        raise BudgetExceeded(f"Grid of {box.size} points exceeds the desk-scale cap of {limit}")


def wave_vector(box: BoxSpec, n) -> np.ndarray:
    return 2 * np.pi * np.asarray(n, dtype=float) / np.asarray(box.lengths)


def wave_vectors(box: BoxSpec) -> np.ndarray:
    """Grid wave vectors as a ``(3, Nx, Ny, Nz)`` array in FFT ordering."""

    axes = [
        2 * np.pi * np.fft.fftfreq(n, d=length / n)
        for n, length in zip(box.grid_points, box.lengths)
    ]
    return np.stack(np.meshgrid(*axes, indexing="ij"))


def mode_indices(box: BoxSpec) -> np.ndarray:
    """Integer mode labels ``n`` matching :func:`wave_vectors`, shape ``(3, Nx, Ny, Nz)``."""

    axes = [np.rint(np.fft.fftfreq(n, d=1.0 / n)).astype(int) for n in box.grid_points]
    return np.stack(np.meshgrid(*axes, indexing="ij"))


def nyquist_mask(box: BoxSpec) -> np.ndarray:
    labels = mode_indices(box)
    half = np.asarray(box.grid_points).reshape(3, 1, 1, 1) // 2
    return np.any(np.abs(labels) == half, axis=0)


def grid_index(box: BoxSpec, n) -> tuple[int, int, int]:
    index = tuple(int(ni) % npts for ni, npts in zip(n, box.grid_points))
    return index  # type: ignore[return-value]


def iter_mode_labels(box: BoxSpec, cutoff: int | None = None) -> Iterator[tuple[int, int, int]]:
    """Non-zero, non-Nyquist integer labels with ``max|n_i| <= cutoff``, lexicographic order."""

    limits = [npts // 2 - 1 for npts in box.grid_points]
    if cutoff is not None:
        limits = [min(limit, cutoff) for limit in limits]
    for n1 in range(-limits[0], limits[0] + 1):
        for n2 in range(-limits[1], limits[1] + 1):
            for n3 in range(-limits[2], limits[2] + 1):
                if (n1, n2, n3) != (0, 0, 0):
                    yield (n1, n2, n3)


def positions(box: BoxSpec, centered: bool = False) -> np.ndarray:
    """Grid coordinates ``x_j = j L / N``; ``centered`` shifts the origin to the box center."""

    axes = [np.arange(n) * length / n for n, length in zip(box.grid_points, box.lengths)]
    coords = np.stack(np.meshgrid(*axes, indexing="ij"))
    if centered:
        coords = coords - box.center.reshape(3, 1, 1, 1)
    return coords


def fft(field: np.ndarray) -> np.ndarray:
    return scipy.fft.fftn(field, axes=SPATIAL_AXES, workers=settings.threads)


def ifft(field_hat: np.ndarray) -> np.ndarray:
    return scipy.fft.ifftn(field_hat, axes=SPATIAL_AXES, workers=settings.threads)


def gradient(field: np.ndarray, box: BoxSpec) -> np.ndarray:
    """Spectral gradient; a leading axis of length 3 is prepended."""

    k = wave_vectors(box)
    field_hat = fft(field)
    extra = field.ndim - 3
    k = k.reshape((3,) + (1,) * extra + box.shape)
    return ifft(1j * k * field_hat[np.newaxis])


def curl(vector_field: np.ndarray, box: BoxSpec) -> np.ndarray:
    k = wave_vectors(box)
    return ifft(1j * np.cross(k, fft(vector_field), axis=0))


def divergence(vector_field: np.ndarray, box: BoxSpec) -> np.ndarray:
    k = wave_vectors(box)
    return ifft(1j * np.sum(k * fft(vector_field), axis=0))


def integrate(density: np.ndarray, box: BoxSpec) -> np.ndarray:
    """Riemann sum over the last three axes (exact for band-limited integrands)."""

    return np.sum(density, axis=SPATIAL_AXES) * box.cell_volume


def grid_norm(field: np.ndarray, box: BoxSpec) -> float:
    return float(np.sqrt(np.real(integrate(np.sum(np.abs(field) ** 2, axis=0), box))))


class NonTransverse(ValueError):
    pass


def omega_multiplier_apply(psi_hat: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Fourier image of ``Omega = I2 (x) grad grad^T``: each 3-block maps to ``-k (k . v)``."""

    out = np.empty_like(psi_hat)
    for block in (slice(0, 3), slice(3, 6)):
        out[block] = -k * np.sum(k * psi_hat[block], axis=0)
    return out


def transversality_residual(psi: np.ndarray, box: BoxSpec) -> float:
    """``||Omega psi|| / ||psi||``; zero for transverse and for uniform fields."""

    norm = grid_norm(psi, box)
    if norm == 0.0:
        return 0.0
    residual = ifft(omega_multiplier_apply(fft(psi), wave_vectors(box)))
    return grid_norm(residual, box) / norm


def uniform_fraction(psi: np.ndarray, box: BoxSpec) -> float:
    """``||k=0 part|| / ||psi||``; the uniform part is invisible to Omega."""

    norm = grid_norm(psi, box)
    if norm == 0.0:
        return 0.0
    mean = psi.mean(axis=SPATIAL_AXES, keepdims=True)
    return grid_norm(np.broadcast_to(mean, psi.shape), box) / norm


def band_mask(box: BoxSpec, cutoff: int) -> np.ndarray:
    labels = mode_indices(box)
    return np.all(np.abs(labels) <= cutoff, axis=0) & ~nyquist_mask(box)


def transverse_project(vector_hat: np.ndarray, k: np.ndarray) -> np.ndarray:
    k2 = np.sum(k * k, axis=0)
    safe = np.where(k2 > 0, k2, 1.0)
    return vector_hat - k * np.sum(k * vector_hat, axis=0) / safe


def random_band_limited(
    box: BoxSpec,
    rng: np.random.Generator,
    components: int,
    cutoff: int = 2,
    transverse: bool = True,
    real: bool = False,
) -> np.ndarray:
    """Random smooth field with Fourier content only for ``max|n_i| <= cutoff``.

    ``transverse`` projects every 3-block onto the plane orthogonal to k (the uniform k=0 part is
    dropped). ``real`` returns the real part, which keeps both properties.
    """

    shape = (components,) + box.shape
    field_hat = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    field_hat = field_hat * band_mask(box, cutoff)
    k = wave_vectors(box)
    if transverse:
        field_hat[..., 0, 0, 0] = 0.0
        for start in range(0, components, 3):
            block = slice(start, start + 3)
            field_hat[block] = transverse_project(field_hat[block], k)
    field = ifft(field_hat) * box.size / np.sqrt(max(np.count_nonzero(field_hat), 1))
    return field.real if real else field
