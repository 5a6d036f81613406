"""Longitudinal and circular polarization vectors.

Conventions:

* ``eps(k, 0) = k / |k|``.
* ``eps(k, +1) = (k1 k3 - i k2 |k|, k2 k3 + i k1 |k|, -(k1^2 + k2^2)) / (sqrt(2) |k| kappa)`` with
  ``kappa = sqrt(k1^2 + k2^2)``. It solves ``(tau . k_hat) eps = +eps`` and its third component is
  real and non-positive.
* ``eps(k, -1) = conj(eps(k, +1))``.
* On the z axis (kappa = 0) the formula is 0/0: ``eps(+|k| z, +1) = (1, i, 0)/sqrt(2)`` and the
  parity rule gives ``eps(-|k| z, +1) = eps(+|k| z, -1) = (1, -i, 0)/sqrt(2)``.

Under ``k -> -k`` the longitudinal vector flips sign and the helicity labels swap, so
``eps(-k, lam)`` spans the same line as ``eps(k, -lam)``. Which helicity optics calls
"right-handed" is not fixed here; only eigenvalues, orthonormality and conjugation are relied on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from photonwave.core.algebra import build_matrix_set

HELICITIES = (1, 0, -1)
SQRT2 = np.sqrt(2.0)


class ZeroWaveVector(ValueError):
    pass


def _as_wave_vector(k) -> tuple[np.ndarray, float]:
    k = np.asarray(k, dtype=float)
    norm = float(np.linalg.norm(k))
    if norm == 0.0:
        raise ZeroWaveVector("Polarization vectors are undefined at k = 0")
    return k, norm


def longitudinal(k) -> np.ndarray:
    k, norm = _as_wave_vector(k)
    return (k / norm).astype(complex)


def circular(k, lam: int) -> np.ndarray:
    if lam not in (1, -1):
        raise ValueError(f"Circular helicity must be +1 or -1, got {lam}")
    k, norm = _as_wave_vector(k)
    k1, k2, k3 = k
    kappa = float(np.hypot(k1, k2))
    if kappa == 0.0:
        eps = np.array([1.0, 1j, 0.0]) / SQRT2
        if k3 < 0:
            eps = eps.conj()
    else:
        eps = np.array(
            [k1 * k3 - 1j * k2 * norm, k2 * k3 + 1j * k1 * norm, -(kappa**2)], dtype=complex
        ) / (SQRT2 * norm * kappa)
    return eps if lam == 1 else eps.conj()


def polarization(k, lam: int) -> np.ndarray:
    return longitudinal(k) if lam == 0 else circular(k, lam)


@dataclass(frozen=True)
class PolarizationTriad:
    k: np.ndarray
    eps0: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray

    @classmethod
    def from_wave_vector(cls, k) -> "PolarizationTriad":
        plus = circular(k, 1)
        return cls(
            k=np.asarray(k, dtype=float),
            eps0=longitudinal(k),
            eps_plus=plus,
            eps_minus=plus.conj(),
        )

    def vectors(self) -> dict[int, np.ndarray]:
        return {1: self.eps_plus, 0: self.eps0, -1: self.eps_minus}


@dataclass(frozen=True)
class PolarizationReport:
    orthonormality: float
    completeness: float
    helicity: float


def helicity_operator(k) -> np.ndarray:
    k, norm = _as_wave_vector(k)
    return np.einsum("i,iab->ab", k / norm, build_matrix_set().tau)


def verify_polarization_identities(k) -> PolarizationReport:
    """Max residuals of orthonormality, completeness and the helicity eigenproblem."""

    triad = PolarizationTriad.from_wave_vector(k)
    basis = np.stack([triad.vectors()[lam] for lam in HELICITIES], axis=1)
    gram = basis.conj().T @ basis
    projector_sum = basis @ basis.conj().T
    helicity = helicity_operator(k)
    eigen_residual = max(
        float(np.max(np.abs(helicity @ eps - lam * eps))) for lam, eps in triad.vectors().items()
    )
    return PolarizationReport(
        orthonormality=float(np.max(np.abs(gram - np.eye(3)))),
        completeness=float(np.max(np.abs(projector_sum - np.eye(3)))),
        helicity=eigen_residual,
    )
