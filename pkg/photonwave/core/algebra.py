"""Fixed matrices of the (1,0)+(0,1) representation.

Documentation uses the 1-based indices of the physics literature (tau_1, tau_2, tau_3); arrays are
0-based, so ``tau[0]`` is tau_1 and ``sigma[1][0]`` is Sigma_{10}. The 4x4 generator table is
indexed by mu = 0 (time) and mu = 1..3 (space) directly.

Every matrix with entries in {0, +-1, +-i} is assembled from integer data first, so identity checks
can use exact equality.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from photonwave import grid
from photonwave.grid import BoxSpec, NonTransverse

logger = logging.getLogger(__name__)

LEVI_CIVITA = np.zeros((3, 3, 3), dtype=int)
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1
    LEVI_CIVITA[_i, _k, _j] = -1

I3 = np.eye(3, dtype=complex)
I6 = np.eye(6, dtype=complex)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def build_tau() -> np.ndarray:
    """``(tau_i)_{jk} = -i eps_{ijk}`` as a ``(3, 3, 3)`` stack."""

    return -1j * LEVI_CIVITA.astype(complex)


def block(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    return np.block([[a, b], [c, d]])


@dataclass(frozen=True)
class MatrixSet:
    tau: np.ndarray
    beta0: np.ndarray
    beta: np.ndarray
    chi: np.ndarray
    spin: np.ndarray
    sigma: np.ndarray

    def beta_upper(self, mu: int) -> np.ndarray:
        """beta^mu: beta0 for mu = 0, beta_i for mu = i."""

        return self.beta0 if mu == 0 else self.beta[mu - 1]

    def beta_lower(self, mu: int) -> np.ndarray:
        """beta_mu = g_{mu nu} beta^nu with g = diag(1, -1, -1, -1)."""

        return self.beta0 if mu == 0 else -self.beta[mu - 1]

    @property
    def block_swap(self) -> np.ndarray:
        zero = np.zeros((3, 3), dtype=complex)
        return block(zero, I3, I3, zero)


@lru_cache(maxsize=1)
def build_matrix_set() -> MatrixSet:
    tau = build_tau()
    zero = np.zeros((3, 3), dtype=complex)
    beta0 = block(I3, zero, zero, -I3)
    beta = np.stack([block(zero, tau[i], -tau[i], zero) for i in range(3)])
    chi = np.stack([beta0 @ beta[i] for i in range(3)])
    spin = np.stack([np.kron(np.eye(2), tau[i]) for i in range(3)])

    sigma = np.zeros((4, 4, 6, 6), dtype=complex)
    for l in range(3):
        sigma[l + 1, 0] = 1j * chi[l]
        sigma[0, l + 1] = -1j * chi[l]
        for m in range(3):
            sigma[l + 1, m + 1] = np.einsum("n,nab->ab", LEVI_CIVITA[l, m], spin)

    return MatrixSet(
        tau=_frozen(tau),
        beta0=_frozen(beta0),
        beta=_frozen(beta),
        chi=_frozen(chi),
        spin=_frozen(spin),
        sigma=_frozen(sigma),
    )


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def hamiltonian_symbol(k) -> np.ndarray:
    """``H(k) = chi . k``, the symbol of ``-i chi . grad`` on ``exp(i k.x)``."""

    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise ValueError("Wave vector must be finite")
    return np.einsum("i,iab->ab", k, build_matrix_set().chi)


def apply_symbol(matrices: np.ndarray, k: np.ndarray, psi_hat: np.ndarray) -> np.ndarray:
    """``sum_i k_i M_i psi`` for a stack of three matrices over a k-grid."""

    return np.einsum("iab,i...,b...->a...", matrices, k, psi_hat)


def apply_hamiltonian(psi: np.ndarray, box: BoxSpec) -> np.ndarray:
    """Spectral ``H psi = -i chi . grad psi``."""

    k = grid.wave_vectors(box)
    return grid.ifft(apply_symbol(build_matrix_set().chi, k, grid.fft(psi)))


def _hamiltonian_on_moments(moments: list[np.ndarray], box: BoxSpec) -> list[np.ndarray]:
    """Apply H to ``G0 + sum_a x_a G_a`` keeping the result in the same moment form."""

    chi = build_matrix_set().chi
    constant = -1j * sum(
        np.einsum("ab,b...->a...", chi[c], moments[c + 1]) for c in range(3)
    ) + apply_hamiltonian(moments[0], box)
    return [constant] + [apply_hamiltonian(moments[a + 1], box) for a in range(3)]


def _orbital_moments(psi: np.ndarray, box: BoxSpec, j: int) -> list[np.ndarray]:
    """``L_j psi = -i eps_{jab} x_a d_b psi`` as moments (no constant part)."""

    grad = grid.gradient(psi, box)
    moments = [np.zeros_like(psi)]
    for a in range(3):
        moments.append(-1j * sum(LEVI_CIVITA[j, a, b] * grad[b] for b in range(3)))
    return moments


def _evaluate_moments(moments: list[np.ndarray], box: BoxSpec) -> np.ndarray:
    x = grid.positions(box, centered=True)
    return moments[0] + sum(x[a] * moments[a + 1] for a in range(3))


def verify_spin_orbit_commutator(
    box: BoxSpec,
    psi: np.ndarray | None = None,
    seed: int = 0,
    transverse_tol: float = 1e-10,
) -> float:
    """Max-norm of ``[H, L + S] psi`` relative to ``max|psi|``.

    The orbital operator multiplies by the non-periodic coordinate, so intermediate results are
    carried as polynomials of degree one in x whose coefficient fields stay band-limited; the
    derivative of the coordinate is taken exactly and only the coefficients are differentiated
    spectrally.
    """

    if min(box.grid_points) < 8:
        raise ValueError("Commutator check needs at least 8 points per axis")
    if psi is None:
        psi = grid.random_band_limited(box, np.random.default_rng(seed), 6, cutoff=2)
    if grid.transversality_residual(psi, box) > transverse_tol:
        raise NonTransverse("Test field for the spin-orbit commutator must be transverse")

    scale = float(np.max(np.abs(psi)))
    if scale == 0.0:
        return 0.0

    spin = build_matrix_set().spin
    h_psi = apply_hamiltonian(psi, box)
    worst = 0.0
    for j in range(3):
        h_l = _hamiltonian_on_moments(_orbital_moments(psi, box, j), box)
        l_h = _orbital_moments(h_psi, box, j)
        orbital = [h_l[i] - l_h[i] for i in range(4)]
        spin_part = apply_hamiltonian(np.einsum("ab,b...->a...", spin[j], psi), box) - np.einsum(
            "ab,b...->a...", spin[j], h_psi
        )
        orbital[0] = orbital[0] + spin_part
        residual = _evaluate_moments(orbital, box)
        worst = max(worst, float(np.max(np.abs(residual))))
    logger.info("Spin-orbit commutator residual %.3e on grid %s", worst / scale, box.grid_points)
    return worst / scale
