"""Truncated two-mode Fock space: operators, coherent states, density matrices.

Basis ordering is row-major, ``index = n_a * (N_b + 1) + n_b``, i.e. mode a
is the left Kronecker factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.special import gammainc

from .errors import TruncationTooSmall

NORM_DEFICIT_TOL = 1e-12
MAX_CUTOFF = 40

Cutoffs = tuple[int, int]


def cutoff_for(amplitude: complex) -> int:
    """Smallest N exceeding |z|^2 + 10|z| + 10, capped at MAX_CUTOFF."""
    r = abs(amplitude)
    return min(math.floor(r * r + 10 * r + 10) + 1, MAX_CUTOFF)


def default_cutoffs(alpha: complex, beta: complex) -> Cutoffs:
    return cutoff_for(alpha), cutoff_for(beta)


def norm_deficit(amplitude: complex, cutoff: int) -> float:
    """Poisson weight a coherent state places above Fock level ``cutoff``."""
    mean = abs(amplitude) ** 2
    if mean == 0:
        return 0.0
    # P(n > N) for n ~ Poisson(mean) is the regularized lower gamma P(N+1, mean)
    return float(gammainc(cutoff + 1, mean))


def minimal_cutoff(amplitude: complex, tol: float = NORM_DEFICIT_TOL, extra: int = 2) -> int:
    """Smallest N with norm deficit below ``tol``, plus ``extra`` guard levels."""
    n = 0
    while norm_deficit(amplitude, n) > tol:
        n += 1
    return n + extra


def check_truncation(alpha: complex, beta: complex, cutoffs: Cutoffs, tol: float = NORM_DEFICIT_TOL) -> float:
    da = norm_deficit(alpha, cutoffs[0])
    db = norm_deficit(beta, cutoffs[1])
    deficit = da + db - da * db
    if deficit > tol:
        raise TruncationTooSmall(
            f"cutoffs {tuple(cutoffs)} lose {deficit:.2e} of the norm of |{alpha:.4g}, {beta:.4g}>"
        )
    return deficit


def dimension(cutoffs: Cutoffs) -> int:
    return (cutoffs[0] + 1) * (cutoffs[1] + 1)


def coherent_amplitudes(z: complex, cutoff: int) -> np.ndarray:
    """Untruncated coherent-state coefficients exp(-|z|^2/2) z^n / sqrt(n!), n <= cutoff."""
    c = np.empty(cutoff + 1, dtype=complex)
    c[0] = np.exp(-abs(z) ** 2 / 2)
    for n in range(1, cutoff + 1):
        c[n] = c[n - 1] * z / np.sqrt(n)
    return c


def coherent_state(alpha: complex, beta: complex, cutoffs: Cutoffs) -> np.ndarray:
    """Two-mode coherent state vector, renormalized on the truncated space."""
    check_truncation(alpha, beta, cutoffs)
    psi = np.kron(coherent_amplitudes(alpha, cutoffs[0]), coherent_amplitudes(beta, cutoffs[1]))
    return psi / np.linalg.norm(psi)


def fock_state(na: int, nb: int, cutoffs: Cutoffs) -> np.ndarray:
    psi = np.zeros(dimension(cutoffs), dtype=complex)
    psi[na * (cutoffs[1] + 1) + nb] = 1.0
    return psi


@lru_cache(maxsize=32)
def _operators(cutoffs: Cutoffs) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    na, nb = cutoffs
    destroy_a = sp.diags(np.sqrt(np.arange(1, na + 1)), 1, shape=(na + 1, na + 1))
    destroy_b = sp.diags(np.sqrt(np.arange(1, nb + 1)), 1, shape=(nb + 1, nb + 1))
    a = sp.kron(destroy_a, sp.identity(nb + 1), format="csr").astype(complex)
    b = sp.kron(sp.identity(na + 1), destroy_b, format="csr").astype(complex)
    return a, b


def annihilators(cutoffs: Cutoffs) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Sparse (a, b) on the truncated space."""
    return _operators(tuple(int(n) for n in cutoffs))


def number_diagonals(cutoffs: Cutoffs) -> tuple[np.ndarray, np.ndarray]:
    na, nb = cutoffs
    n_a = np.repeat(np.arange(na + 1), nb + 1).astype(float)
    n_b = np.tile(np.arange(nb + 1), na + 1).astype(float)
    return n_a, n_b


@dataclass(frozen=True)
class FockDensityMatrix:
    cutoffs: Cutoffs
    entries: np.ndarray

    def __post_init__(self):
        cutoffs = tuple(int(n) for n in self.cutoffs)
        if len(cutoffs) != 2 or min(cutoffs) < 0:
            raise ValueError(f"cutoffs must be two nonnegative integers, got {self.cutoffs}")
        m = np.array(self.entries, dtype=complex)
        d = dimension(cutoffs)
        if m.shape != (d, d):
            raise ValueError(f"entries must be {d}x{d} for cutoffs {cutoffs}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "cutoffs", cutoffs)
        object.__setattr__(self, "entries", m)

    @classmethod
    def pure(cls, psi: np.ndarray, cutoffs: Cutoffs) -> FockDensityMatrix:
        return cls(cutoffs, np.outer(psi, psi.conj()))

    @classmethod
    def vacuum(cls, cutoffs: Cutoffs) -> FockDensityMatrix:
        return cls.pure(fock_state(0, 0, cutoffs), cutoffs)

    @classmethod
    def coherent(cls, alpha: complex, beta: complex, cutoffs: Cutoffs) -> FockDensityMatrix:
        return cls.pure(coherent_state(alpha, beta, cutoffs), cutoffs)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = (self.entries + self.entries.conj().T) / 2
        return float(np.linalg.eigvalsh(herm)[0])

    def expect(self, op) -> complex:
        return complex(np.trace(op @ self.entries))

    def means(self) -> tuple[complex, complex]:
        a, b = annihilators(self.cutoffs)
        return self.expect(a), self.expect(b)

    def boundary_population(self, levels: int = 2) -> float:
        """Population in the top ``levels`` Fock levels of either mode."""
        n_a, n_b = number_diagonals(self.cutoffs)
        top = (n_a > self.cutoffs[0] - levels) | (n_b > self.cutoffs[1] - levels)
        return float(np.real(np.diagonal(self.entries))[top].sum())

    def validate(self, trace_tol: float = 1e-9, herm_tol: float = 1e-10, pos_tol: float = 1e-9) -> None:
        if abs(self.trace - 1) > trace_tol:
            raise ValueError(f"trace {self.trace} differs from 1")
        if self.hermiticity_error() > herm_tol:
            raise ValueError("density matrix is not Hermitian")
        if self.min_eigenvalue() < -pos_tol:
            raise ValueError("density matrix is not positive semidefinite")
