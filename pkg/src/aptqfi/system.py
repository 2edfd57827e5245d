"""Two-mode anti-PT-symmetric system: parameters, effective Hamiltonian, spectrum.

All rates are in units of the collective coupling ``gamma_collective`` and
hbar = 1.  The effective Hamiltonian is the 2x2 matrix generating the
mode-amplitude dynamics ``d/dt x = -i H x + (E, 0)``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


class Scenario(str, enum.Enum):
    """How the perturbation enters the Hamiltonian.

    BASE uses detunings (+delta, -delta).  MISMATCH replaces them with
    (0, -s).  DISPERSIVE adds a coherent coupling g to the off-diagonals;
    BASE and DISPERSIVE share a single matrix form, so g = 0 is continuous.
    """

    BASE = "base"
    MISMATCH = "mismatch"
    DISPERSIVE = "dispersive"


@dataclass(frozen=True)
class SystemParams:
    delta: float = 0.0
    kappa: float = 1.0
    gamma_collective: float = 1.0
    drive: complex = 1.0
    mismatch_s: float = 0.0
    dispersive_g: float = 0.0

    def __post_init__(self):
        for name in ("delta", "kappa", "gamma_collective", "mismatch_s", "dispersive_g"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if self.gamma_collective <= 0:
            raise ValueError(f"gamma_collective must be > 0, got {self.gamma_collective}")
        drive = complex(self.drive)
        if not (math.isfinite(drive.real) and math.isfinite(drive.imag)):
            raise ValueError(f"drive must be finite, got {self.drive!r}")
        object.__setattr__(self, "drive", drive)
        if self.mismatch_s != 0 and self.dispersive_g != 0:
            warnings.warn(
                "mismatch_s and dispersive_g are both nonzero; closed forms do not "
                "apply and the linear-solve path is used",
                stacklevel=3,
            )

    @property
    def gamma(self) -> float:
        """Total damping rate kappa + Gamma."""
        return self.kappa + self.gamma_collective

    @property
    def xi(self) -> float:
        """Dimensionless excess damping (gamma - Gamma) / Gamma."""
        return self.kappa / self.gamma_collective

    @property
    def scenario(self) -> Scenario:
        if self.mismatch_s != 0:
            return Scenario.MISMATCH
        if self.dispersive_g != 0:
            return Scenario.DISPERSIVE
        return Scenario.BASE

    @property
    def combined_perturbation(self) -> bool:
        return self.mismatch_s != 0 and self.dispersive_g != 0

    @classmethod
    def from_xi(cls, xi: float, gamma_collective: float = 1.0, **kwargs) -> SystemParams:
        return cls(kappa=xi * gamma_collective, gamma_collective=gamma_collective, **kwargs)


@dataclass(frozen=True)
class EffectiveHamiltonian:
    entries: np.ndarray
    scale: float = 1.0  # Gamma, used for tolerances

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def trace(self) -> complex:
        return complex(self.entries[0, 0] + self.entries[1, 1])

    @property
    def det(self) -> complex:
        h = self.entries
        return complex(h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0])

    @property
    def discriminant(self) -> complex:
        """((H11 - H22)/2)^2 + H12 H21; equals delta^2 - Gamma^2 for the base form."""
        h = self.entries
        half = (h[0, 0] - h[1, 1]) / 2
        return complex(half * half + h[0, 1] * h[1, 0])


class Phase(str, enum.Enum):
    UNBROKEN = "unbroken"
    BROKEN = "broken"
    EXCEPTIONAL_POINT = "exceptional_point"


@dataclass(frozen=True)
class SpectralInfo:
    eigenvalues: tuple[complex, complex]
    phase: Phase
    splitting: float = field(default=0.0)


def detunings(params: SystemParams, scenario: Scenario | None = None) -> tuple[float, float]:
    """Mode detunings (delta_a, delta_b) for the given scenario."""
    scenario = params.scenario if scenario is None else Scenario(scenario)
    if scenario is Scenario.MISMATCH:
        return 0.0, -params.mismatch_s
    return params.delta, -params.delta


def build_hamiltonian(params: SystemParams, scenario: Scenario | None = None) -> EffectiveHamiltonian:
    """Assemble the 2x2 effective Hamiltonian.

    ``scenario`` overrides the one inferred from the perturbation fields.  It
    matters only for MISMATCH, whose detuning pair (0, -s) differs from the
    base pair even at s = 0.
    """
    da, db = detunings(params, scenario)
    gamma = params.gamma
    coupling = params.dispersive_g - 1j * params.gamma_collective
    entries = np.array(
        [[da - 1j * gamma, coupling], [coupling, db - 1j * gamma]],
        dtype=complex,
    )
    return EffectiveHamiltonian(entries, scale=params.gamma_collective)


def eigenvalues(H: EffectiveHamiltonian) -> tuple[complex, complex]:
    """Closed-form roots of the characteristic quadratic, ordered (+root, -root)."""
    mean = H.trace / 2
    root = np.sqrt(H.discriminant)
    return complex(mean + root), complex(mean - root)


def spectrum(H: EffectiveHamiltonian, ep_tol: float = 1e-10) -> SpectralInfo:
    if ep_tol <= 0:
        raise ValueError("ep_tol must be positive")
    lam_plus, lam_minus = eigenvalues(H)
    disc = H.discriminant
    if abs(disc) < ep_tol * H.scale**2:
        phase = Phase.EXCEPTIONAL_POINT
    elif disc.real > 0:
        # real discriminant > 0: frequencies split, damping shared
        phase = Phase.UNBROKEN
    else:
        phase = Phase.BROKEN
    return SpectralInfo((lam_plus, lam_minus), phase, abs(lam_plus - lam_minus))


def classify_phase(params: SystemParams, ep_tol: float = 1e-10) -> Phase:
    return spectrum(build_hamiltonian(params), ep_tol).phase


def check_anti_pt(H: EffectiveHamiltonian, tol: float = 1e-12) -> bool:
    """True iff sigma_x H* sigma_x = -H entrywise within ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    swapped = SIGMA_X @ H.entries.conj() @ SIGMA_X
    return float(np.max(np.abs(swapped + H.entries))) < tol


def is_dynamically_stable(H: EffectiveHamiltonian) -> bool:
    return all(lam.imag < 0 for lam in eigenvalues(H))
