"""Long-time mode amplitudes of the driven two-mode system."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SingularResponse, Unstable
from .system import (
    EffectiveHamiltonian,
    Scenario,
    SystemParams,
    build_hamiltonian,
    is_dynamically_stable,
)

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class ModeAmplitudes:
    alpha0: complex
    beta0: complex

    def as_tuple(self) -> tuple[complex, complex]:
        return self.alpha0, self.beta0


def _check_denominator(denominator: complex, scale: float) -> None:
    if abs(denominator) < SINGULAR_TOL * scale**2:
        raise SingularResponse(
            f"response denominator {denominator:.3e} is below {SINGULAR_TOL:g} Gamma^2"
        )


def _require_stable(H: EffectiveHamiltonian) -> None:
    if not is_dynamically_stable(H):
        raise Unstable("an eigenvalue of H has non-negative imaginary part; no steady state")


def steady_state_solve(H: EffectiveHamiltonian, drive: complex) -> ModeAmplitudes:
    """Return -i H^{-1} (drive, 0) using the 2x2 adjugate."""
    det = H.det
    _check_denominator(det, H.scale)
    _require_stable(H)
    h = H.entries
    drive = complex(drive)
    alpha = -1j * h[1, 1] * drive / det
    beta = 1j * h[1, 0] * drive / det
    return ModeAmplitudes(complex(alpha), complex(beta))


def response(params: SystemParams, scenario: Scenario | None = None) -> ModeAmplitudes:
    """Amplitudes via the generic linear-solve path."""
    return steady_state_solve(build_hamiltonian(params, scenario), params.drive)


def closed_form_base(params: SystemParams) -> ModeAmplitudes:
    if params.mismatch_s != 0 or params.dispersive_g != 0:
        raise ValueError("closed_form_base requires mismatch_s = dispersive_g = 0")
    gamma, coupling, delta = params.gamma, params.gamma_collective, params.delta
    denominator = coupling**2 - delta**2 - gamma**2
    _check_denominator(denominator, coupling)
    _require_stable(build_hamiltonian(params))
    drive = params.drive
    return ModeAmplitudes(
        complex(-(gamma - 1j * delta) * drive / denominator),
        complex(coupling * drive / denominator),
    )


def closed_form_mismatch(params: SystemParams) -> ModeAmplitudes:
    """Detunings (0, -s); delta is ignored in this configuration."""
    if params.dispersive_g != 0:
        raise ValueError("closed_form_mismatch requires dispersive_g = 0")
    gamma, coupling, s = params.gamma, params.gamma_collective, params.mismatch_s
    denominator = coupling**2 + 1j * s * gamma - gamma**2
    _check_denominator(denominator, coupling)
    _require_stable(build_hamiltonian(params, Scenario.MISMATCH))
    drive = params.drive
    return ModeAmplitudes(
        complex(-(gamma - 1j * s) * drive / denominator),
        complex(coupling * drive / denominator),
    )


def closed_form_dispersive(params: SystemParams) -> ModeAmplitudes:
    """Base amplitudes with the coupling shifted Gamma -> Gamma + i g."""
    if params.mismatch_s != 0:
        raise ValueError("closed_form_dispersive requires mismatch_s = 0")
    gamma, delta = params.gamma, params.delta
    shifted = params.gamma_collective + 1j * params.dispersive_g
    denominator = shifted**2 - delta**2 - gamma**2
    _check_denominator(denominator, params.gamma_collective)
    _require_stable(build_hamiltonian(params))
    drive = params.drive
    return ModeAmplitudes(
        complex(-(gamma - 1j * delta) * drive / denominator),
        complex(shifted * drive / denominator),
    )
