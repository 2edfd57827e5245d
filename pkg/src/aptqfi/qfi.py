"""Quantum Fisher information of the coherent steady state and Cramer-Rao bounds.

The closed form ``F = 4 (|d alpha0|^2 + |d beta0|^2)`` is checked against two
numerical oracles that never see it: the symmetric logarithmic derivative
solved in the eigenbasis of a finite-differenced density matrix, and the
pure-state overlap formula on a finite-differenced state vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import ResponseError, ZeroInformation
from .fock import Cutoffs, annihilators, coherent_state, default_cutoffs, number_diagonals
from .sensitivity import (
    EPS_CBRT,
    Parameter,
    SensitivityPair,
    analytic_sensitivity,
    parameter_value,
    scenario_for,
    with_parameter,
)
from .steady import response
from .system import SystemParams

SLD_THRESHOLD = 1e-12
POLAR_MIN_MAGNITUDE = 1e-9


@dataclass(frozen=True)
class QfiReport:
    fisher_info: float
    cr_bound: float
    d_alpha_mag: float
    d_beta_mag: float
    parameter: Parameter


def qfi_closed_form(sens: SensitivityPair) -> QfiReport:
    da, db = abs(sens.d_alpha), abs(sens.d_beta)
    if not (math.isfinite(da) and math.isfinite(db)):
        raise ValueError("sensitivities must be finite")
    fisher = 4 * (da * da + db * db)
    if fisher == 0:
        raise ZeroInformation(f"state does not depend on {Parameter(sens.parameter).value}")
    return QfiReport(fisher, 1 / math.sqrt(fisher), da, db, Parameter(sens.parameter))


def qfi(params: SystemParams, parameter: Parameter) -> QfiReport:
    return qfi_closed_form(analytic_sensitivity(params, parameter))


# -- generic oracles ---------------------------------------------------------


def sld_qfi(rho_of: Callable[[float], np.ndarray], eps: float, step: float) -> float:
    """Tr(rho L^2) with L solving d rho = (L rho + rho L)/2 in the rho eigenbasis.

    ``rho_of`` maps a parameter value to a density matrix; its derivative is
    taken by central difference.
    """
    rho = rho_of(eps)
    drho = (rho_of(eps + step) - rho_of(eps - step)) / (2 * step)
    rho = (rho + rho.conj().T) / 2
    drho = (drho + drho.conj().T) / 2
    p, v = scipy.linalg.eigh(rho, driver="evr")
    drho_eig = v.conj().T @ drho @ v
    sums = p[:, None] + p[None, :]
    keep = sums > SLD_THRESHOLD
    sld = np.zeros_like(drho_eig)
    sld[keep] = 2 * drho_eig[keep] / sums[keep]
    # Tr(rho L^2) = sum_jk p_j |L_jk|^2 for Hermitian L
    return float(np.sum(p[:, None] * np.abs(sld) ** 2))


def pure_state_qfi(psi_of: Callable[[float], np.ndarray], eps: float, step: float) -> float:
    """4 (<dpsi|dpsi> - |<psi|dpsi>|^2) with dpsi by central difference."""
    psi = psi_of(eps)
    dpsi = (psi_of(eps + step) - psi_of(eps - step)) / (2 * step)
    overlap = np.vdot(psi, dpsi)
    return float(4 * (np.vdot(dpsi, dpsi).real - abs(overlap) ** 2))


def _state_family(params: SystemParams, parameter: Parameter, cutoffs: Cutoffs | None):
    parameter = Parameter(parameter)
    scenario = scenario_for(params, parameter)
    nominal = response(params, scenario)
    if cutoffs is None:
        cutoffs = default_cutoffs(nominal.alpha0, nominal.beta0)

    def psi_of(value: float) -> np.ndarray:
        amps = response(with_parameter(params, parameter, value), scenario)
        return coherent_state(amps.alpha0, amps.beta0, cutoffs)

    return psi_of, cutoffs


def _fd_step(params: SystemParams, parameter: Parameter, fd_step: float | None) -> float:
    if fd_step is not None:
        return fd_step
    return EPS_CBRT * max(abs(parameter_value(params, parameter)), params.gamma_collective)


def qfi_sld_oracle(
    params: SystemParams,
    parameter: Parameter,
    cutoffs: Cutoffs | None = None,
    fd_step: float | None = None,
) -> float:
    psi_of, _ = _state_family(params, parameter, cutoffs)

    def rho_of(value: float) -> np.ndarray:
        psi = psi_of(value)
        return np.outer(psi, psi.conj())

    return sld_qfi(rho_of, parameter_value(params, parameter), _fd_step(params, parameter, fd_step))


def qfi_pure_state_oracle(
    params: SystemParams,
    parameter: Parameter,
    cutoffs: Cutoffs | None = None,
    fd_step: float | None = None,
) -> float:
    psi_of, _ = _state_family(params, parameter, cutoffs)
    return pure_state_qfi(psi_of, parameter_value(params, parameter), _fd_step(params, parameter, fd_step))


# -- three-part SLD ------------------------------------------------------------


@dataclass(frozen=True)
class SldDecomposition:
    l1_scalar: float
    l2_number_weights: tuple[float, float]
    l3_phase_weights: tuple[float, float]
    matrix: np.ndarray
    cutoffs: Cutoffs

    def fisher_info(self, rho: np.ndarray) -> float:
        return float(np.real(np.trace(rho @ self.matrix @ self.matrix)))


def sld_decomposition(
    params: SystemParams, parameter: Parameter, cutoffs: Cutoffs | None = None
) -> SldDecomposition:
    """Assemble L = L1 + L2 + L3 from the polar derivatives of (alpha0, beta0).

    L1 is a constant, L2 is diagonal in the number basis and L3 = 2i sum
    theta' [n, rho] carries the phase derivatives.  Requires both amplitudes
    to be nonzero so that log-magnitude derivatives exist.
    """
    parameter = Parameter(parameter)
    amps = response(params, scenario_for(params, parameter))
    sens = analytic_sensitivity(params, parameter)
    polar = []
    for z, dz in ((amps.alpha0, sens.d_alpha), (amps.beta0, sens.d_beta)):
        r = abs(z)
        if r < POLAR_MIN_MAGNITUDE:
            raise ValueError("polar decomposition needs both amplitudes nonzero")
        dr = (z.conjugate() * dz).real / r
        dtheta = (z.conjugate() * dz).imag / r**2
        polar.append((r, dr, dtheta))
    (ra, dra, dtha), (rb, drb, dthb) = polar
    if cutoffs is None:
        cutoffs = default_cutoffs(amps.alpha0, amps.beta0)
    psi = coherent_state(amps.alpha0, amps.beta0, cutoffs)
    rho = np.outer(psi, psi.conj())
    n_a, n_b = number_diagonals(cutoffs)

    l1 = -2 * (ra * dra + rb * drb)
    weights = (2 * dra / ra, 2 * drb / rb)
    l2 = np.diag(weights[0] * n_a + weights[1] * n_b)
    # [n, rho] for diagonal n: (n_j - n_k) rho_jk
    comm_a = (n_a[:, None] - n_a[None, :]) * rho
    comm_b = (n_b[:, None] - n_b[None, :]) * rho
    l3 = 2j * (dtha * comm_a + dthb * comm_b)
    matrix = l1 * np.eye(len(psi)) + l2 + l3
    return SldDecomposition(l1, weights, (dtha, dthb), matrix, tuple(cutoffs))


def analytic_density_derivative(params: SystemParams, parameter: Parameter, cutoffs: Cutoffs) -> np.ndarray:
    """d rho / d eps for the truncated coherent state via (a - alpha) and its conjugate.

    For an untruncated coherent state d|psi> = (d alpha a^dag - Re(alpha* d alpha)) |psi>
    (and likewise for mode b); the result is used to check the three-part SLD.
    """
    parameter = Parameter(parameter)
    amps = response(params, scenario_for(params, parameter))
    sens = analytic_sensitivity(params, parameter)
    psi = coherent_state(amps.alpha0, amps.beta0, cutoffs)
    a, b = annihilators(cutoffs)
    shift = (amps.alpha0.conjugate() * sens.d_alpha).real + (amps.beta0.conjugate() * sens.d_beta).real
    dpsi = sens.d_alpha * (a.conj().T @ psi) + sens.d_beta * (b.conj().T @ psi) - shift * psi
    return np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())


# -- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    xi: float
    epsilon: float
    fisher_info: float
    cr_bound: float
    error: str | None = None


def sweep_bound(base: SystemParams, parameter: Parameter, xi_values, epsilon_grid) -> list[SweepRow]:
    """Cramer-Rao bound over (xi, epsilon), with kappa = xi * Gamma.

    Failed points are kept as rows carrying an error name and NaN values.
    """
    parameter = Parameter(parameter)
    if len(xi_values) == 0 or len(epsilon_grid) == 0:
        raise ValueError("xi_values and epsilon_grid must be nonempty")
    rows = []
    for xi in sorted(float(x) for x in xi_values):
        for eps in sorted(float(e) for e in epsilon_grid):
            try:
                params = with_parameter(
                    SystemParams(
                        delta=base.delta,
                        kappa=xi * base.gamma_collective,
                        gamma_collective=base.gamma_collective,
                        drive=base.drive,
                        mismatch_s=base.mismatch_s,
                        dispersive_g=base.dispersive_g,
                    ),
                    parameter,
                    eps,
                )
                report = qfi(params, parameter)
                rows.append(SweepRow(xi, eps, report.fisher_info, report.cr_bound))
            except ZeroInformation:
                rows.append(SweepRow(xi, eps, 0.0, math.inf, "ZeroInformation"))
            except (ResponseError, ValueError) as exc:
                rows.append(SweepRow(xi, eps, math.nan, math.nan, type(exc).__name__))
    return rows
