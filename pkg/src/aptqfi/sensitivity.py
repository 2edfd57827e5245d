"""Derivatives of the steady-state amplitudes with respect to one parameter.

Two routes are provided: closed forms / the matrix-derivative identity
``dx = -H^{-1} (dH) x - i H^{-1} (dE, 0)``, and a central finite
difference on the linear-solve path that serves as an independent check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import InsufficientGrid, ResponseError
from .steady import _check_denominator, _require_stable, response, steady_state_solve
from .system import Scenario, SystemParams, build_hamiltonian

EPS_CBRT = np.finfo(float).eps ** (1 / 3)


class Parameter(str, enum.Enum):
    MISMATCH_S = "mismatch_s"
    DISPERSIVE_G = "dispersive_g"
    DELTA = "delta"
    GAMMA = "gamma"  # total damping; moved through kappa at fixed Gamma
    GAMMA_COLLECTIVE = "gamma_collective"
    DRIVE_REAL = "drive_real"


@dataclass(frozen=True)
class SensitivityPair:
    d_alpha: complex
    d_beta: complex
    parameter: Parameter


def scenario_for(params: SystemParams, parameter: Parameter) -> Scenario:
    """Configuration in which ``parameter`` is varied.

    The mismatch must be varied inside the (0, -s) detuning configuration
    even at s = 0, otherwise the Hamiltonian jumps between forms.
    """
    if Parameter(parameter) is Parameter.MISMATCH_S:
        return Scenario.MISMATCH
    return params.scenario


def parameter_value(params: SystemParams, parameter: Parameter) -> float:
    parameter = Parameter(parameter)
    if parameter is Parameter.GAMMA:
        return params.gamma
    if parameter is Parameter.DRIVE_REAL:
        return params.drive.real
    return getattr(params, parameter.value)


def with_parameter(
    params: SystemParams, parameter: Parameter, value: float, *, dependent_gamma: bool = True
) -> SystemParams:
    """Copy of ``params`` with ``parameter`` set to ``value``.

    With ``dependent_gamma=False`` a change of Gamma is compensated in kappa so
    the total damping stays fixed.
    """
    parameter = Parameter(parameter)
    if parameter is Parameter.GAMMA:
        return replace(params, kappa=value - params.gamma_collective)
    if parameter is Parameter.DRIVE_REAL:
        return replace(params, drive=complex(value, params.drive.imag))
    if parameter is Parameter.GAMMA_COLLECTIVE and not dependent_gamma:
        return replace(params, gamma_collective=value, kappa=params.gamma - value)
    return replace(params, **{parameter.value: value})


def hamiltonian_derivative(
    params: SystemParams, parameter: Parameter, *, dependent_gamma: bool = True
) -> np.ndarray:
    parameter = Parameter(parameter)
    scenario = scenario_for(params, parameter)
    d = np.zeros((2, 2), dtype=complex)
    if parameter is Parameter.MISMATCH_S:
        d[1, 1] = -1.0
    elif parameter is Parameter.DISPERSIVE_G:
        d[0, 1] = d[1, 0] = 1.0
    elif parameter is Parameter.DELTA:
        if scenario is not Scenario.MISMATCH:
            d[0, 0], d[1, 1] = 1.0, -1.0
    elif parameter is Parameter.GAMMA:
        d[0, 0] = d[1, 1] = -1j
    elif parameter is Parameter.GAMMA_COLLECTIVE:
        d[0, 1] = d[1, 0] = -1j
        if dependent_gamma:
            d[0, 0] = d[1, 1] = -1j
    return d


def matrix_sensitivity(
    params: SystemParams, parameter: Parameter, *, dependent_gamma: bool = True
) -> SensitivityPair:
    """General route: differentiate x = -i H^{-1} (E, 0)."""
    parameter = Parameter(parameter)
    H = build_hamiltonian(params, scenario_for(params, parameter))
    x = np.array(steady_state_solve(H, params.drive).as_tuple())
    h = H.entries
    inverse = np.array([[h[1, 1], -h[0, 1]], [-h[1, 0], h[0, 0]]]) / H.det
    dx = -inverse @ hamiltonian_derivative(params, parameter, dependent_gamma=dependent_gamma) @ x
    if parameter is Parameter.DRIVE_REAL:
        dx = dx - 1j * inverse[:, 0]
    return SensitivityPair(complex(dx[0]), complex(dx[1]), parameter)


def _mismatch_closed_form(params: SystemParams) -> SensitivityPair:
    gamma, coupling, s, drive = params.gamma, params.gamma_collective, params.mismatch_s, params.drive
    denominator = coupling**2 + 1j * s * gamma - gamma**2
    _check_denominator(denominator, coupling)
    _require_stable(build_hamiltonian(params, Scenario.MISMATCH))
    d2 = denominator**2
    return SensitivityPair(
        complex(1j * coupling**2 * drive / d2),
        complex(-1j * coupling * gamma * drive / d2),
        Parameter.MISMATCH_S,
    )


def _dispersive_closed_form(params: SystemParams) -> SensitivityPair:
    gamma, delta, drive = params.gamma, params.delta, params.drive
    shifted = params.gamma_collective + 1j * params.dispersive_g
    denominator = shifted**2 - delta**2 - gamma**2
    _check_denominator(denominator, params.gamma_collective)
    _require_stable(build_hamiltonian(params))
    d2 = denominator**2
    return SensitivityPair(
        complex(2j * shifted * (gamma - 1j * delta) * drive / d2),
        complex(-1j * (shifted**2 + delta**2 + gamma**2) * drive / d2),
        Parameter.DISPERSIVE_G,
    )


def analytic_sensitivity(
    params: SystemParams, parameter: Parameter, *, dependent_gamma: bool = True
) -> SensitivityPair:
    """Exact derivative of (alpha0, beta0) with respect to ``parameter``.

    The mismatch and dispersive-coupling derivatives use their closed forms
    whenever the other perturbation is absent; every other case goes through
    :func:`matrix_sensitivity`.
    """
    parameter = Parameter(parameter)
    if parameter is Parameter.MISMATCH_S and params.dispersive_g == 0:
        return _mismatch_closed_form(params)
    if parameter is Parameter.DISPERSIVE_G and params.mismatch_s == 0:
        return _dispersive_closed_form(params)
    return matrix_sensitivity(params, parameter, dependent_gamma=dependent_gamma)


def default_step(params: SystemParams, parameter: Parameter) -> float:
    return max(abs(parameter_value(params, parameter)), params.gamma_collective) * EPS_CBRT


def fd_sensitivity(
    params: SystemParams,
    parameter: Parameter,
    step: float | None = None,
    *,
    dependent_gamma: bool = True,
) -> SensitivityPair:
    parameter = Parameter(parameter)
    h = default_step(params, parameter) if step is None else step
    if h <= 0:
        raise ValueError("step must be positive")
    scenario = scenario_for(params, parameter)
    value = parameter_value(params, parameter)
    plus = response(with_parameter(params, parameter, value + h, dependent_gamma=dependent_gamma), scenario)
    minus = response(with_parameter(params, parameter, value - h, dependent_gamma=dependent_gamma), scenario)
    return SensitivityPair(
        (plus.alpha0 - minus.alpha0) / (2 * h),
        (plus.beta0 - minus.beta0) / (2 * h),
        parameter,
    )


def scaling_exponent(
    params: SystemParams, parameter: Parameter, grid, *, mode: str = "a"
) -> float:
    """Least-squares log-log slope of |d amplitude / d parameter| over ``grid``.

    Grid points that are non-positive or where the response does not exist
    are skipped.  ``mode`` selects the amplitude ("a" or "b").
    """
    if mode not in ("a", "b"):
        raise ValueError("mode must be 'a' or 'b'")
    xs, ys = [], []
    for eps in np.asarray(grid, dtype=float):
        if not eps > 0:
            continue
        try:
            sens = analytic_sensitivity(with_parameter(params, parameter, eps), parameter)
        except ResponseError:
            continue
        magnitude = abs(sens.d_alpha if mode == "a" else sens.d_beta)
        if magnitude > 0:
            xs.append(np.log(eps))
            ys.append(np.log(magnitude))
    if len(xs) < 4:
        raise InsufficientGrid(f"need at least 4 valid grid points, got {len(xs)}")
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)
