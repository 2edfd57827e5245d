"""Master-equation simulation of the driven dissipatively coupled modes.

The generator is

    d rho/dt = -i[H, rho] + kappa L(a) rho + kappa L(b) rho + 2 Gamma L(c) rho,
    L(x) rho = 2 x rho x^dag - x^dag x rho - rho x^dag x,   c = (a + b)/sqrt(2),

with H = da a^dag a + db b^dag b + g (a^dag b + a b^dag) + i(E a^dag - E* a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import TruncationTooSmall
from .fock import (
    Cutoffs,
    FockDensityMatrix,
    annihilators,
    coherent_amplitudes,
    coherent_state,
    default_cutoffs,
)
from .ode import dopri5
from .steady import response
from .system import Scenario, SystemParams, build_hamiltonian, detunings

LEAKAGE_TOL = 1e-8
STEADY_TOL = 1e-10


class Liouvillian:
    """Right-hand side of the master equation on a fixed truncated space.

    rho is viewed as a tensor R[n_a, n_b, m_a, m_b]; each ladder-operator
    product is one weighted slice shift, O(d^2).  Collecting the
    anticommutator terms with H gives

        d rho/dt = -i (K rho - (K rho)^dag) + 2 kappa (a rho a^dag + b rho b^dag)
                   + 2 Gamma (a + b) rho (a + b)^dag,
        K = H - i [(kappa + Gamma)(n_a + n_b) + Gamma (a^dag b + b^dag a)].

    Only the half M = -i K rho + a rho a^dag + ... is assembled and the
    result is M + M^dag, which is exact for Hermitian rho and keeps the
    integrated state exactly Hermitian.
    """

    def __init__(self, params: SystemParams, cutoffs: Cutoffs, scenario: Scenario | None = None):
        self.cutoffs = tuple(int(n) for n in cutoffs)
        na, nb = self.cutoffs
        self.shape = (na + 1, nb + 1, na + 1, nb + 1)
        self.dim = (na + 1) * (nb + 1)
        sa = np.sqrt(np.arange(1, na + 1, dtype=float))
        sb = np.sqrt(np.arange(1, nb + 1, dtype=float))
        n_a = np.arange(na + 1, dtype=float)[:, None]
        n_b = np.arange(nb + 1, dtype=float)[None, :]
        da, db = detunings(params, scenario)
        gamma = params.kappa + params.gamma_collective
        hop = params.dispersive_g - 1j * params.gamma_collective
        drive = params.drive
        local = 2 * params.kappa + 2 * params.gamma_collective
        cross = 2 * params.gamma_collective

        # -i K, with the -i folded into every weight
        self.k_diag = (-1j * ((da - 1j * gamma) * n_a + (db - 1j * gamma) * n_b))[:, :, None, None]
        hop_w = -1j * hop * (sa[:, None] * sb[None, :])[:, :, None, None]
        s_ = slice(None)
        up, down = slice(1, None), slice(None, -1)
        # (destination, source, weight) triples acting on row indices
        self.k_terms = [
            ((up, down), (down, up), hop_w),  # a^dag b
            ((down, up), (up, down), hop_w),  # b^dag a
            ((up,), (down,), drive * sa[:, None, None, None]),  # a^dag
            ((down,), (up,), -drive.conjugate() * sa[:, None, None, None]),  # a
        ]
        # half of the Hermitian jump contribution; apply_tensor adds the adjoint
        self.jump_terms = [
            ((down, s_, down, s_), (up, s_, up, s_), local / 2 * (sa[:, None, None, None] * sa[None, None, :, None])),
            ((s_, down, s_, down), (s_, up, s_, up), local / 2 * (sb[None, :, None, None] * sb[None, None, None, :])),
            ((down, s_, s_, down), (up, s_, s_, up), cross * (sa[:, None, None, None] * sb[None, None, None, :])),
        ]

    def apply_tensor(self, r: np.ndarray) -> np.ndarray:
        half = self.k_diag * r
        for dst, src, w in self.k_terms + self.jump_terms:
            half[dst] += w * r[src]
        return half + half.transpose(2, 3, 0, 1).conj()

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return self.apply_tensor(rho.reshape(self.shape)).reshape(self.dim, self.dim)

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        return self.apply_tensor(y.reshape(self.shape)).ravel()


def default_t_end(params: SystemParams, tol_ss: float = STEADY_TOL) -> float:
    """Time for the slowest mode, at rate gamma - Gamma = kappa, to decay by ``tol_ss``."""
    if params.kappa <= 0:
        raise ValueError("default t_end needs kappa > 0")
    return math.log(1 / tol_ss) / params.kappa


def simulation_cutoffs(params: SystemParams, scenario: Scenario | None = None) -> Cutoffs:
    amps = response(params, scenario)
    return default_cutoffs(amps.alpha0, amps.beta0)


StepMonitor = Callable[[float, FockDensityMatrix], None]


def _integrate(
    rho0: FockDensityMatrix,
    params: SystemParams,
    times,
    tol: float,
    scenario: Scenario | None,
    monitor: StepMonitor | None,
    max_step: float,
):
    """Yield the state at each of the increasing ``times`` (starting after t=0)."""
    rhs = Liouvillian(params, rho0.cutoffs, scenario)
    y = rho0.entries.ravel().copy()
    t = 0.0
    first_step = None
    for t_next in times:
        if t_next < t:
            raise ValueError("times must be increasing")
        for t, y, first_step in dopri5(rhs, t, y, t_next, tol, first_step=first_step, max_step=max_step):
            state = FockDensityMatrix(rho0.cutoffs, y.reshape(rhs.dim, rhs.dim))
            leakage = state.boundary_population()
            if leakage > LEAKAGE_TOL:
                raise TruncationTooSmall(
                    f"population {leakage:.2e} reached the top Fock levels at t={t:.4g}"
                )
            if monitor is not None:
                monitor(t, state)
        yield FockDensityMatrix(rho0.cutoffs, y.reshape(rhs.dim, rhs.dim))


def evolve_master_equation(
    rho0: FockDensityMatrix,
    params: SystemParams,
    t_end: float | None = None,
    tol: float = 1e-10,
    *,
    scenario: Scenario | None = None,
    monitor: StepMonitor | None = None,
    max_step: float = np.inf,
) -> FockDensityMatrix:
    """Integrate from rho0 at t = 0 to ``t_end`` with adaptive Dormand-Prince 5(4) steps.

    ``monitor(t, rho)`` is called after every accepted step.  Raises
    :class:`TruncationTooSmall` when the top two Fock levels of either mode
    collect more than 1e-8 population.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t_end is None:
        t_end = default_t_end(params)
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    (final,) = _integrate(rho0, params, [t_end], tol, scenario, monitor, max_step)
    return final


@dataclass(frozen=True)
class MeanTrajectory:
    times: np.ndarray
    means: np.ndarray  # shape (len(times), 2), complex

    @property
    def terminal(self) -> tuple[complex, complex]:
        return complex(self.means[-1, 0]), complex(self.means[-1, 1])


def master_equation_means(
    rho0: FockDensityMatrix,
    params: SystemParams,
    times,
    tol: float = 1e-10,
    *,
    scenario: Scenario | None = None,
) -> MeanTrajectory:
    """<a>(t), <b>(t) from the full simulation, sampled exactly at ``times``."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be a nonempty, nondecreasing list of nonnegative values")
    means = []
    for state in _integrate(rho0, params, times, tol, scenario, None, np.inf):
        means.append(state.means())
    return MeanTrajectory(times, np.array(means, dtype=complex))


def evolve_means(
    params: SystemParams, t_end: float, steps: int, *, scenario: Scenario | None = None
) -> MeanTrajectory:
    """Solve d/dt x = -i H x + (E, 0) from x(0) = 0 on ``steps`` equally spaced times.

    Uses the exponential of the augmented 3x3 generator, so a singular H is
    handled without inverting it.
    """
    if t_end <= 0 or steps < 2:
        raise ValueError("need t_end > 0 and steps >= 2")
    H = build_hamiltonian(params, scenario)
    generator = np.zeros((3, 3), dtype=complex)
    generator[:2, :2] = -1j * H.entries
    generator[0, 2] = params.drive
    times = np.linspace(0.0, t_end, steps)
    means = np.array([scipy.linalg.expm(generator * t)[:2, 2] for t in times])
    return MeanTrajectory(times, means)


def fidelity_with_coherent(rho: FockDensityMatrix, alpha: complex, beta: complex) -> float:
    psi = coherent_state(alpha, beta, rho.cutoffs)
    value = np.vdot(psi, rho.entries @ psi).real
    return float(min(max(value, 0.0), 1.0))


def annihilation_residual(rho: FockDensityMatrix, alpha: complex, beta: complex) -> float:
    """max(||(a - alpha) rho||_F, ||(b - beta) rho||_F)."""
    a, b = annihilators(rho.cutoffs)
    r = rho.entries
    res_a = a @ r - alpha * r
    res_b = b @ r - beta * r
    return float(max(np.linalg.norm(res_a), np.linalg.norm(res_b)))


def _check_represented(rho: FockDensityMatrix) -> None:
    leakage = rho.boundary_population(levels=1)
    if leakage > LEAKAGE_TOL:
        raise TruncationTooSmall(f"top Fock level holds population {leakage:.2e}")


def husimi_q(rho: FockDensityMatrix, mu: complex, nu: complex) -> float:
    """<mu, nu| rho |mu, nu> / pi^2.

    The coherent bra is the exact projection onto the truncated space, with
    no renormalization, since rho has no support above the cutoffs.
    """
    _check_represented(rho)
    psi = np.kron(coherent_amplitudes(mu, rho.cutoffs[0]), coherent_amplitudes(nu, rho.cutoffs[1]))
    return float(max(np.vdot(psi, rho.entries @ psi).real, 0.0) / math.pi**2)


def husimi_grid(rho: FockDensityMatrix, mus, nus) -> np.ndarray:
    """Q(mu_i, nu_j) for every pair of the two point lists, shape (len(mus), len(nus))."""
    _check_represented(rho)
    na, nb = rho.cutoffs
    A = np.array([coherent_amplitudes(m, na) for m in np.ravel(mus)])
    B = np.array([coherent_amplitudes(n, nb) for n in np.ravel(nus)])
    # contract one index at a time so every step is a matrix product
    t1 = (A.conj() @ rho.entries.reshape(na + 1, -1)).reshape(len(A), nb + 1, na + 1, nb + 1)
    t2 = np.einsum("impq,ip->imq", t1, A)
    t3 = t2 @ B.T
    q = np.einsum("jm,imj->ij", B.conj(), t3)
    return np.maximum(q.real, 0.0) / math.pi**2


def steady_state_check(
    params: SystemParams,
    t_end: float | None = None,
    tol: float = 1e-10,
    cutoffs: Cutoffs | None = None,
    scenario: Scenario | None = None,
) -> tuple[FockDensityMatrix, float, float]:
    """Evolve from vacuum and return (rho, fidelity, annihilation residual)."""
    amps = response(params, scenario)
    if cutoffs is None:
        cutoffs = default_cutoffs(amps.alpha0, amps.beta0)
    rho = evolve_master_equation(FockDensityMatrix.vacuum(cutoffs), params, t_end, tol, scenario=scenario)
    return (
        rho,
        fidelity_with_coherent(rho, amps.alpha0, amps.beta0),
        annihilation_residual(rho, amps.alpha0, amps.beta0),
    )
