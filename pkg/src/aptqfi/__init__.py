"""Sensing bounds for a driven pair of dissipatively coupled modes.

Rates, detunings, couplings and the drive are all in units of the collective
damping Gamma.
"""

from .errors import (
    AptQfiError,
    ConfigError,
    InsufficientGrid,
    ResponseError,
    SingularResponse,
    StepFailure,
    TruncationTooSmall,
    Unstable,
    ZeroInformation,
)
from .fock import FockDensityMatrix, coherent_state, default_cutoffs
from .lindblad import (
    Liouvillian,
    evolve_master_equation,
    evolve_means,
    husimi_q,
    master_equation_means,
    steady_state_check,
)
from .qfi import QfiReport, qfi, qfi_pure_state_oracle, qfi_sld_oracle, sld_decomposition, sweep_bound
from .sensitivity import Parameter, analytic_sensitivity, fd_sensitivity, scaling_exponent
from .steady import ModeAmplitudes, response, steady_state_solve
from .system import (
    EffectiveHamiltonian,
    Phase,
    Scenario,
    SystemParams,
    build_hamiltonian,
    check_anti_pt,
    classify_phase,
    eigenvalues,
    spectrum,
)

__version__ = "0.1.0"
