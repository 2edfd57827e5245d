"""Exception hierarchy shared by the library and the CLI."""


class AptQfiError(Exception):
    """Base class for all library errors."""


class ResponseError(AptQfiError):
    """No usable steady-state response at the requested parameters."""


class SingularResponse(ResponseError):
    """The response matrix is (numerically) singular."""


class Unstable(ResponseError):
    """Some normal mode grows in time, so no steady state exists."""


class ZeroInformation(AptQfiError):
    """Both response derivatives vanish; the Cramer-Rao bound is infinite."""


class TruncationTooSmall(AptQfiError):
    """The truncated Fock space cannot represent the state accurately."""


class StepFailure(AptQfiError):
    """The adaptive integrator could not meet its error tolerance."""


class InsufficientGrid(AptQfiError):
    """Too few valid grid points for a log-log fit."""


class ConfigError(AptQfiError, ValueError):
    """Invalid run configuration."""
