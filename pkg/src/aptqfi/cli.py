"""Command-line front end: ``aptqfi <command> [--config f.json] [--set k=v ...]``.

Exit codes: 0 success, 2 configuration error, 3 singular/unstable response
or zero information, 4 truncation failure, 5 I/O error, 6 integration
failure, 1 any other library error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import lindblad, sensitivity, steady, system
from .errors import (
    AptQfiError,
    ConfigError,
    InsufficientGrid,
    ResponseError,
    StepFailure,
    TruncationTooSmall,
    ZeroInformation,
)
from .fock import FockDensityMatrix
from .qfi import qfi as qfi_report
from .qfi import sweep_bound
from .sensitivity import Parameter
from .svgplot import loglog_svg
from .system import SystemParams

COMMANDS = ("spectrum", "steady", "sensitivity", "qfi", "sweep", "evolve")
FORMATS = ("csv", "json")
SPACINGS = ("linear", "log")

EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_RESPONSE, EXIT_TRUNCATION, EXIT_IO, EXIT_STEP = 0, 1, 2, 3, 4, 5, 6

PARAM_KEYS = ("delta", "kappa", "gamma_collective", "drive", "mismatch_s", "dispersive_g")


# -- configuration -------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    count: int
    spacing: str = "log"

    def points(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.min])
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSpec:
    grid: GridSpec
    xi: tuple[float, ...]
    parameter: Parameter | None = None


@dataclass(frozen=True)
class SimSpec:
    cutoffs: tuple[int, int] | None = None
    t_end: float = 20.0
    tol: float = 1e-10
    samples: int = 50


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None
    plot: str | None = None


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: SystemParams = field(default_factory=SystemParams)
    parameter: Parameter | None = None
    sweep: SweepSpec | None = None
    sim: SimSpec | None = None
    output: OutputSpec = field(default_factory=OutputSpec)

    def to_dict(self) -> dict:
        p = self.params
        out = {
            "command": self.command,
            "params": {
                "delta": p.delta,
                "kappa": p.kappa,
                "gamma_collective": p.gamma_collective,
                "drive": [p.drive.real, p.drive.imag],
                "mismatch_s": p.mismatch_s,
                "dispersive_g": p.dispersive_g,
            },
            "output": {"format": self.output.format, "path": self.output.path, "plot": self.output.plot},
        }
        if self.parameter is not None:
            out["parameter"] = self.parameter.value
        if self.sweep is not None:
            g = self.sweep.grid
            out["sweep"] = {
                "grid": {"min": g.min, "max": g.max, "count": g.count, "spacing": g.spacing},
                "xi": list(self.sweep.xi),
            }
            if self.sweep.parameter is not None:
                out["sweep"]["parameter"] = self.sweep.parameter.value
        if self.sim is not None:
            s = self.sim
            out["sim"] = {
                "cutoffs": None if s.cutoffs is None else list(s.cutoffs),
                "t_end": s.t_end,
                "tol": s.tol,
                "samples": s.samples,
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _reject_unknown(section: str, data: dict, allowed) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"{section}: unknown key(s) {', '.join(unknown)}")


def _number(section: str, key: str, value, *, integer: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key}: expected a number, got {value!r}")
    if integer:
        if int(value) != value:
            raise ConfigError(f"{section}.{key}: expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key}: must be finite")
    return float(value)


def _section(data: dict, key: str) -> dict:
    value = data.get(key)
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{key}: expected an object")
    return value


def _parse_drive(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError("params.drive: expected [re, im]")
        return complex(_number("params", "drive[0]", value[0]), _number("params", "drive[1]", value[1]))
    return complex(_number("params", "drive", value))


def _parse_parameter(where: str, value) -> Parameter:
    try:
        return Parameter(value)
    except ValueError:
        names = ", ".join(p.value for p in Parameter)
        raise ConfigError(f"{where}: unknown parameter {value!r} (choose from {names})") from None


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    _reject_unknown("config", data, ("command", "params", "parameter", "sweep", "sim", "output"))
    command = data.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command: expected one of {', '.join(COMMANDS)}, got {command!r}")

    pdata = _section(data, "params")
    _reject_unknown("params", pdata, PARAM_KEYS)
    kwargs = {k: _number("params", k, v) for k, v in pdata.items() if k != "drive"}
    if "drive" in pdata:
        kwargs["drive"] = _parse_drive(pdata["drive"])
    try:
        params = SystemParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"params: {exc}") from None

    parameter = None
    if data.get("parameter") is not None:
        parameter = _parse_parameter("parameter", data["parameter"])

    sweep = None
    if data.get("sweep") is not None:
        sdata = _section(data, "sweep")
        _reject_unknown("sweep", sdata, ("grid", "xi", "parameter"))
        gdata = _section(sdata, "grid")
        _reject_unknown("sweep.grid", gdata, ("min", "max", "count", "spacing"))
        for key in ("min", "max", "count"):
            if key not in gdata:
                raise ConfigError(f"sweep.grid.{key}: required")
        grid = GridSpec(
            _number("sweep.grid", "min", gdata["min"]),
            _number("sweep.grid", "max", gdata["max"]),
            _number("sweep.grid", "count", gdata["count"], integer=True),
            gdata.get("spacing", "log"),
        )
        if grid.count < 1:
            raise ConfigError("sweep.grid.count: must be >= 1")
        if grid.spacing not in SPACINGS:
            raise ConfigError(f"sweep.grid.spacing: expected linear or log, got {grid.spacing!r}")
        if grid.count > 1 and not grid.min < grid.max:
            raise ConfigError("sweep.grid: min must be < max")
        if grid.spacing == "log" and grid.min <= 0:
            raise ConfigError("sweep.grid.min: log spacing requires min > 0")
        xi = sdata.get("xi", [params.xi])
        if not isinstance(xi, (list, tuple)) or not xi:
            raise ConfigError("sweep.xi: expected a nonempty list")
        xi = tuple(_number("sweep", "xi", x) for x in xi)
        if min(xi) < 0:
            raise ConfigError("sweep.xi: values must be >= 0")
        sparam = None
        if sdata.get("parameter") is not None:
            sparam = _parse_parameter("sweep.parameter", sdata["parameter"])
        sweep = SweepSpec(grid, xi, sparam)

    sim = None
    if data.get("sim") is not None:
        mdata = _section(data, "sim")
        _reject_unknown("sim", mdata, ("cutoffs", "t_end", "tol", "samples"))
        cutoffs = mdata.get("cutoffs")
        if cutoffs is not None:
            if not isinstance(cutoffs, (list, tuple)) or len(cutoffs) != 2:
                raise ConfigError("sim.cutoffs: expected [N_a, N_b]")
            cutoffs = tuple(_number("sim", "cutoffs", n, integer=True) for n in cutoffs)
            if min(cutoffs) < 0:
                raise ConfigError("sim.cutoffs: must be nonnegative")
        defaults = SimSpec()
        sim = SimSpec(
            cutoffs,
            _number("sim", "t_end", mdata.get("t_end", defaults.t_end)),
            _number("sim", "tol", mdata.get("tol", defaults.tol)),
            _number("sim", "samples", mdata.get("samples", defaults.samples), integer=True),
        )
        if sim.t_end <= 0 or sim.tol <= 0 or sim.samples < 2:
            raise ConfigError("sim: need t_end > 0, tol > 0, samples >= 2")

    odata = _section(data, "output")
    _reject_unknown("output", odata, ("format", "path", "plot"))
    output = OutputSpec(odata.get("format") or "csv", odata.get("path"), odata.get("plot"))
    if output.format not in FORMATS:
        raise ConfigError(f"output.format: expected csv or json, got {output.format!r}")
    for key in ("path", "plot"):
        value = getattr(output, key)
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"output.{key}: expected a string path")

    config = RunConfig(command, params, parameter, sweep, sim, output)
    if command in ("sensitivity", "qfi") and parameter is None:
        raise ConfigError(f"{command}: 'parameter' is required")
    if command == "sweep":
        if sweep is None:
            raise ConfigError("sweep: 'sweep' section is required")
        if sweep.parameter is None and parameter is None:
            raise ConfigError("sweep: a parameter is required")
    return config


def _set_dotted(data: dict, key: str, raw: str) -> None:
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = data
    for part in parts[:-1]:
        child = node.get(part)
        if child is None:
            child = node[part] = {}
        elif not isinstance(child, dict):
            raise ConfigError(f"--set {key}: {part} is not a section")
        node = child
    node[parts[-1]] = value


def parse_config(source=None, overrides=(), **flags) -> RunConfig:
    """Build a validated RunConfig.

    ``source`` may be a dict, a JSON string, or a path to a JSON file.
    ``overrides`` are ``key=value`` strings with dotted keys; ``flags``
    (command, out, plot, format) are applied last.
    """
    if source is None:
        data = {}
    elif isinstance(source, dict):
        data = json.loads(json.dumps(source))
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            try:
                text = Path(text).read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read config file {source}: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        _set_dotted(data, key.strip(), raw.strip())
    if flags.get("command"):
        data["command"] = flags["command"]
    for flag, key in (("out", "path"), ("plot", "plot"), ("format", "format")):
        if flags.get(flag) is not None:
            data.setdefault("output", {})
            if not isinstance(data["output"], dict):
                raise ConfigError("output: expected an object")
            data["output"][key] = flags[flag]
    return config_from_dict(data)


# -- tables ------------------------------------------------------------------


@dataclass
class Table:
    columns: list[tuple[str, str]]  # (name, unit)
    rows: list[list]
    summary: dict = field(default_factory=dict)


def _fmt(value) -> list[str]:
    if isinstance(value, bool):
        return [str(value).lower()]
    if isinstance(value, complex):
        # adding 0.0 folds -0.0 into 0.0
        return [format(value.real + 0.0, ".17g"), format(value.imag + 0.0, ".17g")]
    if isinstance(value, (float, np.floating)):
        return [format(float(value) + 0.0, ".17g")]
    if value is None:
        return [""]
    return [str(value)]


def to_csv(table: Table) -> str:
    names, units = [], []
    complex_cols = {
        i for i in range(len(table.columns)) if any(isinstance(r[i], complex) for r in table.rows)
    }
    for i, (name, unit) in enumerate(table.columns):
        if i in complex_cols:
            names += [f"{name}_re", f"{name}_im"]
            units += [f"{name}_re={unit}", f"{name}_im={unit}"]
        else:
            names.append(name)
            units.append(f"{name}={unit}")
    buf = io.StringIO()
    buf.write("# units: " + "; ".join(units) + "\n")
    buf.write(",".join(names) + "\n")
    for row in table.rows:
        cells = []
        for i, value in enumerate(row):
            if i in complex_cols and not isinstance(value, complex):
                value = complex(value)
            cells += _fmt(value)
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def _json_value(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    return value


def to_json(table: Table, command: str) -> str:
    doc = {
        "command": command,
        "columns": [name for name, _ in table.columns],
        "units": {name: unit for name, unit in table.columns},
        "rows": [{name: _json_value(v) for (name, _), v in zip(table.columns, row)} for row in table.rows],
        "summary": {k: _json_value(v) for k, v in table.summary.items()},
    }
    return json.dumps(doc, indent=2) + "\n"


# -- commands ------------------------------------------------------------------


# every rate, detuning, coupling and drive is expressed in units of Gamma
UNIT = "Gamma"


def _cmd_spectrum(config: RunConfig) -> Table:
    H = system.build_hamiltonian(config.params)
    info = system.spectrum(H)
    return Table(
        [
            ("lambda_plus", "Gamma"),
            ("lambda_minus", "Gamma"),
            ("splitting", "Gamma"),
            ("phase", "-"),
            ("anti_pt", "-"),
            ("stable", "-"),
        ],
        [[
            info.eigenvalues[0],
            info.eigenvalues[1],
            info.splitting,
            info.phase.value,
            system.check_anti_pt(H),
            system.is_dynamically_stable(H),
        ]],
    )


def _cmd_steady(config: RunConfig) -> Table:
    amps = steady.response(config.params)
    return Table([("alpha0", "1"), ("beta0", "1")], [[amps.alpha0, amps.beta0]])


def _cmd_sensitivity(config: RunConfig) -> Table:
    par = config.parameter
    exact = sensitivity.analytic_sensitivity(config.params, par)
    fd = sensitivity.fd_sensitivity(config.params, par)
    unit = f"1/{UNIT}"
    return Table(
        [("parameter", "-"), ("d_alpha", unit), ("d_beta", unit), ("fd_d_alpha", unit), ("fd_d_beta", unit)],
        [[par.value, exact.d_alpha, exact.d_beta, fd.d_alpha, fd.d_beta]],
    )


def _cmd_qfi(config: RunConfig) -> Table:
    par = config.parameter
    report = qfi_report(config.params, par)
    unit = UNIT
    return Table(
        [
            ("parameter", "-"),
            ("F_Q", f"1/{unit}^2"),
            (f"delta_{par.value}_bound", unit),
            ("d_alpha_mag", f"1/{unit}"),
            ("d_beta_mag", f"1/{unit}"),
        ],
        [[par.value, report.fisher_info, report.cr_bound, report.d_alpha_mag, report.d_beta_mag]],
    )


def _cmd_sweep(config: RunConfig) -> Table:
    par = config.sweep.parameter or config.parameter
    rows = sweep_bound(config.params, par, config.sweep.xi, config.sweep.grid.points())
    unit = UNIT
    name = par.value
    short = {"mismatch_s": "s", "dispersive_g": "g"}.get(name, name)
    table = Table(
        [("xi", "1"), (short, unit), ("F_Q", f"1/{unit}^2"), (f"delta_{short}_bound", unit), ("error", "-")],
        [[r.xi, r.epsilon, r.fisher_info, r.cr_bound, r.error or ""] for r in rows],
    )
    table.summary = {"parameter": name, "failed_points": sum(1 for r in rows if r.error)}
    return table


def _cmd_evolve(config: RunConfig) -> Table:
    sim = config.sim or SimSpec()
    params = config.params
    cutoffs = sim.cutoffs or lindblad.simulation_cutoffs(params)
    ode = lindblad.evolve_means(params, sim.t_end, sim.samples)
    full = lindblad.master_equation_means(FockDensityMatrix.vacuum(cutoffs), params, ode.times, sim.tol)
    table = Table(
        [("t", "1/Gamma"), ("a", "1"), ("b", "1"), ("ode_a", "1"), ("ode_b", "1")],
        [
            [float(t), complex(m[0]), complex(m[1]), complex(o[0]), complex(o[1])]
            for t, m, o in zip(ode.times, full.means, ode.means)
        ],
    )
    table.summary = {
        "cutoffs": list(cutoffs),
        "max_mean_discrepancy": float(np.max(np.abs(full.means - ode.means))),
    }
    return table


HANDLERS = {
    "spectrum": _cmd_spectrum,
    "steady": _cmd_steady,
    "sensitivity": _cmd_sensitivity,
    "qfi": _cmd_qfi,
    "sweep": _cmd_sweep,
    "evolve": _cmd_evolve,
}


def _sweep_svg(config: RunConfig, table: Table) -> str:
    series = {}
    for xi, eps, _, bound, _ in table.rows:
        xs, ys = series.setdefault(f"xi = {xi:g}", ([], []))
        xs.append(eps)
        ys.append(bound)
    short = table.columns[1][0]
    return loglog_svg(
        series,
        xlabel=f"{short} / Gamma",
        ylabel=f"Cramer-Rao bound on {short} / Gamma",
        title=f"Cramer-Rao bound for {short}",
    )


def render(config: RunConfig) -> tuple[str, str | None]:
    """Compute the command's table; return (document text, optional SVG text)."""
    table = HANDLERS[config.command](config)
    text = to_csv(table) if config.output.format == "csv" else to_json(table, config.command)
    svg = None
    if config.output.plot is not None:
        if config.command != "sweep":
            raise ConfigError("--plot is only available for the sweep command")
        svg = _sweep_svg(config, table)
    return text, svg


def run(config: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    text, svg = render(config)
    if config.output.path:
        Path(config.output.path).write_text(text)
    else:
        stdout.write(text)
    if svg is not None:
        Path(config.output.plot).write_text(svg)
    return EXIT_OK


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ConfigError, InsufficientGrid)):
        return EXIT_CONFIG
    if isinstance(exc, (ResponseError, ZeroInformation)):
        return EXIT_RESPONSE
    if isinstance(exc, TruncationTooSmall):
        return EXIT_TRUNCATION
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, StepFailure):
        return EXIT_STEP
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aptqfi",
        description="Sensing bounds for anti-PT-symmetric two-mode systems (rates in units of Gamma).",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config value, e.g. params.kappa=0.01 (repeatable)")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--plot", help="SVG plot path (sweep only)")
    parser.add_argument("--format", choices=FORMATS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        config = parse_config(args.config, args.overrides, command=args.command,
                              out=args.out, plot=args.plot, format=args.format)
        return run(config)
    except (AptQfiError, OSError) as exc:
        print(f"aptqfi: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
