"""Command-line front end: sweeps, figure datasets, reports, trajectories.

Subcommands::

    occupation   moving vs static occupation numbers on an (x, u) grid
    cycle        full stroke ledger for one cycle spec
    figure       datasets behind the four standard result figures
    optimize     numeric vs closed-form work maximization report
    efftemp      effective-temperature fit table for all medium/regime pairs
    relax        thermalization trajectory dump with t_relax summary

Every dataset starts with a ``#`` metadata block holding the schema
version and the canonical serialization of the resolved run
configuration, so re-running the same configuration reproduces the file
byte for byte.  Reports print ``key = value`` lines, or a JSON mirror
with ``--json``.  A ``--config`` file uses the same flat
``key = value`` format with command-line flags taking precedence.

Exit codes: 0 success or informational (including non-engine verdicts),
1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bath import U_MAX, band_average_occupation_oracle, moving_occupation, planck_occupation
from .cycle import CycleSpec, cycle_ledger, limit_work
from .dynamics import (
    ConvergenceError,
    IntegrationError,
    LindbladSpec,
    sample_relaxation,
    trajectory_rows,
)
from .media import (
    MediumKind,
    OscillatorState,
    QubitState,
    asymptotic_oscillator_state,
    asymptotic_qubit_state,
    fock_truncation_bound,
)
from .optimize import (
    NonEngineError,
    effective_temperature_fit,
    efficiency_at_max_work_limit,
    maximize_work_numeric,
    optimal_hot_frequency_limit,
    reference_bounds,
)

__all__ = ["RunConfig", "SweepResult", "main", "parse_config_text"]

_MEDIA = ("qubit", "oscillator")
_REGIMES = ("high_T", "low_T")

_DEFAULT_ETA_GRID = tuple(round(0.01 * i, 2) for i in range(1, 100))
_DEFAULT_RATIO_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
_DEFAULT_U_GRID = (0.0, 0.5, 0.9)


# ---------------------------------------------------------------------------
# run configuration: typed parameters with one canonical text form
# ---------------------------------------------------------------------------


def _comma_floats(text: str) -> tuple[float, ...]:
    items = [part.strip() for part in str(text).split(",") if part.strip()]
    if not items:
        raise ValueError(f"empty value list: {text!r}")
    return tuple(float(part) for part in items)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ",".join(repr(float(v)) for v in value)
    return str(value)


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat ``key = value`` lines; blanks and ``#`` comments skipped."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno} is not 'key = value': {raw!r}")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    return entries


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one CLI invocation."""

    command: str
    params: dict

    def canonical(self) -> str:
        """Canonical serialization: sorted ``key = value`` lines.

        Parsing the output with :func:`parse_config_text` and
        re-serializing reproduces it exactly.
        """
        entries = {"command": self.command, **self.params}
        return "".join(
            f"{key} = {_format_value(entries[key])}\n" for key in sorted(entries)
        )

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:12]


@dataclass(frozen=True)
class SweepResult:
    """Row-major dataset over the product of named axes."""

    schema: str
    axes: dict[str, tuple]
    columns: list[str]
    rows: list[list[float]]

    def __post_init__(self) -> None:
        expected = math.prod(len(v) for v in self.axes.values())
        if len(self.rows) != expected:
            raise ValueError(
                f"{len(self.rows)} rows for axes of total size {expected}"
            )
        if any(len(row) != len(self.columns) for row in self.rows):
            raise ValueError("row width does not match column count")
        if "is_engine" not in self.columns:
            for row in self.rows:
                if any(math.isnan(v) for v in row):
                    raise ValueError(
                        "NaN cell in a dataset without a non-engine flag column"
                    )


# ---------------------------------------------------------------------------
# option tables: one definition feeds argparse, config files, and hashing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Opt:
    name: str
    conv: Callable
    default: object
    help: str
    choices: tuple | None = None


def _velocity_opts(default_u: bool) -> list[_Opt]:
    opts = [
        _Opt(
            "umax",
            float,
            U_MAX,
            f"tightened velocity cap; must not exceed {U_MAX}",
        )
    ]
    if default_u:
        opts.insert(0, _Opt("u", float, 0.0, "hot-bath velocity"))
    return opts


_TABLES: dict[str, list[_Opt]] = {
    "occupation": [
        _Opt("x_min", float, 1e-3, "smallest dimensionless gap of the log grid"),
        _Opt("x_max", float, 30.0, "largest dimensionless gap of the log grid"),
        _Opt("x_points", int, 50, "number of log-grid points"),
        _Opt("x_list", _comma_floats, (), "explicit gap values (overrides the grid)"),
        _Opt("u_list", _comma_floats, _DEFAULT_U_GRID, "velocities, comma-separated"),
        _Opt("tol", float, 1e-10, "quadrature tolerance of the oracle column"),
        *_velocity_opts(default_u=False),
    ],
    "cycle": [
        _Opt("medium", str, "qubit", "working medium", _MEDIA),
        _Opt("omega_c", float, 1.0, "cold-stroke frequency"),
        _Opt("omega_h", float, 2.0, "hot-stroke frequency"),
        _Opt("beta_c", float, 2.0, "cold inverse temperature"),
        _Opt("beta_h", float, 0.5, "hot inverse temperature"),
        *_velocity_opts(default_u=True),
    ],
    "figure": [
        _Opt("beta_c", float, 1.0, "cold inverse temperature of the reconstruction"),
        _Opt("omega_c", float, 1.0, "cold frequency of the reconstruction"),
        _Opt("eta_list", _comma_floats, _DEFAULT_ETA_GRID, "efficiency grid"),
        _Opt("ratio_list", _comma_floats, _DEFAULT_RATIO_GRID, "beta_h/beta_c grid"),
        _Opt("u_list", _comma_floats, _DEFAULT_U_GRID, "velocities, comma-separated"),
        *_velocity_opts(default_u=False),
    ],
    "optimize": [
        _Opt("medium", str, "qubit", "working medium", _MEDIA),
        _Opt("regime", str, "high_T", "asymptotic regime of the closed forms", _REGIMES),
        _Opt("omega_c", float, 1.0, "cold-stroke frequency"),
        _Opt("beta_c", float, 1.0, "cold inverse temperature"),
        _Opt("beta_h", float, 0.25, "hot inverse temperature"),
        _Opt("bracket_hi", float, 0.0, "upper search bound (0 means 50*omega_c)"),
        _Opt("tol", float, 1e-10, "relative tolerance of the golden-section search"),
        *_velocity_opts(default_u=True),
    ],
    "efftemp": [
        _Opt("beta_c", float, 1.0, "cold inverse temperature"),
        _Opt("beta_h", float, 0.25, "hot inverse temperature"),
        _Opt("omega_c", float, 1.0, "cold frequency (enters the low-T forms)"),
        *_velocity_opts(default_u=True),
    ],
    "relax": [
        _Opt("medium", str, "qubit", "working medium", _MEDIA),
        _Opt("occupation", float, 0.5, "bath occupation N driving the relaxation"),
        _Opt("gamma0", float, 1.0, "decay coefficient"),
        _Opt("omega", float, 1.0, "medium frequency"),
        _Opt("tol", float, 1e-6, "target distance to the steady state"),
        _Opt("n_samples", int, 200, "trajectory sample count"),
        _Opt("start", str, "ground", "initial state", ("ground", "steady")),
        _Opt("trunc_eps", float, 1e-12, "tail budget for the oscillator ladder"),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ottobath",
        description="Quantum Otto engine with a moving hot thermal bath.",
    )
    parser.add_argument("--version", action="version", version=f"ottobath {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "occupation": cmd_occupation,
        "cycle": cmd_cycle,
        "figure": cmd_figure,
        "optimize": cmd_optimize,
        "efftemp": cmd_efftemp,
        "relax": cmd_relax,
    }
    briefs = {
        "occupation": "tabulate moving vs static occupation numbers",
        "cycle": "report the stroke ledger of one cycle",
        "figure": "emit the dataset behind one of the four result figures",
        "optimize": "maximize output work over the hot frequency",
        "efftemp": "fit a rest-bath temperature and report its mismatch",
        "relax": "dump a thermalization trajectory",
    }
    for name, table in _TABLES.items():
        sp = sub.add_parser(name, help=briefs[name])
        if name == "figure":
            sp.add_argument("which", type=int, choices=(1, 2, 3, 4),
                            help="figure number (1/2 qubit, 3/4 oscillator)")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--json", action="store_true", help="emit JSON instead")
        sp.add_argument("--config", help="flat key = value parameter file")
        for opt in table:
            flag = "--" + opt.name.replace("_", "-")
            kwargs = {
                "type": opt.conv,
                "default": argparse.SUPPRESS,
                "help": f"{opt.help} (default: {_format_value(opt.default)})",
            }
            if opt.choices:
                kwargs["choices"] = opt.choices
            sp.add_argument(flag, dest=opt.name, **kwargs)
        sp.set_defaults(handler=handlers[name], table=table)
    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config-file entries, and explicit flags, in that order."""
    table: Sequence[_Opt] = args.table
    by_name = {opt.name: opt for opt in table}
    params = {opt.name: opt.default for opt in table}
    if args.config:
        text = Path(args.config).read_text()
        for key, raw in parse_config_text(text).items():
            if key == "command":
                if raw != args.command:
                    raise ValueError(
                        f"config file is for command {raw!r}, not {args.command!r}"
                    )
                continue
            if key not in by_name:
                raise ValueError(f"unknown config key {key!r} for {args.command}")
            params[key] = by_name[key].conv(raw)
    for opt in table:
        if hasattr(args, opt.name):
            params[opt.name] = getattr(args, opt.name)
    for opt in table:
        if opt.choices and params[opt.name] not in opt.choices:
            raise ValueError(
                f"{opt.name} must be one of {opt.choices}, got {params[opt.name]!r}"
            )
    umax = params.get("umax")
    if umax is not None:
        if not 0.0 < umax <= U_MAX:
            raise ValueError(f"umax must lie in (0, {U_MAX}], got {umax}")
        for key in ("u", "u_list"):
            if key in params:
                values = params[key] if key == "u_list" else (params[key],)
                for u in values:
                    if not 0.0 <= u <= umax:
                        raise ValueError(
                            f"velocity {u} outside [0, {umax}] (see --umax)"
                        )
    if "which" in vars(args):
        params["which"] = args.which
    return RunConfig(command=args.command, params=params)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _metadata_block(schema: str, run: RunConfig) -> str:
    lines = [
        f"# schema: {schema} v1",
        f"# tool: ottobath {__version__}",
        f"# config-hash: {run.config_hash()}",
        "# config-begin",
    ]
    lines += [f"# {line}" for line in run.canonical().splitlines()]
    lines.append("# config-end")
    return "\n".join(lines) + "\n"


def _emit_dataset(result: SweepResult, run: RunConfig, args) -> None:
    if args.json:
        payload = {
            "schema": result.schema,
            "tool": f"ottobath {__version__}",
            "config_hash": run.config_hash(),
            "config": {
                k: list(v) if isinstance(v, tuple) else v
                for k, v in {"command": run.command, **run.params}.items()
            },
            "columns": result.columns,
            "rows": result.rows,
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
        return
    body = [",".join(result.columns)]
    body += [",".join(repr(float(v)) for v in row) for row in result.rows]
    _emit(_metadata_block(result.schema, run) + "\n".join(body) + "\n", args.out)


def _emit_report(entries: dict, run: RunConfig, args) -> None:
    if args.json:
        payload = {
            "schema": f"{run.command}-report",
            "config_hash": run.config_hash(),
            **entries,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
        return
    text = "".join(f"{key} = {_format_value(val)}\n" for key, val in entries.items())
    _emit(text, args.out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_occupation(args: argparse.Namespace) -> int:
    run = _resolve(args)
    p = run.params
    if p["x_list"]:
        xs = tuple(p["x_list"])
    else:
        if p["x_points"] < 1:
            raise ValueError(f"x_points must be >= 1, got {p['x_points']}")
        xs = tuple(
            float(x)
            for x in np.logspace(
                math.log10(p["x_min"]), math.log10(p["x_max"]), p["x_points"]
            )
        )
    us = tuple(p["u_list"])
    rows = []
    for x in xs:
        for u in us:
            n_move = moving_occupation(x, u)
            n_rest = planck_occupation(x)
            oracle = band_average_occupation_oracle(x, u, tol=p["tol"])
            rows.append([x, u, n_move, n_rest, oracle, abs(n_move - oracle)])
    result = SweepResult(
        schema="occupation",
        axes={"x": xs, "u": us},
        columns=["x", "u", "N", "planck", "band_oracle", "abs_diff"],
        rows=rows,
    )
    _emit_dataset(result, run, args)
    return 0


def cmd_cycle(args: argparse.Namespace) -> int:
    run = _resolve(args)
    p = run.params
    spec = CycleSpec(
        omega_c=p["omega_c"],
        omega_h=p["omega_h"],
        beta_c=p["beta_c"],
        beta_h=p["beta_h"],
        u=p["u"],
        medium=p["medium"],
    )
    led = cycle_ledger(spec)
    entries = {
        "medium": spec.medium.value,
        "omega_c": spec.omega_c,
        "omega_h": spec.omega_h,
        "beta_c": spec.beta_c,
        "beta_h": spec.beta_h,
        "u": spec.u,
        "E_A": led.e_a,
        "E_B": led.e_b,
        "E_C": led.e_c,
        "E_D": led.e_d,
        "W_AB": led.w_ab,
        "Q_H": led.q_h,
        "W_CD": led.w_cd,
        "Q_C": led.q_c,
        "W_out": led.w_out,
        "first_law_residual": abs(led.w_ab + led.q_h + led.w_cd + led.q_c),
        "eta": led.eta,
        "is_engine": led.is_engine,
    }
    _emit_report(entries, run, args)
    return 0


def cmd_figure(args: argparse.Namespace) -> int:
    run = _resolve(args)
    p = run.params
    which = p["which"]
    medium = MediumKind.QUBIT if which in (1, 2) else MediumKind.OSCILLATOR
    beta_c, omega_c = p["beta_c"], p["omega_c"]
    us = tuple(p["u_list"])
    ratios = tuple(p["ratio_list"])
    rows = []
    # The figure surfaces are the closed forms evaluated across their
    # whole printed range, including corners outside the regime or the
    # engine region, so validity warnings are informative noise here.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if which in (1, 3):
            etas = tuple(p["eta_list"])
            for eta in etas:
                if not 0.0 < eta < 1.0:
                    raise ValueError(f"eta grid values must lie in (0, 1), got {eta}")
                for ratio in ratios:
                    for u in us:
                        spec = CycleSpec(
                            omega_c=omega_c,
                            omega_h=omega_c / (1.0 - eta),
                            beta_c=beta_c,
                            beta_h=ratio * beta_c,
                            u=u,
                            medium=medium,
                        )
                        rows.append(
                            [eta, ratio, u, limit_work(spec, "high_T").w_out]
                        )
            axes = {"eta": etas, "beta_ratio": ratios, "u": us}
            columns = ["eta", "beta_ratio", "u", "w_out"]
        else:
            for ratio in ratios:
                for u in us:
                    eta_mw = efficiency_at_max_work_limit(
                        medium, "high_T", beta_c, ratio * beta_c, u
                    )
                    eta_carnot, eta_ca = reference_bounds(beta_c, ratio * beta_c)
                    rows.append([ratio, u, eta_mw, eta_carnot, eta_ca])
            axes = {"beta_ratio": ratios, "u": us}
            columns = ["beta_ratio", "u", "eta_mw", "eta_carnot", "eta_ca"]
    result = SweepResult(
        schema=f"figure{which}", axes=axes, columns=columns, rows=rows
    )
    _emit_dataset(result, run, args)
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    run = _resolve(args)
    p = run.params
    omega_c = p["omega_c"]
    hi = p["bracket_hi"] if p["bracket_hi"] > 0.0 else 50.0 * omega_c
    bracket = (omega_c * (1.0 + 1e-6), hi)
    entries = {
        "medium": p["medium"],
        "regime": p["regime"],
        "omega_c": omega_c,
        "beta_c": p["beta_c"],
        "beta_h": p["beta_h"],
        "u": p["u"],
    }
    eta_carnot, eta_ca = reference_bounds(p["beta_c"], p["beta_h"])
    try:
        res = maximize_work_numeric(
            omega_c, p["beta_c"], p["beta_h"], p["u"], p["medium"],
            bracket, rtol=p["tol"],
        )
    except NonEngineError as exc:
        entries.update(
            {
                "is_engine": False,
                "reason": str(exc),
                "eta_carnot": eta_carnot,
                "eta_ca": eta_ca,
            }
        )
        _emit_report(entries, run, args)
        return 0
    omega_limit = optimal_hot_frequency_limit(
        p["medium"], p["regime"], omega_c, p["beta_c"], p["beta_h"], p["u"]
    )
    eta_mw = efficiency_at_max_work_limit(
        p["medium"], p["regime"], p["beta_c"], p["beta_h"], p["u"], omega_c
    )
    entries.update(
        {
            "is_engine": True,
            "omega_h_numeric": res.omega_h_star,
            "w_out_numeric": res.w_star,
            "eta_numeric": res.eta_star,
            "iterations": res.iterations,
            "at_boundary": res.at_boundary,
            "omega_h_limit": omega_limit,
            "relative_gap": abs(res.omega_h_star - omega_limit) / omega_limit,
            "eta_mw_limit": eta_mw,
            "eta_carnot": eta_carnot,
            "eta_ca": eta_ca,
        }
    )
    _emit_report(entries, run, args)
    return 0


def cmd_efftemp(args: argparse.Namespace) -> int:
    run = _resolve(args)
    p = run.params
    reports = [
        effective_temperature_fit(
            medium, regime, p["beta_c"], p["beta_h"], p["u"], p["omega_c"]
        )
        for medium in MediumKind
        for regime in _REGIMES
    ]
    worst = max(r.spectral_mismatch for r in reports)
    all_consistent = all(r.consistent for r in reports)
    if args.json:
        payload = {
            "schema": "efftemp-report",
            "config_hash": run.config_hash(),
            "rows": [
                {
                    "medium": r.medium.value,
                    "regime": r.regime,
                    "beta_eff": r.beta_eff,
                    "spectral_mismatch": r.spectral_mismatch,
                    "consistent": r.consistent,
                    "fit_converged": r.fit_converged,
                }
                for r in reports
            ],
            "max_mismatch": worst,
            "consistent": all_consistent,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
        return 0
    lines = [f"{'medium':<12}{'regime':<8}{'beta_eff':<14}{'mismatch':<12}consistent"]
    for r in reports:
        beta_txt = f"{r.beta_eff:.6g}" if r.fit_converged else "no-root"
        lines.append(
            f"{r.medium.value:<12}{r.regime:<8}{beta_txt:<14}"
            f"{r.spectral_mismatch:<12.3e}{'true' if r.consistent else 'false'}"
        )
    if all_consistent:
        verdict = (
            f"verdict: max mismatch {worst:.3e} below threshold 1e-10, "
            "a rest bath reproduces the occupation spectrum"
        )
    else:
        verdict = (
            f"verdict: max mismatch {worst:.3e} exceeds threshold 1e-10, "
            "no rest-bath temperature reproduces the moving occupation"
        )
    lines.append(verdict)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_relax(args: argparse.Namespace) -> int:
    run = _resolve(args)
    p = run.params
    spec = LindbladSpec(N=p["occupation"], omega=p["omega"], gamma0=p["gamma0"])
    if p["medium"] == "qubit":
        if p["start"] == "steady":
            state: QubitState | OscillatorState = asymptotic_qubit_state(spec.N)
        else:
            state = QubitState(p_excited=0.0)
    else:
        n_max = fock_truncation_bound(spec.N, p["trunc_eps"])
        if p["start"] == "steady":
            state = asymptotic_oscillator_state(spec.N, n_max, eps_trunc=p["trunc_eps"])
        else:
            vacuum = np.zeros(n_max + 1)
            vacuum[0] = 1.0
            state = OscillatorState(vacuum)
    record = sample_relaxation(state, spec, tol=p["tol"], n_samples=p["n_samples"])
    header, rows = trajectory_rows(record)
    result = SweepResult(
        schema="relax",
        axes={"time": tuple(float(t) for t in record.times)},
        columns=header,
        rows=rows,
    )
    _emit_dataset(result, run, args)
    sys.stdout.write(
        f"t_relax = {_format_value(record.t_relax) if record.converged else 'nan'}\n"
        f"converged = {_format_value(record.converged)}\n"
    )
    if not record.converged:
        print(
            f"numerical failure: distance to the steady state did not reach "
            f"tol={p['tol']} within t = 1e4/gamma0 = {1e4 / spec.gamma0}",
            file=sys.stderr,
        )
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (IntegrationError, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
