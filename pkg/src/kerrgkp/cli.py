"""Command-line front end: codeword densities, sweeps, figure presets, validation.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical failure (non-convergence or degenerate computation).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import click
import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - py310 path
    import tomli as tomllib

from . import __version__
from . import codewords as cwmod
from . import error_analysis as ea
from .codewords import DegenerateStateError, EncodingParams, Label, build_codeword, density_p, density_q
from .datasets import Dataset, make_dataset, render, write_dataset
from .numerics import QuadratureError, QuadratureSpec, TruncationError, TruncationPolicy
from .validation import run_validation

EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

PRESETS = {
    "fig3a": {"command": "sweep-x", "alpha": 1.5, "x_range": "-3:3", "x_step": 0.01},
    "fig4": {"command": "codeword", "alpha": 2.0, "tau": 2.0, "x": 0.0},
    "fig5": {"command": "sweep-z", "alpha": "1,1.5,2,3,4,5"},
}


class ConfigError(click.ClickException):
    exit_code = EXIT_CONFIG


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one invocation (flags > preset > config file)."""

    values: dict

    def __getitem__(self, key):
        return self.values[key]


def _load_config_defaults(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    defaults = doc.get("defaults", {})
    if not isinstance(defaults, dict):
        raise ConfigError("config [defaults] must be a table")
    return defaults


def _resolve(ctx: click.Context, preset: str | None, command: str) -> RunConfig:
    """Merge parameter sources: explicit flags beat preset values beat
    config-file [defaults], which beat built-in defaults."""
    file_defaults = _load_config_defaults(ctx.params.get("config"))
    preset_values: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        preset_values = dict(PRESETS[preset])
        if preset_values.pop("command") != command:
            raise ConfigError(f"preset {preset!r} does not apply to '{command}'")
    resolved = {}
    for name, value in ctx.params.items():
        src = ctx.get_parameter_source(name)
        if src is not None and src.name == "COMMANDLINE":
            resolved[name] = value
        elif name in preset_values:
            resolved[name] = preset_values[name]
        elif name in file_defaults:
            resolved[name] = file_defaults[name]
        else:
            resolved[name] = value
    return RunConfig(values=resolved)


def _parse_range(text: str, what: str) -> tuple[float, float]:
    try:
        lo_s, hi_s = text.split(":")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        raise ConfigError(f"{what} must look like 'lo:hi', got {text!r}")
    if not lo < hi:
        raise ConfigError(f"{what} needs lo < hi, got {text!r}")
    return lo, hi


def _parse_float_list(text: str, what: str) -> list[float]:
    items = [s for s in str(text).split(",") if s.strip()]
    if not items:
        raise ConfigError(f"{what} is empty")
    try:
        return [float(s) for s in items]
    except ValueError:
        raise ConfigError(f"{what} must be comma-separated numbers, got {text!r}")


def _default_z_grid() -> list[float]:
    # log grid 1..100 with 60 points, plus z = 0 (accept everything)
    zs = list(np.logspace(0.0, 2.0, 60))
    return [0.0] + zs


def _provenance(command: str, cfg_pairs: dict, policy: TruncationPolicy,
                spec: QuadratureSpec, n_max: int | None, timestamp: bool) -> dict:
    prov = {
        "tool": "kerrgkp",
        "version": __version__,
        "command": command,
        "tail_weight_bound": repr(policy.tail_weight_bound),
        "hard_max_n": str(policy.hard_max_n),
        "absolute_tolerance": repr(spec.absolute_tolerance),
        "relative_tolerance": repr(spec.relative_tolerance),
    }
    if n_max is not None:
        prov["n_max"] = str(n_max)
    for key, val in cfg_pairs.items():
        prov[key] = str(val)
    if timestamp:
        prov["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return prov


def _emit(ds: Dataset, out: str | None, fmt: str) -> None:
    if out is None or out == "-":
        click.echo(render(ds, fmt), nl=False)
    else:
        write_dataset(ds, out, fmt)


def _run(fn):
    """Execute a command body, mapping exception classes to exit codes."""
    try:
        fn()
    except click.ClickException:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc))
    except (QuadratureError, TruncationError, ea.ThresholdNotReachedError, DegenerateStateError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)


@click.group()
@click.version_option(version=__version__, prog_name="kerrgkp")
def main():
    """Comb-codeword toolkit: conditional state preparation numerics."""


_common = [
    click.option("--out", type=str, default=None, help="Output path ('-' = stdout)."),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                 show_default=True, help="Output format."),
    click.option("--config", type=str, default=None,
                 help="TOML file whose [defaults] table seeds parameter values."),
    click.option("--no-timestamp", is_flag=True, default=False,
                 help="Omit the timestamp from provenance (byte-stable output)."),
    click.option("--threads", type=int, default=1, show_default=True,
                 help="Worker threads for sweep evaluation."),
]


def common_options(fn):
    for deco in reversed(_common):
        fn = deco(fn)
    return fn


@main.command()
@click.option("--alpha", type=float, default=2.0, show_default=True)
@click.option("--tau", type=float, default=2.0, show_default=True)
@click.option("--x", type=float, default=0.0, show_default=True)
@click.option("--axis", type=click.Choice(["q", "p"]), default="q", show_default=True)
@click.option("--x-range", type=str, default=None,
              help="Coordinate range 'lo:hi' (default -3:3 for q, -30:30 for p).")
@click.option("--x-step", type=float, default=None,
              help="Coordinate step (default: 1201 grid points over the range).")
@click.option("--preset", type=str, default=None, help="Figure preset (fig4).")
@common_options
@click.pass_context
def codeword(ctx, **_kwargs):
    """Probability densities of all four codewords on a q or p grid."""

    def body():
        cfg = _resolve(ctx, ctx.params.get("preset"), "codeword")
        alpha, tau, x = float(cfg["alpha"]), float(cfg["tau"]), float(cfg["x"])
        axis = cfg["axis"]
        policy = TruncationPolicy()
        spec = QuadratureSpec()
        params = EncodingParams(alpha, tau, x)
        states: dict[Label, object | None] = {}
        for label in (Label.ZERO, Label.ONE, Label.PLUS, Label.MINUS):
            try:
                states[label] = build_codeword(label, params, policy)
            except DegenerateStateError:
                states[label] = None  # reported as an absent column
        rng = cfg["x_range"]
        lo, hi = _parse_range(rng, "--x-range") if rng else ((-3.0, 3.0) if axis == "q" else (-30.0, 30.0))
        step = cfg["x_step"]
        if step is not None:
            step = float(step)
            if step <= 0:
                raise ConfigError("--x-step must be > 0")
            grid = np.arange(lo, hi + step / 2, step)
        else:
            grid = np.linspace(lo, hi, 1201)
        dens = density_q if axis == "q" else density_p
        rows = []
        for c in grid:
            row = [float(c)]
            for label in (Label.ZERO, Label.ONE, Label.PLUS, Label.MINUS):
                st = states[label]
                row.append(None if st is None else dens(st, float(c)))
            rows.append(row)
        n_max = next(st for st in states.values() if st is not None).coefficients.n_max
        prov = _provenance(
            "codeword",
            {"alpha": alpha, "tau": tau, "x": x, "axis": axis, "range": f"{lo}:{hi}",
             "points": len(grid)},
            policy, spec, n_max, not cfg["no_timestamp"],
        )
        ds = make_dataset(
            "codeword-density/v1",
            ["coordinate", "density_zero", "density_one", "density_plus", "density_minus"],
            rows, prov,
        )
        _emit(ds, cfg["out"], cfg["fmt"])

    _run(body)


@main.command(name="sweep-x")
@click.option("--alpha", type=float, default=1.5, show_default=True)
@click.option("--x-range", type=str, default="-3:3", show_default=True)
@click.option("--x-step", type=float, default=0.01, show_default=True)
@click.option("--preset", type=str, default=None, help="Figure preset (fig3a).")
@common_options
@click.pass_context
def sweep_x(ctx, **_kwargs):
    """Separated-peak error probabilities versus the homodyne result x."""

    def body():
        cfg = _resolve(ctx, ctx.params.get("preset"), "sweep-x")
        alpha = float(cfg["alpha"])
        lo, hi = _parse_range(str(cfg["x_range"]), "--x-range")
        step = float(cfg["x_step"])
        if step <= 0:
            raise ConfigError("--x-step must be > 0")
        policy = TruncationPolicy()
        xs = np.arange(lo, hi + step / 2, step)
        table = ea.sweep_x(alpha, xs, policy, threads=int(cfg["threads"]))
        rows = [
            [x, r.pi_q, r.pi_minus, r.pi_plus, r.pi_max, r.homodyne_density]
            for x, r in zip(table.axis_values, table.rows)
        ]
        n_max = cwmod.coefficients(alpha, 0.0, policy).n_max
        prov = _provenance(
            "sweep-x",
            {"alpha": alpha, "range": f"{lo}:{hi}", "step": step},
            policy, QuadratureSpec(), n_max, not cfg["no_timestamp"],
        )
        ds = make_dataset(
            "sweep-x/v1",
            ["x", "pi_q_inf", "pi_minus_inf", "pi_plus_inf", "pi_max_inf", "homodyne_density"],
            rows, prov,
        )
        _emit(ds, cfg["out"], cfg["fmt"])

    _run(body)


@main.command(name="sweep-z")
@click.option("--alpha", type=str, default="2", show_default=True,
              help="One amplitude or a comma list, e.g. '1,1.5,2'.")
@click.option("--z", type=float, default=None, help="Single window factor (overrides --z-grid).")
@click.option("--z-grid", type=str, default=None,
              help="Comma list of z values (default: 0 plus a 60-point log grid on [1, 100]).")
@click.option("--preset", type=str, default=None, help="Figure preset (fig5).")
@common_options
@click.pass_context
def sweep_z(ctx, **_kwargs):
    """Success probability and mean intrinsic error versus the window factor z."""

    def body():
        cfg = _resolve(ctx, ctx.params.get("preset"), "sweep-z")
        alphas = _parse_float_list(cfg["alpha"], "--alpha")
        if cfg["z"] is not None:
            zs = [float(cfg["z"])]
        elif cfg["z_grid"] is not None:
            zs = sorted(_parse_float_list(cfg["z_grid"], "--z-grid"))
        else:
            zs = _default_z_grid()
        if any(z < 0 for z in zs):
            raise ConfigError("z values must be >= 0")
        policy = TruncationPolicy()
        spec = QuadratureSpec()
        rows = []
        for a in alphas:
            if a <= 0:
                raise ConfigError("alpha must be > 0 for sweeps")
            table = ea.sweep_z(a, zs, spec, policy, threads=int(cfg["threads"]))
            for z, (p, m) in zip(table.axis_values, table.rows):
                rows.append([z, a, p, m])
        n_max = cwmod.coefficients(max(alphas), 0.0, policy).n_max
        prov = _provenance(
            "sweep-z",
            {"alpha": cfg["alpha"], "z_count": len(zs)},
            policy, spec, n_max, not cfg["no_timestamp"],
        )
        ds = make_dataset("sweep-z/v1", ["z", "alpha", "success_P", "mean_Pi"], rows, prov)
        _emit(ds, cfg["out"], cfg["fmt"])

    _run(body)


@main.command(name="sweep-tau")
@click.option("--alpha", type=float, default=1.5, show_default=True)
@click.option("--x", type=float, default=0.0, show_default=True)
@click.option("--tau-grid", type=str, default="0.1:10:0.1", show_default=True,
              help="Grid 'start:stop:step' of interaction times.")
@common_options
@click.pass_context
def sweep_tau(ctx, **_kwargs):
    """Finite-time error probabilities versus the scaled interaction time."""

    def body():
        cfg = _resolve(ctx, None, "sweep-tau")
        alpha, x = float(cfg["alpha"]), float(cfg["x"])
        try:
            start_s, stop_s, step_s = str(cfg["tau_grid"]).split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
        except ValueError:
            raise ConfigError(f"--tau-grid must look like 'start:stop:step', got {cfg['tau_grid']!r}")
        if not (0 < start <= stop and step > 0):
            raise ConfigError("--tau-grid needs 0 < start <= stop and step > 0")
        taus = [round(start + i * step, 12) for i in range(int(math.floor((stop - start) / step + 0.5)) + 1)]
        policy = TruncationPolicy()
        spec = QuadratureSpec()
        table = ea.sweep_tau(alpha, taus, x, spec, policy, threads=int(cfg["threads"]))
        ref = ea.pi_max_asymptotic(alpha, x, policy).pi_max
        rows = [
            [t, r.pi_q, r.pi_minus, r.pi_plus, r.pi_max, ref]
            for t, r in zip(table.axis_values, table.rows)
        ]
        n_max = cwmod.coefficients(alpha, x, policy).n_max
        prov = _provenance(
            "sweep-tau",
            {"alpha": alpha, "x": x, "tau_grid": cfg["tau_grid"]},
            policy, spec, n_max, not cfg["no_timestamp"],
        )
        ds = make_dataset(
            "sweep-tau/v1",
            ["tau", "pi_q", "pi_minus", "pi_plus", "pi_max", "pi_max_asymptotic"],
            rows, prov,
        )
        _emit(ds, cfg["out"], cfg["fmt"])

    _run(body)


@main.command()
@click.option("--alphas", type=str, default="0.5,1,2", show_default=True)
@click.option("--taus", type=str, default="1,2,5", show_default=True)
@click.option("--xs", type=str, default="0,0.5,1", show_default=True)
@click.option("--tolerance", type=float, default=1e-6, show_default=True,
              help="Fourier-consistency tolerance override.")
@click.option("--out", type=str, default=None, help="Also write the report to this path.")
@click.option("--config", type=str, default=None)
@click.pass_context
def validate(ctx, **_kwargs):
    """Run the invariant suite; exit 0 iff every check passes."""

    def body():
        cfg = _resolve(ctx, None, "validate")
        alphas = _parse_float_list(cfg["alphas"], "--alphas")
        taus = _parse_float_list(cfg["taus"], "--taus")
        xs = _parse_float_list(cfg["xs"], "--xs")
        tol = float(cfg["tolerance"])
        if tol <= 0:
            raise ConfigError("--tolerance must be > 0")
        results = run_validation(alphas, taus, xs, fourier_tolerance=tol)
        lines = [r.line() for r in results]
        report = "\n".join(lines) + "\n"
        click.echo(report, nl=False)
        if cfg["out"]:
            with open(cfg["out"], "w", encoding="utf-8") as fh:
                fh.write(report)
        if not all(r.passed for r in results):
            sys.exit(EXIT_VALIDATION)

    _run(body)


if __name__ == "__main__":  # pragma: no cover
    main()
