"""Command-line front end for the feasibility estimator.

Each subcommand wraps one library operation and writes a single report
(``key = value`` lines) or CSV table to standard output or ``--out``.
Every output starts with ``#`` comment lines naming the tool version, the
subcommand, the constants mode and all resolved parameters, so a result
file can be reproduced from its own header.  Identical argument vectors
give byte-identical output: floats are printed in shortest round-trip
form, nothing is timestamped, and random streams are seeded explicitly.

Exit status: 0 on success, 1 on usage errors (bad flags or values), 2 on
domain errors (unknown species, solver failure, infeasible inputs).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__
from .bounds import (
    MODES,
    TAU_E_HEATING,
    TAU_E_LASER_PHASE,
    experimental_pulse_budget,
    fig1_curves,
    fig2_curves,
    intrinsic_pulse_budget,
    max_factorable_bits,
    shor_resources,
    total_time,
)
from .chain import (
    ChainSolverError,
    MAX_IONS,
    equilibrium_positions,
    fit_min_spacing,
    length_scale,
    solve_chain_range,
)
from .constants import PRINTED, Prefactors
from .decoherence import simulate_trajectories
from .pulse import derived_prefactors, pulse_timing, u_pulse_duration
from .species import (
    SpeciesRegistry,
    TrapConfig,
    _nm_string,
    builtin_registry,
    load_registry,
)

__all__ = ["RunManifest", "build_parser", "run", "main"]


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility header carried by every output.

    ``params`` holds the resolved parameters as already-formatted
    ``(key, value)`` pairs in sorted key order.
    """

    command: str
    constants: str
    params: tuple[tuple[str, str], ...]
    version: str = field(default=__version__)

    def lines(self) -> list[str]:
        head = [
            f"# ionbound {self.version}",
            f"# command: {self.command}",
            f"# constants: {self.constants}",
        ]
        head.extend(f"# {key} = {value}" for key, value in self.params)
        return head


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _manifest(args: argparse.Namespace, **params) -> RunManifest:
    items = sorted((k, _fmt(v)) for k, v in params.items() if v is not None)
    return RunManifest(
        command=args.command,
        constants=getattr(args, "constants", "printed"),
        params=tuple(items),
    )


def _report(manifest: RunManifest, items: list[tuple[str, object]]) -> str:
    lines = manifest.lines()
    lines.extend(f"{key} = {_fmt(value)}" for key, value in items)
    return "\n".join(lines) + "\n"


def _table(
    manifest: RunManifest,
    columns: Sequence[str],
    rows: Sequence[Sequence],
    result_comments: list[tuple[str, object]] | None = None,
) -> str:
    buf = io.StringIO()
    for line in manifest.lines():
        buf.write(line + "\n")
    for key, value in result_comments or []:
        buf.write(f"# {key} = {_fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(value) for value in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


# ---------------------------------------------------------------- argument
# types; ArgumentTypeError messages get prefixed with the flag name, which
# the usage-error contract relies on


def _number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None


def _positive_float(text: str) -> float:
    value = _number(text)
    if not (math.isfinite(value) and value > 0.0):
        raise argparse.ArgumentTypeError("must be positive and finite")
    return value


def _nonneg_float(text: str) -> float:
    value = _number(text)
    if not (math.isfinite(value) and value >= 0.0):
        raise argparse.ArgumentTypeError("must be non-negative and finite")
    return value


def _any_float(text: str) -> float:
    value = _number(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("must be finite")
    return value


def _integer(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None


def _int_at_least(minimum: int):
    def parse(text: str) -> int:
        value = _integer(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}")
        return value

    return parse


def _nonneg_int(text: str) -> int:
    value = _integer(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _name_list(text: str) -> list[str]:
    names = [part.strip() for part in text.split(",")]
    if not all(names):
        raise argparse.ArgumentTypeError("empty name in list")
    return names


def _ion_list(text: str) -> list[int]:
    values = []
    for part in text.split(","):
        value = _integer(part.strip())
        if value < 2:
            raise argparse.ArgumentTypeError("every ion count must be at least 2")
        values.append(value)
    return values


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; domain problems are handled in run() with 2
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _registry(args: argparse.Namespace) -> SpeciesRegistry:
    registry = builtin_registry()
    path = getattr(args, "species_file", None)
    if path is not None:
        with open(path, "r", encoding="utf-8") as handle:
            registry = load_registry(handle.read(), base=registry)
    return registry


def _trap(args: argparse.Namespace) -> TrapConfig:
    return TrapConfig(
        f_number=args.f_number, safety=args.safety, theta=args.theta_rad
    )


def _prefactors(args: argparse.Namespace) -> Prefactors:
    return PRINTED if args.constants == "printed" else derived_prefactors()


def _tau_e(args: argparse.Namespace) -> float | None:
    if getattr(args, "tau_e_s", None) is not None:
        return args.tau_e_s
    preset = getattr(args, "tau_e_preset", None)
    if preset == "heating":
        return TAU_E_HEATING
    if preset == "laser-phase":
        return TAU_E_LASER_PHASE
    return None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ionbound",
        description="Feasibility estimates for cold-trapped-ion quantum computation.",
    )
    parser.add_argument("--version", action="version", version=f"ionbound {__version__}")

    out = _Parser(add_help=False)
    out.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    registry = _Parser(add_help=False)
    registry.add_argument(
        "--species-file", metavar="PATH", help="species definition file merged over the built-ins"
    )

    constants = _Parser(add_help=False)
    constants.add_argument(
        "--constants",
        choices=("printed", "derived"),
        default="printed",
        help="budget prefactors: rounded published values or first-principles re-derivations",
    )

    trap = _Parser(add_help=False)
    trap.add_argument("--f-number", type=_positive_float, default=1.0, help="addressing optics f-number")
    trap.add_argument("--safety", type=_positive_float, default=1.0, help="pulse-duration safety factor y")
    trap.add_argument("--theta-rad", type=_any_float, default=0.0, help="laser angle to the trap axis")

    tau = _Parser(add_help=False)
    tau_group = tau.add_mutually_exclusive_group()
    tau_group.add_argument("--tau-e-s", type=_positive_float, help="experimental coherence time in seconds")
    tau_group.add_argument(
        "--tau-e-preset",
        choices=("heating", "laser-phase"),
        help=f"named coherence time: heating {TAU_E_HEATING} s, laser-phase {TAU_E_LASER_PHASE} s",
    )

    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", required=True)

    p_species = sub.add_parser("species", help="list or show ion species", parents=[])
    species_sub = p_species.add_subparsers(dest="action", metavar="ACTION", required=True)
    p_list = species_sub.add_parser("list", parents=[out, registry], help="all species as CSV")
    p_list.set_defaults(handler=_cmd_species_list, command="species list")
    p_show = species_sub.add_parser("show", parents=[out, registry], help="one species as a report")
    p_show.add_argument("--species", required=True, help="species name, e.g. 'Ca II'")
    p_show.set_defaults(handler=_cmd_species_show, command="species show")

    p_chain = sub.add_parser(
        "chain", parents=[out, registry], help="equilibrium positions or the spacing power-law fit"
    )
    what = p_chain.add_mutually_exclusive_group(required=True)
    what.add_argument("--ions", type=_int_at_least(2), help=f"chain length, 2..{MAX_IONS}")
    what.add_argument(
        "--fit",
        nargs=2,
        type=_int_at_least(2),
        metavar=("MIN", "MAX"),
        help="fit minimum spacing over this chain-length range",
    )
    p_chain.add_argument("--species", help="species for meter-valued output (with --nu-x-hz)")
    p_chain.add_argument("--nu-x-hz", type=_positive_float, help="axial frequency in hertz")
    p_chain.set_defaults(handler=_cmd_chain)

    p_pulse = sub.add_parser(
        "pulse", parents=[out, registry, constants, trap], help="sideband pulse timing for one chain"
    )
    p_pulse.add_argument("--species", required=True)
    p_pulse.add_argument("--ions", type=_int_at_least(2), required=True)
    p_pulse.set_defaults(handler=_cmd_pulse)

    p_bound = sub.add_parser(
        "bound", parents=[out, registry, constants, trap, tau], help="pulse budgets against chain length"
    )
    p_bound.add_argument("--species", required=True)
    p_bound.add_argument(
        "--ions", type=_ion_list, required=True, metavar="N[,N...]", help="comma-separated chain lengths"
    )
    p_bound.set_defaults(handler=_cmd_bound)

    p_limit = sub.add_parser(
        "factor-limit",
        parents=[out, registry, constants, trap, tau],
        help="largest factorable bit count for one species",
    )
    p_limit.add_argument("--species", required=True)
    p_limit.add_argument("--mode", choices=MODES, default="intrinsic")
    p_limit.set_defaults(handler=_cmd_factor_limit)

    p_total = sub.add_parser(
        "total-time", parents=[out, registry, constants, trap], help="wall-clock time to factor"
    )
    p_total.add_argument("--species", required=True)
    p_total.add_argument("--bits", type=_int_at_least(1), required=True)
    p_total.set_defaults(handler=_cmd_total_time)

    p_fig1 = sub.add_parser(
        "fig1",
        parents=[out, registry, constants, trap],
        help="budget curves and the factorization locus as CSV",
    )
    p_fig1.add_argument("--species", type=_name_list, required=True, metavar="NAME[,NAME...]")
    p_fig1.add_argument("--l-max", type=_nonneg_int, default=15, help="factorization points l = 1..L_MAX")
    p_fig1.add_argument("--ions-min", type=_int_at_least(2), default=2)
    p_fig1.add_argument("--ions-max", type=_int_at_least(2), default=2500)
    p_fig1.add_argument("--ions-points", type=_nonneg_int, default=60, help="size of the geometric ion grid")
    p_fig1.set_defaults(handler=_cmd_fig1)

    p_fig2 = sub.add_parser(
        "fig2",
        parents=[out, registry, constants, trap],
        help="largest bit count against coherence time as CSV",
    )
    p_fig2.add_argument("--species", type=_name_list, required=True, metavar="NAME[,NAME...]")
    p_fig2.add_argument("--tau-e-min", type=_positive_float, default=1e-6)
    p_fig2.add_argument("--tau-e-max", type=_positive_float, default=1e6)
    p_fig2.add_argument("--tau-e-points", type=_int_at_least(1), default=100)
    p_fig2.set_defaults(handler=_cmd_fig2)

    p_decay = sub.add_parser(
        "simulate-decay", parents=[out], help="Monte Carlo check of the decay survival model"
    )
    p_decay.add_argument("--ions", type=_int_at_least(1), required=True)
    p_decay.add_argument(
        "--T-over-tau0", dest="t_over_tau0", type=_nonneg_float, required=True,
        help="wait time in units of the upper-level lifetime",
    )
    p_decay.add_argument("--tau0-s", type=_positive_float, default=1.0)
    p_decay.add_argument("--trajectories", type=_int_at_least(1), default=100_000)
    p_decay.add_argument("--seed", type=_nonneg_int, default=0)
    p_decay.set_defaults(handler=_cmd_simulate_decay)

    return parser


# ---------------------------------------------------------------- handlers
# each returns (output text, exit status)


def _cmd_species_list(args) -> tuple[str, int]:
    registry = _registry(args)
    manifest = _manifest(args, species_file=args.species_file)
    rows = [
        (sp.name, sp.Z, sp.A, _nm_string(sp.wavelength_m), sp.tau0_s, sp.note)
        for sp in registry
    ]
    return _table(manifest, ("name", "Z", "A", "lambda_nm", "tau0_s", "note"), rows), 0


def _cmd_species_show(args) -> tuple[str, int]:
    species = _registry(args).lookup(args.species)
    manifest = _manifest(args, species=args.species, species_file=args.species_file)
    items = [
        ("name", species.name),
        ("Z", species.Z),
        ("A", species.A),
        ("lambda_nm", _nm_string(species.wavelength_m)),
        ("wavelength_m", species.wavelength_m),
        ("tau0_s", species.tau0_s),
        ("note", species.note),
    ]
    return _report(manifest, items), 0


def _cmd_chain(args) -> tuple[str, int]:
    if args.fit is not None:
        n_min, n_max = args.fit
        manifest = _manifest(args, fit_min=n_min, fit_max=n_max)
        fit = fit_min_spacing(n_min, n_max, solutions=solve_chain_range(n_min, n_max))
        items = [
            ("n_min", fit.n_min),
            ("n_max", fit.n_max),
            ("coefficient", fit.coefficient),
            ("exponent", fit.exponent),
            ("rms_log_error", fit.rms_log_error),
        ]
        return _report(manifest, items), 0

    if (args.species is None) != (args.nu_x_hz is None):
        raise ValueError("--species and --nu-x-hz must be given together")
    solution = equilibrium_positions(args.ions)
    scale = None
    if args.species is not None:
        species = _registry(args).lookup(args.species)
        scale = length_scale(species, 2.0 * math.pi * args.nu_x_hz)
    manifest = _manifest(
        args,
        ions=args.ions,
        species=args.species,
        nu_x_hz=args.nu_x_hz,
        species_file=args.species_file,
    )
    comments: list[tuple[str, object]] = [
        ("residual", solution.residual),
        ("iterations", solution.iterations),
        ("min_spacing", float(solution.min_spacing)),
    ]
    if scale is not None:
        comments.append(("length_scale_m", scale))
        comments.append(("min_spacing_m", float(solution.min_spacing) * scale))
    columns = ("index", "position") if scale is None else ("index", "position", "position_m")
    rows = []
    for index, position in enumerate(solution.positions):
        row = [index, float(position)]
        if scale is not None:
            row.append(float(position) * scale)
        rows.append(tuple(row))
    return _table(manifest, columns, rows, result_comments=comments), 0


def _cmd_pulse(args) -> tuple[str, int]:
    species = _registry(args).lookup(args.species)
    cfg = _trap(args)
    timing = pulse_timing(species, args.ions, cfg)
    closed = u_pulse_duration(species, args.ions, cfg, _prefactors(args))
    manifest = _manifest(
        args,
        species=args.species,
        ions=args.ions,
        f_number=cfg.f_number,
        safety=cfg.safety,
        theta_rad=cfg.theta,
        species_file=args.species_file,
    )
    if timing.out_of_regime:
        print(
            f"warning: validity ratio {timing.validity_ratio:.3g} exceeds 0.1;"
            " the perturbative sideband model is out of its regime",
            file=sys.stderr,
        )
    items = [
        ("species", species.name),
        ("n_ions", timing.n_ions),
        ("nu_x_rad_s", timing.nu_x),
        ("nu_x_hz", timing.nu_x / (2.0 * math.pi)),
        ("t_u_s", timing.t_u),
        ("t_u_closed_s", closed),
        ("lamb_dicke", timing.eta),
        ("rabi_rad_s", timing.rabi_freq),
        ("validity_ratio", timing.validity_ratio),
        ("out_of_regime", timing.out_of_regime),
    ]
    return _report(manifest, items), 0


def _cmd_bound(args) -> tuple[str, int]:
    species = _registry(args).lookup(args.species)
    cfg = _trap(args)
    prefactors = _prefactors(args)
    tau_e = _tau_e(args)
    manifest = _manifest(
        args,
        species=args.species,
        ions=",".join(str(n) for n in args.ions),
        f_number=cfg.f_number,
        safety=cfg.safety,
        theta_rad=cfg.theta,
        tau_e_s=tau_e,
        species_file=args.species_file,
    )
    columns = ["n_ions", "intrinsic_pulse_budget"]
    if tau_e is not None:
        columns.append("experimental_pulse_budget")
    rows = []
    for n_ions in args.ions:
        row = [n_ions, intrinsic_pulse_budget(species, n_ions, cfg, prefactors)]
        if tau_e is not None:
            row.append(experimental_pulse_budget(species, n_ions, cfg, tau_e, prefactors))
        rows.append(tuple(row))
    return _table(manifest, tuple(columns), rows), 0


def _cmd_factor_limit(args) -> tuple[str, int]:
    species = _registry(args).lookup(args.species)
    cfg = _trap(args)
    tau_e = _tau_e(args)
    result = max_factorable_bits(
        species, cfg, mode=args.mode, tau_e=tau_e, prefactors=_prefactors(args)
    )
    manifest = _manifest(
        args,
        species=args.species,
        mode=args.mode,
        f_number=cfg.f_number,
        safety=cfg.safety,
        theta_rad=cfg.theta,
        tau_e_s=tau_e,
        species_file=args.species_file,
    )
    items: list[tuple[str, object]] = [
        ("species", result.species),
        ("mode", result.mode),
    ]
    if result.tau_e_s is not None:
        items.append(("tau_e_s", result.tau_e_s))
    items.extend(
        [
            ("l_max", result.max_bits),
            ("feasible", result.feasible),
            ("limiting", result.limiting),
        ]
    )
    if result.feasible:
        items.extend(
            [
                ("n_ions", result.resources.ions),
                ("n_pulses", result.resources.pulses),
                ("t_u_s", result.t_u_s),
                ("total_time_s", result.total_time_s),
                ("total_time_h", result.total_time_s / 3600.0),
            ]
        )
        status = 0
    else:
        print(
            "error: no feasible bit count under the selected bounds", file=sys.stderr
        )
        status = 2
    return _report(manifest, items), status


def _cmd_total_time(args) -> tuple[str, int]:
    species = _registry(args).lookup(args.species)
    cfg = _trap(args)
    prefactors = _prefactors(args)
    point = shor_resources(args.bits)
    seconds = total_time(species, args.bits, cfg, prefactors)
    manifest = _manifest(
        args,
        species=args.species,
        bits=args.bits,
        f_number=cfg.f_number,
        safety=cfg.safety,
        theta_rad=cfg.theta,
        species_file=args.species_file,
    )
    items = [
        ("species", species.name),
        ("bits", point.bits),
        ("n_ions", point.ions),
        ("n_pulses", point.pulses),
        ("t_u_s", u_pulse_duration(species, point.ions, cfg, prefactors)),
        ("total_time_s", seconds),
        ("total_time_h", seconds / 3600.0),
    ]
    return _report(manifest, items), 0


def _ion_grid(lo: int, hi: int, points: int) -> list[int]:
    if lo > hi:
        raise ValueError("--ions-min must not exceed --ions-max")
    if points == 0:
        return []
    values = sorted({int(round(v)) for v in np.geomspace(lo, hi, points)})
    return [v for v in values if v >= 2]


def _cmd_fig1(args) -> tuple[str, int]:
    registry = _registry(args)
    species = [registry.lookup(name) for name in args.species]
    cfg = _trap(args)
    grid = _ion_grid(args.ions_min, args.ions_max, args.ions_points)
    table = fig1_curves(species, cfg, grid, bits_max=args.l_max, prefactors=_prefactors(args))
    manifest = _manifest(
        args,
        species=",".join(args.species),
        l_max=args.l_max,
        ions_min=args.ions_min,
        ions_max=args.ions_max,
        ions_points=args.ions_points,
        f_number=cfg.f_number,
        safety=cfg.safety,
        theta_rad=cfg.theta,
        species_file=args.species_file,
    )
    return _table(manifest, table.columns, table.rows), 0


def _cmd_fig2(args) -> tuple[str, int]:
    registry = _registry(args)
    species = [registry.lookup(name) for name in args.species]
    cfg = _trap(args)
    grid = [float(t) for t in np.geomspace(args.tau_e_min, args.tau_e_max, args.tau_e_points)]
    table = fig2_curves(species, cfg, grid, prefactors=_prefactors(args))
    manifest = _manifest(
        args,
        species=",".join(args.species),
        tau_e_min=args.tau_e_min,
        tau_e_max=args.tau_e_max,
        tau_e_points=args.tau_e_points,
        f_number=cfg.f_number,
        safety=cfg.safety,
        theta_rad=cfg.theta,
        species_file=args.species_file,
    )
    return _table(manifest, table.columns, table.rows), 0


def _cmd_simulate_decay(args) -> tuple[str, int]:
    duration = args.t_over_tau0 * args.tau0_s
    estimate = simulate_trajectories(
        args.ions, duration, args.tau0_s, args.trajectories, args.seed
    )
    manifest = _manifest(
        args,
        ions=args.ions,
        T_over_tau0=args.t_over_tau0,
        tau0_s=args.tau0_s,
        trajectories=args.trajectories,
        seed=args.seed,
    )
    items = [
        ("n_ions", estimate.n_ions),
        ("duration_s", estimate.duration_s),
        ("tau0_s", estimate.tau0_s),
        ("excited_ions", estimate.excited_ions),
        ("p_exact", estimate.p_exact),
        ("p_exact_integer", estimate.p_exact_integer),
        ("p_linear", estimate.p_linear),
        ("linear_clamped", estimate.linear_clamped),
        ("linear_out_of_regime", estimate.linear_out_of_regime),
        ("p_monte_carlo", estimate.p_monte_carlo),
        ("std_error", estimate.std_error),
        ("trajectories", estimate.trajectories),
        ("seed", estimate.seed),
    ]
    return _report(manifest, items), 0


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv`` and execute one subcommand; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv if argv is None else list(argv))
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    try:
        text, status = args.handler(args)
    except (ValueError, TypeError, KeyError, OSError, ChainSolverError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 2
    _emit(text, args.out)
    return status


def main() -> None:
    sys.exit(run())
