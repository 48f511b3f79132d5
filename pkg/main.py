"""
Qubit channel roofs - command-line entry point
Validation, θ construction, closed-form roofs, capacity, sweeps and oracle comparison
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence

import numpy as np
from colorama import Fore, Style, init

from antilinear import AntiHermOp, theta_from_channel, theta_scale
from capacity import CapacityResult, capacity, capacity_degenerate, optimal_signal_report
from channels import (
    KrausChannel, degenerate_channel, depolarizing, extremal_channel, identity_channel,
    kraus_span, validate_cptp,
)
from config import Config, config
from exceptions import (
    ChannelRoofError, ChannelValidationError, NumericalInvariantError, SpanTooLarge, UsageError,
)
from linalg2 import DensityOp
from oracle import Ensemble, OracleConfig, mutual_information, oracle_concurrence, oracle_entropy_roof
from reports import write_csv, write_json
from roofs import LeafDecomposition, channel_concurrence, leaf, roof_report
from schema import StateSpec, load_channel_file, load_state_file

init(autoreset=True)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_SPAN = 3
EXIT_NUMERICAL = 4

DEGENERATE_COLUMNS = ["t", "capacity", "r_star", "overlap"]
EXTREMAL_COLUMNS = ["u", "v", "capacity", "argmax_x", "argmax_y", "argmax_z", "concurrence", "overlap"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def setup_logging(cfg: Config, level: Optional[str] = None) -> None:
    """Root logger on stderr; JSON lines when LOG_JSON is set, DEBUG level when cfg.DEBUG is on."""
    handler = logging.StreamHandler(sys.stderr)
    if cfg.LOG_JSON:
        from pythonjsonlogger import jsonlogger
        handler.setFormatter(jsonlogger.JsonFormatter(cfg.LOG_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(cfg.LOG_FORMAT))
    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    default = "DEBUG" if cfg.DEBUG else cfg.LOG_LEVEL
    root.setLevel(getattr(logging, (level or default).upper()))


# Argument parsing

def parse_grid(text: str) -> np.ndarray:
    """'start:stop:steps' -> inclusive linspace."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:steps, got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise UsageError(f"malformed grid {text!r}") from e
    if steps < 1:
        raise UsageError(f"grid needs at least one step, got {steps}")
    return np.linspace(start, stop, steps)


def builtin_channel(spec: str) -> KrausChannel:
    """identity | degenerate:t | depolarizing:s | extremal:a00,a11,b01,b10"""
    name, _, body = spec.partition(":")
    if name == "identity" and not body:
        return identity_channel()
    try:
        values = [float(v) for v in body.split(",")] if body else []
    except ValueError as e:
        raise UsageError(f"malformed builtin channel {spec!r}") from e

    if name == "degenerate" and len(values) == 1:
        return degenerate_channel(values[0])
    if name == "depolarizing" and len(values) == 1:
        return depolarizing(values[0])
    if name == "extremal" and len(values) == 4:
        return extremal_channel(*values)
    raise UsageError(f"unknown builtin channel {spec!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="root seed (default 42)")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--no-validate", action="store_true", help="skip the CPTP check on the channel")
    common.add_argument("--log-level", default=None, help="override LOG_LEVEL")

    source = _Parser(add_help=False)
    group = source.add_mutually_exclusive_group()
    group.add_argument("--channel", help="channel JSON file")
    group.add_argument("--builtin", help="identity | degenerate:t | depolarizing:s | extremal:a00,a11,b01,b10")

    state = _Parser(add_help=False)
    state_group = state.add_mutually_exclusive_group()
    state_group.add_argument("--state", help='state flag, e.g. "bloch:0,0,-0.5"')
    state_group.add_argument("--state-file", help="state JSON file")

    search = _Parser(add_help=False)
    search.add_argument("--restarts", type=int, default=None)
    search.add_argument("--grid", dest="oracle_grid", type=int, default=None, help="oracle sphere grid")
    search.add_argument("--refine-iters", type=int, default=None)

    parser = _Parser(prog="qubit-channel-roofs", description="Roofs and capacity of qubit channels")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("validate", parents=[common, source], help="check trace preservation")
    sub.add_parser("theta", parents=[common, source], help="anti-linear θ of the channel")
    sub.add_parser("roof", parents=[common, source, state], help="closed-form roofs at a state")
    sub.add_parser("capacity", parents=[common, source, search], help="Holevo one-shot capacity")
    sweep = sub.add_parser("sweep", parents=[common], help="capacity over a channel family")
    sweep.add_argument("--family", choices=["degenerate-t", "extremal-real"], required=True)
    sweep.add_argument("--grid", dest="grid_spec", required=True, help="start:stop:steps, inclusive")
    sweep.add_argument("--restarts", type=int, default=None, help="capacity multistart points")
    sweep.add_argument("--refine-iters", type=int, default=None)
    sweep.add_argument("--angle-v", type=float, default=np.pi / 6)
    sweep.add_argument("--out", default=None, help="output file (default stdout)")
    sub.add_parser("oracle-compare", parents=[common, source, state, search],
                   help="closed forms against the brute-force oracles")
    return parser


# Inputs

def _load_channel(args) -> KrausChannel:
    if args.channel:
        channel = load_channel_file(args.channel).to_channel()
    elif args.builtin:
        channel = builtin_channel(args.builtin)
    else:
        raise UsageError("one of --channel or --builtin is required")
    if not args.no_validate and args.command != "validate":
        report = validate_cptp(channel, config.CPTP_TOL)
        if not report.passed:
            raise ChannelValidationError(report.deviation, report.tol)
    return channel


def _load_state(args) -> DensityOp:
    if args.state:
        return StateSpec.parse_flag(args.state).to_density(config.STATE_TOL)
    if args.state_file:
        return load_state_file(args.state_file).to_density(config.STATE_TOL)
    raise UsageError("one of --state or --state-file is required")


def _oracle_config(args) -> OracleConfig:
    return OracleConfig.from_config(
        config, seed=args.seed, restarts=args.restarts, grid=getattr(args, "oracle_grid", None),
        refine_iters=args.refine_iters,
    )


# Documents

def _ensemble_doc(ensemble: Ensemble) -> dict:
    return {
        "states": [s.bloch for s in ensemble.states],
        "amplitudes": [s.amplitudes for s in ensemble.states],
        "weights": list(ensemble.weights),
    }


def _leaf_doc(decomposition: LeafDecomposition, theta: AntiHermOp) -> dict:
    return {
        "endpoints": [e.bloch for e in decomposition.endpoints],
        "weights": list(decomposition.weights),
        "direction": decomposition.direction,
        "overlap": decomposition.overlap,
        "flat": decomposition.check_flatness(theta),
    }


# Subcommands

def cmd_validate(args, out) -> int:
    channel = _load_channel(args)
    report = validate_cptp(channel, config.CPTP_TOL if args.tol is None else args.tol)
    write_json({"pass": report.passed, "deviation": report.deviation}, out)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_theta(args, out) -> int:
    channel = _load_channel(args)
    span = kraus_span(channel, config.SPAN_RANK_TOL)
    theta = theta_from_channel(channel, config.SPAN_RANK_TOL)
    scale = theta_scale(span.coeffs) if span.span_dim == 2 else 0.0
    write_json({
        "alpha": theta.alpha, "beta": theta.beta, "delta": theta.delta,
        "scale": scale, "spanDim": span.span_dim,
    }, out)
    return EXIT_OK


def cmd_roof(args, out) -> int:
    channel = _load_channel(args)
    rho = _load_state(args)
    theta = theta_from_channel(channel, config.SPAN_RANK_TOL)
    report = roof_report(channel, theta, rho)
    document = {
        "state_bloch": rho.bloch,
        "concurrence": report.concurrence,
        "entropy_roof": report.entropy_roof,
        "output_entropy": report.output_entropy,
        "channel_entropy": report.channel_entropy,
        "raw_channel_entropy": report.raw_channel_entropy,
        "leaf": _leaf_doc(leaf(theta, rho), theta),
    }
    write_json(document, out)
    return EXIT_OK


def cmd_capacity(args, out) -> int:
    channel = _load_channel(args)
    theta = theta_from_channel(channel, config.SPAN_RANK_TOL)
    opt = _oracle_config(args)
    result: CapacityResult = capacity(channel, theta, opt, starts=args.restarts or config.CAPACITY_STARTS)
    signal = optimal_signal_report(channel, theta, opt, result=result)
    write_json({
        "value": result.value,
        "argmax_bloch": result.argmax.bloch,
        "ensemble": _ensemble_doc(result.ensemble),
        "overlap": signal.overlap,
        "orthogonal": signal.orthogonal,
        "mutual_information": signal.mutual_information,
        "consistent": signal.consistent,
        "degenerate_optimum": signal.degenerate_optimum,
    }, out)
    return EXIT_OK


def sweep(family: str, grid: Sequence[float], opt: OracleConfig, angle_v: float = np.pi / 6,
          starts: int = None) -> List[dict]:
    """One row per grid point of the channel family."""
    rows = []
    for x in grid:
        if family == "degenerate-t":
            value, r_star = capacity_degenerate(float(x), config.DEGENERATE_GRID_POINTS)
            rows.append({"t": float(x), "capacity": value, "r_star": r_star, "overlap": abs(1.0 - 2.0 * r_star)})
            continue
        channel = extremal_channel(np.cos(x), np.cos(angle_v), np.sin(angle_v), np.sin(x))
        theta = theta_from_channel(channel, config.SPAN_RANK_TOL)
        result = capacity(channel, theta, opt, starts=starts or config.CAPACITY_STARTS)
        bloch = result.argmax.bloch
        rows.append({
            "u": float(x), "v": float(angle_v), "capacity": result.value,
            "argmax_x": bloch[0], "argmax_y": bloch[1], "argmax_z": bloch[2],
            "concurrence": channel_concurrence(theta, result.argmax),
            "overlap": result.leaf.overlap,
        })
        logger.info("sweep %s u=%.6f capacity %.12f", family, x, result.value)
    return rows


def cmd_sweep(args, out) -> int:
    grid = parse_grid(args.grid_spec)
    rows = sweep(args.family, grid, _oracle_config(args), args.angle_v, args.restarts)
    columns = DEGENERATE_COLUMNS if args.family == "degenerate-t" else EXTREMAL_COLUMNS

    target = open(args.out, "w", encoding="utf-8", newline="") if args.out else out
    try:
        if args.format == "csv":
            write_csv(rows, target, columns)
        else:
            write_json({"family": args.family, "columns": columns, "rows": rows}, target)
    finally:
        if args.out:
            target.close()
    return EXIT_OK


def oracle_compare(channel: KrausChannel, rho: DensityOp, cfg: OracleConfig,
                   tol: float = None, beat_tol: float = None) -> dict:
    """Closed-form C_T, E_T, H_T against the oracles; raises when an oracle beats a closed form."""
    if tol is None:
        tol = config.COMPARE_TOL
    if beat_tol is None:
        beat_tol = config.BEAT_TOL
    theta = theta_from_channel(channel, config.SPAN_RANK_TOL)
    report = roof_report(channel, theta, rho)

    entropy = oracle_entropy_roof(channel, rho, cfg)
    concurrence = oracle_concurrence(channel, rho, cfg)
    oracle_h = max(report.output_entropy - entropy.value, 0.0)
    information = mutual_information(channel, entropy.ensemble)

    gaps = {
        "concurrence": concurrence - report.concurrence,
        "entropy_roof": entropy.value - report.entropy_roof,
        "channel_entropy": report.channel_entropy - oracle_h,
    }
    document = {
        "closed_form": {
            "concurrence": report.concurrence,
            "entropy_roof": report.entropy_roof,
            "channel_entropy": report.channel_entropy,
        },
        "oracle": {
            "concurrence": concurrence,
            "entropy_roof": entropy.value,
            "channel_entropy": oracle_h,
            "mutual_information": information,
            "ensemble": _ensemble_doc(entropy.ensemble),
        },
        "gaps": gaps,
        "tol": tol,
        "pass": all(abs(g) <= tol for g in gaps.values()),
    }
    beaten = [name for name in ("concurrence", "entropy_roof") if gaps[name] < -beat_tol]
    if beaten:
        logger.error("oracle beat the closed form for %s: %s", beaten, gaps)
        raise NumericalInvariantError(f"oracle below closed form for {', '.join(beaten)}")
    logger.info("oracle-compare gaps %s", gaps)
    return document


def cmd_oracle_compare(args, out) -> int:
    channel = _load_channel(args)
    rho = _load_state(args)
    write_json(oracle_compare(channel, rho, _oracle_config(args), args.tol), out)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "theta": cmd_theta,
    "roof": cmd_roof,
    "capacity": cmd_capacity,
    "sweep": cmd_sweep,
    "oracle-compare": cmd_oracle_compare,
}


def _fail(err, message: str) -> None:
    print(f"{Fore.RED}✗ {message}{Style.RESET_ALL}", file=err)


def cli_main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    """Run one subcommand; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.format == "csv" and args.command != "sweep":
            raise UsageError("--format csv is only available for sweep")
        setup_logging(config, args.log_level)
        return COMMANDS[args.command](args, out)
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except UsageError as e:
        _fail(err, f"usage: {e}")
        return EXIT_USAGE
    except SpanTooLarge as e:
        _fail(err, str(e))
        return EXIT_SPAN
    except NumericalInvariantError as e:
        _fail(err, f"numerical invariant failed: {e}")
        return EXIT_NUMERICAL
    except (ChannelRoofError, OSError) as e:
        _fail(err, f"invalid input: {e}")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(cli_main())
