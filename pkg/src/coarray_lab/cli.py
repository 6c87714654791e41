"""Command line interface.

Subcommands: ``estimate`` (run one estimator on a synthetic scene),
``bounds`` (evaluate the theoretical bound report), ``geometry inspect``
(difference-coarray facts), ``experiment run`` / ``experiment list-presets``
(Monte Carlo harness). Exit codes: 0 success, 1 usage error, 2 runtime
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bounds import BoundConstants, build_bound_report, specialized_bound
from .errors import CoarrayLabError
from .esprit import coarray_esprit, direct_esprit
from .estimation import (
    covariance_error,
    grid_sup_bound,
    redundancy_average,
    sample_covariance,
)
from .experiments import ExperimentConfig, emit_csv, run_experiment, write_records_json
from .geometry import coarray_structure, parse_array_spec, redundancy_coefficient
from .metrics import matching_distance
from .presets import PRESETS, preset_config
from .signal_model import (
    SourceScene,
    noise_power_for_snr_db,
    sample_snapshots,
    true_coarray_covariance,
)

__all__ = ["main", "console_entry"]


class UsageError(Exception):
    """Bad flags or flag combinations; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _csv_floats(text, name):
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise UsageError(f"{name} must be comma-separated numbers, got {text!r}") from exc


def _parse_constants(text):
    if not text:
        return BoundConstants()
    values = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in ("c", "c2", "gamma"):
            raise UsageError(
                f"bad constants entry {item!r}; expected c=..., c2=... or gamma=..."
            )
        try:
            values[key] = float(val)
        except ValueError as exc:
            raise UsageError(f"constants entry {item!r} is not numeric") from exc
    try:
        return BoundConstants(**values)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _array_from_args(args):
    try:
        return parse_array_spec(args.array)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _scene_from_args(args):
    omegas = _csv_floats(args.omegas, "--omegas")
    if args.powers is None:
        powers = tuple(1.0 for _ in omegas)
    else:
        powers = _csv_floats(args.powers, "--powers")
        if len(powers) != len(omegas):
            raise UsageError("--powers must match --omegas in length")
    if (args.noise_power is None) == (args.snr_db is None):
        raise UsageError("give exactly one of --noise-power and --snr-db")
    if args.noise_power is not None:
        noise = args.noise_power
    else:
        noise = noise_power_for_snr_db(min(powers), args.snr_db)
    try:
        return SourceScene(omegas, powers, noise)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(payload):
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_estimate(args):
    array = _array_from_args(args)
    scene = _scene_from_args(args)
    snapshots = sample_snapshots(array, scene, args.snapshots, args.seed)
    if args.method == "coarray":
        structure = coarray_structure(array)
        r_hat = sample_covariance(snapshots)
        estimated = redundancy_average(
            r_hat, structure, array,
            n_snapshots=snapshots.n_snapshots, seed=snapshots.seed,
        )
        estimate = coarray_esprit(estimated, array, scene.n_sources, structure)
        exact = true_coarray_covariance(structure, scene)
        extra = {
            "cov_error": covariance_error(exact, estimated),
            "cov_error_grid_bound": grid_sup_bound(exact, estimated,
                                                   grid_mult=args.grid_mult),
            "m_ca": structure.m_ca,
        }
    else:
        estimate = direct_esprit(snapshots, array, scene.n_sources)
        extra = {}
    payload = estimate.to_json_dict()
    payload["diagnostics"].update(extra)
    payload["diagnostics"]["matching_distance"] = matching_distance(
        scene.omegas, estimate.omegas_hat
    )
    payload["scene"] = {
        "omegas": list(scene.omegas),
        "powers": list(scene.powers),
        "noise_power": scene.noise_power,
        "n_snapshots": snapshots.n_snapshots,
        "seed": snapshots.seed,
        "array": list(array.positions),
    }
    _emit(payload)
    return 0


def _cmd_bounds(args):
    array = _array_from_args(args)
    scene = _scene_from_args(args)
    structure = coarray_structure(array)
    if not structure.hole_free:
        raise CoarrayLabError(
            "bound report requires a hole-free coarray; "
            f"array {list(array.positions)} has holes"
        )
    constants = _parse_constants(args.constants)
    report = build_bound_report(
        scene, array, structure,
        epsilon=args.epsilon, delta=args.delta, constants=constants,
    )
    payload = report.to_json_dict()
    payload["constants"] = {
        "c": constants.c, "c2": constants.c2, "gamma": constants.gamma,
        "c1": constants.c1, "c3": constants.c3,
    }
    if args.specialized:
        bound = specialized_bound(
            args.specialized, scene, array.size,
            args.epsilon, args.delta, constants,
        )
        payload["specialized"] = {
            "regime": bound.regime,
            "value": bound.value,
            "constant": bound.constant,
            "epsilon_cap": bound.epsilon_cap,
            "preconditions": bound.preconditions,
            "preconditions_met": bound.preconditions_met,
        }
    _emit(payload)
    return 0


def _cmd_geometry_inspect(args):
    array = _array_from_args(args)
    structure = coarray_structure(array)
    payload = {
        "positions": list(array.positions),
        "size": array.size,
        "aperture": array.aperture,
        "m_ca": structure.m_ca,
        "hole_free": structure.hole_free,
        "weights": {str(i): structure.weights[i]
                    for i in structure.difference_set if i >= 0},
        "redundancy_coefficient": (
            redundancy_coefficient(structure) if structure.hole_free else None
        ),
    }
    _emit(payload)
    return 0


def _cmd_experiment_run(args):
    if os.path.exists(args.config):
        config = ExperimentConfig.from_file(args.config)
    elif args.config in PRESETS:
        config = preset_config(args.config)
    else:
        raise CoarrayLabError(
            f"config {args.config!r} is neither a file nor a preset; "
            f"presets: {', '.join(PRESETS)}"
        )
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.base_seed is not None:
        overrides["base_seed"] = args.base_seed
    if args.output is not None:
        overrides["output_path"] = args.output
    if overrides:
        mapping = config.to_mapping()
        mapping.update(overrides)
        config = ExperimentConfig.from_mapping(mapping)
    dataset = run_experiment(config)
    emit_csv(dataset, config.output_path)
    if args.records is not None:
        write_records_json(dataset, args.records)
    summary = {
        "experiment_id": config.experiment_id,
        "output_path": config.output_path,
        "arms": list(config.arms),
        "grid_points": len(config.grid_points()),
        "trials_per_cell": config.trials,
        "total_trials": len(dataset.records),
        "failures": sum(a.failures for a in dataset.aggregates),
    }
    _emit(summary)
    return 0


def _cmd_experiment_list_presets(args):
    if args.names_only:
        for name in PRESETS:
            print(name)
        return 0
    width = max(len(name) for name in PRESETS)
    for name, (_, description) in PRESETS.items():
        print(f"{name:<{width}}  {description}")
    return 0


def _add_scene_flags(parser):
    parser.add_argument("--array", required=True,
                        help="array spec: ula:P, nested:N1,N2 or custom:[d1,d2,...]")
    parser.add_argument("--omegas", required=True,
                        help="comma-separated torus frequencies in [0,1)")
    parser.add_argument("--powers", default=None,
                        help="comma-separated source powers (default: all 1)")
    parser.add_argument("--noise-power", type=float, default=None,
                        help="white noise power")
    parser.add_argument("--snr-db", type=float, default=None,
                        help="SNR in dB, defined as min(power)/noise")


def build_parser():
    parser = _Parser(prog="coarray-lab",
                     description="Sparse-array DOA estimation toolkit")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    est = sub.add_parser("estimate", help="estimate DOAs on a synthetic scene")
    _add_scene_flags(est)
    est.add_argument("--snapshots", type=int, default=100,
                     help="number of snapshots (default 100)")
    est.add_argument("--seed", type=int, default=0, help="generator seed")
    est.add_argument("--method", choices=("coarray", "direct"),
                     default="coarray")
    est.add_argument("--grid-mult", type=int, default=1,
                     help="refinement factor for the covariance error grid bound")
    est.set_defaults(handler=_cmd_estimate)

    bnd = sub.add_parser("bounds", help="evaluate the theoretical bound report")
    _add_scene_flags(bnd)
    bnd.add_argument("--epsilon", type=float, default=0.05,
                     help="target matching distance (default 0.05)")
    bnd.add_argument("--delta", type=float, default=0.05,
                     help="failure probability (default 0.05)")
    bnd.add_argument("--constants", default=None,
                     help="override constants, e.g. c=1.0,c2=0.1326,gamma=2.0")
    bnd.add_argument("--specialized", choices=("ula", "nested"), default=None,
                     help="also evaluate the named array-family bound")
    bnd.set_defaults(handler=_cmd_bounds)

    geo = sub.add_parser("geometry", help="geometry utilities")
    geo_sub = geo.add_subparsers(dest="geometry_command", required=True,
                                 parser_class=_Parser)
    ins = geo_sub.add_parser("inspect", help="difference-coarray facts")
    ins.add_argument("--array", required=True,
                     help="array spec: ula:P, nested:N1,N2 or custom:[d1,d2,...]")
    ins.set_defaults(handler=_cmd_geometry_inspect)

    exp = sub.add_parser("experiment", help="Monte Carlo harness")
    exp_sub = exp.add_subparsers(dest="experiment_command", required=True,
                                 parser_class=_Parser)
    run = exp_sub.add_parser("run", help="run a config file or preset")
    run.add_argument("config", help="path to a config file, or a preset name")
    run.add_argument("--output", default=None, help="override the CSV output path")
    run.add_argument("--trials", type=int, default=None,
                     help="override the trial count")
    run.add_argument("--base-seed", type=int, default=None,
                     help="override the base seed")
    run.add_argument("--records", default=None,
                     help="also dump per-trial records to this JSON path")
    run.set_defaults(handler=_cmd_experiment_run)
    lst = exp_sub.add_parser("list-presets", help="list preset experiments")
    lst.add_argument("--names-only", action="store_true")
    lst.set_defaults(handler=_cmd_experiment_list_presets)

    return parser


def main(argv=None):
    """Entry point returning the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (CoarrayLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_entry():
    raise SystemExit(main(sys.argv[1:]))
