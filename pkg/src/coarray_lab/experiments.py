"""Monte Carlo harness: configs, trial execution, aggregation, CSV output.

An experiment sweeps a cartesian grid of (sensor count, snapshot count, SNR,
source separation, power dynamic range) for one or more estimator arms. Every
trial draws its own generator seed derived from (base seed, arm, grid point,
trial index), so results are reproducible regardless of execution order or
worker count. Failed trials are kept in the record stream with their failure
stage; they count as unresolved and are excluded from matching-distance
averages.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import re
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import load_config_file
from .errors import ConfigError, EstimationError
from .esprit import esprit_rotation, signal_subspace
from .estimation import (
    covariance_error,
    hermitian_spectral_norm,
    redundancy_average,
    sample_covariance,
)
from .geometry import coarray_structure, split_nested, ula
from .metrics import matching_distance, min_separation, resolution_success
from .signal_model import (
    SourceScene,
    noise_power_for_snr_db,
    sample_snapshots,
    true_coarray_covariance,
    true_covariance,
)

__all__ = [
    "ARM_NAMES",
    "THREADS_ENV_VAR",
    "ExperimentConfig",
    "TrialRecord",
    "AggregateRecord",
    "ExperimentDataset",
    "derive_trial_seed",
    "run_experiment",
    "emit_csv",
    "write_records_json",
]

THREADS_ENV_VAR = "COARRAY_LAB_THREADS"

# arm name -> (estimation method, array builder from the sensor count)
ARM_NAMES = {
    "ula_direct": ("direct", ula),
    "ula_coarray": ("coarray", ula),
    "nested_coarray": ("coarray", split_nested),
}

_SEPARATION_RULE_RE = re.compile(r"^(\d+(?:\.\d+)?)/P(?:\^(\d+(?:\.\d+)?))?$")

CSV_COLUMNS = (
    "arm", "P", "L", "snr_db", "delta", "dynamic_range", "trials",
    "mean_md", "median_md", "prob_resolved", "mean_cov_error", "failures",
)


def resolve_separation(spec, n_sensors):
    """Resolve a separation axis entry to a float for a given sensor count.

    Entries are either positive literals or rule strings of the form
    ``a/P`` or ``a/P^b`` evaluated at ``P = n_sensors``.
    """
    if isinstance(spec, str):
        match = _SEPARATION_RULE_RE.match(spec.strip())
        if match is None:
            raise ConfigError(
                f"invalid separation rule {spec!r}; expected 'a/P' or 'a/P^b'"
            )
        scale = float(match.group(1))
        power = float(match.group(2)) if match.group(2) else 1.0
        return scale / float(n_sensors) ** power
    value = float(spec)
    if not value > 0:
        raise ConfigError(f"separation must be positive, got {spec!r}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one Monte Carlo experiment.

    Scenes are built per grid point: sources at ``omega_start + k*delta``
    with the first source carrying ``p_min * dynamic_range`` and the rest
    ``p_min``; noise power follows the grid's SNR (defined as p_min over
    noise). Alternatively ``omegas`` (and optionally ``powers``) fix the
    scene explicitly, in which case the separation axis is dropped and the
    resolution scale is the scene's own minimum separation.
    """

    experiment_id: str
    arms: tuple
    sensors: tuple
    snapshots: tuple
    snr_db: tuple
    separation: tuple = (0.1,)
    dynamic_range: tuple = (1.0,)
    n_sources: int = 2
    omega_start: float = 0.1
    p_min: float = 1.0
    trials: int = 200
    base_seed: int = 20260819
    output_path: str = "experiment.csv"
    omegas: tuple | None = None
    powers: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(self.arms))
        object.__setattr__(self, "sensors", tuple(int(v) for v in self.sensors))
        object.__setattr__(self, "snapshots", tuple(int(v) for v in self.snapshots))
        object.__setattr__(self, "snr_db", tuple(float(v) for v in self.snr_db))
        object.__setattr__(self, "separation", tuple(self.separation))
        object.__setattr__(
            self, "dynamic_range", tuple(float(v) for v in self.dynamic_range)
        )
        if self.omegas is not None:
            object.__setattr__(self, "omegas", tuple(float(v) for v in self.omegas))
        if self.powers is not None:
            object.__setattr__(self, "powers", tuple(float(v) for v in self.powers))
        self._validate()

    def _validate(self):
        if not self.arms:
            raise ConfigError("arms must be non-empty")
        for arm in self.arms:
            if arm not in ARM_NAMES:
                raise ConfigError(
                    f"unknown arm {arm!r}; known arms: {sorted(ARM_NAMES)}"
                )
        if len(set(self.arms)) != len(self.arms):
            raise ConfigError("arms must be distinct")
        for name in ("sensors", "snapshots", "snr_db", "separation", "dynamic_range"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must be non-empty")
        if any(p < 2 for p in self.sensors):
            raise ConfigError("sensor counts must be at least 2")
        if any(n < 1 for n in self.snapshots):
            raise ConfigError("snapshot counts must be positive")
        if any(d < 1.0 for d in self.dynamic_range):
            raise ConfigError("dynamic_range values must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        if self.base_seed < 0:
            raise ConfigError("base_seed must be non-negative")
        if self.p_min <= 0:
            raise ConfigError("p_min must be positive")
        if self.omegas is None:
            if self.n_sources < 1:
                raise ConfigError("n_sources must be positive")
            if self.powers is not None:
                raise ConfigError("powers requires explicit omegas")
            for spec in self.separation:
                for p in self.sensors:
                    resolve_separation(spec, p)
        else:
            if self.powers is not None and len(self.powers) != len(self.omegas):
                raise ConfigError("powers must match omegas in length")
            if self.n_sources != len(self.omegas):
                raise ConfigError("n_sources must equal len(omegas) when explicit")

    @classmethod
    def from_mapping(cls, mapping):
        """Build a config from a parsed key-value mapping."""
        data = dict(mapping)
        known = {
            "experiment_id", "arms", "sensors", "snapshots", "snr_db",
            "separation", "dynamic_range", "n_sources", "omega_start",
            "p_min", "trials", "base_seed", "output_path", "omegas", "powers",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        required = {"experiment_id", "arms", "sensors", "snapshots", "snr_db"}
        missing = required - set(data)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        for key in ("arms", "sensors", "snapshots", "snr_db", "separation",
                    "dynamic_range", "omegas", "powers"):
            if key in data and not isinstance(data[key], (list, tuple)):
                data[key] = [data[key]]
        if data.get("omegas") is not None:
            data.setdefault("n_sources", len(data["omegas"]))
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_mapping(self):
        """Mapping round-trippable through the config file grammar."""
        out = {
            "experiment_id": self.experiment_id,
            "arms": list(self.arms),
            "sensors": list(self.sensors),
            "snapshots": list(self.snapshots),
            "snr_db": list(self.snr_db),
            "separation": list(self.separation),
            "dynamic_range": list(self.dynamic_range),
            "n_sources": self.n_sources,
            "omega_start": self.omega_start,
            "p_min": self.p_min,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "output_path": self.output_path,
        }
        if self.omegas is not None:
            out["omegas"] = list(self.omegas)
        if self.powers is not None:
            out["powers"] = list(self.powers)
        return out

    @classmethod
    def from_file(cls, path):
        return cls.from_mapping(load_config_file(path))

    def grid_points(self):
        """Materialize the sweep grid in deterministic order."""
        points = []
        axes = itertools.product(
            self.sensors, self.snapshots, self.snr_db,
            self.separation, self.dynamic_range,
        )
        for index, (p, l, snr, sep, dr) in enumerate(axes):
            if self.omegas is not None:
                delta = (min_separation(self.omegas)
                         if len(self.omegas) >= 2 else 0.5)
            else:
                delta = resolve_separation(sep, p)
            points.append(GridPoint(
                index=index, n_sensors=p, n_snapshots=l, snr_db=snr,
                separation=delta, dynamic_range=dr,
            ))
        return points

    def scene_for(self, point):
        """Source scene at one grid point."""
        if self.omegas is not None:
            powers = self.powers
            if powers is None:
                powers = tuple(1.0 for _ in self.omegas)
            noise = noise_power_for_snr_db(min(powers), point.snr_db)
            return SourceScene(self.omegas, powers, noise)
        return SourceScene.equispaced(
            start=self.omega_start,
            separation=point.separation,
            n_sources=self.n_sources,
            p_min=self.p_min,
            dynamic_range=point.dynamic_range,
            snr_db=point.snr_db,
        )


@dataclass(frozen=True)
class GridPoint:
    index: int
    n_sensors: int
    n_snapshots: int
    snr_db: float
    separation: float
    dynamic_range: float


@dataclass(frozen=True)
class TrialRecord:
    arm: str
    grid_index: int
    n_sensors: int
    n_snapshots: int
    snr_db: float
    separation: float
    dynamic_range: float
    trial_index: int
    seed: int
    md: float | None
    resolved: bool
    cov_error: float
    failure_stage: str | None = None


@dataclass(frozen=True)
class AggregateRecord:
    arm: str
    n_sensors: int
    n_snapshots: int
    snr_db: float
    separation: float
    dynamic_range: float
    trials: int
    mean_md: float
    median_md: float
    prob_resolved: float
    mean_cov_error: float
    failures: int


@dataclass(frozen=True)
class ExperimentDataset:
    config: ExperimentConfig
    records: list = field(compare=False)
    aggregates: list = field(compare=False)


def derive_trial_seed(base_seed, arm, grid_index, trial_index):
    """Stable 64-bit seed for one trial.

    The arm label is hashed through SHA-256 so renaming an arm reshuffles its
    stream while every (arm, grid point, trial) triple stays independent of
    execution order.
    """
    arm_tag = int.from_bytes(hashlib.sha256(arm.encode("utf-8")).digest()[:8], "big")
    seq = np.random.SeedSequence(
        (int(base_seed), arm_tag, int(grid_index), int(trial_index))
    )
    return int(seq.generate_state(1, np.uint64)[0])


def _run_cell(config, arm, point):
    method, builder = ARM_NAMES[arm]
    array = builder(point.n_sensors)
    scene = config.scene_for(point)
    n_sources = scene.n_sources
    records = []
    if method == "coarray":
        structure = coarray_structure(array)
        exact_cov = true_coarray_covariance(structure, scene)
    else:
        exact_r = true_covariance(array, scene)
    for trial in range(config.trials):
        seed = derive_trial_seed(config.base_seed, arm, point.index, trial)
        snap = sample_snapshots(array, scene, point.n_snapshots, seed)
        r_hat = sample_covariance(snap)
        if method == "coarray":
            est_cov = redundancy_average(
                r_hat, structure, array,
                n_snapshots=point.n_snapshots, seed=seed,
            )
            cov_err = covariance_error(exact_cov, est_cov)
            target = est_cov.matrix
        else:
            cov_err = hermitian_spectral_norm(exact_r - r_hat)
            target = r_hat
        md = None
        resolved = False
        failure_stage = None
        try:
            subspace = signal_subspace(target, n_sources)
            estimate = esprit_rotation(subspace, method=method)
            md = matching_distance(scene.omegas, estimate.omegas_hat)
            resolved = resolution_success(
                scene.omegas, estimate.omegas_hat, point.separation
            )
        except EstimationError as exc:
            failure_stage = exc.stage
        records.append(TrialRecord(
            arm=arm, grid_index=point.index, n_sensors=point.n_sensors,
            n_snapshots=point.n_snapshots, snr_db=point.snr_db,
            separation=point.separation, dynamic_range=point.dynamic_range,
            trial_index=trial, seed=seed, md=md, resolved=resolved,
            cov_error=cov_err, failure_stage=failure_stage,
        ))
    return records


def _aggregate_cell(records):
    first = records[0]
    md_values = [r.md for r in records if r.md is not None]
    failures = sum(1 for r in records if r.failure_stage is not None)
    return AggregateRecord(
        arm=first.arm,
        n_sensors=first.n_sensors,
        n_snapshots=first.n_snapshots,
        snr_db=first.snr_db,
        separation=first.separation,
        dynamic_range=first.dynamic_range,
        trials=len(records),
        mean_md=statistics.fmean(md_values) if md_values else math.nan,
        median_md=statistics.median(md_values) if md_values else math.nan,
        prob_resolved=sum(1 for r in records if r.resolved) / len(records),
        mean_cov_error=statistics.fmean(r.cov_error for r in records),
        failures=failures,
    )


def _worker_count(max_workers=None):
    if max_workers is not None:
        return max(1, int(max_workers))
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(
                f"{THREADS_ENV_VAR} must be an integer, got {env!r}"
            ) from exc
    return os.cpu_count() or 1


def run_experiment(config, max_workers=None):
    """Execute every (arm, grid point) cell and aggregate the results.

    Cells run on a thread pool sized by ``max_workers``, falling back to the
    ``COARRAY_LAB_THREADS`` environment variable and then the CPU count.
    Results are deterministic for a fixed config regardless of pool size.

    Returns
    -------
    ExperimentDataset
    """
    points = config.grid_points()
    cells = [(arm, point) for arm in config.arms for point in points]
    workers = _worker_count(max_workers)
    if workers == 1:
        results = [_run_cell(config, arm, point) for arm, point in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda cell: _run_cell(config, *cell), cells
            ))
    records = [record for cell_records in results for record in cell_records]
    aggregates = sorted(
        (_aggregate_cell(cell_records) for cell_records in results),
        key=lambda a: (a.arm, a.n_sensors, a.n_snapshots, a.snr_db,
                       a.separation, a.dynamic_range),
    )
    return ExperimentDataset(config=config, records=records, aggregates=aggregates)


def _fmt_float(value):
    return format(float(value), ".9g")


def emit_csv(dataset, path):
    """Write the aggregate table as CSV, one row per (arm, grid point).

    Rows are sorted by (arm, grid coordinates) and floats carry 9 significant
    digits, so repeated runs of the same config produce identical bytes.
    """
    if not dataset.aggregates:
        raise ValueError("dataset has no aggregates to write")
    lines = [",".join(CSV_COLUMNS)]
    for agg in dataset.aggregates:
        lines.append(",".join((
            agg.arm,
            str(agg.n_sensors),
            str(agg.n_snapshots),
            _fmt_float(agg.snr_db),
            _fmt_float(agg.separation),
            _fmt_float(agg.dynamic_range),
            str(agg.trials),
            _fmt_float(agg.mean_md),
            _fmt_float(agg.median_md),
            _fmt_float(agg.prob_resolved),
            _fmt_float(agg.mean_cov_error),
            str(agg.failures),
        )))
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def write_records_json(dataset, path):
    """Dump the per-trial records and the config as JSON."""
    payload = {
        "config": dataset.config.to_mapping(),
        "records": [
            {
                "arm": r.arm,
                "grid_index": r.grid_index,
                "P": r.n_sensors,
                "L": r.n_snapshots,
                "snr_db": r.snr_db,
                "delta": r.separation,
                "dynamic_range": r.dynamic_range,
                "trial_index": r.trial_index,
                "seed": r.seed,
                "md": r.md,
                "resolved": r.resolved,
                "cov_error": r.cov_error,
                "failure_stage": r.failure_stage,
            }
            for r in dataset.records
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return path
