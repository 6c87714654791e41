"""Preset experiment configurations for the five simulation studies.

The presets keep the published parameter choices (sensor counts, snapshot
counts, SNR points, source counts, power levels) while trimming trial counts
and grid densities to desk-scale runtimes. Regenerate every CSV with::

    for name in $(coarray-lab experiment list-presets --names-only); do
        coarray-lab experiment run "$name" --output "out/$name.csv"
    done
"""

from __future__ import annotations

import numpy as np

from .experiments import ExperimentConfig

__all__ = ["PRESETS", "preset_names", "preset_config", "preset_description"]


def _fig1_config():
    return ExperimentConfig(
        experiment_id="fig1_coarray_vs_direct",
        arms=("ula_direct", "ula_coarray", "nested_coarray"),
        sensors=(20,),
        snapshots=(100,),
        snr_db=(-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0),
        separation=("2/P",),
        dynamic_range=(1.0,),
        n_sources=4,
        omega_start=0.1,
        p_min=1.0,
        trials=200,
        base_seed=9101,
        output_path="fig1_coarray_vs_direct.csv",
    )


def _fig2_config():
    deltas = tuple(float(v) for v in np.geomspace(0.0025, 0.2, 13))
    return ExperimentConfig(
        experiment_id="fig2_prob_resolution",
        arms=("ula_coarray", "nested_coarray"),
        sensors=(20,),
        snapshots=(55,),
        snr_db=(0.0, -16.0),
        separation=deltas,
        dynamic_range=(1.0,),
        n_sources=2,
        omega_start=0.1,
        p_min=1.0,
        trials=200,
        base_seed=9102,
        output_path="fig2_prob_resolution.csv",
    )


def _fig3_config():
    return ExperimentConfig(
        experiment_id="fig3_snr_snapshot_grid",
        arms=("ula_coarray", "nested_coarray"),
        sensors=(20,),
        snapshots=(25, 50, 100, 200, 400, 800, 1600),
        snr_db=(-21.0, -15.0, -9.0, -3.0, 3.0, 9.0, 15.0, 21.0),
        separation=(0.1, 0.005),
        dynamic_range=(1.0,),
        n_sources=2,
        omega_start=0.1,
        p_min=1.0,
        trials=50,
        base_seed=9103,
        output_path="fig3_snr_snapshot_grid.csv",
    )


def _fig4_config():
    return ExperimentConfig(
        experiment_id="fig4_error_vs_sensors",
        arms=("ula_coarray", "nested_coarray"),
        sensors=(10, 16, 20),
        snapshots=(50,),
        snr_db=(0.0,),
        separation=("1/P^1.5", "1/P^2"),
        dynamic_range=(1.0,),
        n_sources=4,
        omega_start=0.1,
        p_min=1.0,
        trials=200,
        base_seed=9104,
        output_path="fig4_error_vs_sensors.csv",
    )


def _fig5_config():
    return ExperimentConfig(
        experiment_id="fig5_dynamic_range",
        arms=("ula_coarray", "nested_coarray"),
        sensors=(20,),
        snapshots=(12, 25, 50, 100, 200, 400, 800, 1600),
        snr_db=(-10.0,),
        separation=("1/P",),
        dynamic_range=(1.0, 10.0),
        n_sources=2,
        omega_start=0.1,
        p_min=0.2,
        trials=200,
        base_seed=9105,
        output_path="fig5_dynamic_range.csv",
    )


PRESETS = {
    "fig1_coarray_vs_direct": (
        _fig1_config,
        "matching distance vs SNR for direct and coarray variants (P=20, L=100, 4 sources)",
    ),
    "fig2_prob_resolution": (
        _fig2_config,
        "probability of resolution vs source separation (P=20, L=55, 2 sources)",
    ),
    "fig3_snr_snapshot_grid": (
        _fig3_config,
        "relative matching distance over the (snapshots, SNR) plane at two separations",
    ),
    "fig4_error_vs_sensors": (
        _fig4_config,
        "matching distance and covariance error vs sensor count at shrinking separations",
    ),
    "fig5_dynamic_range": (
        _fig5_config,
        "probability of resolution vs snapshots at power dynamic ranges 1 and 10",
    ),
}


def preset_names():
    return list(PRESETS)


def preset_config(name):
    """Config for a named preset; raises KeyError for unknown names."""
    if name not in PRESETS:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(PRESETS)}"
        )
    return PRESETS[name][0]()


def preset_description(name):
    return PRESETS[name][1]
