"""File outputs: per-trial CSVs, summary JSON/CSV and run manifests.

All numeric CSV fields are written with ``repr(float(x))`` so a rerun with
the same seed reproduces files byte-for-byte (the wall-clock
``runtime_seconds`` column and manifest timestamps are the only
non-deterministic fields). JSON documents encode non-finite floats as the
strings ``"inf"``, ``"-inf"`` and ``"nan"`` to stay strictly parseable.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Sequence

import numpy as np

from .experiments import (
    PhaseGrid,
    SweepSummary,
    TrialRecord,
    algorithm_name,
)
from .pursuit import FbpConfig, L0Config, OmpConfig, SpConfig

TRIAL_CSV_COLUMNS = [
    "n",
    "m",
    "k",
    "ensemble",
    "snr_db",
    "algorithm",
    "alpha",
    "beta",
    "epsilon",
    "k_max",
    "seed",
    "trial_index",
    "exact",
    "nmse",
    "runtime_seconds",
    "status",
]

SUMMARY_CSV_COLUMNS = [
    "algorithm",
    "k",
    "snr_db",
    "trials",
    "exact_rate",
    "anmse",
    "mean_runtime_seconds",
    "distortion_db",
]

PHASE_CSV_COLUMNS = [
    "lambda",
    "rho",
    "m",
    "k",
    "algorithm",
    "successes",
    "trials",
]


def format_float(value: float | None) -> str:
    """Canonical CSV rendering of an optional float."""
    if value is None:
        return ""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return repr(value)


def json_safe(obj: Any) -> Any:
    """Recursively convert a payload into strictly-JSON-serializable form."""
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(obj, np.ndarray):
        return [json_safe(v) for v in obj.tolist()]
    return obj


def write_json(path: str, payload: dict) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(json_safe(payload), handle, indent=2)
        handle.write("\n")
    return path


def trial_record_row(record: TrialRecord) -> list[str]:
    spec = record.spec
    config = spec.algorithm
    alpha = beta = epsilon = k_max = None
    if isinstance(config, FbpConfig):
        alpha, beta, epsilon, k_max = config.alpha, config.beta, config.epsilon, config.k_max
    elif isinstance(config, OmpConfig):
        epsilon, k_max = config.epsilon, config.k_max
    elif isinstance(config, L0Config):
        k_max = config.k_max
    elif isinstance(config, SpConfig):
        pass  # target sparsity equals the k column under the standard protocol
    return [
        str(spec.n),
        str(spec.m),
        str(spec.k),
        spec.ensemble,
        format_float(spec.snr_db),
        algorithm_name(config),
        "" if alpha is None else str(alpha),
        "" if beta is None else str(beta),
        format_float(epsilon),
        "" if k_max is None else str(k_max),
        str(record.seed),
        str(spec.trial_index),
        "true" if record.exact else "false",
        format_float(record.nmse),
        format_float(record.runtime_seconds),
        record.status,
    ]


def write_trial_records_csv(path: str, records: Sequence[TrialRecord]) -> str:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRIAL_CSV_COLUMNS)
        for record in records:
            writer.writerow(trial_record_row(record))
    return path


def sweep_summary_payload(summary: SweepSummary) -> dict:
    return {
        "schema": "pursuit-sweep-summary@1",
        "n": summary.n,
        "m": summary.m,
        "ensemble": summary.ensemble,
        "algorithm": summary.algorithm,
        "master_seed": summary.master_seed,
        "points": [
            {
                "k": p.k,
                "snr_db": p.snr_db,
                "trials": p.trials,
                "exact_rate": p.exact_rate,
                "anmse": p.anmse,
                "mean_runtime_seconds": p.mean_runtime_seconds,
                "distortion_db": p.distortion_db,
            }
            for p in summary.points
        ],
    }


def write_sweep_summary_json(path: str, summary: SweepSummary) -> str:
    return write_json(path, sweep_summary_payload(summary))


def write_sweep_summary_csv(path: str, summaries: SweepSummary | Sequence[SweepSummary]) -> str:
    if isinstance(summaries, SweepSummary):
        summaries = [summaries]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SUMMARY_CSV_COLUMNS)
        for summary in summaries:
            for p in summary.points:
                writer.writerow(
                    [
                        summary.algorithm,
                        str(p.k),
                        format_float(p.snr_db),
                        str(p.trials),
                        format_float(p.exact_rate),
                        format_float(p.anmse),
                        format_float(p.mean_runtime_seconds),
                        format_float(p.distortion_db),
                    ]
                )
    return path


def write_phase_csv(path: str, grid: PhaseGrid) -> str:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(PHASE_CSV_COLUMNS)
        for label in grid.counts:
            for i, lam in enumerate(grid.lambdas):
                m = round(lam * grid.n)
                for j, rho in enumerate(grid.rhos):
                    successes = grid.counts[label][i][j]
                    if successes is None:
                        continue
                    k = max(1, round(rho * m))
                    writer.writerow(
                        [
                            format_float(lam),
                            format_float(rho),
                            str(m),
                            str(k),
                            label,
                            str(successes),
                            str(grid.trials_per_cell),
                        ]
                    )
    return path


def phase_rho50_payload(grid: PhaseGrid) -> dict:
    algorithms = {}
    for label, fits in grid.fits.items():
        algorithms[label] = [
            None
            if fit is None
            else {
                "lambda": grid.lambdas[i],
                "rho50": fit.rho50,
                "intercept": fit.intercept,
                "slope": fit.slope,
                "converged": fit.converged,
            }
            for i, fit in enumerate(fits)
        ]
    return {
        "schema": "pursuit-phase-rho50@1",
        "n": grid.n,
        "ensemble": grid.ensemble,
        "trials_per_cell": grid.trials_per_cell,
        "master_seed": grid.master_seed,
        "lambdas": list(grid.lambdas),
        "rhos": list(grid.rhos),
        "algorithms": algorithms,
    }


def write_phase_rho50_json(path: str, grid: PhaseGrid) -> str:
    return write_json(path, phase_rho50_payload(grid))


@dataclass
class RunManifest:
    """Provenance for one command invocation and its outputs."""

    command: str
    argv: list[str]
    package_version: str
    master_seed: int | None
    parameters: dict
    outputs: list[str] = field(default_factory=list)
    started_at: str = ""
    finished_at: str = ""
    duration_seconds: float = 0.0

    def payload(self) -> dict:
        return {
            "schema": "pursuit-run-manifest@1",
            "command": self.command,
            "argv": list(self.argv),
            "package_version": self.package_version,
            "master_seed": self.master_seed,
            "parameters": self.parameters,
            "outputs": list(self.outputs),
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "duration_seconds": self.duration_seconds,
        }


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def manifest_path_for(output_path: str) -> str:
    return f"{output_path}.manifest.json"


def write_manifest(manifest: RunManifest, output_path: str) -> str:
    """Write the manifest that accompanies ``output_path``."""
    path = manifest_path_for(output_path)
    write_json(path, manifest.payload())
    return path


def ensure_parent_dir(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
