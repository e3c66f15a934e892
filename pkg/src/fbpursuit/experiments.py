"""Reproducible Monte-Carlo benchmarks over random sparse instances.

Every trial derives its own generator seed as
``mix64(master_seed, m, k, trial_index)``, so a trial's data depends only on
the master seed, the problem size and its index: algorithms and noise levels
see *paired* instances, worker counts and execution order never change
results, and any single trial can be reproduced in isolation.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .exceptions import BadDimensionsError, EmptyInputError
from .pursuit import (
    FbpConfig,
    L0Config,
    OmpConfig,
    SpConfig,
    fbp,
    l0_oracle,
    omp,
    sp,
)
from .rng import Rng, mix64
from .signals import (
    ENSEMBLES,
    SparseSignal,
    add_noise,
    observe,
    sample_observation_matrix,
    sample_sparse_signal,
)

EXACT_RECOVERY_TOLERANCE = 1e-2

AlgorithmSpec = FbpConfig | OmpConfig | SpConfig | L0Config
AlgorithmLike = AlgorithmSpec | str | Callable[[int, int, float | None], AlgorithmSpec]


# ---------------------------------------------------------------------------
# metrics


def exact_recovery(x: SparseSignal, estimate: SparseSignal) -> bool:
    """True when ``||x - estimate|| <= 1e-2 * ||x||`` (estimate must be
    all-zero to match an all-zero signal)."""
    xd = x.to_dense()
    ed = estimate.to_dense()
    if xd.shape != ed.shape:
        raise BadDimensionsError("signals have different lengths")
    x_norm = float(np.linalg.norm(xd))
    if x_norm == 0.0:
        return float(np.linalg.norm(ed)) == 0.0
    return float(np.linalg.norm(xd - ed)) <= EXACT_RECOVERY_TOLERANCE * x_norm


def nmse(x: SparseSignal, estimate: SparseSignal) -> float:
    """Normalized squared error ``||x - estimate||^2 / ||x||^2``.

    An all-zero reference yields 0.0 for an all-zero estimate and ``inf``
    otherwise.
    """
    xd = x.to_dense()
    ed = estimate.to_dense()
    if xd.shape != ed.shape:
        raise BadDimensionsError("signals have different lengths")
    x_energy = float(xd @ xd)
    if x_energy == 0.0:
        return 0.0 if float(np.linalg.norm(ed)) == 0.0 else math.inf
    diff = xd - ed
    return float(diff @ diff) / x_energy


def anmse(records: Sequence["TrialRecord"]) -> float:
    """Mean of the ``nmse`` fields of a non-empty record collection."""
    if not records:
        raise EmptyInputError("anmse over an empty record collection")
    return float(np.mean([r.nmse for r in records]))


def distortion_db(records: Sequence["TrialRecord"]) -> float:
    """Average distortion ``10 log10(anmse)`` in dB; ``-inf`` at zero error."""
    return db_from_anmse(anmse(records))


def db_from_anmse(value: float) -> float:
    if value < 0:
        raise ValueError("anmse cannot be negative")
    if value == 0.0:
        return -math.inf
    return 10.0 * math.log10(value)


def noisy_epsilon(snr_db: float) -> float:
    """Residual threshold matched to the noise level: ``10^(-snr/20)``."""
    return 10.0 ** (-snr_db / 20.0)


# ---------------------------------------------------------------------------
# single trials


@dataclass
class TrialSpec:
    """Everything needed to reproduce one random recovery trial."""

    n: int
    m: int
    k: int
    ensemble: str
    algorithm: AlgorithmSpec
    master_seed: int
    trial_index: int
    snr_db: float | None = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise BadDimensionsError("n and m must be positive")
        if not 0 <= self.k <= self.n:
            raise BadDimensionsError(f"sparsity {self.k} out of range for n={self.n}")
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        if self.trial_index < 0:
            raise ValueError("trial_index must be non-negative")


@dataclass
class TrialRecord:
    """Outcome of one trial, sufficient for every downstream statistic."""

    spec: TrialSpec
    seed: int
    exact: bool
    nmse: float
    iterations: int
    runtime_seconds: float
    status: str


def trial_seed(spec: TrialSpec) -> int:
    """The derived generator seed for a trial."""
    return mix64(spec.master_seed, spec.m, spec.k, spec.trial_index)


def algorithm_name(config: AlgorithmSpec) -> str:
    if isinstance(config, FbpConfig):
        return "fbp"
    if isinstance(config, OmpConfig):
        return "omp"
    if isinstance(config, SpConfig):
        return "sp"
    if isinstance(config, L0Config):
        return "l0"
    raise TypeError(f"unknown algorithm config {type(config).__name__}")


def solve(phi: np.ndarray, y: np.ndarray, config: AlgorithmSpec):
    """Dispatch to the solver matching ``config``."""
    if isinstance(config, FbpConfig):
        return fbp(phi, y, config)
    if isinstance(config, OmpConfig):
        return omp(phi, y, config)
    if isinstance(config, SpConfig):
        return sp(phi, y, config)
    if isinstance(config, L0Config):
        return l0_oracle(phi, y, config.k_max)
    raise TypeError(f"unknown algorithm config {type(config).__name__}")


def standard_algorithm(
    name: str, m: int, k: int, snr_db: float | None = None, **overrides
) -> AlgorithmSpec:
    """The benchmark-default configuration of a named algorithm.

    Noisy problems (``snr_db`` set) use the matched residual threshold
    ``noisy_epsilon(snr_db)`` in place of 1e-6. Keyword overrides replace
    individual fields.
    """
    default_epsilon = 1e-6 if snr_db is None else noisy_epsilon(snr_db)
    config: AlgorithmSpec
    if name == "fbp":
        epsilon = overrides.pop("epsilon", default_epsilon)
        alpha = overrides.pop("alpha", None)
        if alpha is None:
            alpha = max(2, round(0.2 * m))
        beta = overrides.pop("beta", None)
        if beta is None:
            beta = alpha - 1
        config = FbpConfig(
            alpha=alpha,
            beta=beta,
            k_max=overrides.pop("k_max", m),
            epsilon=epsilon,
            skip_backward_projection=overrides.pop("skip_backward_projection", False),
        )
    elif name == "omp":
        epsilon = overrides.pop("epsilon", default_epsilon)
        config = OmpConfig(k_max=overrides.pop("k_max", m), epsilon=epsilon)
    elif name == "sp":
        config = SpConfig(
            k=overrides.pop("k", k), max_iter=overrides.pop("max_iter", 100)
        )
    elif name == "l0":
        config = L0Config(k_max=overrides.pop("k_max", min(k, 4)))
    else:
        raise ValueError(f"unknown algorithm {name!r}; choose fbp, omp, sp or l0")
    if overrides:
        raise ValueError(
            f"overrides {sorted(overrides)} do not apply to algorithm {name!r}"
        )
    return config


def resolve_algorithm(
    algorithm: AlgorithmLike, m: int, k: int, snr_db: float | None
) -> AlgorithmSpec:
    if isinstance(algorithm, str):
        return standard_algorithm(algorithm, m, k, snr_db)
    if isinstance(algorithm, (FbpConfig, OmpConfig, SpConfig, L0Config)):
        return algorithm
    if callable(algorithm):
        return algorithm(m, k, snr_db)
    raise TypeError(f"cannot interpret algorithm spec {algorithm!r}")


def run_trial(spec: TrialSpec) -> TrialRecord:
    """Generate one random instance, solve it and measure the outcome."""
    seed = trial_seed(spec)
    rng = Rng(seed)
    phi = sample_observation_matrix(spec.m, spec.n, rng)
    x = sample_sparse_signal(spec.n, spec.k, spec.ensemble, rng)
    y = observe(phi, x).y
    if spec.snr_db is not None:
        y = add_noise(y, spec.snr_db, rng).y
    start = time.perf_counter()
    result = solve(phi, y, spec.algorithm)
    runtime = time.perf_counter() - start
    return TrialRecord(
        spec=spec,
        seed=seed,
        exact=exact_recovery(x, result.estimate),
        nmse=nmse(x, result.estimate),
        iterations=result.iterations,
        runtime_seconds=runtime,
        status=result.status,
    )


def run_trials(specs: Sequence[TrialSpec], workers: int = 1) -> list[TrialRecord]:
    """Run trials, optionally across a thread pool.

    Results are returned in spec order regardless of ``workers``; every
    trial is self-seeded, so the outputs are identical for any worker
    count.
    """
    if workers <= 1:
        return [run_trial(s) for s in specs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_trial, specs))


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class SweepPoint:
    """Aggregate statistics of the trials at one (k, snr) grid point."""

    k: int
    snr_db: float | None
    trials: int
    exact_rate: float
    anmse: float
    mean_runtime_seconds: float
    distortion_db: float


@dataclass
class SweepSummary:
    """A completed sweep: per-point aggregates plus the raw records."""

    n: int
    m: int
    ensemble: str
    algorithm: str
    master_seed: int
    points: list[SweepPoint]
    records: list[TrialRecord] = field(repr=False)


def _summarize(k, snr_db, records: Sequence[TrialRecord]) -> SweepPoint:
    mean_error = anmse(records)
    return SweepPoint(
        k=k,
        snr_db=snr_db,
        trials=len(records),
        exact_rate=float(np.mean([r.exact for r in records])),
        anmse=mean_error,
        mean_runtime_seconds=float(np.mean([r.runtime_seconds for r in records])),
        distortion_db=db_from_anmse(mean_error),
    )


def _run_grid(
    n: int,
    m: int,
    ensemble: str,
    algorithm: AlgorithmLike,
    points: Sequence[tuple[int, float | None]],
    trials: int,
    master_seed: int,
    workers: int,
) -> SweepSummary:
    if trials < 1:
        raise ValueError("trials must be positive")
    specs: list[TrialSpec] = []
    for k, snr_db in points:
        config = resolve_algorithm(algorithm, m, k, snr_db)
        for t in range(trials):
            specs.append(
                TrialSpec(
                    n=n,
                    m=m,
                    k=k,
                    ensemble=ensemble,
                    algorithm=config,
                    master_seed=master_seed,
                    trial_index=t,
                    snr_db=snr_db,
                )
            )
    records = run_trials(specs, workers=workers)
    summary_points = [
        _summarize(k, snr_db, records[i * trials : (i + 1) * trials])
        for i, (k, snr_db) in enumerate(points)
    ]
    label = algorithm_name(specs[0].algorithm) if specs else "unknown"
    return SweepSummary(
        n=n,
        m=m,
        ensemble=ensemble,
        algorithm=label,
        master_seed=master_seed,
        points=summary_points,
        records=records,
    )


def run_sweep(
    n: int,
    m: int,
    ensemble: str,
    algorithm: AlgorithmLike,
    k_values: Sequence[int],
    trials: int,
    master_seed: int,
    snr_db: float | None = None,
    workers: int = 1,
) -> SweepSummary:
    """Exact-recovery sweep over sparsity levels at a fixed (optional) SNR."""
    if not k_values:
        raise EmptyInputError("k_values must be non-empty")
    points = [(int(k), snr_db) for k in k_values]
    return _run_grid(n, m, ensemble, algorithm, points, trials, master_seed, workers)


def run_snr_sweep(
    n: int,
    m: int,
    k: int,
    ensemble: str,
    algorithm: AlgorithmLike,
    snr_values: Sequence[float],
    trials: int,
    master_seed: int,
    workers: int = 1,
) -> SweepSummary:
    """Noisy-recovery sweep over SNR levels at a fixed sparsity.

    Seeds do not include the SNR, so every SNR level observes the same
    matrix/signal pairs with freshly scaled noise.
    """
    if not snr_values:
        raise EmptyInputError("snr_values must be non-empty")
    points = [(int(k), float(s)) for s in snr_values]
    return _run_grid(n, m, ensemble, algorithm, points, trials, master_seed, workers)


# ---------------------------------------------------------------------------
# logistic 50%-crossing fits


@dataclass
class LogisticFit:
    """A fitted success-probability curve ``p(rho) = sigmoid(a + b rho)``.

    ``rho50`` estimates the 50% crossing. When the fit cannot be trusted
    (degenerate all-success/all-failure data, separation, or IRLS
    non-convergence) ``converged`` is False and ``rho50`` falls back to a
    clipped or boundary value.
    """

    intercept: float
    slope: float
    rho50: float
    converged: bool


_IRLS_MAX_ITER = 100
_IRLS_TOLERANCE = 1e-10


def fit_logistic_50(
    rho_values: Sequence[float],
    successes: Sequence[int],
    trials: int,
) -> LogisticFit:
    """Maximum-likelihood logistic fit of success counts against rho.

    Fits a binomial GLM by iteratively reweighted least squares on the
    aggregated counts and returns the estimated 50% crossing
    ``rho50 = -intercept / slope``.
    """
    rho = np.asarray(rho_values, dtype=float)
    counts = np.asarray(successes, dtype=float)
    if rho.ndim != 1 or rho.shape != counts.shape:
        raise BadDimensionsError("rho_values and successes must be matching 1-D")
    if rho.size < 2 or np.unique(rho).size < 2:
        raise ValueError("need at least two distinct rho values")
    if trials < 1:
        raise ValueError("trials must be positive")
    if counts.min() < 0 or counts.max() > trials:
        raise ValueError("successes must lie in [0, trials]")

    total = float(trials)
    if np.all(counts == 0):
        return LogisticFit(math.nan, math.nan, float(rho.min()), False)
    if np.all(counts == total):
        return LogisticFit(math.nan, math.nan, float(rho.max()), False)

    design = np.column_stack([np.ones_like(rho), rho])
    mean_rate = float(np.clip(counts.mean() / total, 1e-6, 1 - 1e-6))
    beta = np.array([math.log(mean_rate / (1 - mean_rate)), 0.0])
    converged = False
    for _ in range(_IRLS_MAX_ITER):
        eta = np.clip(design @ beta, -30.0, 30.0)
        p = 1.0 / (1.0 + np.exp(-eta))
        weight = np.maximum(total * p * (1.0 - p), 1e-12)
        z = eta + (counts - total * p) / weight
        sqrt_w = np.sqrt(weight)
        new_beta, *_ = np.linalg.lstsq(
            design * sqrt_w[:, None], z * sqrt_w, rcond=None
        )
        step = float(np.max(np.abs(new_beta - beta)))
        beta = new_beta
        if step < _IRLS_TOLERANCE:
            converged = True
            break

    intercept, slope = float(beta[0]), float(beta[1])
    raw = -intercept / slope if slope != 0.0 else math.nan
    if converged and math.isfinite(raw):
        return LogisticFit(intercept, slope, raw, True)
    rho50 = float(np.clip(raw, 1e-9, 1.0)) if math.isfinite(raw) else math.nan
    return LogisticFit(intercept, slope, rho50, False)


# ---------------------------------------------------------------------------
# phase transitions


@dataclass
class PhaseGrid:
    """Success counts over a (lambda, rho) grid plus per-column 50% fits.

    ``counts[label][i][j]`` holds the success count of algorithm ``label``
    at ``lambdas[i]``, ``rhos[j]``; cells with k > m are absent (None).
    ``fits[label][i]`` is the logistic fit down column ``lambdas[i]``.
    """

    n: int
    ensemble: str
    trials_per_cell: int
    master_seed: int
    lambdas: list[float]
    rhos: list[float]
    counts: dict[str, list[list[int | None]]]
    fits: dict[str, list[LogisticFit | None]]

    def rho50(self, label: str, lambda_index: int = 0) -> float:
        fit = self.fits[label][lambda_index]
        if fit is None:
            raise ValueError("no fit available for this column")
        return fit.rho50

    def cell_sizes(self, lambda_index: int) -> list[tuple[int, int] | None]:
        """(m, k) per rho for one lambda column, None where absent."""
        m = round(self.lambdas[lambda_index] * self.n)
        out: list[tuple[int, int] | None] = []
        for rho in self.rhos:
            k = max(1, round(rho * m))
            out.append((m, k) if 1 <= k <= m else None)
        return out


DEFAULT_RHO_GRID = [round(0.05 * i, 10) for i in range(1, 21)]


def phase_transition(
    n: int,
    lambdas: Sequence[float],
    rhos: Sequence[float],
    algorithms: Mapping[str, AlgorithmLike] | Sequence[str],
    trials: int,
    ensemble: str,
    master_seed: int,
    workers: int = 1,
) -> PhaseGrid:
    """Empirical phase transition over undersampling/sparsity ratios.

    For each cell, ``m = round(lambda n)`` and ``k = max(1, round(rho m))``;
    cells with ``k > m`` are skipped. All algorithms share per-cell trial
    seeds, so they face identical instances.
    """
    if isinstance(algorithms, Mapping):
        algo_map = dict(algorithms)
    else:
        algo_map = {name: name for name in algorithms}
    if not algo_map:
        raise EmptyInputError("no algorithms requested")
    if trials < 1:
        raise ValueError("trials must be positive")
    lambdas = [float(v) for v in lambdas]
    rhos = [float(v) for v in rhos]

    specs: list[TrialSpec] = []
    owners: list[tuple[str, int, int]] = []
    for label, algo in algo_map.items():
        for i, lam in enumerate(lambdas):
            m = round(lam * n)
            for j, rho in enumerate(rhos):
                if m < 1:
                    continue
                k = max(1, round(rho * m))
                if k > m:
                    continue
                config = resolve_algorithm(algo, m, k, None)
                for t in range(trials):
                    specs.append(
                        TrialSpec(
                            n=n,
                            m=m,
                            k=k,
                            ensemble=ensemble,
                            algorithm=config,
                            master_seed=master_seed,
                            trial_index=t,
                        )
                    )
                    owners.append((label, i, j))

    records = run_trials(specs, workers=workers)

    counts: dict[str, list[list[int | None]]] = {
        label: [[None] * len(rhos) for _ in lambdas] for label in algo_map
    }
    for (label, i, j), record in zip(owners, records):
        cell = counts[label][i][j]
        counts[label][i][j] = (0 if cell is None else cell) + int(record.exact)

    fits: dict[str, list[LogisticFit | None]] = {}
    for label in algo_map:
        column_fits: list[LogisticFit | None] = []
        for i in range(len(lambdas)):
            present = [
                (rho, counts[label][i][j])
                for j, rho in enumerate(rhos)
                if counts[label][i][j] is not None
            ]
            if len({rho for rho, _ in present}) < 2:
                column_fits.append(None)
                continue
            column_fits.append(
                fit_logistic_50(
                    [rho for rho, _ in present],
                    [c for _, c in present],
                    trials,
                )
            )
        fits[label] = column_fits

    return PhaseGrid(
        n=n,
        ensemble=ensemble,
        trials_per_cell=trials,
        master_seed=master_seed,
        lambdas=lambdas,
        rhos=rhos,
        counts=counts,
        fits=fits,
    )
