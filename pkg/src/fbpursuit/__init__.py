"""Sparse-signal recovery with forward-backward pursuit and baselines.

The package offers three layers:

* functional solvers (:func:`fbp`, :func:`omp`, :func:`sp`,
  :func:`l0_oracle`) over explicit config dataclasses,
* scikit-learn style estimators (:class:`ForwardBackwardPursuit`,
  :class:`OrthogonalMatchingPursuit`, :class:`SubspacePursuit`),
* a reproducible benchmark harness (trials, sweeps, phase transitions,
  block-wise image recovery) with CSV/JSON/PGM outputs and a ``pursuit``
  command-line interface.
"""

__version__ = "0.1.0"

from .estimators import (
    ForwardBackwardPursuit,
    OrthogonalMatchingPursuit,
    SubspacePursuit,
    check_problem,
)
from .exceptions import (
    BadDimensionsError,
    EmptyInputError,
    InstanceTooLargeError,
    InsufficientCandidatesError,
    PursuitError,
    RankDeficientError,
    UnsupportedImageError,
    ZeroSignalError,
)
from .experiments import (
    LogisticFit,
    PhaseGrid,
    SweepPoint,
    SweepSummary,
    TrialRecord,
    TrialSpec,
    anmse,
    distortion_db,
    exact_recovery,
    fit_logistic_50,
    nmse,
    noisy_epsilon,
    phase_transition,
    run_snr_sweep,
    run_sweep,
    run_trial,
    run_trials,
    standard_algorithm,
    trial_seed,
)
from .imaging import (
    GrayImage,
    ImageRecovery,
    block_analysis,
    block_synthesis,
    haar_matrix,
    haar_synthesis,
    psnr,
    quantize,
    read_pgm,
    recover_image,
    sparsify_blocks,
    synthetic_image,
    write_pgm,
)
from .linalg import (
    bottom_k_by_magnitude,
    correlate,
    least_squares,
    top_k_by_magnitude,
)
from .pursuit import (
    CONVERGED,
    ILL_POSED_PROJECTION,
    RESIDUAL_STALLED,
    STATUSES,
    SUPPORT_CAP_REACHED,
    FbpConfig,
    L0Config,
    OmpConfig,
    RecoveryResult,
    SpConfig,
    fbp,
    l0_oracle,
    omp,
    sp,
)
from .rng import Rng, mix64, sample_standard_normal, splitmix64
from .signals import (
    CARS,
    ENSEMBLES,
    GAUSSIAN,
    UNIFORM,
    Observation,
    SparseSignal,
    add_noise,
    observe,
    sample_observation_matrix,
    sample_sparse_signal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
