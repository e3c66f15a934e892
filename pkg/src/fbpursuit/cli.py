"""Command-line interface for recovery trials, sweeps, phase maps and images.

Exit codes: 0 on success, 1 when ``--strict`` is set and a recovery did not
converge, 2 on usage or input errors. Every file output gets a sibling
``<path>.manifest.json`` recording the invocation; commands that print to
stdout embed the manifest in the JSON payload instead.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .exceptions import PursuitError
from .experiments import (
    TrialSpec,
    phase_transition,
    run_snr_sweep,
    run_sweep,
    run_trial,
    standard_algorithm,
    trial_seed,
)
from .imaging import (
    GrayImage,
    read_pgm,
    recover_image,
    sparsify_blocks,
    synthetic_image,
    write_pgm,
)
from .pursuit import CONVERGED
from .reports import (
    RunManifest,
    ensure_parent_dir,
    json_safe,
    utc_now,
    write_manifest,
    write_phase_csv,
    write_phase_rho50_json,
    write_sweep_summary_csv,
    write_sweep_summary_json,
    write_trial_records_csv,
    sweep_summary_payload,
    phase_rho50_payload,
)

_ALGORITHMS = ("fbp", "omp", "sp", "l0")


def _parse_list(text: str, cast):
    values = [cast(part) for part in text.split(",") if part.strip()]
    if not values:
        raise argparse.ArgumentTypeError(f"empty list: {text!r}")
    return values


def _parse_range(text: str, cast):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError("step must be positive")
    values = []
    value = start
    while value <= stop + 1e-9:
        values.append(cast(round(value, 10)))
        value += step
    if not values:
        raise argparse.ArgumentTypeError(f"empty range: {text!r}")
    return values


def _int_list(text):
    return _parse_list(text, int)


def _float_list(text):
    return _parse_list(text, float)


def _int_range(text):
    return _parse_range(text, lambda v: int(round(v)))


def _float_range(text):
    return _parse_range(text, float)


def _size(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}")
    try:
        width, height = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size {text!r}") from exc
    return width, height


def _default_threads() -> int:
    env = os.environ.get("PURSUIT_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads (default: PURSUIT_THREADS or 1)",
    )
    parser.add_argument(
        "--strict",
        action="store_true",
        help="exit 1 if any recovery fails to converge",
    )


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=int, default=None)
    parser.add_argument("--beta", type=int, default=None)
    parser.add_argument("--epsilon", "--eps", type=float, default=None)
    parser.add_argument("--k-max", "--kmax", type=int, default=None)
    parser.add_argument(
        "--skip-backward-projection", action="store_true", default=False
    )
    parser.add_argument("--sp-k", type=int, default=None, help="sp target sparsity")
    parser.add_argument("--max-iter", type=int, default=None, help="sp iteration cap")


def _overrides_from(args) -> dict:
    overrides = {}
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if args.beta is not None:
        overrides["beta"] = args.beta
    if args.epsilon is not None:
        overrides["epsilon"] = args.epsilon
    if args.k_max is not None:
        overrides["k_max"] = args.k_max
    if args.skip_backward_projection:
        overrides["skip_backward_projection"] = True
    if args.sp_k is not None:
        overrides["k"] = args.sp_k
    if args.max_iter is not None:
        overrides["max_iter"] = args.max_iter
    return overrides


def _algorithm_factory(name: str, overrides: dict):
    def factory(m: int, k: int, snr_db: float | None):
        return standard_algorithm(name, m, k, snr_db, **dict(overrides))

    return factory


def _manifest(command: str, argv: list[str], seed: int | None, parameters: dict):
    return RunManifest(
        command=command,
        argv=list(argv),
        package_version=__version__,
        master_seed=seed,
        parameters=parameters,
        started_at=utc_now(),
    )


def _finish(manifest: RunManifest, outputs: list[str], t0: float) -> RunManifest:
    manifest.outputs = outputs
    manifest.finished_at = utc_now()
    manifest.duration_seconds = time.perf_counter() - t0
    return manifest


def _print_json(payload: dict) -> None:
    print(json.dumps(json_safe(payload), indent=2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pursuit",
        description="Sparse-signal recovery benchmarks "
        "(forward-backward pursuit and baselines)",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    trial = sub.add_parser("trial", help="run a single seeded recovery trial")
    trial.add_argument("--n", type=int, required=True)
    trial.add_argument("--m", type=int, required=True)
    trial.add_argument("--k", type=int, required=True)
    trial.add_argument("--ensemble", choices=("gaussian", "uniform", "cars"),
                       default="gaussian")
    trial.add_argument("--snr", "--snr-db", type=float, default=None,
                       help="noise SNR in dB")
    trial.add_argument("--algo", choices=_ALGORITHMS, default="fbp")
    trial.add_argument("--trial-index", type=int, default=0)
    trial.add_argument("--out", default=None, help="write the JSON record here")
    _add_overrides(trial)
    _add_common(trial)

    sweep = sub.add_parser("sweep", help="sweep sparsity or SNR over many trials")
    sweep.add_argument("--n", type=int, required=True)
    sweep.add_argument("--m", type=int, required=True)
    sweep.add_argument("--ensemble", choices=("gaussian", "uniform", "cars"),
                       default="gaussian")
    sweep.add_argument("--algo", choices=_ALGORITHMS, default="fbp")
    group = sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--k-list", type=_int_list, default=None)
    group.add_argument("--k-range", type=_int_range, default=None,
                       help="start:stop:step")
    group.add_argument("--snr-list", type=_float_list, default=None,
                       help="SNR axis (requires --k)")
    group.add_argument("--snr-range", type=_float_range, default=None,
                       help="SNR axis start:stop:step (requires --k)")
    sweep.add_argument("--k", type=int, default=None,
                       help="fixed sparsity for SNR sweeps")
    sweep.add_argument("--snr", "--snr-db", type=float, default=None,
                       help="fixed SNR for sparsity sweeps")
    sweep.add_argument("--trials", type=int, default=500)
    sweep.add_argument("--out-prefix", "--out", default=None,
                       help="write PREFIX.records.csv, PREFIX.summary.json, "
                       "PREFIX.summary.csv")
    _add_overrides(sweep)
    _add_common(sweep)

    phase = sub.add_parser("phase", help="empirical phase-transition map")
    phase.add_argument("--n", type=int, required=True)
    lam = phase.add_mutually_exclusive_group(required=True)
    lam.add_argument("--lambda-list", "--lambda-grid", type=_float_list,
                     default=None)
    lam.add_argument("--lambda-range", type=_float_range, default=None)
    rho = phase.add_mutually_exclusive_group()
    rho.add_argument("--rho-list", "--rho-grid", type=_float_list, default=None)
    rho.add_argument("--rho-range", type=_float_range, default=None)
    phase.add_argument("--algos", type=lambda t: _parse_list(t, str),
                       default=["fbp", "omp", "sp"])
    phase.add_argument("--trials", type=int, default=50)
    phase.add_argument("--ensemble", choices=("gaussian", "uniform", "cars"),
                       default="gaussian")
    phase.add_argument("--out-prefix", "--out", default=None,
                       help="write PREFIX.phase.csv and PREFIX.rho50.json")
    _add_common(phase)

    image = sub.add_parser("image", help="block-wise compressed image recovery")
    src = image.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", "--in", default=None,
                     help="input PGM (binary, maxval 255)")
    src.add_argument("--synthetic", type=_size, default=None,
                     help="generate a WIDTHxHEIGHT test image")
    image.add_argument("--m", type=int, required=True,
                       help="measurements per 8x8 block (1..64)")
    image.add_argument("--algo", choices=("fbp", "omp", "sp"), default="fbp")
    image.add_argument("--sparsify", "--k", type=int, default=None,
                       help="pre-sparsify each block to this many coefficients")
    image.add_argument("--out", default=None, help="write the recovered PGM here")
    image.add_argument("--save-input", default=None,
                       help="also write the (possibly sparsified) input PGM")
    image.add_argument("--report", default=None, help="write a metrics CSV here")
    _add_overrides(image)
    _add_common(image)

    return parser


def _cmd_trial(args, argv) -> int:
    t0 = time.perf_counter()
    overrides = _overrides_from(args)
    config = standard_algorithm(args.algo, args.m, args.k, args.snr, **overrides)
    spec = TrialSpec(
        n=args.n,
        m=args.m,
        k=args.k,
        ensemble=args.ensemble,
        algorithm=config,
        master_seed=args.seed,
        trial_index=args.trial_index,
        snr_db=args.snr,
    )
    record = run_trial(spec)
    payload = {
        "schema": "pursuit-trial@1",
        "n": spec.n,
        "m": spec.m,
        "k": spec.k,
        "ensemble": spec.ensemble,
        "snr_db": spec.snr_db,
        "algorithm": args.algo,
        "parameters": vars(config).copy(),
        "seed": record.seed,
        "master_seed": spec.master_seed,
        "trial_index": spec.trial_index,
        "exact": record.exact,
        "nmse": record.nmse,
        "iterations": record.iterations,
        "runtime_seconds": record.runtime_seconds,
        "status": record.status,
    }
    manifest = _manifest("trial", argv, args.seed, {
        "n": args.n, "m": args.m, "k": args.k, "ensemble": args.ensemble,
        "snr_db": args.snr, "algorithm": args.algo,
    })
    if args.out:
        ensure_parent_dir(args.out)
        from .reports import write_json

        write_json(args.out, payload)
        write_manifest(_finish(manifest, [args.out], t0), args.out)
    else:
        payload["manifest"] = _finish(manifest, [], t0).payload()
        _print_json(payload)
    if args.strict and record.status != CONVERGED:
        return 1
    return 0


def _cmd_sweep(args, argv) -> int:
    t0 = time.perf_counter()
    threads = args.threads if args.threads is not None else _default_threads()
    overrides = _overrides_from(args)
    factory = _algorithm_factory(args.algo, overrides)
    snr_axis = args.snr_list or args.snr_range
    if snr_axis is not None:
        if args.k is None:
            raise PursuitError("SNR sweeps require --k")
        summary = run_snr_sweep(
            n=args.n, m=args.m, k=args.k, ensemble=args.ensemble,
            algorithm=factory, snr_values=snr_axis, trials=args.trials,
            master_seed=args.seed, workers=threads,
        )
    else:
        k_values = args.k_list or args.k_range
        summary = run_sweep(
            n=args.n, m=args.m, ensemble=args.ensemble, algorithm=factory,
            k_values=k_values, trials=args.trials, master_seed=args.seed,
            snr_db=args.snr, workers=threads,
        )
    manifest = _manifest("sweep", argv, args.seed, {
        "n": args.n, "m": args.m, "ensemble": args.ensemble,
        "algorithm": args.algo, "trials": args.trials,
        "points": [[p.k, p.snr_db] for p in summary.points],
        "threads": threads,
    })
    if args.out_prefix:
        records_path = f"{args.out_prefix}.records.csv"
        json_path = f"{args.out_prefix}.summary.json"
        csv_path = f"{args.out_prefix}.summary.csv"
        for path in (records_path, json_path, csv_path):
            ensure_parent_dir(path)
        write_trial_records_csv(records_path, summary.records)
        write_sweep_summary_json(json_path, summary)
        write_sweep_summary_csv(csv_path, summary)
        outputs = [records_path, json_path, csv_path]
        _finish(manifest, outputs, t0)
        for path in outputs:
            write_manifest(manifest, path)
    else:
        payload = sweep_summary_payload(summary)
        payload["manifest"] = _finish(manifest, [], t0).payload()
        _print_json(payload)
    if args.strict and any(r.status != CONVERGED for r in summary.records):
        return 1
    return 0


def _cmd_phase(args, argv) -> int:
    t0 = time.perf_counter()
    threads = args.threads if args.threads is not None else _default_threads()
    lambdas = args.lambda_list or args.lambda_range
    rhos = args.rho_list or args.rho_range
    if rhos is None:
        rhos = _float_range("0.05:1.0:0.05")
    for name in args.algos:
        if name not in _ALGORITHMS:
            raise PursuitError(f"unknown algorithm {name!r}")
    grid = phase_transition(
        n=args.n, lambdas=lambdas, rhos=rhos, algorithms=args.algos,
        trials=args.trials, ensemble=args.ensemble, master_seed=args.seed,
        workers=threads,
    )
    manifest = _manifest("phase", argv, args.seed, {
        "n": args.n, "lambdas": lambdas, "rhos": rhos,
        "algorithms": list(args.algos), "trials": args.trials,
        "ensemble": args.ensemble, "threads": threads,
    })
    if args.out_prefix:
        csv_path = f"{args.out_prefix}.phase.csv"
        json_path = f"{args.out_prefix}.rho50.json"
        for path in (csv_path, json_path):
            ensure_parent_dir(path)
        write_phase_csv(csv_path, grid)
        write_phase_rho50_json(json_path, grid)
        outputs = [csv_path, json_path]
        _finish(manifest, outputs, t0)
        for path in outputs:
            write_manifest(manifest, path)
    else:
        payload = phase_rho50_payload(grid)
        payload["manifest"] = _finish(manifest, [], t0).payload()
        _print_json(payload)
    return 0


def _cmd_image(args, argv) -> int:
    t0 = time.perf_counter()
    threads = args.threads if args.threads is not None else _default_threads()
    if args.input is not None:
        source = read_pgm(args.input)
        source_name = args.input
    else:
        width, height = args.synthetic
        source = synthetic_image(width, height, args.seed)
        source_name = f"synthetic:{width}x{height}"
    if args.sparsify is not None:
        source = sparsify_blocks(source, args.sparsify)
    overrides = _overrides_from(args)
    factory = _algorithm_factory(args.algo, overrides)
    recovery = recover_image(
        source, args.m, algorithm=factory, master_seed=args.seed, workers=threads
    )
    status_counts: dict[str, int] = {}
    for status in recovery.block_statuses:
        status_counts[status] = status_counts.get(status, 0) + 1
    payload = {
        "schema": "pursuit-image@1",
        "input": source_name,
        "algorithm": args.algo,
        "m": args.m,
        "blocks": len(recovery.block_statuses),
        "status_counts": status_counts,
        "psnr_db": recovery.psnr_db,
        "master_seed": args.seed,
    }
    manifest = _manifest("image", argv, args.seed, {
        "input": source_name, "m": args.m, "algorithm": args.algo,
        "sparsify": args.sparsify, "threads": threads,
    })
    outputs = []
    if args.save_input:
        ensure_parent_dir(args.save_input)
        write_pgm(args.save_input, source)
        outputs.append(args.save_input)
    if args.out:
        ensure_parent_dir(args.out)
        write_pgm(args.out, recovery.image)
        outputs.append(args.out)
    if args.report:
        ensure_parent_dir(args.report)
        _write_image_report(args.report, source_name, args, recovery, status_counts)
        outputs.append(args.report)
    _finish(manifest, outputs, t0)
    for path in outputs:
        write_manifest(manifest, path)
    payload["outputs"] = outputs
    if not outputs:
        payload["manifest"] = manifest.payload()
    _print_json(payload)
    if args.strict and any(s != CONVERGED for s in recovery.block_statuses):
        return 1
    return 0


def _write_image_report(path, source_name, args, recovery, status_counts) -> None:
    import csv as _csv

    from .reports import format_float

    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["input", "algorithm", "m", "seed", "blocks", "converged_blocks",
             "psnr_db"]
        )
        writer.writerow(
            [
                source_name,
                args.algo,
                str(args.m),
                str(args.seed),
                str(len(recovery.block_statuses)),
                str(status_counts.get(CONVERGED, 0)),
                format_float(recovery.psnr_db),
            ]
        )


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "trial": _cmd_trial,
        "sweep": _cmd_sweep,
        "phase": _cmd_phase,
        "image": _cmd_image,
    }
    try:
        return handlers[args.command](args, argv)
    except (PursuitError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
