"""Command-line entry point for the halting-time laboratory.

Usage:
    python cli.py run-cg --preset cg-universal --ensemble LUE --out results
    python cli.py run-spinglass --ensemble bernoulli --trials 1000
    python cli.py run-deepnet --preset deepnet-desk --mnist-dir data/mnist
    python cli.py analyze results/cg-universal-lue --plot
    python cli.py compare results/cg-universal-loe results/cg-universal-lue
    python cli.py table results/cg-universal-loe results/cg-universal-lue
    python cli.py calibrate cg --preset cg-universal --target 366
    python cli.py delete cg-smoke-loe --out results
    python cli.py list-presets
"""

import argparse
import itertools
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional

import pandas as pd
from pydantic import ValidationError

from config.presets import PRESETS
from config.settings import get_settings
from core.deep_net import IDXFormatError
from core.harness import (
    ConfigurationError,
    TrialFailureError,
    InsufficientTrialsError,
    run_experiment,
    check_flagged_fraction,
    converged_halting_times,
    find_reference,
    summarize,
    compare_ensembles,
    calibrate_threshold,
    model_label,
    ensemble_label,
)
from core.stats import DegenerateSampleError, NormalizedSample, histogram, normalize_fluctuations
from core.storage import (
    Algorithm,
    ExperimentConfig,
    HistogramSpec,
    ResultsStore,
    RunLogger,
    TrialRecord,
)
from exports import (
    export_summary_csv,
    export_histogram_csv,
    export_normalized_csv,
    export_comparison_csv,
    export_fluctuation_figure,
    import_normalized_csv,
    import_summary_csv,
    create_reference_table,
    create_comparison_table,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TRIALS = 2

RUN_COMMANDS = {
    "run-cg": Algorithm.CG,
    "run-spinglass": Algorithm.SPIN_GLASS,
    "run-deepnet": Algorithm.DEEP_NET,
}

CALIBRATE_TARGETS = {
    "cg": Algorithm.CG,
    "spinglass": Algorithm.SPIN_GLASS,
    "deepnet": Algorithm.DEEP_NET,
}

# CLI flag -> ExperimentConfig field
FLAG_FIELDS = {
    "trials": "trials",
    "n": "n",
    "m": "m",
    "eps": "eps",
    "max_iter": "max_iter",
    "ensemble": "ensemble",
    "seed": "seed",
    "threads": "threads",
    "eta": "eta",
    "gradient_norm": "gradient_norm",
    "match_coupling_scale": "match_coupling_scale",
    "layer_sizes": "layer_sizes",
    "samples": "samples",
    "batch_size": "batch_size",
    "learning_rate": "learning_rate",
    "cap": "cap",
    "eval_samples": "eval_samples",
    "train_images": "train_images_path",
    "train_labels": "train_labels_path",
    "test_images": "test_images_path",
    "test_labels": "test_labels_path",
    "record_history": "record_history",
}


def setup_logging(debug: bool = False) -> None:
    """Install a single stderr handler on the root logger."""
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(logging.DEBUG if debug else logging.INFO)


# =============================================================================
# ARGUMENTS
# =============================================================================

def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output directory (default: HALTING_OUTPUT_DIR or ./results)")
    parser.add_argument("--debug", action="store_true", help="verbose logging")
    parser.add_argument("--quiet", action="store_true", help="no progress bar")


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment document")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="named starting document")
    parser.add_argument("--experiment-id", help="output sub-directory name")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--n", type=int, help="dimension N (CG system size / number of spins)")
    parser.add_argument("--m", type=int, help="CG inner dimension M")
    parser.add_argument("--eps", type=float, help="halting threshold")
    parser.add_argument("--max-iter", type=int)
    parser.add_argument("--ensemble", help="LOE/LUE/PBE, gaussian/bernoulli/uniform or mnist/noise")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--wall-time", action="store_true", help="record per-trial wall time")
    parser.add_argument("--record-history", action="store_true", default=None,
                        help="write per-iteration residuals / energies / costs to history.csv")

    group = parser.add_argument_group("spin glass")
    group.add_argument("--eta", type=float, help="step size")
    group.add_argument("--gradient-norm", choices=["ambient", "tangential"])
    group.add_argument("--match-coupling-scale", action=argparse.BooleanOptionalAction, default=None,
                       help="scale step and threshold by the coupling law's st.dev (default on)")

    group = parser.add_argument_group("deep net")
    group.add_argument("--layer-sizes", type=int, nargs="+", help="widths from input to output, e.g. 784 50 30 10")
    group.add_argument("--samples", type=int, help="training items drawn per trial")
    group.add_argument("--batch-size", type=int)
    group.add_argument("--learning-rate", type=float)
    group.add_argument("--stopping", choices=["avg_cost_diff", "grad_norm"])
    group.add_argument("--threshold", type=float, help="stopping-rule threshold")
    group.add_argument("--window", type=int, help="AvgCostDiff window")
    group.add_argument("--cost-source", choices=["minibatch", "full"])
    group.add_argument("--cap", type=int, help="iteration cap")
    group.add_argument("--eval-samples", type=int, help="held-out items for test accuracy")
    group.add_argument("--mnist-dir", help="directory with the MNIST IDX files")
    group.add_argument("--train-images")
    group.add_argument("--train-labels")
    group.add_argument("--test-images")
    group.add_argument("--test-labels")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halting",
        description="Measure and compare halting-time fluctuations",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command, algorithm in RUN_COMMANDS.items():
        sub = subparsers.add_parser(command, help=f"run a {algorithm.value} experiment")
        _add_experiment_flags(sub)
        _add_common_flags(sub)
        sub.add_argument("--plot", action="store_true", help="write fluctuations.png")
        sub.add_argument("--include-flagged", action="store_true",
                         help="use non-converged trials in the statistics")

    sub = subparsers.add_parser("analyze", help="summarize a finished experiment")
    sub.add_argument("path", help="experiment directory or records.csv")
    sub.add_argument("--plot", action="store_true")
    sub.add_argument("--bins", type=int, help="histogram bins")
    sub.add_argument("--include-flagged", action="store_true")
    _add_common_flags(sub)

    sub = subparsers.add_parser("compare", help="pairwise comparison of normalized fluctuations")
    sub.add_argument("paths", nargs="+", help="two or more experiment directories (records.csv or normalized.csv)")
    sub.add_argument("--alpha", type=float, help="KS significance level")
    sub.add_argument("--plot", action="store_true")
    sub.add_argument("--include-flagged", action="store_true")
    _add_common_flags(sub)

    sub = subparsers.add_parser("table", help="collect summary.csv rows of analyzed experiments")
    sub.add_argument("paths", nargs="+", help="experiment directories")
    _add_common_flags(sub)

    sub = subparsers.add_parser("delete", help="remove experiment directories from the output root")
    sub.add_argument("experiment_ids", nargs="+")
    _add_common_flags(sub)

    sub = subparsers.add_parser("calibrate", help="tune a halting threshold on pilot runs")
    sub.add_argument("target_algorithm", choices=sorted(CALIBRATE_TARGETS))
    sub.add_argument("--target", type=float, required=True, help="desired mean halting time")
    sub.add_argument("--pilot-trials", type=int, default=50)
    sub.add_argument("--iterations", type=int, default=12)
    sub.add_argument("--lower", type=float)
    sub.add_argument("--upper", type=float)
    _add_experiment_flags(sub)
    _add_common_flags(sub)

    sub = subparsers.add_parser("list-presets", help="show the named presets")
    _add_common_flags(sub)

    return parser


# =============================================================================
# CONFIG ASSEMBLY
# =============================================================================

def build_config(args: argparse.Namespace, algorithm: Algorithm) -> ExperimentConfig:
    """
    Merge preset, config file and flags (in that order) into an ExperimentConfig.

    Args:
        args: Parsed arguments
        algorithm: Algorithm implied by the subcommand

    Returns:
        Validated ExperimentConfig
    """
    document: dict[str, Any] = {}
    if args.preset:
        document.update(json.loads(json.dumps(PRESETS[args.preset])))
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigurationError(f"Config file not found: {path}", field="config")
        try:
            document.update(json.loads(path.read_text(encoding="utf-8")))
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Config file {path} is not valid JSON: {e}", field="config") from e

    if document.get("algorithm", algorithm.value) != algorithm.value:
        raise ConfigurationError(
            f"Config describes a {document['algorithm']} experiment, command expects {algorithm.value}",
            field="algorithm",
        )
    document["algorithm"] = algorithm.value

    for flag, field in FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            document[field] = value

    stopping_flags = {
        "kind": args.stopping,
        "threshold": args.threshold,
        "window": args.window,
        "cost_source": args.cost_source,
    }
    if any(v is not None for v in stopping_flags.values()):
        stopping = dict(document.get("stopping") or {})
        stopping.update({k: v for k, v in stopping_flags.items() if v is not None})
        if "threshold" not in stopping:
            stopping["threshold"] = get_settings().deep_net.threshold
        document["stopping"] = stopping

    document.setdefault("ensemble", _default_ensemble(algorithm))
    document.setdefault("trials", 100)
    if args.experiment_id:
        document["experiment_id"] = args.experiment_id
    elif "experiment_id" not in document:
        prefix = args.preset or algorithm.value.replace("_", "")
        document["experiment_id"] = f"{prefix}-{document['ensemble']}".lower()
    if args.out:
        document["output_dir"] = args.out

    return ExperimentConfig.model_validate(document)


def _default_ensemble(algorithm: Algorithm) -> str:
    return {Algorithm.CG: "LOE", Algorithm.SPIN_GLASS: "gaussian", Algorithm.DEEP_NET: "mnist"}[algorithm]


def _apply_runtime_settings(args: argparse.Namespace) -> None:
    settings = get_settings()
    if getattr(args, "quiet", False):
        settings.harness.show_progress = False
    if getattr(args, "wall_time", False):
        settings.harness.record_wall_time = True
    if getattr(args, "mnist_dir", None):
        settings.deep_net.mnist_dir = args.mnist_dir


def _output_root(args: argparse.Namespace, config: Optional[ExperimentConfig] = None) -> Path:
    if config is not None and config.output_dir:
        return Path(config.output_dir)
    if getattr(args, "out", None):
        return Path(args.out)
    return Path(get_settings().storage.output_dir)


# =============================================================================
# ANALYSIS OUTPUTS
# =============================================================================

def write_analysis(
    directory: Path,
    records: list[TrialRecord],
    model: str,
    ensemble: str,
    include_flagged: bool = False,
    bins: Optional[int] = None,
    plot: bool = False,
):
    """
    Write summary.csv, hist.csv, normalized.csv (and fluctuations.png) for one experiment.

    Returns:
        The SummaryReport
    """
    harness = get_settings().harness
    report = summarize(
        records,
        reference=find_reference(model, ensemble),
        model=model,
        ensemble=ensemble,
        include_flagged=include_flagged,
    )
    normalized = normalize_fluctuations(converged_halting_times(records, include_flagged=include_flagged))
    spec = HistogramSpec(bin_count=bins or harness.hist_bins, range=harness.hist_range)

    export_summary_csv([report], directory / "summary.csv")
    export_histogram_csv(histogram(normalized.values, spec), directory / "hist.csv")
    export_normalized_csv(normalized, directory / "normalized.csv")
    if plot:
        export_fluctuation_figure({ensemble: normalized}, directory / "fluctuations.png",
                                  title=f"{model}, {ensemble}")
    if report.censored_fraction > 0:
        logger.warning(f"{report.censored_fraction:.1%} of trials censored (not converged)")
    return report


def _print_report(report) -> None:
    table = create_reference_table([report])
    with pd.option_context("display.width", 160, "display.max_columns", 30):
        print(table.to_string(index=False))


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_run(args: argparse.Namespace) -> int:
    algorithm = RUN_COMMANDS[args.command]
    config = build_config(args, algorithm)
    store = ResultsStore(_output_root(args, config))
    store.save_config(config)
    run_logger = RunLogger(store.events_path(config.experiment_id))

    records = run_experiment(config, run_logger=run_logger)
    store.save_records(config.experiment_id, records)

    directory = store.get_experiment_path(config.experiment_id)
    try:
        report = write_analysis(
            directory, records, model_label(config), ensemble_label(config),
            include_flagged=args.include_flagged, plot=args.plot,
        )
        _print_report(report)
    except (InsufficientTrialsError, DegenerateSampleError) as e:
        logger.warning(f"No summary for {config.experiment_id}: {e}")

    check_flagged_fraction(records)
    print(f"Results written to {directory}")
    return EXIT_OK


def _load_experiment(path: Path) -> tuple[Path, list[TrialRecord], Optional[ExperimentConfig]]:
    directory = path.parent if path.is_file() else path
    if not (directory / "records.csv").exists():
        raise ConfigurationError(f"No records.csv in {directory}", field="path")
    store = ResultsStore(directory.parent)
    records = store.load_records_from(path)
    config = store.load_config(directory.name)
    return directory, records, config


def _labels(directory: Path, config: Optional[ExperimentConfig]) -> tuple[str, str]:
    if config is None:
        return directory.name, directory.name
    return model_label(config), ensemble_label(config)


def cmd_analyze(args: argparse.Namespace) -> int:
    directory, records, config = _load_experiment(Path(args.path))
    model, ensemble = _labels(directory, config)
    report = write_analysis(directory, records, model, ensemble,
                            include_flagged=args.include_flagged, bins=args.bins, plot=args.plot)
    _print_report(report)
    return EXIT_OK


def _load_normalized(path: Path, include_flagged: bool) -> tuple[str, NormalizedSample]:
    """Label and normalized fluctuations from records.csv, or from a bare normalized.csv export."""
    directory = path.parent if path.is_file() else path
    if not (directory / "records.csv").exists() and (directory / "normalized.csv").exists():
        if include_flagged:
            logger.warning(f"{directory.name}: only normalized.csv available, --include-flagged ignored")
        return directory.name, import_normalized_csv(directory / "normalized.csv")
    _, records, _ = _load_experiment(path)
    times = converged_halting_times(records, include_flagged=include_flagged)
    if times.size == 0:
        raise InsufficientTrialsError(0)
    return directory.name, normalize_fluctuations(times)


def cmd_compare(args: argparse.Namespace) -> int:
    if len(args.paths) < 2:
        raise ConfigurationError("compare needs at least two experiment directories", field="paths")

    samples = dict(_load_normalized(Path(raw), args.include_flagged) for raw in args.paths)

    reports = [
        compare_ensembles(samples[a], samples[b], alpha=args.alpha, label_a=a, label_b=b)
        for a, b in itertools.combinations(samples, 2)
    ]

    out = _output_root(args) / ("compare-" + "-".join(samples))
    out.mkdir(parents=True, exist_ok=True)
    export_comparison_csv(reports, out / "comparison.csv")
    if args.plot:
        export_fluctuation_figure(samples, out / "fluctuations.png")

    with pd.option_context("display.width", 160, "display.max_columns", 30):
        print(create_comparison_table(reports).to_string(index=False))
    print(f"Comparison written to {out}")
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    frames = []
    for raw in args.paths:
        path = Path(raw) / "summary.csv"
        if not path.exists():
            raise ConfigurationError(f"No summary.csv in {raw}; run analyze first", field="paths")
        frame = import_summary_csv(path)
        frame.insert(0, "experiment", Path(raw).name)
        frames.append(frame)

    table = pd.concat(frames, ignore_index=True)
    root = _output_root(args)
    root.mkdir(parents=True, exist_ok=True)
    table.to_csv(root / "table.csv", index=False, lineterminator="\n")
    with pd.option_context("display.width", 160, "display.max_columns", 30):
        print(table.to_string(index=False))
    return EXIT_OK


def cmd_delete(args: argparse.Namespace) -> int:
    store = ResultsStore(_output_root(args))
    missing = [e for e in args.experiment_ids if not store.delete_experiment(e)]
    for experiment_id in missing:
        logger.error(f"No experiment '{experiment_id}' in {store.base_path}")
    deleted = len(args.experiment_ids) - len(missing)
    print(f"Deleted {deleted} experiment(s) from {store.base_path}")
    return EXIT_CONFIG if missing else EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    algorithm = CALIBRATE_TARGETS[args.target_algorithm]
    config = build_config(args, algorithm)
    result = calibrate_threshold(
        config,
        target_mean=args.target,
        pilot_trials=args.pilot_trials,
        lower=args.lower,
        upper=args.upper,
        iterations=args.iterations,
    )

    root = _output_root(args, config)
    root.mkdir(parents=True, exist_ok=True)
    path = root / "calibration.csv"
    row = pd.DataFrame([{
        "algorithm": algorithm.value,
        "ensemble": config.ensemble,
        "n": config.n,
        "target": result.target,
        "threshold": result.threshold,
        "mean_halting_time": result.mean_halting_time,
        "pilot_trials": result.pilot_trials,
        "seed": config.seed,
    }])
    row.to_csv(path, mode="a", header=not path.exists(), index=False, lineterminator="\n")

    print(f"threshold={result.threshold:.6g} mean halting time={result.mean_halting_time:.1f} "
          f"(target {result.target:g}, {len(result.history)} pilot runs)")
    return EXIT_OK


def cmd_list_presets(args: argparse.Namespace) -> int:
    for name in sorted(PRESETS):
        preset = PRESETS[name]
        print(f"{name:24s} {preset['algorithm']:10s} trials={preset['trials']}")
    return EXIT_OK


COMMANDS = {
    "run-cg": cmd_run,
    "run-spinglass": cmd_run,
    "run-deepnet": cmd_run,
    "analyze": cmd_analyze,
    "compare": cmd_compare,
    "table": cmd_table,
    "delete": cmd_delete,
    "calibrate": cmd_calibrate,
    "list-presets": cmd_list_presets,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(debug=args.debug or get_settings().debug)
    _apply_runtime_settings(args)

    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, ValidationError, IDXFormatError, FileNotFoundError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except (InsufficientTrialsError, DegenerateSampleError) as e:
        logger.error(f"Cannot summarize: {e}")
        return EXIT_CONFIG
    except TrialFailureError as e:
        logger.error(str(e))
        return EXIT_TRIALS


if __name__ == "__main__":
    sys.exit(main())
