#!/usr/bin/env python3
"""
Credit Index CLI
================

Batch front-end over CSV datasets of firm financial ratios.

Modes:
    fit         fit weights and per-industry P3 distributions, write the model artifact
    score       rate new records with a saved model artifact
    evaluate    fit, then classification matrices, hold-out, logistic, F-test, Spearman,
                descriptive and normality tables
    sweep       classification matrices under alternative threshold tables
    toy         run the embedded worked example and check every intermediate value
    synthesize  write a seeded synthetic dataset

Exit codes: 0 success, 1 validation failure (usage errors included), 2 I/O failure,
3 numerical failure.

Usage:
    python credit_index_cli.py toy
    python credit_index_cli.py synthesize --output data.csv --seed 7
    python credit_index_cli.py fit --input data.csv --model model.yaml --output scored.csv
    python credit_index_cli.py score --input new.csv --model model.yaml --output rated.csv
    python credit_index_cli.py evaluate --input data.csv --report report.json
    python credit_index_cli.py sweep --input data.csv --thresholds ../config/sweep.yaml
    python credit_index_cli.py --config ../md/credit_index.md
"""

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

sys.path.insert(0, str(Path(__file__).parent.parent))

from lib import console
from lib.config import MODES, RunConfig, load_dataset_schema, load_thresholds
from lib.dataset_io import DatasetSchema, emit_scored, ingest, load_model, save_model, write_dataset
from lib.errors import ConfigurationError, CreditIndexError, SchemaError, ValidationFailure
from lib.evaluate import (
    compare_logistic,
    compare_scores_table,
    confusion,
    f_test_variance,
    mda_holdout,
    normality_comparison,
    pipeline_holdout,
    score_holdout,
    rating_to_binary_prediction,
    score_columns,
    spearman_rho,
    threshold_sweep,
)
from lib.pearson3 import ThresholdTable
from lib.pipeline import run_pipeline, score_new
from lib.report import create_report, emit_report, fits_section, model_section, render_report
from lib.synthetic import generate_dataset
from lib.toy import first_failure, run_toy_checks

Report = Optional[Dict[str, Any]]


def _require(value, flag: str, mode: str):
    if value is None:
        raise ConfigurationError(f"Mode '{mode}' needs {flag}")
    return value


def _in_sample(scored) -> Optional[Dict[str, Any]]:
    """Agency vs model bankruptcy index, when every record is graded."""
    if not scored or any(r.b_actual is None for r in scored):
        return None
    return confusion([r.b_actual for r in scored], rating_to_binary_prediction([r.grade for r in scored])).to_dict()


def _sweep_tables(config: RunConfig) -> List[ThresholdTable]:
    if len(config.thresholds) > 1:
        return config.thresholds
    base = config.active_thresholds
    return [base, base.with_bbb_upper(0.25), base.with_bbb_upper(0.5)]


# --- modes -----------------------------------------------------------------

def run_fit(config: RunConfig) -> Tuple[Report, int]:
    records = ingest(_require(config.input_path, "--input", "fit"), config.schema)
    model_path = _require(config.model_path, "--model", "fit")
    result = run_pipeline(records, thresholds=config.active_thresholds, workers=config.workers,
                          column_names=config.schema.ratio_columns)
    save_model(model_path, result.model, result.fits, config.schema.ratio_columns)
    if config.output_path:
        emit_scored(result.records, config.output_path, config.schema)

    results = {
        "model": model_section(result.model, list(config.schema.ratio_columns)),
        "fits": fits_section(result.fits, result.lmoments),
        "classification": {"in_sample": _in_sample(result.records)},
        "artifacts": {"model": model_path, "scored": config.output_path},
    }
    return create_report("fit", results, info=[f"{len(records)} records, {len(result.fits)} industries"]), 0


def run_score(config: RunConfig) -> Tuple[Report, int]:
    model, fits, columns = load_model(_require(config.model_path, "--model", "score"))
    schema = config.schema
    if schema.ratio_columns != columns:
        if schema.ratio_columns != DatasetSchema().ratio_columns:
            raise SchemaError(f"Dataset schema columns {list(schema.ratio_columns)} do not match "
                              f"the model's {list(columns)}")
        schema = replace(schema, ratio_columns=columns)

    records = ingest(_require(config.input_path, "--input", "score"), schema)
    output = _require(config.output_path, "--output", "score")
    scored = score_new(records, model, fits, config.active_thresholds)
    console.log("SCORE", f"Rated {len(scored)} records with table '{config.active_thresholds.name}'")
    emit_scored(scored, output, schema)

    results: Dict[str, Any] = {
        "model": model_section(model, list(columns)),
        "fits": fits_section(fits),
        "artifacts": {"scored": output},
    }
    matrix = _in_sample(scored)
    if matrix is not None:
        results["classification"] = {"scored": matrix}
    return create_report("score", results), 0


def run_evaluate(config: RunConfig) -> Tuple[Report, int]:
    records = ingest(_require(config.input_path, "--input", "evaluate"), config.schema)
    columns = config.schema.ratio_columns
    result = run_pipeline(records, thresholds=config.active_thresholds, workers=config.workers,
                          column_names=columns)
    if config.output_path:
        emit_scored(result.records, config.output_path, config.schema)

    scored = result.records
    scores = score_columns(scored)
    warnings: List[str] = []
    rating_holdout = pipeline_holdout(records, config.active_thresholds, config.holdout_fraction,
                                      config.seed, config.workers, columns)
    for industry in rating_holdout.details["topped_up_industries"]:
        warnings.append(f"Industry {industry}: hold-out test rows moved to training to reach the minimum fit size")
    by_score = score_holdout(records, config.holdout_fraction, config.seed, columns)
    results: Dict[str, Any] = {
        "model": model_section(result.model, list(columns)),
        "fits": fits_section(result.fits, result.lmoments),
        "classification": {
            "in_sample": _in_sample(scored),
            "rating_holdout": rating_holdout.matrix,
            "mda_holdout": mda_holdout(records, config.holdout_fraction, config.seed, columns).matrix,
            **{f"score_holdout_{name}": holdout.matrix for name, holdout in by_score.items()},
        },
        "logistic": compare_logistic(scored),
        "descriptives": compare_scores_table(scores),
        "normality": normality_comparison(records, columns),
        "sweep": threshold_sweep(scored, _sweep_tables(config)),
    }
    if "Z_A" in scores:
        results["f_test"] = f_test_variance(scores["Z_M"], scores["Z_A"])
        results["spearman"] = {"Z_M_vs_Z_A": spearman_rho(scores["Z_M"], scores["Z_A"]),
                               "Z_M_vs_Z_U": spearman_rho(scores["Z_M"], scores["Z_U"])}
    else:
        warnings.append("Z_A / Z_U need exactly five ratios; F-test and rank correlation skipped")
    for name, fit in results["logistic"].items():
        if not fit.converged:
            warnings.append(f"Logistic fit for {name} did not converge")
    return create_report("evaluate", results, warnings=warnings), 0


def run_sweep(config: RunConfig) -> Tuple[Report, int]:
    records = ingest(_require(config.input_path, "--input", "sweep"), config.schema)
    if config.model_path:
        model, fits, _ = load_model(config.model_path)
        scored = score_new(records, model, fits, config.active_thresholds)
    else:
        scored = run_pipeline(records, thresholds=config.active_thresholds, workers=config.workers,
                              column_names=config.schema.ratio_columns).records
    sweep = threshold_sweep(scored, _sweep_tables(config))
    return create_report("sweep", {"sweep": sweep}, info=[f"best variant: {sweep.best}"]), 0


def run_toy(config: RunConfig) -> Tuple[Report, int]:
    checks = run_toy_checks(thresholds=config.thresholds[0] if config.thresholds else None)
    failed = first_failure(checks)

    print(f"{'quantity':<10} {'expected':>10} {'actual':>12} {'tol':>8}  result")
    for check in checks:
        actual = check.actual if isinstance(check.actual, str) else f"{check.actual:.4f}"
        tol = f"{check.tolerance:g}" if check.tolerance else "exact"
        verdict = console.colour("PASS") if check.passed else console.colour("FAIL")
        print(f"{check.quantity:<10} {str(check.expected):>10} {actual:>12} {tol:>8}  {verdict}")

    passed = sum(c.passed for c in checks)
    console.log("TOY", f"{passed}/{len(checks)} checks passed")
    issues = []
    if failed is not None:
        issues.append(f"first failing quantity: {failed.quantity}")
        console.log("ERROR", f"Golden check failed at {failed.quantity}: expected {failed.expected}, "
                             f"got {failed.actual}")
    report = None
    if config.report_path:
        report = create_report("toy", {"golden_checks": checks}, status="failed" if failed else "success",
                               issues=issues)
    return report, 0 if failed is None else 1


def run_synthesize(config: RunConfig, n_records: Optional[int] = None,
                   n_industries: Optional[int] = None) -> Tuple[Report, int]:
    output = _require(config.output_path, "--output", "synthesize")
    records = generate_dataset(n_records=n_records, n_industries=n_industries, seed=config.seed)
    write_dataset(records, output, config.schema)
    industries = sorted({r.industry for r in records})
    results = {"dataset": {"records": len(records), "industries": industries, "seed": config.seed,
                           "path": output}}
    return create_report("synthesize", results), 0


# --- entry point -----------------------------------------------------------

class UsageParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the validation status."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ValidationFailure.exit_code, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(description="Credit Index - nonlinear Z-score ratings over ratio datasets")
    parser.add_argument('mode', nargs='?', choices=MODES, help='Run mode (may come from --config)')
    parser.add_argument('-i', '--input', help='Input ratio CSV')
    parser.add_argument('-o', '--output', help='Output CSV (scored records, or the synthetic dataset)')
    parser.add_argument('-m', '--model', help='Model artifact (written by fit, read by score/sweep)')
    parser.add_argument('-t', '--thresholds', action='append',
                        help='Threshold table or sweep YAML (repeatable; the first table is active)')
    parser.add_argument('--schema', help='Dataset schema YAML')
    parser.add_argument('--seed', type=int, help='Seed for hold-out split and synthetic data')
    parser.add_argument('-r', '--report', help='JSON report path (default: stdout)')
    parser.add_argument('--config', help='Run config (YAML or MD with YAML frontmatter)')
    parser.add_argument('--export-config', help='Write the effective run config (YAML, or MD for a .md path)')
    parser.add_argument('--holdout-fraction', type=float, help='Training share of the hold-out split')
    parser.add_argument('-w', '--workers', type=int, help='Threads for per-industry fits')
    parser.add_argument('--records', type=int, help='Synthetic records (synthesize mode)')
    parser.add_argument('--industries', type=int, help='Synthetic industries (synthesize mode)')
    parser.add_argument('-q', '--quiet', action='store_true', help='Only print errors')
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "mode": args.mode,
        "input_path": args.input,
        "output_path": args.output,
        "model_path": args.model,
        "report_path": args.report,
        "seed": args.seed,
        "holdout_fraction": args.holdout_fraction,
        "workers": args.workers,
        "quiet": True if args.quiet else None,
    }
    if args.thresholds:
        overrides["thresholds"] = [table for path in args.thresholds for table in load_thresholds(path)]
    if args.schema:
        overrides["schema"] = load_dataset_schema(args.schema)

    if args.config:
        return RunConfig.from_file(args.config, **overrides)
    if args.mode is None:
        raise ConfigurationError("A mode is required (or a --config that names one)")
    return RunConfig(**{k: v for k, v in overrides.items() if v is not None})


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    console.configure(quiet=args.quiet)
    started = time.perf_counter()

    try:
        config = load_config(args)
        console.configure(quiet=config.quiet)
        if args.export_config:
            config.export(args.export_config, format="md" if args.export_config.endswith(".md") else "yaml")
        runners = {
            "fit": run_fit,
            "score": run_score,
            "evaluate": run_evaluate,
            "sweep": run_sweep,
            "toy": run_toy,
        }
        if config.mode == "synthesize":
            report, status = run_synthesize(config, args.records, args.industries)
        else:
            report, status = runners[config.mode](config)

        if report is not None:
            report["execution"]["duration_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
            if config.report_path:
                emit_report(report, config.report_path)
            else:
                sys.stdout.write(render_report(report))
        return status
    except CreditIndexError as e:
        console.log("ERROR", str(e))
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
