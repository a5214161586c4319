"""Command-line surface: predict, compare, bench, gen, validate.

CSV in, CSV out, JSON reports; timing goes to stdout as JSON.  All
failures surface as nonzero exits with a one-line message.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import click
import numpy as np

from .bnn import BnnRegressor
from .csvio import pick_column, read_table, write_table
from .datasets import CASE_NAMES, generate_split
from .dnn import DnnRegressor
from .errors import ModelValidationError, NnpfError
from .format import load_model, n_parameters
from .metrics import (
    compute_metrics,
    diff_reports,
    distribution_rows,
    residual_distribution,
    summarize_residual_center,
)

DEFAULT_BNN_SAMPLES = 20000


def _fail(exc) -> click.ClickException:
    return click.ClickException(str(exc))


def _suffixed(base: str, n: int) -> list:
    return [base] if n == 1 else [f"{base}_{i + 1}" for i in range(n)]


@click.group()
def main():
    """Native inference for NNPF model containers."""


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="NNPF container.")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Feature CSV (header row).")
@click.option("--output", "output_path", required=True,
              type=click.Path(dir_okay=False), help="Prediction CSV to write.")
@click.option("--samples", type=int, default=None,
              help="Monte Carlo samples per prediction (bayesian models; default 20000).")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Sampling seed (bayesian models).")
def predict(model_path, input_path, output_path, samples, seed):
    """Predict every row of a feature CSV."""
    try:
        artifact = load_model(model_path)
        header, X = read_table(input_path)
        n_in = artifact.spec.input_width
        if X.shape[1] != n_in:
            raise ValueError(
                f"{input_path} has {X.shape[1]} columns but the model takes {n_in} inputs"
            )
        n_out = artifact.spec.output_width
        if artifact.spec.kind == "deterministic":
            engine = DnnRegressor(artifact)
            engine.fit()
            engine.predict(X[:1])  # warm the jitted kernels before timing
            t_cpu, t_wall = time.process_time(), time.perf_counter()
            Y = engine.predict(X)
            cpu_s, wall_s = time.process_time() - t_cpu, time.perf_counter() - t_wall
            out_header = _suffixed("y_pred", n_out)
            out_data = Y
            n_samples = None
        else:
            n_samples = DEFAULT_BNN_SAMPLES if samples is None else samples
            engine = BnnRegressor(artifact, n_samples=n_samples, random_state=seed)
            engine.fit()
            engine.predict_dist(X[:1], n_samples=2)  # warm the jitted kernels
            t_cpu, t_wall = time.process_time(), time.perf_counter()
            dist = engine.predict_dist(X)
            cpu_s, wall_s = time.process_time() - t_cpu, time.perf_counter() - t_wall
            out_header = (
                _suffixed("y_mean", n_out) + _suffixed("y_std", n_out)
                + _suffixed("y_lo", n_out) + _suffixed("y_hi", n_out)
            )
            out_data = np.hstack([dist.mean, dist.std, dist.interval_lo, dist.interval_hi])
        write_table(output_path, out_header, out_data)
    except (NnpfError, ValueError, OSError) as exc:
        raise _fail(exc)
    click.echo(json.dumps({
        "kind": artifact.spec.kind,
        "n_predictions": int(X.shape[0]),
        "n_samples": n_samples,
        "cpu_s": cpu_s,
        "wall_s": wall_s,
        "output": str(output_path),
    }))


@main.command()
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--truth", "truth_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Optional ground-truth CSV; enables the full metric reports.")
@click.option("--report", "report_path", required=True, type=click.Path(dir_okay=False),
              help="JSON report to write.")
@click.option("--bins", type=int, default=50, show_default=True, help="Residual histogram bins.")
@click.option("--bandwidth", type=float, default=None, help="KDE bandwidth override.")
@click.option("--pred-col", default=None, help="Column in --pred (default: first).")
@click.option("--ref-col", default=None, help="Column in --ref (default: first).")
@click.option("--truth-col", default=None, help="Column in --truth (default: last).")
@click.option("--dist-csv", "dist_csv", type=click.Path(dir_okay=False), default=None,
              help="Also write the histogram/KDE series as CSV.")
def compare(pred_path, ref_path, truth_path, report_path, bins, bandwidth,
            pred_col, ref_col, truth_col, dist_csv):
    """Compare two prediction files (and optionally ground truth)."""
    try:
        ph, pdat = read_table(pred_path)
        rh, rdat = read_table(ref_path)
        p = pick_column(ph, pdat, name=pred_col, default="first")
        r = pick_column(rh, rdat, name=ref_col, default="first")
        if p.shape[0] != r.shape[0]:
            raise ValueError(
                f"row count mismatch: {pred_path} has {p.shape[0]}, {ref_path} has {r.shape[0]}"
            )
        dist = residual_distribution(p, r, n_bins=bins, bandwidth=bandwidth)
        r_mean, fraction_within = summarize_residual_center(dist)
        report = {
            "n_predictions": int(p.shape[0]),
            "residuals": {
                "mean": r_mean,
                "max_abs": float(np.abs(dist.residuals).max()),
                "bandwidth": dist.bandwidth,
                "fraction_within": {
                    "1e-03": fraction_within(1e-3),
                    "1e-04": fraction_within(1e-4),
                },
                "bin_edges": dist.bin_edges.tolist(),
                "bin_counts": dist.bin_counts.tolist(),
                "kde_x": dist.kde_x.tolist(),
                "kde_y": dist.kde_y.tolist(),
            },
        }
        if truth_path is not None:
            th, tdat = read_table(truth_path)
            t = pick_column(th, tdat, name=truth_col, default="last")
            if t.shape[0] != p.shape[0]:
                raise ValueError(
                    f"row count mismatch: {truth_path} has {t.shape[0]}, "
                    f"predictions have {p.shape[0]}"
                )
            rep_p = compute_metrics(p, t)
            rep_r = compute_metrics(r, t)
            report["pred"] = rep_p.to_dict()
            report["ref"] = rep_r.to_dict()
            report["diff"] = diff_reports(rep_p, rep_r)
        Path(report_path).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        if dist_csv is not None:
            write_distribution_csv(dist_csv, dist)
    except (NnpfError, ValueError, OSError) as exc:
        raise _fail(exc)
    click.echo(json.dumps({
        "n_predictions": report["n_predictions"],
        "max_abs_residual": report["residuals"]["max_abs"],
        "report": str(report_path),
    }))


def write_distribution_csv(path, dist) -> None:
    import csv as _csv

    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["series", "x0", "x1", "y"])
        writer.writerows(distribution_rows(dist))


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--repeat", type=int, default=5, show_default=True)
@click.option("--samples", type=int, default=100, show_default=True,
              help="Monte Carlo samples per prediction (bayesian models).")
@click.option("--seed", type=int, default=0, show_default=True)
def bench(model_path, input_path, repeat, samples, seed):
    """Time repeated prediction runs over an input CSV."""
    if repeat < 1:
        raise _fail(f"--repeat must be >= 1, got {repeat}")
    try:
        artifact = load_model(model_path)
        header, X = read_table(input_path)
        n_in = artifact.spec.input_width
        if X.shape[1] != n_in:
            raise ValueError(
                f"{input_path} has {X.shape[1]} columns but the model takes {n_in} inputs"
            )
        if artifact.spec.kind == "deterministic":
            engine = DnnRegressor(artifact)
            run = lambda: engine.predict(X)
            n_samples = None
        else:
            engine = BnnRegressor(artifact, n_samples=samples, random_state=seed)
            run = lambda: engine.predict(X)
            n_samples = samples
        run()  # warm the jitted kernels before timing
        runs = []
        for _ in range(repeat):
            t_cpu, t_wall = time.process_time(), time.perf_counter()
            run()
            runs.append({
                "cpu_s": time.process_time() - t_cpu,
                "wall_s": time.perf_counter() - t_wall,
            })
    except (NnpfError, ValueError, OSError) as exc:
        raise _fail(exc)
    n = int(X.shape[0])
    best_cpu = min(r["cpu_s"] for r in runs)
    best_wall = min(r["wall_s"] for r in runs)
    mean_cpu = sum(r["cpu_s"] for r in runs) / repeat
    mean_wall = sum(r["wall_s"] for r in runs) / repeat
    denom = max(best_cpu, 1e-12)
    click.echo(json.dumps({
        "kind": artifact.spec.kind,
        "n_predictions": n,
        "n_samples": n_samples,
        "repeat": repeat,
        "runs": runs,
        "best": {"cpu_s": best_cpu, "wall_s": best_wall},
        "mean": {"cpu_s": mean_cpu, "wall_s": mean_wall},
        "per_prediction_s": denom / n,
        "predictions_per_second": n / denom,
    }))


@main.command()
@click.argument("case", type=click.Choice(CASE_NAMES))
@click.option("--n", "n", required=True, type=int, help="Number of rows.")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--noise", "noise_std", type=float, default=5.0, show_default=True,
              help="Gaussian noise standard deviation.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False),
              help="Output CSV; _train/_test siblings are written next to it.")
def gen(case, n, seed, noise_std, out_path):
    """Generate a synthetic dataset plus its 80/20 train/test split."""
    try:
        full, train, test = generate_split(case, n, seed=seed, noise_std=noise_std)
        out = Path(out_path)
        files = {}
        for tag, ds in (("", full), ("_train", train), ("_test", test)):
            p = out.with_name(out.stem + tag + (out.suffix or ".csv"))
            header = list(ds.feature_names) + [ds.target_name]
            write_table(p, header, np.column_stack([ds.X, ds.y]))
            files[tag or "full"] = str(p)
    except (ValueError, OSError) as exc:
        raise _fail(exc)
    click.echo(json.dumps({
        "case": case,
        "rows": full.n_rows,
        "train_rows": train.n_rows,
        "test_rows": test.n_rows,
        "files": files,
    }))


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
def validate(model_path):
    """Parse a container and report its spec and diagnostics; exit 0 iff clean."""
    try:
        artifact = load_model(model_path)
    except ModelValidationError as exc:
        click.echo(f"{model_path}: invalid model")
        for d in exc.diagnostics:
            click.echo(f"  diagnostic: {d}")
        raise SystemExit(1)
    except (NnpfError, ValueError, OSError) as exc:
        raise _fail(exc)
    spec = artifact.spec
    click.echo(f"{model_path}: ok")
    click.echo(f"  kind: {spec.kind}")
    click.echo(f"  widths: {list(spec.layer_widths)}")
    click.echo(f"  activations: {list(spec.activations)}")
    click.echo(f"  standardizer: {artifact.standardizer is not None}")
    click.echo(f"  parameters: {n_parameters(spec)}")
