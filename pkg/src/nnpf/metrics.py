"""Verification metrics for prediction parity runs.

The nine-metric report (absolute error family, percentage error family,
rRMSE, fraction of >10% errors, R^2) plus report differencing and the
residual histogram/KDE used to eyeball cross-implementation agreement.

Unit conventions: AE metrics are in target units; APE metrics and
f_err_gt10 are percentages; rrmse is a dimensionless fraction (the
identity tying it to mean_ape/std_ape only holds when it is read as a
fraction, so it is stored that way and labeled).
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .validation import as_float_vector, require_finite

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclasses.dataclass
class MetricsReport:
    mean_ae: float
    max_ae: float
    min_ae: float
    mean_ape: float
    max_ape: float
    std_ape: float
    rrmse: float
    f_err_gt10: float
    r2: float
    n_predictions: int
    cpu_time_s: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_DIFF_FIELDS = (
    "mean_ae", "max_ae", "min_ae", "mean_ape", "max_ape",
    "std_ape", "rrmse", "f_err_gt10", "r2", "cpu_time_s",
)


@dataclasses.dataclass
class ResidualDistribution:
    residuals: np.ndarray
    bin_edges: np.ndarray
    bin_counts: np.ndarray
    kde_x: np.ndarray
    kde_y: np.ndarray
    bandwidth: float


def _paired(pred, truth) -> tuple:
    pred = as_float_vector(pred, name="pred")
    truth = as_float_vector(truth, length=pred.shape[0], name="truth")
    require_finite(pred, "pred")
    require_finite(truth, "truth")
    return pred, truth


def compute_metrics(pred, truth, cpu_time_s: float = 0.0) -> MetricsReport:
    """Error metrics of predictions against ground truth.

    Requires every truth element nonzero (the relative metrics are
    undefined at zero); raises naming the first offending index.
    std_ape uses the n-1 divisor and is defined as 0.0 for n = 1.
    """
    pred, truth = _paired(pred, truth)
    n = pred.shape[0]
    if n < 1:
        raise ValueError("need at least one prediction")
    zero = np.flatnonzero(truth == 0.0)
    if zero.size:
        raise ValueError(f"truth[{zero[0]}] is zero; relative metrics are undefined")

    ae = np.abs(pred - truth)
    rel = (pred - truth) / truth
    ape = 100.0 * ae / np.abs(truth)

    sst = float(np.sum((truth - truth.mean()) ** 2))
    ssr = float(np.sum((pred - truth) ** 2))
    if sst == 0.0:
        # Constant truth: declare perfect agreement 1.0, anything else 0.0.
        r2 = 1.0 if ssr == 0.0 else 0.0
    else:
        r2 = 1.0 - ssr / sst

    return MetricsReport(
        mean_ae=float(ae.mean()),
        max_ae=float(ae.max()),
        min_ae=float(ae.min()),
        mean_ape=float(ape.mean()),
        max_ape=float(ape.max()),
        std_ape=0.0 if n < 2 else float(ape.std(ddof=1)),
        rrmse=float(np.sqrt(np.mean(rel ** 2))),
        f_err_gt10=100.0 * float(np.count_nonzero(ape > 10.0)) / n,
        r2=float(r2),
        n_predictions=n,
        cpu_time_s=float(cpu_time_s),
    )


def diff_reports(a: MetricsReport, b: MetricsReport) -> dict:
    """Field-wise a - b; prediction count passed through unchanged."""
    if a.n_predictions != b.n_predictions:
        raise ValueError(
            f"reports cover different prediction counts: "
            f"{a.n_predictions} vs {b.n_predictions}"
        )
    out = {f: getattr(a, f) - getattr(b, f) for f in _DIFF_FIELDS}
    out["n_predictions"] = a.n_predictions
    return out


def scott_bandwidth(residuals: np.ndarray) -> float:
    """1.06 * sample std * n^(-1/5)."""
    n = residuals.shape[0]
    if n < 2:
        raise ValueError("bandwidth selection needs at least 2 residuals; pass one explicitly")
    return 1.06 * float(residuals.std(ddof=1)) * n ** (-0.2)


def gaussian_kde(residuals: np.ndarray, grid: np.ndarray, bandwidth: float) -> np.ndarray:
    """f(t) = (1/(n*h)) * sum_i phi((t - r_i)/h), phi the standard normal pdf."""
    z = (grid[:, None] - residuals[None, :]) / bandwidth
    return np.exp(-0.5 * z * z).sum(axis=1) / (residuals.shape[0] * bandwidth * _SQRT_2PI)


def residual_distribution(a, b, n_bins: int = 50, bandwidth: float | None = None) -> ResidualDistribution:
    """Histogram and Gaussian KDE of the residuals a - b.

    Equal-width bins span [min r, max r]; a degenerate span collapses to a
    single bin centered on the value.  Default bandwidth is Scott's rule;
    if the residuals have zero spread (sample std 0) the rule degenerates,
    and a unit bandwidth is substituted so the curve stays well defined.
    The KDE is evaluated at 256 even points over [min r - 3h, max r + 3h].
    """
    a = as_float_vector(a, name="a")
    b = as_float_vector(b, length=a.shape[0], name="b")
    if n_bins < 1:
        raise ValueError(f"n_bins must be >= 1, got {n_bins}")
    r = a - b
    n = r.shape[0]
    if n < 1:
        raise ValueError("need at least one residual")
    if bandwidth is None:
        h = scott_bandwidth(r)
        if h == 0.0:
            h = 1.0
    else:
        h = float(bandwidth)
        if not h > 0.0:
            raise ValueError(f"bandwidth must be > 0, got {bandwidth}")

    lo, hi = float(r.min()), float(r.max())
    if lo == hi:
        bin_counts, bin_edges = np.histogram(r, bins=1)
    else:
        bin_counts, bin_edges = np.histogram(r, bins=n_bins, range=(lo, hi))

    kde_x = np.linspace(lo - 3.0 * h, hi + 3.0 * h, 256)
    kde_y = gaussian_kde(r, kde_x, h)
    return ResidualDistribution(
        residuals=r,
        bin_edges=bin_edges,
        bin_counts=bin_counts,
        kde_x=kde_x,
        kde_y=kde_y,
        bandwidth=h,
    )


def summarize_residual_center(dist: ResidualDistribution) -> tuple:
    """(residual mean, query function bound -> fraction of |r| <= bound)."""
    r = dist.residuals
    if r.shape[0] < 1:
        raise ValueError("distribution has no residuals")
    abs_r = np.abs(r)

    def fraction_within(bound: float) -> float:
        return float(np.count_nonzero(abs_r <= bound)) / r.shape[0]

    return float(r.mean()), fraction_within


def distribution_rows(dist: ResidualDistribution) -> list:
    """Long-form rows for CSV export: (series, x0, x1, y).

    hist rows carry (left edge, right edge, count); kde rows carry
    (x, '', density).
    """
    rows = []
    for i in range(dist.bin_counts.shape[0]):
        rows.append(("hist", float(dist.bin_edges[i]), float(dist.bin_edges[i + 1]),
                     int(dist.bin_counts[i])))
    for x, y in zip(dist.kde_x, dist.kde_y):
        rows.append(("kde", float(x), "", float(y)))
    return rows
