"""Metric formulas: pinned examples, identities, and the residual curves."""

import math

import numpy as np
import pytest

from nnpf.metrics import (
    MetricsReport,
    compute_metrics,
    diff_reports,
    distribution_rows,
    gaussian_kde,
    residual_distribution,
    scott_bandwidth,
    summarize_residual_center,
)


def test_perfect_prediction():
    rep = compute_metrics([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert rep.mean_ae == rep.max_ae == rep.min_ae == 0.0
    assert rep.mean_ape == rep.max_ape == rep.std_ape == 0.0
    assert rep.rrmse == 0.0
    assert rep.f_err_gt10 == 0.0
    assert rep.r2 == 1.0
    assert rep.n_predictions == 3


def test_single_point_arithmetic():
    rep = compute_metrics([101.0], [100.0])
    assert rep.mean_ae == 1.0
    assert rep.mean_ape == 1.0
    assert rep.rrmse == 0.01
    assert rep.std_ape == 0.0  # n = 1: sample std defined as zero
    assert rep.n_predictions == 1


def test_fraction_above_ten_percent():
    truth = np.array([10.0, 10.0])
    pred = np.array([1.05, 1.15]) * truth
    rep = compute_metrics(pred, truth)
    assert rep.f_err_gt10 == 50.0


def test_threshold_is_strict():
    rep = compute_metrics([110.0], [100.0])  # exactly 10%
    assert rep.f_err_gt10 == 0.0
    rep = compute_metrics([110.0 + 1e-9], [100.0])
    assert rep.f_err_gt10 == 100.0


def test_zero_truth_names_index():
    with pytest.raises(ValueError, match=r"truth\[2\]"):
        compute_metrics([1.0, 1.0, 1.0], [1.0, 2.0, 0.0])


def test_length_mismatch():
    with pytest.raises(ValueError, match="length"):
        compute_metrics([1.0, 2.0], [1.0])


def test_ae_family_symmetry():
    rng = np.random.default_rng(0)
    t = rng.normal(size=50) + 10.0
    p = t + rng.normal(size=50)
    a, b = compute_metrics(p, t), compute_metrics(t, p)
    assert a.mean_ae == b.mean_ae
    assert a.max_ae == b.max_ae
    assert a.min_ae == b.min_ae


def test_rrmse_ape_internal_identity():
    rng = np.random.default_rng(1)
    for _ in range(10):
        n = int(rng.integers(2, 200))
        t = rng.normal(size=n) * 10 + 100.0
        p = t * (1 + rng.normal(size=n) * 0.02)
        rep = compute_metrics(p, t)
        lhs = rep.rrmse ** 2
        rhs = (rep.mean_ape / 100) ** 2 + (n - 1) / n * (rep.std_ape / 100) ** 2
        assert abs(lhs - rhs) < 1e-12


def test_pinned_triple_consistency():
    # mean APE 0.670924 and std APE 0.614194 over 1000 predictions imply
    # rrmse 0.009094 under the identity; agreement to 1e-5
    mean_ape, std_ape, n = 0.670924, 0.614194, 1000
    rrmse = math.sqrt((mean_ape / 100) ** 2 + (n - 1) / n * (std_ape / 100) ** 2)
    assert abs(rrmse - 0.009094) < 1e-5


def test_scale_equivariance():
    # errors bounded away from zero: c*(p - t) vs c*p - c*t agree to 1e-12
    # only when the difference is not in deep cancellation territory
    rng = np.random.default_rng(2)
    t = rng.normal(size=64) + 50.0
    p = t + rng.uniform(0.5, 2.0, size=64) * rng.choice([-1.0, 1.0], size=64)
    base = compute_metrics(p, t)
    for c in (0.001, 3.0, 1e4):
        scaled = compute_metrics(c * p, c * t)
        np.testing.assert_allclose(
            [scaled.mean_ae, scaled.max_ae, scaled.min_ae],
            [c * base.mean_ae, c * base.max_ae, c * base.min_ae], rtol=1e-12)
        np.testing.assert_allclose(
            [scaled.mean_ape, scaled.max_ape, scaled.std_ape, scaled.rrmse, scaled.r2],
            [base.mean_ape, base.max_ape, base.std_ape, base.rrmse, base.r2], rtol=1e-12)
        assert scaled.f_err_gt10 == base.f_err_gt10


def test_constant_truth_r2_convention():
    assert compute_metrics([5.0, 5.0], [5.0, 5.0]).r2 == 1.0
    assert compute_metrics([5.0, 6.0], [5.0, 5.0]).r2 == 0.0


def test_r2_matches_definition():
    rng = np.random.default_rng(3)
    t = rng.normal(size=40) + 20.0
    p = t + rng.normal(size=40)
    rep = compute_metrics(p, t)
    want = 1 - np.sum((p - t) ** 2) / np.sum((t - t.mean()) ** 2)
    assert rep.r2 == pytest.approx(want, rel=1e-14)


def test_cpu_time_recorded():
    assert compute_metrics([1.0], [2.0], cpu_time_s=1.5).cpu_time_s == 1.5


def test_to_dict_field_names():
    rep = compute_metrics([1.0], [2.0], cpu_time_s=0.25)
    assert set(rep.to_dict()) == {
        "mean_ae", "max_ae", "min_ae", "mean_ape", "max_ape", "std_ape",
        "rrmse", "f_err_gt10", "r2", "n_predictions", "cpu_time_s",
    }


def test_diff_reports_zero_when_equal():
    rep = compute_metrics([1.0, 2.0], [1.5, 2.5], cpu_time_s=0.1)
    diff = diff_reports(rep, rep)
    assert all(v == 0 for k, v in diff.items() if k != "n_predictions")
    assert diff["n_predictions"] == 2


def _report_with(**overrides) -> MetricsReport:
    base = dict(mean_ae=0.0, max_ae=0.0, min_ae=0.0, mean_ape=0.0, max_ape=0.0,
                std_ape=0.0, rrmse=0.0, f_err_gt10=0.0, r2=1.0,
                n_predictions=1000, cpu_time_s=0.0)
    base.update(overrides)
    return MetricsReport(**base)


def test_diff_reports_pinned_examples():
    a = _report_with(mean_ae=3.006936, max_ae=12.217185)
    b = _report_with(mean_ae=3.006934, max_ae=12.298230)
    diff = diff_reports(a, b)
    assert diff["mean_ae"] == pytest.approx(0.000002, abs=1e-12)
    assert diff["max_ae"] == pytest.approx(-0.081045, abs=1e-12)


def test_diff_reports_count_mismatch():
    with pytest.raises(ValueError, match="prediction counts"):
        diff_reports(_report_with(), _report_with(n_predictions=999))


def test_kde_single_kernel_closed_form():
    r = np.zeros(3)
    got = gaussian_kde(r, np.array([0.0]), 1.0)[0]
    assert got == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-14)
    assert got == pytest.approx(0.3989422804014327, rel=1e-14)


def test_kde_two_kernel_closed_form():
    r = np.array([-1.0, 1.0])
    got = gaussian_kde(r, np.array([0.0]), 1.0)[0]
    phi1 = math.exp(-0.5) / math.sqrt(2 * math.pi)
    assert got == pytest.approx(phi1, rel=1e-14)
    assert got == pytest.approx(0.24197072451914337, rel=1e-14)


def test_distribution_all_zero_residuals():
    dist = residual_distribution(np.ones(20), np.ones(20), bandwidth=1.0)
    assert dist.bin_counts.tolist() == [20]
    assert dist.bin_edges.tolist() == [-0.5, 0.5]
    assert dist.bandwidth == 1.0
    peak = gaussian_kde(dist.residuals, np.array([0.0]), dist.bandwidth)[0]
    assert peak == pytest.approx(0.3989422804014327, rel=1e-14)


def test_equal_inputs_single_bin():
    a = np.full(7, 3.25)
    dist = residual_distribution(a, a, bandwidth=0.5)
    assert dist.bin_counts.sum() == 7
    assert len(dist.bin_counts) == 1


def test_degenerate_spread_without_bandwidth_uses_unit():
    dist = residual_distribution(np.ones(5), np.ones(5))
    assert dist.bandwidth == 1.0


def test_scott_bandwidth_formula():
    rng = np.random.default_rng(4)
    r = rng.normal(size=500)
    assert scott_bandwidth(r) == 1.06 * r.std(ddof=1) * 500 ** -0.2
    dist = residual_distribution(r, np.zeros(500))
    assert dist.bandwidth == scott_bandwidth(r)


def test_histogram_and_grid_layout():
    rng = np.random.default_rng(5)
    a, b = rng.normal(size=300), rng.normal(size=300)
    dist = residual_distribution(a, b, n_bins=40)
    r = a - b
    assert dist.bin_counts.sum() == 300
    assert len(dist.bin_counts) == 40
    assert dist.bin_edges[0] == r.min()
    assert dist.bin_edges[-1] == r.max()
    assert len(dist.kde_x) == 256
    h = dist.bandwidth
    assert dist.kde_x[0] == pytest.approx(r.min() - 3 * h, rel=1e-12)
    assert dist.kde_x[-1] == pytest.approx(r.max() + 3 * h, rel=1e-12)
    assert np.all(dist.kde_y >= 0)


def test_kde_integrates_to_one():
    rng = np.random.default_rng(6)
    a, b = rng.normal(size=400), np.zeros(400)
    dist = residual_distribution(a, b)
    integral = np.trapezoid(dist.kde_y, dist.kde_x)
    assert abs(integral - 1.0) < 1e-2


def test_bandwidth_validation():
    r = np.arange(5.0)
    with pytest.raises(ValueError, match="bandwidth must be > 0"):
        residual_distribution(r, r * 0, bandwidth=0.0)
    with pytest.raises(ValueError, match="at least 2"):
        residual_distribution([1.0], [0.0])
    # one residual is fine with an explicit bandwidth
    dist = residual_distribution([1.0], [0.0], bandwidth=2.0)
    assert dist.residuals.tolist() == [1.0]
    with pytest.raises(ValueError, match="n_bins"):
        residual_distribution(r, r, n_bins=0)


def test_summarize_residual_center():
    dist = residual_distribution(np.zeros(3), np.zeros(3), bandwidth=1.0)
    mean, within = summarize_residual_center(dist)
    assert mean == 0.0
    assert within(1e-4) == 1.0

    a = np.array([-2e-4, 0.0, 5e-5])
    dist = residual_distribution(a, np.zeros(3), bandwidth=1.0)
    _, within = summarize_residual_center(dist)
    assert within(1e-4) == pytest.approx(2 / 3)


def test_distribution_rows_layout():
    rng = np.random.default_rng(7)
    dist = residual_distribution(rng.normal(size=50), np.zeros(50), n_bins=5)
    rows = distribution_rows(dist)
    hist_rows = [r for r in rows if r[0] == "hist"]
    kde_rows = [r for r in rows if r[0] == "kde"]
    assert len(hist_rows) == 5
    assert len(kde_rows) == 256
    assert sum(r[3] for r in hist_rows) == 50
