"""Acceptance suite: one test per release criterion, at its stated tolerance.

Criteria 1-10 are evaluated through the benchmark harness (shared run);
criterion 11 additionally exercises the bench CLI twice, including with a
different worker count, and compares report bytes.
"""

import json

import pytest

from dfcurve.bench import run_bench
from dfcurve.cli import main

pytestmark = pytest.mark.acceptance


@pytest.fixture(scope="module")
def bench_report():
    report, _ = run_bench(jobs=1)
    return report


def _criterion(report, idx):
    crit = next(c for c in report["criteria"] if c["id"] == idx)
    status = "PASS" if crit["passed"] else "FAIL"
    print(f"[acceptance] criterion {idx:2d} {crit['name']}: {status} measured={json.dumps(crit['measured'])}")
    return crit


def test_criterion_01_oracle_equivalence(bench_report):
    crit = _criterion(bench_report, 1)
    assert crit["measured"]["images"] == 20
    assert crit["measured"]["max_relative_error"] <= 1e-6
    assert crit["passed"]


def test_criterion_02_unit_sum(bench_report):
    crit = _criterion(bench_report, 2)
    assert crit["measured"]["curves"] >= 1000
    assert crit["measured"]["max_sum_deviation"] <= 1e-9
    assert crit["passed"]


def test_criterion_03_default_schedule(bench_report):
    crit = _criterion(bench_report, 3)
    m = crit["measured"]
    assert m["r_max"] == pytest.approx((2 * 256**2) ** 0.5 / 2, abs=1e-9)
    for key in ("mu_first", "mu_last", "sigma_first", "sigma_last"):
        assert m[key] <= 1e-6
    assert crit["passed"]


def test_criterion_04_degradation_sensitivity(bench_report):
    crit = _criterion(bench_report, 4)
    means = crit["measured"]["mean_peak_band"]
    assert means["haze"] < means["rain"] < means["gaussian_noise"]
    assert crit["passed"]


def test_criterion_05_content_robustness(bench_report):
    crit = _criterion(bench_report, 5)
    m = crit["measured"]
    assert m["ratio"] == pytest.approx(m["mean_intra_l1"] / m["mean_inter_l1"], rel=1e-12)
    assert m["ratio"] <= 0.5
    assert crit["passed"]


def test_criterion_06_severity_monotonicity(bench_report):
    crit = _criterion(bench_report, 6)
    assert crit["measured"]["spearman_sigma"] == 1.0
    assert crit["measured"]["spearman_gamma"] == 1.0
    peaks = crit["measured"]["sigma_mean_peaks"]
    assert all(a < b for a, b in zip(peaks, peaks[1:]))
    assert crit["passed"]


def test_criterion_07_equal_area_tokenization(bench_report):
    crit = _criterion(bench_report, 7)
    assert crit["measured"]["max_mass_deviation"] <= 1e-6
    assert crit["measured"]["max_uniform_boundary_deviation"] <= 1e-9
    assert crit["passed"]


def test_criterion_08_refinement_neutrality(bench_report):
    crit = _criterion(bench_report, 8)
    m = crit["measured"]
    assert m["seeds"] == 1000
    assert m["abs_mean_bias"] <= m["three_standard_errors"]
    assert crit["passed"]


def test_criterion_09_classification(bench_report):
    crit = _criterion(bench_report, 9)
    m = crit["measured"]
    assert m["total"] == 200  # 4 families x 50 held-out samples
    assert m["accuracy"] >= 0.95
    assert crit["passed"]


def test_criterion_10_band_filter_utility(bench_report):
    crit = _criterion(bench_report, 10)
    m = crit["measured"]
    assert len(m["textures"]) == 4
    assert m["mean_gain_db_sigma25"] >= 2.0
    assert m["min_gain_db_all_sigmas"] >= 0.0
    assert crit["passed"]


def test_criterion_11_determinism(bench_report, tmp_path):
    crit = _criterion(bench_report, 11)
    assert crit["measured"]["identical_reports"] is True
    assert crit["passed"]
    # full command-level check: two runs, one with a different worker count
    first = tmp_path / "report1.json"
    second = tmp_path / "report2.json"
    report_dir = tmp_path / "report"
    assert main(["bench", "--out", str(first), "--report-dir", str(report_dir)]) == 0
    assert main(["bench", "--out", str(second), "--jobs", "2"]) == 0
    assert first.read_bytes() == second.read_bytes()
    # the report path writes delimited output plus figures
    assert (report_dir / "report.json").exists()
    csv_lines = (report_dir / "report.csv").read_text().splitlines()
    assert csv_lines[0] == "id,name,passed,measured"
    assert len(csv_lines) == 12
    figures = sorted(p.name for p in (report_dir / "figures").glob("*.svg"))
    assert figures == [
        "profile_gaussian_noise.svg",
        "profile_haze.svg",
        "profile_low_light.svg",
        "profile_rain.svg",
        "severity_gaussian_noise.svg",
        "severity_low_light.svg",
    ]


def test_report_is_valid_json_with_all_criteria(bench_report):
    text = json.dumps(bench_report, indent=2, sort_keys=True)
    parsed = json.loads(text)
    assert parsed["report"] == "dfc-bench/v1"
    assert [c["id"] for c in parsed["criteria"]] == list(range(1, 12))
    assert parsed["defaults"] == {"band_count": 25, "token_count": 4, "sample_count": 5, "seed": 0}
    assert parsed["all_passed"] is True
