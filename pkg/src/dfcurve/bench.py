"""Acceptance benchmark: every release criterion as a deterministic check.

Everything here is seeded through the package RNG and bundled/procedural
scenes, so a fresh checkout produces byte-identical reports on any
machine and with any worker count. The determinism criterion is enforced
by evaluating the whole suite twice (with different worker counts) and
comparing canonical report bytes.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .bandfilter import apply_gains, wiener_gains
from .degrade import add_gaussian_noise, gamma_darken, haze, rain_streaks
from .fingerprint import (
    SeverityCalibration,
    build_calibration,
    build_profile,
    classify,
    curve_peak_amplitude,
)
from .metrics import psnr
from .rng import random_uniform
from .spectral import (
    BandMaskSpec,
    DEFAULT_BAND_COUNT,
    compute_dfc,
    default_mask_set,
    energy_map,
    max_radial_frequency,
    naive_dft_energy,
    normalize_ratios,
    uniform_curve,
)
from .tokens import (
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_TOKEN_COUNT,
    _LinearDensity,
    equal_area_partition,
    sample_and_aggregate,
)
from .textures import bundled_textures, synthetic_scene

BENCH_SEED = 0
SCENE_SIZE = 128
TRAIN_COUNT = 100
HELDOUT_COUNT = 50
ORDERING_COUNT = 30

# rng streams reserved for the benchmark
STREAM_ORACLE_IMAGES = 30
STREAM_FAMILY = {"gaussian_noise": 40, "rain": 41, "haze": 42, "low_light": 43}
STREAM_RANDOM_CURVES = 45

FAMILIES = ("gaussian_noise", "haze", "low_light", "rain")

REPORT_SCHEMA = "dfc-bench/v1"


def _pmap(fn, items, jobs: int):
    """Order-preserving map, optionally across worker threads."""
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def degraded_sample(family: str, index: int, clean: np.ndarray) -> np.ndarray:
    """Family sample ``index``: parameters drawn from the family stream."""
    u = random_uniform(BENCH_SEED, STREAM_FAMILY[family], 4, start=4 * index)
    if family == "gaussian_noise":
        return add_gaussian_noise(clean, 25.0, seed=50_000 + index)
    if family == "rain":
        return rain_streaks(
            clean,
            density=0.004 + 0.008 * u[0],
            angle=60.0 + 60.0 * u[1],
            length=10 + int(8 * u[2]),
            seed=60_000 + index,
        )
    if family == "haze":
        return haze(clean, 0.35 + 0.3 * u[0], 0.75 + 0.2 * u[1])
    if family == "low_light":
        return gamma_darken(clean, 2.4 + 0.5 * u[0])
    raise ValueError(f"unknown family {family!r}")


class _Corpus:
    """Shared scenes, masks, and per-family curve pools."""

    def __init__(self, jobs: int):
        self.masks = default_mask_set(SCENE_SIZE, SCENE_SIZE, DEFAULT_BAND_COUNT)
        total = TRAIN_COUNT + HELDOUT_COUNT
        self.scenes = _pmap(lambda i: synthetic_scene(i, SCENE_SIZE, SCENE_SIZE), range(total), jobs)

        def family_curve(args):
            family, i = args
            degraded = degraded_sample(family, i, self.scenes[i])
            return compute_dfc(degraded, self.scenes[i], masks=self.masks)

        work = [(f, i) for f in FAMILIES for i in range(total)]
        flat = _pmap(family_curve, work, jobs)
        self.curves = {
            f: flat[k * total : (k + 1) * total] for k, f in enumerate(FAMILIES)
        }


def _crit(idx: int, name: str, passed: bool, measured: dict, threshold: dict) -> dict:
    return {
        "id": idx,
        "name": name,
        "passed": bool(passed),
        "measured": measured,
        "threshold": threshold,
    }


def _criterion_oracle(jobs: int) -> dict:
    sizes = [8, 12, 16, 20, 24, 28, 32]

    def one(case: int) -> float:
        side = sizes[case % len(sizes)]
        img = random_uniform(BENCH_SEED, STREAM_ORACLE_IMAGES, side * side, start=case * 4096).reshape(side, side)
        fast = energy_map(img)
        slow = naive_dft_energy(img)
        return float(np.max(np.abs(fast - slow) / np.maximum(np.abs(slow), 1e-30)))

    errs = _pmap(one, range(20), jobs)
    worst = max(errs)
    return _crit(
        1,
        "oracle-equivalence",
        worst <= 1e-6,
        {"max_relative_error": worst, "images": 20},
        {"max_relative_error": 1e-6},
    )


def _random_curves(count: int, centers: np.ndarray) -> list:
    b = len(centers)
    raws = random_uniform(BENCH_SEED, STREAM_RANDOM_CURVES, count * b).reshape(count, b)
    return [normalize_ratios(raws[i], centers) for i in range(count)]


def _criterion_unit_sum(corpus: _Corpus) -> dict:
    curves = _random_curves(1000, corpus.masks.centers)
    for fam_curves in corpus.curves.values():
        curves.extend(fam_curves)
    worst = max(abs(float(np.sum(c.normalized)) - 1.0) for c in curves)
    return _crit(
        2,
        "unit-sum",
        worst <= 1e-9,
        {"max_sum_deviation": worst, "curves": len(curves)},
        {"max_sum_deviation": 1e-9},
    )


def _criterion_schedule() -> dict:
    masks = default_mask_set(256, 256, 25)
    r_max = max_radial_frequency(256, 256)
    mu_first = masks.specs[0].mu
    mu_last = masks.specs[-1].mu
    sigma_first = masks.specs[0].sigma
    sigma_last = masks.specs[-1].sigma
    devs = {
        "mu_first": abs(mu_first - 0.0),
        "mu_last": abs(mu_last - r_max),
        "sigma_first": abs(sigma_first - 0.05 * r_max),
        "sigma_last": abs(sigma_last - 0.30 * r_max),
    }
    worst = max(devs.values())
    measured = {"r_max": r_max, **{k: float(v) for k, v in devs.items()}}
    return _crit(3, "default-schedule", worst <= 1e-6, measured, {"max_deviation": 1e-6})


def _criterion_sensitivity(corpus: _Corpus) -> dict:
    means = {}
    for family in ("haze", "rain", "gaussian_noise"):
        idxs = [int(np.argmax(c.normalized)) for c in corpus.curves[family][:ORDERING_COUNT]]
        means[family] = float(np.mean(idxs))
    ok = means["haze"] < means["rain"] < means["gaussian_noise"]
    return _crit(
        4,
        "degradation-sensitivity",
        ok,
        {"mean_peak_band": means, "seeds_per_family": ORDERING_COUNT},
        {"ordering": "haze < rain < gaussian_noise"},
    )


def _criterion_robustness(corpus: _Corpus) -> dict:
    mats = {
        f: np.array([c.normalized for c in corpus.curves[f][:ORDERING_COUNT]]) for f in FAMILIES
    }

    def mean_l1(a: np.ndarray, b: np.ndarray, same: bool) -> float:
        d = np.abs(a[:, None, :] - b[None, :, :]).sum(axis=2)
        if same:
            iu = np.triu_indices(len(a), k=1)
            return float(d[iu].mean())
        return float(d.mean())

    intra = float(np.mean([mean_l1(mats[f], mats[f], True) for f in FAMILIES]))
    pairs = [(a, b) for i, a in enumerate(FAMILIES) for b in FAMILIES[i + 1 :]]
    inter = float(np.mean([mean_l1(mats[a], mats[b], False) for a, b in pairs]))
    ratio = intra / inter
    return _crit(
        5,
        "content-robustness",
        ratio <= 0.5,
        {"mean_intra_l1": intra, "mean_inter_l1": inter, "ratio": ratio},
        {"ratio": 0.5},
    )


def _spearman(x: list, y: list) -> float:
    rx = np.argsort(np.argsort(np.asarray(x))).astype(np.float64)
    ry = np.argsort(np.argsort(np.asarray(y))).astype(np.float64)
    n = len(rx)
    d = rx - ry
    return float(1.0 - 6.0 * np.sum(d * d) / (n * (n * n - 1.0)))


def severity_sweep(make_degraded, levels, masks, scene, seeds_per_level: int = 10, jobs: int = 1) -> list[float]:
    """Mean raw-peak amplitude per severity level."""

    def one(args):
        li, s = args
        return curve_peak_amplitude(
            compute_dfc(make_degraded(levels[li], s), scene, masks=masks)
        )

    work = [(li, s) for li in range(len(levels)) for s in range(seeds_per_level)]
    peaks = _pmap(one, work, jobs)
    return [
        float(np.mean(peaks[li * seeds_per_level : (li + 1) * seeds_per_level]))
        for li in range(len(levels))
    ]


def _criterion_severity(corpus: _Corpus, jobs: int) -> tuple[dict, dict[str, SeverityCalibration]]:
    scene = synthetic_scene(1, SCENE_SIZE, SCENE_SIZE)
    sigma_levels = [10.0, 20.0, 30.0, 40.0, 50.0]
    sigma_peaks = severity_sweep(
        lambda sigma, s: add_gaussian_noise(scene, sigma, seed=70_000 + 100 * int(sigma) + s),
        sigma_levels,
        corpus.masks,
        scene,
        jobs=jobs,
    )
    gamma_levels = [1.5, 2.0, 2.5, 3.0]
    gamma_peaks = severity_sweep(
        lambda gamma, s: gamma_darken(scene, gamma),
        gamma_levels,
        corpus.masks,
        scene,
        seeds_per_level=1,
        jobs=jobs,
    )
    rho_sigma = _spearman(sigma_levels, sigma_peaks)
    rho_gamma = _spearman(gamma_levels, gamma_peaks)
    ok = rho_sigma == 1.0 and rho_gamma == 1.0
    calibrations = {
        "gaussian_noise": build_calibration("gaussian_noise", sigma_levels, sigma_peaks),
        "low_light": build_calibration("low_light", gamma_levels, gamma_peaks),
    }
    measured = {
        "spearman_sigma": rho_sigma,
        "spearman_gamma": rho_gamma,
        "sigma_mean_peaks": sigma_peaks,
        "gamma_mean_peaks": gamma_peaks,
    }
    return _crit(6, "severity-monotonicity", ok, measured, {"spearman": 1.0}), calibrations


def _criterion_tokenization(corpus: _Corpus) -> dict:
    n = DEFAULT_TOKEN_COUNT
    curves = _random_curves(1000, corpus.masks.centers)
    worst_mass = 0.0
    for c in curves:
        part = equal_area_partition(c, n)
        dens = _LinearDensity.from_curve(c)
        for lo, hi in part.regions:
            worst_mass = max(worst_mass, abs(dens.mass(lo, hi) - 1.0 / n))
    r_max = float(corpus.masks.centers[-1])
    uni = uniform_curve(corpus.masks.centers)
    edges = equal_area_partition(uni, 4).edges
    worst_edge = max(
        abs(float(edges[k]) - r_max * k / 4) for k in (1, 2, 3)
    )
    ok = worst_mass <= 1e-6 and worst_edge <= 1e-9
    return _crit(
        7,
        "equal-area-tokenization",
        ok,
        {"max_mass_deviation": worst_mass, "max_uniform_boundary_deviation": worst_edge},
        {"max_mass_deviation": 1e-6, "max_uniform_boundary_deviation": 1e-9},
    )


def _criterion_neutrality() -> dict:
    init = BandMaskSpec(mu=60.0, sigma=20.0)
    mus = np.array(
        [
            sample_and_aggregate(init, DEFAULT_SAMPLE_COUNT, 0.1, None, seed=s).mu
            for s in range(1000)
        ]
    )
    bias = abs(float(np.mean(mus)) - init.mu)
    se3 = 3.0 * float(np.std(mus, ddof=1)) / np.sqrt(len(mus))
    return _crit(
        8,
        "refinement-neutrality",
        bias <= se3,
        {"abs_mean_bias": bias, "three_standard_errors": se3, "seeds": 1000},
        {"abs_mean_bias": "<= 3 standard errors"},
    )


def _criterion_classification(corpus: _Corpus) -> tuple[dict, list]:
    profiles = [build_profile(corpus.curves[f][:TRAIN_COUNT], f) for f in FAMILIES]
    correct = 0
    total = 0
    for f in FAMILIES:
        for c in corpus.curves[f][TRAIN_COUNT:]:
            label, _ = classify(c, profiles)
            correct += label == f
            total += 1
    acc = correct / total
    crit = _crit(
        9,
        "classification",
        acc >= 0.95,
        {"accuracy": acc, "correct": correct, "total": total},
        {"accuracy": 0.95},
    )
    return crit, profiles


def _criterion_filter(corpus: _Corpus, jobs: int) -> dict:
    textures = bundled_textures()

    def one(args):
        kind, sigma = args
        clean = textures[kind]
        noisy = add_gaussian_noise(clean, sigma, seed=90_000 + int(sigma))
        dfc = compute_dfc(noisy, clean, masks=corpus.masks)
        restored = apply_gains(noisy, wiener_gains(dfc, 1.0), pin_dc=True)
        return psnr(restored, clean) - psnr(noisy, clean)

    kinds = sorted(textures)
    work = [(k, s) for s in (15.0, 25.0, 50.0) for k in kinds]
    gains = _pmap(one, work, jobs)
    by_sigma = {s: gains[i * len(kinds) : (i + 1) * len(kinds)] for i, s in enumerate((15.0, 25.0, 50.0))}
    mean_25 = float(np.mean(by_sigma[25.0]))
    min_gain = float(np.min(gains))
    ok = mean_25 >= 2.0 and min_gain >= 0.0
    measured = {
        "mean_gain_db_sigma25": mean_25,
        "min_gain_db_all_sigmas": min_gain,
        "gains_db": {str(int(s)): [float(g) for g in v] for s, v in by_sigma.items()},
        "textures": kinds,
    }
    return _crit(10, "band-filter-utility", ok, measured, {"mean_gain_db_sigma25": 2.0, "min_gain_db": 0.0})


class BenchArtifacts:
    """Side products of a bench run, for figure rendering."""

    def __init__(self, profiles, calibrations):
        self.profiles = profiles
        self.calibrations = calibrations


def _evaluate(jobs: int) -> tuple[list[dict], BenchArtifacts]:
    corpus = _Corpus(jobs)
    criteria = [_criterion_oracle(jobs)]
    criteria.append(_criterion_unit_sum(corpus))
    criteria.append(_criterion_schedule())
    criteria.append(_criterion_sensitivity(corpus))
    criteria.append(_criterion_robustness(corpus))
    crit6, calibrations = _criterion_severity(corpus, jobs)
    criteria.append(crit6)
    criteria.append(_criterion_tokenization(corpus))
    criteria.append(_criterion_neutrality())
    crit9, profiles = _criterion_classification(corpus)
    criteria.append(crit9)
    criteria.append(_criterion_filter(corpus, jobs))
    return criteria, BenchArtifacts(profiles, calibrations)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def run_bench(jobs: int = 1) -> tuple[dict, BenchArtifacts]:
    """Evaluate all criteria twice (different worker counts) and report.

    The second evaluation backs the determinism criterion: its canonical
    JSON must match the first byte for byte.
    """
    first, artifacts = _evaluate(jobs)
    second, _ = _evaluate(jobs + 1)
    identical = canonical_json(first) == canonical_json(second)
    first.append(
        _crit(
            11,
            "determinism",
            identical,
            {"identical_reports": identical},
            {"identical_reports": True},
        )
    )
    report = {
        "report": REPORT_SCHEMA,
        "defaults": {
            "band_count": DEFAULT_BAND_COUNT,
            "token_count": DEFAULT_TOKEN_COUNT,
            "sample_count": DEFAULT_SAMPLE_COUNT,
            "seed": BENCH_SEED,
        },
        "criteria": first,
        "all_passed": all(c["passed"] for c in first),
    }
    return report, artifacts


def report_to_csv(report: dict) -> str:
    import csv as _csv
    import io as _io

    buf = _io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "name", "passed", "measured"])
    for c in report["criteria"]:
        writer.writerow([c["id"], c["name"], c["passed"], canonical_json(c["measured"])])
    return buf.getvalue()
