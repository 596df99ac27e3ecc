import numpy as np
import pytest

from dfcurve.rng import random_uniform
from dfcurve.spectral import BandMaskSpec, compute_dfc, normalize_ratios, uniform_curve
from dfcurve.degrade import add_gaussian_noise
from dfcurve.tokens import (
    _LinearDensity,
    equal_area_partition,
    initial_params,
    mass_capture_weights,
    sample_and_aggregate,
    sample_params,
    tokenize,
    tokens_to_json,
    uniform_weights,
)

CENTERS_25 = np.linspace(0.0, 181.01933598375618, 25)  # default schedule on 256x256


def _random_curve(seed, b=25, centers=None):
    raw = random_uniform(seed, 21, b) + 1e-6
    return normalize_ratios(raw, CENTERS_25 if centers is None else centers)


def _brute_force_quantiles(curve, qs, grid_points=100_000):
    """Independent oracle: tabulate the CDF on a dense grid and invert."""
    xs = np.linspace(curve.centers[0], curve.centers[-1], grid_points)
    ys = np.interp(xs, curve.centers, curve.normalized)
    cdf = np.concatenate([[0.0], np.cumsum((ys[1:] + ys[:-1]) / 2 * np.diff(xs))])
    cdf /= cdf[-1]
    return [float(np.interp(q, cdf, xs)) for q in qs]


# --- equal-area partition -----------------------------------------------------


def test_uniform_curve_quartile_boundaries():
    part = equal_area_partition(uniform_curve(CENTERS_25), 4)
    r_max = CENTERS_25[-1]
    assert part.edges[0] == 0.0
    assert part.edges[-1] == pytest.approx(r_max, abs=1e-12)
    for k in (1, 2, 3):
        assert part.edges[k] == pytest.approx(r_max * k / 4, abs=1e-9)


def test_single_region_partition():
    part = equal_area_partition(uniform_curve(CENTERS_25), 1)
    assert part.region_count == 1
    assert part.regions == [(0.0, pytest.approx(CENTERS_25[-1]))]


def test_low_mass_curve_boundaries_fall_below_first_center():
    raw = np.full(25, 0.03 / 24)
    raw[0] = 0.97
    curve = normalize_ratios(raw, CENTERS_25)
    part = equal_area_partition(curve, 4)
    assert all(part.edges[k] < CENTERS_25[1] for k in (1, 2, 3))
    oracle = _brute_force_quantiles(curve, [0.25, 0.5, 0.75])
    for k, expected in zip((1, 2, 3), oracle):
        assert abs(part.edges[k] - expected) <= 1e-4 * CENTERS_25[-1]


def test_partition_quantiles_match_brute_force_on_random_curves():
    for seed in range(5):
        curve = _random_curve(seed)
        part = equal_area_partition(curve, 4)
        oracle = _brute_force_quantiles(curve, [0.25, 0.5, 0.75])
        for k, expected in zip((1, 2, 3), oracle):
            assert abs(part.edges[k] - expected) <= 1e-4 * CENTERS_25[-1]


def test_equal_mass_property_over_random_curves():
    for seed in range(200):
        curve = _random_curve(seed)
        part = equal_area_partition(curve, 4)
        dens = _LinearDensity.from_curve(curve)
        for lo, hi in part.regions:
            assert abs(dens.mass(lo, hi) - 0.25) <= 1e-6


def test_reversed_curve_mirrors_boundaries():
    for seed in range(10):
        curve = _random_curve(seed)
        reversed_curve = normalize_ratios(curve.raw_ratios[::-1], CENTERS_25)
        fwd = equal_area_partition(curve, 4).edges
        rev = equal_area_partition(reversed_curve, 4).edges
        r_max = CENTERS_25[-1]
        mirrored = r_max - rev[::-1]
        assert np.max(np.abs(fwd - mirrored)) <= 1e-6


def test_partition_rejects_bad_region_count():
    with pytest.raises(ValueError):
        equal_area_partition(uniform_curve(CENTERS_25), 0)


def test_flat_extension_beyond_end_centers():
    # centers that do not span the axis: density extends flat to the ends
    centers = np.array([2.0, 4.0, 6.0])
    curve = normalize_ratios(np.array([1.0, 1.0, 1.0]), centers)
    part = equal_area_partition(curve, 2, axis_max=8.0)
    assert part.edges[-1] == 8.0
    assert part.edges[1] == pytest.approx(4.0, abs=1e-9)  # flat density -> midpoint


# --- initial params ------------------------------------------------------------


def test_initial_params_midpoint_halfwidth():
    from dfcurve.tokens import Partition

    part = Partition(edges=np.array([0.0, 10.0]))
    (spec,) = initial_params(part)
    assert spec.mu == 5.0 and spec.sigma == 5.0


def test_initial_params_uniform_quartet():
    part = equal_area_partition(uniform_curve(CENTERS_25), 4)
    mus = [s.mu for s in initial_params(part)]
    assert mus == [
        pytest.approx(22.63, abs=0.01),
        pytest.approx(67.88, abs=0.01),
        pytest.approx(113.14, abs=0.01),
        pytest.approx(158.39, abs=0.01),
    ]


# --- sampling and aggregation -----------------------------------------------------


def test_single_candidate_is_returned_exactly():
    init = BandMaskSpec(mu=50.0, sigma=10.0)
    sp = sample_params(init, sample_count=1, jitter_frac=0.2, seed=5)
    refined = sample_and_aggregate(init, sample_count=1, jitter_frac=0.2, seed=5)
    assert sp.weights[0] == 1.0
    assert refined.mu == sp.candidates[0, 0]
    assert refined.sigma == sp.candidates[0, 1]


def test_zero_jitter_returns_initial():
    init = BandMaskSpec(mu=50.0, sigma=10.0)
    for seed in (0, 1, 2):
        refined = sample_and_aggregate(init, 5, 0.0, mass_capture_weights(_random_curve(0)), seed=seed)
        assert refined.mu == pytest.approx(50.0, abs=1e-12)
        assert refined.sigma == pytest.approx(10.0, abs=1e-12)


def test_weights_sum_to_one():
    init = BandMaskSpec(mu=50.0, sigma=10.0)
    sp = sample_params(init, 5, 0.1, mass_capture_weights(_random_curve(3)), seed=7)
    assert float(np.sum(sp.weights)) == pytest.approx(1.0, abs=1e-9)
    assert np.all(sp.weights >= 0.0)


def test_mass_capture_weights_prefer_heavy_region():
    # curve with all mass near zero: low-mu candidates must win
    raw = np.full(25, 1e-4)
    raw[0] = 1.0
    curve = normalize_ratios(raw, CENTERS_25)
    fn = mass_capture_weights(curve)
    scores = fn(np.array([5.0, 150.0]), np.array([10.0, 10.0]))
    assert scores[0] > scores[1]


def test_refinement_locality_bound():
    init = BandMaskSpec(mu=60.0, sigma=20.0)
    width = 2 * init.sigma
    jitter = 0.1
    devs = [
        abs(sample_and_aggregate(init, 5, jitter, None, seed=s).mu - init.mu) for s in range(500)
    ]
    assert max(devs) <= 4 * jitter * width


def test_uniform_weight_neutrality():
    init = BandMaskSpec(mu=60.0, sigma=20.0)
    mus = np.array([sample_and_aggregate(init, 5, 0.1, None, seed=s).mu for s in range(1000)])
    se = np.std(mus, ddof=1) / np.sqrt(len(mus))
    assert abs(float(np.mean(mus)) - 60.0) <= 3 * se


def test_sampling_guards():
    init = BandMaskSpec(mu=60.0, sigma=20.0)
    with pytest.raises(ValueError):
        sample_and_aggregate(init, 0, 0.1, None, seed=0)
    with pytest.raises(ValueError):
        sample_and_aggregate(init, 5, -0.1, None, seed=0)
    with pytest.raises(ValueError):
        sample_and_aggregate(init, 5, 0.1, lambda m, s: np.full_like(m, np.nan), seed=0)


def test_sigma_candidates_floored_positive():
    init = BandMaskSpec(mu=10.0, sigma=1.0)
    for seed in range(50):
        refined = sample_and_aggregate(init, 5, 2.0, None, seed=seed)
        assert refined.sigma >= 0.1 * init.sigma - 1e-12


# --- tokenize ---------------------------------------------------------------------


def test_uniform_curve_tokens():
    tokens = tokenize(uniform_curve(CENTERS_25), 4, 5, 0.1, None, seed=1)
    assert len(tokens) == 4
    for t in tokens:
        assert t.mass == pytest.approx(0.25, abs=1e-9)
        assert abs(t.slope) <= 1e-9
        assert t.peak == pytest.approx(1.0 / 25, abs=1e-12)


def test_token_masses_sum_to_one_over_random_curves():
    for seed in range(100):
        tokens = tokenize(_random_curve(seed), 4, 5, 0.1, None, seed=seed)
        assert abs(sum(t.mass for t in tokens) - 1.0) <= 1e-6


def test_tokenize_deterministic(scene128, masks128):
    curve = compute_dfc(add_gaussian_noise(scene128, 25.0, seed=7), scene128, masks=masks128)
    a = tokenize(curve, seed=3)
    b = tokenize(curve, seed=3)
    assert a == b


def test_noise_curve_last_region_is_densest(scene128, masks128):
    curve = compute_dfc(add_gaussian_noise(scene128, 25.0, seed=7), scene128, masks=masks128)
    tokens = tokenize(curve, 4, 5, 0.1, None, seed=3)
    part = equal_area_partition(curve, 4)
    widths = np.diff(part.edges)
    densities = [t.mass / w for t, w in zip(tokens, widths)]
    assert np.argmax(densities) == 3
    assert np.argmin(widths) == 3


def test_refined_mu_stays_near_region(scene128, masks128):
    curve = compute_dfc(add_gaussian_noise(scene128, 25.0, seed=7), scene128, masks=masks128)
    part = equal_area_partition(curve, 4)
    for seed in range(20):
        tokens = tokenize(curve, 4, 5, 0.1, None, seed=seed)
        for t, (lo, hi) in zip(tokens, part.regions):
            width = hi - lo
            assert lo - width <= t.mu_star <= hi + width
            assert t.sigma_star > 0.0


def test_token_slope_sign_tracks_curve_direction():
    rising = normalize_ratios(np.linspace(0.1, 1.0, 25), CENTERS_25)
    tokens = tokenize(rising, 4, 1, 0.0, None, seed=0)
    assert all(t.slope > 0 for t in tokens)


def test_region_slope_matches_exact_rational_oracle():
    """Continuous least-squares slope checked against exact Fraction
    integration of the same piecewise-linear interpolant."""
    from fractions import Fraction

    curve = _random_curve(0)
    dens = _LinearDensity.from_curve(curve)
    knots_x = [Fraction(x) for x in dens.knots_x]
    knots_y = [Fraction(y) for y in dens.knots_y]

    def value(x):
        for i in range(len(knots_x) - 1):
            if knots_x[i] <= x <= knots_x[i + 1]:
                t = (x - knots_x[i]) / (knots_x[i + 1] - knots_x[i])
                return knots_y[i] + t * (knots_y[i + 1] - knots_y[i])
        raise AssertionError("x outside knots")

    for lo, hi in [(0.0, 22.5), (10.3, 57.9), (57.9, 90.0), (33.0, 37.0)]:
        flo, fhi = Fraction(lo), Fraction(hi)
        cuts = [flo] + [x for x in knots_x if flo < x < fhi] + [fhi]
        integral_y = Fraction(0)
        integral_xy = Fraction(0)
        for p, q in zip(cuts[:-1], cuts[1:]):
            yp, yq = value(p), value(q)
            m = (yq - yp) / (q - p)
            integral_y += (yp + yq) * (q - p) / 2
            integral_xy += yp * (q * q - p * p) / 2 + m * ((q**3 - p**3) / 3 - p * (q * q - p * p) / 2)
        mid = (flo + fhi) / 2
        var = (fhi - flo) ** 3 / 12
        expected = float((integral_xy - mid * integral_y) / var)
        assert dens.region_slope(lo, hi) == pytest.approx(expected, rel=1e-12)


def test_region_peak_matches_dense_grid():
    curve = _random_curve(3)
    dens = _LinearDensity.from_curve(curve)
    for lo, hi in [(0.0, 22.5), (10.3, 57.9), (33.0, 37.0)]:
        inside = curve.centers[(curve.centers > lo) & (curve.centers < hi)]
        xs = np.concatenate([np.linspace(lo, hi, 100_001), inside])
        expected = float(np.max(np.interp(xs, curve.centers, curve.normalized)))
        assert dens.region_peak(lo, hi) == pytest.approx(expected, abs=1e-12)


def test_tokens_json_schema_and_round_trip():
    import json

    from dfcurve.tokens import tokens_from_json

    tokens = tokenize(uniform_curve(CENTERS_25), 2, 1, 0.0, None, seed=0)
    payload = json.loads(tokens_to_json(tokens))
    assert [t["region"] for t in payload] == [0, 1]
    assert set(payload[0]) == {"region", "mu", "sigma", "mass", "peak", "slope"}
    assert tokens_from_json(tokens_to_json(tokens)) == tokens


def test_uniform_weight_fn_is_flat():
    scores = uniform_weights(np.array([1.0, 2.0]), np.array([3.0, 4.0]))
    assert np.array_equal(scores, [0.0, 0.0])
