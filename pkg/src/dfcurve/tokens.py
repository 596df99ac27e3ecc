"""Adaptive band tokenization of degradation curves.

A curve is read as a piecewise-linear density over the radial frequency
axis, split into equal-mass regions by analytic quantile inversion, and
each region's mask parameters are refined by jittered sampling with a
pluggable score function (sample -> score -> softmax -> weighted sum).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .rng import random_normal
from .spectral import BandMaskSpec, DegradationFrequencyCurve

DEFAULT_TOKEN_COUNT = 4
DEFAULT_SAMPLE_COUNT = 5
DEFAULT_JITTER_FRAC = 0.1
SIGMA_CANDIDATE_FLOOR_FRAC = 0.1  # floor on sigma candidates, as fraction of the initial sigma

# rng stream base for per-region jitter draws (region i uses base + i)
STREAM_TOKEN_JITTER = 100

WeightFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class _LinearDensity:
    """Piecewise-linear curve over [0, axis_max] with knot values.

    ``values`` interpolates the curve itself (flat beyond end centers);
    ``density`` is the same shape scaled so it integrates to one, used for
    masses and quantiles.
    """

    knots_x: np.ndarray
    knots_y: np.ndarray  # un-renormalized curve values at knots
    cum: np.ndarray  # cumulative integral of knots_y up to each knot
    total: float

    @classmethod
    def from_curve(cls, dfc: DegradationFrequencyCurve, axis_max: float | None = None) -> "_LinearDensity":
        centers = np.asarray(dfc.centers, dtype=np.float64)
        vals = np.asarray(dfc.normalized, dtype=np.float64)
        if axis_max is None:
            axis_max = float(centers[-1])
        if axis_max <= 0:
            raise ValueError("axis_max must be positive")
        xs = list(centers)
        ys = list(vals)
        if xs[0] > 0.0:
            xs.insert(0, 0.0)
            ys.insert(0, ys[0])
        if xs[-1] < axis_max:
            xs.append(axis_max)
            ys.append(ys[-1])
        knots_x = np.asarray(xs)
        knots_y = np.asarray(ys)
        if np.any(np.diff(knots_x) <= 0):
            raise ValueError("curve centers must be strictly increasing")
        seg = 0.5 * (knots_y[1:] + knots_y[:-1]) * np.diff(knots_x)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        total = float(cum[-1])
        if total <= 0.0:
            raise ValueError("curve has no mass; cannot partition")
        return cls(knots_x=knots_x, knots_y=knots_y, cum=cum, total=total)

    @property
    def axis_max(self) -> float:
        return float(self.knots_x[-1])

    def value(self, x) -> np.ndarray:
        """Curve value (not density-renormalized) at x, flat outside knots."""
        return np.interp(x, self.knots_x, self.knots_y)

    def cumulative(self, x) -> np.ndarray:
        """Integral of the curve from 0 to x (un-renormalized)."""
        x = np.asarray(x, dtype=np.float64)
        xc = np.clip(x, self.knots_x[0], self.knots_x[-1])
        idx = np.clip(np.searchsorted(self.knots_x, xc, side="right") - 1, 0, len(self.knots_x) - 2)
        x0 = self.knots_x[idx]
        y0 = self.knots_y[idx]
        slope = (self.knots_y[idx + 1] - y0) / (self.knots_x[idx + 1] - x0)
        t = xc - x0
        return self.cum[idx] + y0 * t + 0.5 * slope * t * t

    def mass(self, lo: float, hi: float) -> float:
        """Fraction of total mass in [lo, hi]."""
        c = self.cumulative(np.array([lo, hi]))
        return float((c[1] - c[0]) / self.total)

    def quantile(self, q: float) -> float:
        """x such that cumulative(x) == q * total, by per-piece inversion."""
        if q <= 0.0:
            return float(self.knots_x[0])
        if q >= 1.0:
            return float(self.knots_x[-1])
        target = q * self.total
        idx = int(np.searchsorted(self.cum, target, side="right") - 1)
        idx = min(max(idx, 0), len(self.knots_x) - 2)
        x0 = float(self.knots_x[idx])
        x1 = float(self.knots_x[idx + 1])
        y0 = float(self.knots_y[idx])
        slope = (float(self.knots_y[idx + 1]) - y0) / (x1 - x0)
        rem = target - float(self.cum[idx])
        # solve y0*t + slope*t^2/2 = rem for t in [0, x1-x0]
        if abs(slope) < 1e-30:
            t = rem / y0 if y0 > 0 else 0.0
        else:
            disc = y0 * y0 + 2.0 * slope * rem
            t = (-y0 + np.sqrt(max(disc, 0.0))) / slope
        return float(min(max(x0 + t, x0), x1))

    def region_peak(self, lo: float, hi: float) -> float:
        """Max of the interpolated curve over [lo, hi]."""
        inside = self.knots_x[(self.knots_x > lo) & (self.knots_x < hi)]
        candidates = np.concatenate([[lo, hi], inside])
        return float(np.max(self.value(candidates)))

    def region_slope(self, lo: float, hi: float) -> float:
        """Continuous least-squares linear slope of the curve over [lo, hi]."""
        if hi <= lo:
            raise ValueError("empty region")
        cuts = np.concatenate([[lo], self.knots_x[(self.knots_x > lo) & (self.knots_x < hi)], [hi]])
        integral_y = 0.0
        integral_xy = 0.0
        for p, q in zip(cuts[:-1], cuts[1:]):
            yp = float(self.value(p))
            yq = float(self.value(q))
            m = (yq - yp) / (q - p)
            # y(x) = yp + m (x - p) on [p, q]
            integral_y += 0.5 * (yp + yq) * (q - p)
            integral_xy += yp * (q * q - p * p) / 2.0 + m * ((q**3 - p**3) / 3.0 - p * (q * q - p * p) / 2.0)
        mid = 0.5 * (lo + hi)
        var = (hi - lo) ** 3 / 12.0
        return (integral_xy - mid * integral_y) / var


@dataclass(frozen=True)
class Partition:
    """Contiguous half-open radial regions [edges[i], edges[i+1]) covering [0, axis_max]."""

    edges: np.ndarray  # length N+1, edges[0] == 0, edges[-1] == axis_max

    @property
    def region_count(self) -> int:
        return len(self.edges) - 1

    @property
    def regions(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.edges[:-1], self.edges[1:])]


@dataclass(frozen=True)
class SampledParams:
    """Jittered (mu, sigma) candidates with softmax weights."""

    candidates: np.ndarray  # (K, 2)
    weights: np.ndarray  # (K,), sums to 1


@dataclass(frozen=True)
class BandToken:
    """Per-region curve summary: refined mask params plus local statistics."""

    mu_star: float
    sigma_star: float
    mass: float
    peak: float
    slope: float
    region_index: int

    def to_dict(self) -> dict:
        return {
            "region": self.region_index,
            "mu": self.mu_star,
            "sigma": self.sigma_star,
            "mass": self.mass,
            "peak": self.peak,
            "slope": self.slope,
        }


def tokens_to_json(tokens: Sequence[BandToken]) -> str:
    return json.dumps([t.to_dict() for t in tokens])


def tokens_from_json(text: str) -> list[BandToken]:
    payload = json.loads(text)
    return [
        BandToken(
            mu_star=float(t["mu"]),
            sigma_star=float(t["sigma"]),
            mass=float(t["mass"]),
            peak=float(t["peak"]),
            slope=float(t["slope"]),
            region_index=int(t["region"]),
        )
        for t in payload
    ]


def equal_area_partition(
    dfc: DegradationFrequencyCurve, region_count: int = DEFAULT_TOKEN_COUNT, axis_max: float | None = None
) -> Partition:
    """Split the frequency axis so each region holds 1/N of the curve mass.

    Boundaries are the k/N quantiles of the piecewise-linear density,
    found by exact inversion within the linear piece they fall in.
    """
    if region_count < 1:
        raise ValueError(f"region_count must be >= 1, got {region_count}")
    dens = _LinearDensity.from_curve(dfc, axis_max)
    edges = np.empty(region_count + 1, dtype=np.float64)
    edges[0] = 0.0
    edges[-1] = dens.axis_max
    for k in range(1, region_count):
        edges[k] = dens.quantile(k / region_count)
    if np.any(np.diff(edges) < 0):
        raise ValueError("degenerate partition: non-monotone boundaries")
    return Partition(edges=edges)


def initial_params(partition: Partition) -> list[BandMaskSpec]:
    """Midpoint center and half-width bandwidth for each region."""
    return [BandMaskSpec(mu=0.5 * (lo + hi), sigma=0.5 * (hi - lo)) for lo, hi in partition.regions]


def uniform_weights(mus: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    """Score function giving every candidate equal weight after softmax."""
    return np.zeros_like(mus)


def mass_capture_weights(dfc: DegradationFrequencyCurve, axis_max: float | None = None) -> WeightFn:
    """Score candidates by curve mass inside [mu - sigma, mu + sigma]."""
    dens = _LinearDensity.from_curve(dfc, axis_max)

    def score(mus: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
        return np.array([dens.mass(m - s, m + s) for m, s in zip(mus, sigmas)])

    return score


def _softmax(scores: np.ndarray) -> np.ndarray:
    z = scores - np.max(scores)
    e = np.exp(z)
    return e / np.sum(e)


def sample_params(
    initial: BandMaskSpec,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    jitter_frac: float = DEFAULT_JITTER_FRAC,
    weight_fn: WeightFn | None = None,
    seed: int = 0,
    stream: int = STREAM_TOKEN_JITTER,
) -> SampledParams:
    """Draw jittered candidates around the initial params and weight them.

    Jitter is Gaussian with standard deviation jitter_frac * (2 * sigma)
    per coordinate; sigma candidates are floored at 0.1 * sigma so they
    stay positive. Scores go through a softmax to become weights.
    """
    if sample_count < 1:
        raise ValueError(f"sample_count must be >= 1, got {sample_count}")
    if jitter_frac < 0.0:
        raise ValueError(f"jitter_frac must be >= 0, got {jitter_frac}")
    spread = jitter_frac * 2.0 * initial.sigma
    noise = random_normal(seed, stream, 2 * sample_count).reshape(sample_count, 2)
    mus = initial.mu + noise[:, 0] * spread
    sigmas = np.maximum(initial.sigma + noise[:, 1] * spread, SIGMA_CANDIDATE_FLOOR_FRAC * initial.sigma)
    fn = weight_fn if weight_fn is not None else uniform_weights
    scores = np.asarray(fn(mus, sigmas), dtype=np.float64)
    if scores.shape != (sample_count,) or not np.all(np.isfinite(scores)):
        raise ValueError("weight_fn must return one finite score per candidate")
    return SampledParams(candidates=np.column_stack([mus, sigmas]), weights=_softmax(scores))


def sample_and_aggregate(
    initial: BandMaskSpec,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    jitter_frac: float = DEFAULT_JITTER_FRAC,
    weight_fn: WeightFn | None = None,
    seed: int = 0,
    stream: int = STREAM_TOKEN_JITTER,
) -> BandMaskSpec:
    """Weighted sum of jittered candidates: the refined (mu, sigma)."""
    sp = sample_params(initial, sample_count, jitter_frac, weight_fn, seed, stream)
    mu_star = float(np.dot(sp.weights, sp.candidates[:, 0]))
    sigma_star = float(np.dot(sp.weights, sp.candidates[:, 1]))
    return BandMaskSpec(mu=mu_star, sigma=sigma_star)


def tokenize(
    dfc: DegradationFrequencyCurve,
    region_count: int = DEFAULT_TOKEN_COUNT,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    jitter_frac: float = DEFAULT_JITTER_FRAC,
    weight_fn: WeightFn | None = None,
    seed: int = 0,
    axis_max: float | None = None,
) -> list[BandToken]:
    """Equal-area partition, per-region refinement, per-region curve stats.

    Region i draws its jitter from stream STREAM_TOKEN_JITTER + i of the
    given seed, so token count changes never shift other regions' draws.
    """
    partition = equal_area_partition(dfc, region_count, axis_max)
    dens = _LinearDensity.from_curve(dfc, axis_max)
    inits = initial_params(partition)
    tokens = []
    for i, ((lo, hi), init) in enumerate(zip(partition.regions, inits)):
        refined = sample_and_aggregate(
            init, sample_count, jitter_frac, weight_fn, seed, stream=STREAM_TOKEN_JITTER + i
        )
        tokens.append(
            BandToken(
                mu_star=refined.mu,
                sigma_star=refined.sigma,
                mass=dens.mass(lo, hi),
                peak=dens.region_peak(lo, hi),
                slope=dens.region_slope(lo, hi),
                region_index=i,
            )
        )
    return tokens
