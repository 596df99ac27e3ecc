"""Degradation fingerprints: per-family curve statistics, nearest-profile
classification, and peak-amplitude severity estimation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .spectral import DegradationFrequencyCurve

VARIANCE_FLOOR = 1e-6  # keeps the distance metric finite on zero-variance bands


@dataclass(frozen=True)
class DegradationProfile:
    """Per-band mean and variance of many curves from one degradation family."""

    label: str
    mean_curve: np.ndarray
    var_curve: np.ndarray
    sample_count: int
    band_count: int

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "band_count": self.band_count,
            "mean": [float(v) for v in self.mean_curve],
            "variance": [float(v) for v in self.var_curve],
            "n": self.sample_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DegradationProfile":
        mean = np.asarray(d["mean"], dtype=np.float64)
        var = np.asarray(d["variance"], dtype=np.float64)
        band_count = int(d["band_count"])
        if not (len(mean) == len(var) == band_count):
            raise ValueError("profile field lengths disagree with band_count")
        if np.any(var < 0):
            raise ValueError("profile variance entries must be >= 0")
        return cls(
            label=str(d["label"]),
            mean_curve=mean,
            var_curve=var,
            sample_count=int(d["n"]),
            band_count=band_count,
        )

    @classmethod
    def from_json(cls, text: str) -> "DegradationProfile":
        return cls.from_dict(json.loads(text))


def build_profile(curves: Sequence[DegradationFrequencyCurve], label: str) -> DegradationProfile:
    """Per-band sample mean and unbiased variance over the given curves.

    Sums use math.fsum (exactly rounded), so the result is bit-identical
    under any permutation of the input order.
    """
    if len(curves) < 2:
        raise ValueError(f"need at least 2 curves, got {len(curves)}")
    band_count = curves[0].band_count
    if any(c.band_count != band_count for c in curves):
        raise ValueError("curves have mixed band counts")
    n = len(curves)
    mean = np.empty(band_count)
    var = np.empty(band_count)
    for b in range(band_count):
        vals = [float(c.normalized[b]) for c in curves]
        m = math.fsum(vals) / n
        var[b] = math.fsum((v - m) ** 2 for v in vals) / (n - 1)
        mean[b] = m
    return DegradationProfile(
        label=label, mean_curve=mean, var_curve=var, sample_count=n, band_count=band_count
    )


def profile_distance(dfc: DegradationFrequencyCurve, profile: DegradationProfile) -> float:
    """Variance-weighted squared distance between a curve and a profile mean."""
    if dfc.band_count != profile.band_count:
        raise ValueError(
            f"band count mismatch: curve {dfc.band_count} vs profile {profile.band_count}"
        )
    diff = dfc.normalized - profile.mean_curve
    return float(np.sum(diff * diff / (profile.var_curve + VARIANCE_FLOOR)))


def classify(
    dfc: DegradationFrequencyCurve, profiles: Sequence[DegradationProfile]
) -> tuple[str, list[tuple[str, float]]]:
    """Nearest profile by variance-weighted distance; lexicographic tie-break."""
    if not profiles:
        raise ValueError("profile set is empty")
    ranked = sorted(
        ((profile_distance(dfc, p), p.label) for p in profiles), key=lambda t: (t[0], t[1])
    )
    return ranked[0][1], [(label, dist) for dist, label in ranked]


def load_profile_library(directory) -> list[DegradationProfile]:
    """All *.json profiles in a directory, sorted by filename."""
    directory = Path(directory)
    paths = sorted(directory.glob("*.json"))
    if not paths:
        raise ValueError(f"no profile JSON files in {directory}")
    return [DegradationProfile.from_json(p.read_text()) for p in paths]


def curve_peak_amplitude(dfc: DegradationFrequencyCurve) -> float:
    """Severity feature: the peak of the raw ratio curve.

    The raw peak grows monotonically with degradation strength (each
    band's residual share of degraded energy rises), whereas the
    unit-sum curve's peak flattens as more bands saturate.
    """
    return float(np.max(dfc.raw_ratios))


@dataclass(frozen=True)
class SeverityCalibration:
    """Monotone map between severity parameters and mean peak amplitudes."""

    label: str
    levels: np.ndarray  # strictly ascending
    peak_amplitudes: np.ndarray  # strictly monotone, either direction
    increasing: bool

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "levels": [float(v) for v in self.levels],
            "peak_amplitudes": [float(v) for v in self.peak_amplitudes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SeverityCalibration":
        d = json.loads(text)
        return build_calibration(d["label"], d["levels"], d["peak_amplitudes"])


def build_calibration(label: str, levels, peak_amplitudes) -> SeverityCalibration:
    levels = np.asarray(levels, dtype=np.float64)
    peaks = np.asarray(peak_amplitudes, dtype=np.float64)
    if len(levels) < 2 or len(levels) != len(peaks):
        raise ValueError("calibration needs >= 2 matched (level, amplitude) pairs")
    if np.any(np.diff(levels) <= 0):
        raise ValueError("calibration levels must be strictly ascending")
    d = np.diff(peaks)
    if np.all(d > 0):
        increasing = True
    elif np.all(d < 0):
        increasing = False
    else:
        raise ValueError("calibration peak amplitudes must be strictly monotone")
    return SeverityCalibration(label=label, levels=levels, peak_amplitudes=peaks, increasing=increasing)


def estimate_severity(
    dfc: DegradationFrequencyCurve, calibration: SeverityCalibration
) -> tuple[float, bool]:
    """Invert the calibration at the curve's peak amplitude.

    Piecewise-linear interpolation, clamped to the calibrated level range;
    the second element reports whether clamping occurred.
    """
    peak = curve_peak_amplitude(dfc)
    if calibration.increasing:
        xp, fp = calibration.peak_amplitudes, calibration.levels
    else:
        xp, fp = calibration.peak_amplitudes[::-1], calibration.levels[::-1]
    clamped = bool(peak < xp[0] or peak > xp[-1])
    level = float(np.interp(peak, xp, fp))
    return level, clamped
