"""Spectral degradation curves.

Pipeline: residual plane -> centered spectral energy maps -> Gaussian ring
masks -> band-wise residual-to-degraded energy ratios -> unit-sum curve.
All functions are pure; images are plain 2-D float arrays.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_BAND_COUNT = 25
BAND_FLOOR = 1e-12  # denominator floor for band energy ratios
SIGMA_FRAC_LOW = 0.05  # bandwidth schedule endpoints, as fractions of the
SIGMA_FRAC_HIGH = 0.30  # maximum radial frequency
MIN_SIDE = 8
NAIVE_DFT_MAX_PIXELS = 64 * 64

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class NoDegradationSignal(ValueError):
    """Total band ratio mass is below threshold (residual is effectively zero)."""


def as_luma(img, signed: bool = False) -> np.ndarray:
    """Validate and return a 2-D float64 luminance plane.

    ``signed`` relaxes the nominal [0, 1] range for residual planes; values
    are never range-checked beyond finiteness either way, the flag only
    documents intent at call sites.
    """
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D plane, got shape {arr.shape}")
    h, w = arr.shape
    if h < MIN_SIDE or w < MIN_SIDE:
        raise ValueError(f"image must be at least {MIN_SIDE}x{MIN_SIDE}, got {h}x{w}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    return arr


def to_luma(rgb) -> np.ndarray:
    """Reduce an HxWx3 image to luminance: 0.299 R + 0.587 G + 0.114 B."""
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an HxWx3 image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    r, g, b = LUMA_WEIGHTS
    return as_luma(r * arr[:, :, 0] + g * arr[:, :, 1] + b * arr[:, :, 2], signed=True)


def residual(degraded, clean) -> np.ndarray:
    """Signed pixel-wise difference degraded - clean."""
    d = as_luma(degraded, signed=True)
    c = as_luma(clean, signed=True)
    if d.shape != c.shape:
        raise ValueError(f"dimension mismatch: {d.shape} vs {c.shape}")
    return d - c


def spectrum_center(height: int, width: int) -> tuple[int, int]:
    """Grid location of the DC bin after centering."""
    return height // 2, width // 2


def radial_grid(height: int, width: int) -> np.ndarray:
    """Euclidean distance of every bin to the centered DC bin, in pixels."""
    cy, cx = spectrum_center(height, width)
    yy = np.arange(height, dtype=np.float64)[:, None] - cy
    xx = np.arange(width, dtype=np.float64)[None, :] - cx
    return np.hypot(yy, xx)


def max_radial_frequency(height: int, width: int) -> float:
    return math.hypot(height, width) / 2.0


def energy_map(img) -> np.ndarray:
    """Squared magnitude of the unnormalized 2-D DFT, DC bin at grid center.

    Total energy obeys Parseval for the unnormalized transform:
    sum(values) == H * W * sum(pixel**2).
    """
    x = as_luma(img, signed=True)
    spectrum = np.fft.fft2(x)
    return np.fft.fftshift(np.abs(spectrum) ** 2)


def naive_dft_energy(img) -> np.ndarray:
    """Brute-force double-sum DFT energy map; verification oracle for energy_map.

    Independent code path: explicit per-bin accumulation, no FFT, own
    center-shift indexing. Guarded to small images.
    """
    x = as_luma(img, signed=True)
    h, w = x.shape
    if h * w > NAIVE_DFT_MAX_PIXELS:
        raise ValueError(f"naive DFT guarded to {NAIVE_DFT_MAX_PIXELS} pixels, got {h}x{w}")
    rows = np.arange(h, dtype=np.float64)
    cols = np.arange(w, dtype=np.float64)
    out = np.empty((h, w), dtype=np.float64)
    cy, cx = spectrum_center(h, w)
    for u in range(h):
        row_phase = np.exp(-2j * np.pi * u * rows / h)
        for v in range(w):
            col_phase = np.exp(-2j * np.pi * v * cols / w)
            bin_value = np.sum(x * (row_phase[:, None] * col_phase[None, :]))
            out[(u + cy) % h, (v + cx) % w] = np.abs(bin_value) ** 2
    return out


def rotate_180_about_dc(energy: np.ndarray) -> np.ndarray:
    """Map each bin to its point-reflection through the DC bin.

    For the energy map of a real image this is an identity up to float
    noise (conjugate symmetry of the spectrum).
    """
    h, w = energy.shape
    return np.roll(energy[::-1, ::-1], (1 - h % 2, 1 - w % 2), axis=(0, 1))


@dataclass(frozen=True)
class BandMaskSpec:
    """Center frequency and bandwidth of one Gaussian ring, in pixels."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu >= 0.0):
            raise ValueError(f"mu must be finite and >= 0, got {self.mu}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"sigma must be finite and > 0, got {self.sigma}")


@dataclass(frozen=True)
class BandMaskSet:
    """Stack of ring-shaped Gaussian masks over a centered frequency grid.

    masks[b][h, w] = exp(-(d(h, w) - mu_b)**2 / (2 sigma_b**2)) where d is
    the Euclidean distance to the grid center. Treat arrays as read-only.
    """

    specs: tuple[BandMaskSpec, ...]
    height: int
    width: int
    masks: np.ndarray  # (B, H, W)

    @property
    def band_count(self) -> int:
        return len(self.specs)

    @property
    def centers(self) -> np.ndarray:
        return np.array([s.mu for s in self.specs], dtype=np.float64)


def default_band_specs(height: int, width: int, band_count: int = DEFAULT_BAND_COUNT) -> tuple[BandMaskSpec, ...]:
    """Linear schedules: centers 0..R_max, widths 0.05..0.3 of R_max.

    The bandwidth fractions are of the maximum radial frequency, which
    keeps the masks resolution-invariant.
    """
    if band_count < 2:
        raise ValueError(f"band_count must be >= 2, got {band_count}")
    if height < MIN_SIDE or width < MIN_SIDE:
        raise ValueError(f"grid must be at least {MIN_SIDE}x{MIN_SIDE}, got {height}x{width}")
    r_max = max_radial_frequency(height, width)
    mus = np.linspace(0.0, r_max, band_count)
    sigmas = np.linspace(SIGMA_FRAC_LOW * r_max, SIGMA_FRAC_HIGH * r_max, band_count)
    return tuple(BandMaskSpec(float(m), float(s)) for m, s in zip(mus, sigmas))


def mask_set(specs, height: int, width: int) -> BandMaskSet:
    """Materialize Gaussian ring masks for the given specs on a grid."""
    specs = tuple(specs)
    if len(specs) < 2:
        raise ValueError("a mask set needs at least 2 bands")
    mus = [s.mu for s in specs]
    if any(b <= a for a, b in zip(mus, mus[1:])):
        raise ValueError("band centers must be strictly increasing")
    d = radial_grid(height, width)
    stack = np.empty((len(specs), height, width), dtype=np.float64)
    for i, s in enumerate(specs):
        stack[i] = np.exp(-((d - s.mu) ** 2) / (2.0 * s.sigma**2))
    return BandMaskSet(specs=specs, height=height, width=width, masks=stack)


def default_mask_set(height: int, width: int, band_count: int = DEFAULT_BAND_COUNT) -> BandMaskSet:
    return mask_set(default_band_specs(height, width, band_count), height, width)


def band_ratios(residual_energy, degraded_energy, masks: BandMaskSet) -> np.ndarray:
    """Raw per-band energy ratios: masked residual energy over masked degraded energy."""
    e_r = np.asarray(residual_energy, dtype=np.float64)
    e_y = np.asarray(degraded_energy, dtype=np.float64)
    if e_r.shape != e_y.shape or e_r.shape != (masks.height, masks.width):
        raise ValueError(
            f"dimension mismatch: residual {e_r.shape}, degraded {e_y.shape}, "
            f"masks {(masks.height, masks.width)}"
        )
    num = np.tensordot(masks.masks, e_r, axes=([1, 2], [0, 1]))
    den = np.tensordot(masks.masks, e_y, axes=([1, 2], [0, 1]))
    return num / np.maximum(den, BAND_FLOOR)


@dataclass(frozen=True)
class DegradationFrequencyCurve:
    """Unit-sum band-wise degradation signature.

    raw_ratios holds residual-to-degraded energy ratios per band;
    normalized is raw_ratios scaled to sum to one; centers are the band
    center frequencies in pixels.
    """

    centers: np.ndarray
    raw_ratios: np.ndarray
    normalized: np.ndarray
    band_count: int

    def to_dict(self) -> dict:
        return {
            "band_count": self.band_count,
            "centers": [float(v) for v in self.centers],
            "raw_ratios": [float(v) for v in self.raw_ratios],
            "normalized": [float(v) for v in self.normalized],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DegradationFrequencyCurve":
        centers = np.asarray(d["centers"], dtype=np.float64)
        raw = np.asarray(d["raw_ratios"], dtype=np.float64)
        normalized = np.asarray(d["normalized"], dtype=np.float64)
        band_count = int(d["band_count"])
        if not (len(centers) == len(raw) == len(normalized) == band_count):
            raise ValueError("curve field lengths disagree with band_count")
        return cls(centers=centers, raw_ratios=raw, normalized=normalized, band_count=band_count)

    @classmethod
    def from_json(cls, text: str) -> "DegradationFrequencyCurve":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["band", "center", "raw_ratio", "normalized"])
        for b in range(self.band_count):
            writer.writerow([b, repr(float(self.centers[b])), repr(float(self.raw_ratios[b])), repr(float(self.normalized[b]))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DegradationFrequencyCurve":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["band", "center", "raw_ratio", "normalized"]:
            raise ValueError("bad curve CSV header")
        body = [row for row in rows[1:] if row]
        centers = np.array([float(r[1]) for r in body])
        raw = np.array([float(r[2]) for r in body])
        normalized = np.array([float(r[3]) for r in body])
        return cls(centers=centers, raw_ratios=raw, normalized=normalized, band_count=len(body))


def uniform_curve(centers) -> DegradationFrequencyCurve:
    """Flat 1/B curve over the given centers; zero raw ratios."""
    centers = np.asarray(centers, dtype=np.float64)
    b = len(centers)
    return DegradationFrequencyCurve(
        centers=centers,
        raw_ratios=np.zeros(b),
        normalized=np.full(b, 1.0 / b),
        band_count=b,
    )


def normalize_ratios(raw_ratios, centers, fallback_uniform: bool = False) -> DegradationFrequencyCurve:
    """Scale raw ratios to unit sum.

    Raises NoDegradationSignal when total mass is below band_count * floor,
    unless fallback_uniform asks for the flat 1/B bootstrap curve instead.
    """
    raw = np.asarray(raw_ratios, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    if raw.ndim != 1 or raw.shape != centers.shape:
        raise ValueError("raw_ratios and centers must be 1-D and equal length")
    if not np.all(np.isfinite(raw)) or np.any(raw < 0.0):
        raise ValueError("raw ratios must be finite and >= 0")
    total = float(np.sum(raw))
    if total < len(raw) * BAND_FLOOR:
        if fallback_uniform:
            return uniform_curve(centers)
        raise NoDegradationSignal(
            f"total band ratio mass {total:.3e} is below threshold; "
            "residual carries no usable signal"
        )
    return DegradationFrequencyCurve(
        centers=centers,
        raw_ratios=raw,
        normalized=raw / total,
        band_count=len(raw),
    )


def compute_dfc(
    degraded,
    clean,
    band_count: int = DEFAULT_BAND_COUNT,
    *,
    masks: BandMaskSet | None = None,
    fallback_uniform: bool = False,
) -> DegradationFrequencyCurve:
    """Full curve pipeline for a degraded/clean luminance pair.

    ``masks`` may carry a precomputed default mask set for the image size
    (they are expensive to rebuild in tight loops); it must match the
    image dimensions and band_count.
    """
    d = as_luma(degraded)
    c = as_luma(clean)
    r = residual(d, c)
    h, w = d.shape
    if masks is None:
        masks = default_mask_set(h, w, band_count)
    elif (masks.height, masks.width) != (h, w) or masks.band_count != band_count:
        raise ValueError("precomputed mask set does not match image size / band count")
    e_r = energy_map(r)
    e_y = energy_map(d)
    raw = band_ratios(e_r, e_y, masks)
    return normalize_ratios(raw, masks.centers, fallback_uniform=fallback_uniform)


def compute_dfc_rgb(
    degraded_rgb,
    clean_rgb,
    band_count: int = DEFAULT_BAND_COUNT,
    *,
    channel_mode: str = "luma",
    masks: BandMaskSet | None = None,
    fallback_uniform: bool = False,
) -> DegradationFrequencyCurve:
    """Curve for color inputs.

    luma mode reduces to luminance first; per-channel mode computes the
    raw ratio vector per channel, averages them, and renormalizes, which
    keeps the raw/normalized consistency invariant intact.
    """
    if channel_mode == "luma":
        return compute_dfc(
            to_luma(degraded_rgb), to_luma(clean_rgb), band_count, masks=masks, fallback_uniform=fallback_uniform
        )
    if channel_mode != "per-channel":
        raise ValueError(f"unknown channel_mode {channel_mode!r}")
    d = np.asarray(degraded_rgb, dtype=np.float64)
    c = np.asarray(clean_rgb, dtype=np.float64)
    if d.ndim != 3 or d.shape[2] != 3 or d.shape != c.shape:
        raise ValueError("per-channel mode needs two HxWx3 images of equal shape")
    h, w = d.shape[:2]
    if masks is None:
        masks = default_mask_set(h, w, band_count)
    raws = []
    for ch in range(3):
        plane_d = as_luma(d[:, :, ch])
        plane_r = residual(plane_d, c[:, :, ch])
        raws.append(band_ratios(energy_map(plane_r), energy_map(plane_d), masks))
    mean_raw = np.mean(raws, axis=0)
    return normalize_ratios(mean_raw, masks.centers, fallback_uniform=fallback_uniform)
