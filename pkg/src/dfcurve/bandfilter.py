"""Band-gain restoration baseline: turn raw band ratios into per-band
spectral gains and apply them radially (Wiener-style attenuation)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .spectral import DegradationFrequencyCurve, as_luma, radial_grid, spectrum_center


@dataclass(frozen=True)
class GainCurve:
    """Per-band multiplicative spectral gains in [0, 1]."""

    centers: np.ndarray
    gains: np.ndarray

    def to_dict(self) -> dict:
        return {
            "band_count": len(self.centers),
            "centers": [float(v) for v in self.centers],
            "gain": [float(v) for v in self.gains],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "GainCurve":
        centers = np.asarray(d["centers"], dtype=np.float64)
        gains = np.asarray(d["gain"], dtype=np.float64)
        if len(centers) != len(gains) or len(centers) != int(d["band_count"]):
            raise ValueError("gain curve field lengths disagree with band_count")
        return cls(centers=centers, gains=gains)

    @classmethod
    def from_json(cls, text: str) -> "GainCurve":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["band", "center", "gain"])
        for b, (c, g) in enumerate(zip(self.centers, self.gains)):
            writer.writerow([b, repr(float(c)), repr(float(g))])
        return buf.getvalue()


def wiener_gains(dfc: DegradationFrequencyCurve, strength: float = 1.0) -> GainCurve:
    """Per-band gains 1 - strength * raw_ratio, clamped to [0, 1].

    Uses the raw ratios: the attenuation semantics need the absolute
    residual-to-degraded share, not the unit-sum curve.
    """
    if strength < 0.0:
        raise ValueError(f"strength must be >= 0, got {strength}")
    gains = np.clip(1.0 - strength * dfc.raw_ratios, 0.0, 1.0)
    return GainCurve(centers=np.array(dfc.centers, dtype=np.float64), gains=gains)


def apply_gains(degraded, gain_curve: GainCurve, pin_dc: bool = False) -> np.ndarray:
    """Multiply the spectrum by the gain interpolated at each bin's radius.

    Linear interpolation between band centers, flat extension beyond the
    end centers; inverse transform, real part, clamp to [0, 1]. pin_dc
    forces gain 1 at the zero-frequency bin so mean intensity survives.
    """
    x = as_luma(degraded)
    h, w = x.shape
    if np.any(np.diff(gain_curve.centers) <= 0):
        raise ValueError("gain curve centers must be strictly increasing")
    gains_grid = np.interp(radial_grid(h, w), gain_curve.centers, gain_curve.gains)
    if pin_dc:
        cy, cx = spectrum_center(h, w)
        gains_grid[cy, cx] = 1.0
    spectrum = np.fft.fftshift(np.fft.fft2(x))
    out = np.fft.ifft2(np.fft.ifftshift(spectrum * gains_grid)).real
    return np.clip(out, 0.0, 1.0)
