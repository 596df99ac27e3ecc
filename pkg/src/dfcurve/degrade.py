"""Synthetic paired degradations: noise, low light, blur, rain, haze.

Analytic stand-ins tuned to produce distinct band-wise spectral
signatures at desk scale, not photorealism. Every generator is
deterministic given (input, params, seed) and clamps its output to [0, 1].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .rng import random_normal, random_uniform
from .spectral import as_luma

# rng stream ids (see rng module): one per independent draw purpose
STREAM_NOISE = 1
STREAM_RAIN_GEOMETRY = 2
STREAM_RAIN_INTENSITY = 3

KINDS = ("gaussian_noise", "low_light", "blur", "rain", "haze")


def add_gaussian_noise(img, sigma: float, seed: int) -> np.ndarray:
    """Additive white Gaussian noise; sigma in 0-255 intensity units."""
    x = as_luma(img)
    if not sigma > 0.0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    h, w = x.shape
    noise = random_normal(seed, STREAM_NOISE, h * w).reshape(h, w)
    return np.clip(x + noise * (sigma / 255.0), 0.0, 1.0)


def gamma_darken(img, gamma: float) -> np.ndarray:
    """Low-light via per-pixel power law; gamma >= 1 darkens."""
    x = as_luma(img)
    if not gamma >= 1.0:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    return x**gamma


def gaussian_blur(img, radius: float) -> np.ndarray:
    """Convolution with a normalized Gaussian kernel of std ``radius``.

    Kernel truncated at 3 * radius; reflective boundary handling.
    """
    x = as_luma(img)
    if not radius > 0.0:
        raise ValueError(f"radius must be > 0, got {radius}")
    out = ndimage.gaussian_filter(x, sigma=radius, mode="reflect", truncate=3.0)
    return np.clip(out, 0.0, 1.0)


def rain_streaks(img, density: float, angle: float, length: int, seed: int) -> np.ndarray:
    """Additive bright oriented streaks at seeded random positions.

    density is the expected streak count per pixel; angle is degrees from
    the horizontal image axis (90 = vertical fall); each streak gets an
    intensity drawn uniformly from [0.2, 0.5] and is splat bilinearly so
    the profile is soft rather than single-pixel aliased.
    """
    x = as_luma(img)
    if not (0.0 < density <= 1.0):
        raise ValueError(f"density must be in (0, 1], got {density}")
    if length < 2:
        raise ValueError(f"length must be >= 2, got {length}")
    h, w = x.shape
    count = int(round(density * h * w))
    if count == 0:
        return x.copy()

    starts = random_uniform(seed, STREAM_RAIN_GEOMETRY, 2 * count).reshape(count, 2)
    intens = 0.2 + 0.3 * random_uniform(seed, STREAM_RAIN_INTENSITY, count)
    theta = math.radians(angle)
    dy, dx = math.sin(theta), math.cos(theta)
    steps = np.arange(length, dtype=np.float64)

    layer = np.zeros((h, w), dtype=np.float64)
    for k in range(count):
        ys = starts[k, 0] * (h - 1) + steps * dy
        xs = starts[k, 1] * (w - 1) + steps * dx
        y0 = np.floor(ys).astype(np.int64)
        x0 = np.floor(xs).astype(np.int64)
        fy = ys - y0
        fx = xs - x0
        for oy, ox, wgt in (
            (0, 0, (1 - fy) * (1 - fx)),
            (0, 1, (1 - fy) * fx),
            (1, 0, fy * (1 - fx)),
            (1, 1, fy * fx),
        ):
            yy = y0 + oy
            xx = x0 + ox
            ok = (yy >= 0) & (yy < h) & (xx >= 0) & (xx < w)
            np.add.at(layer, (yy[ok], xx[ok]), intens[k] * wgt[ok])
    # soften the cross-profile so streak energy concentrates mid-spectrum
    layer = ndimage.gaussian_filter(layer, sigma=0.8, mode="constant")
    return np.clip(x + layer, 0.0, 1.0)


def haze(img, transmission: float, airlight: float) -> np.ndarray:
    """Atmospheric scattering: pixel * t + A * (1 - t). t = 1 is identity."""
    x = as_luma(img)
    if not (0.0 < transmission <= 1.0):
        raise ValueError(f"transmission must be in (0, 1], got {transmission}")
    if not (0.0 <= airlight <= 1.0):
        raise ValueError(f"airlight must be in [0, 1], got {airlight}")
    return np.clip(x * transmission + airlight * (1.0 - transmission), 0.0, 1.0)


@dataclass(frozen=True)
class DegradationSpec:
    """One degradation to apply: kind, kind-specific params, seed.

    JSON form flattens params at the top level, e.g.
    {"kind": "gaussian_noise", "sigma": 25, "seed": 7}.
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    _REQUIRED = {
        "gaussian_noise": ("sigma",),
        "low_light": ("gamma",),
        "blur": ("radius",),
        "rain": ("density", "angle", "length"),
        "haze": ("transmission", "airlight"),
    }

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown degradation kind {self.kind!r}")
        missing = [k for k in self._REQUIRED[self.kind] if k not in self.params]
        if missing:
            raise ValueError(f"{self.kind} spec missing params: {missing}")
        p = self.params
        if self.kind == "gaussian_noise" and not p["sigma"] > 0:
            raise ValueError("gaussian_noise.sigma must be > 0")
        if self.kind == "low_light" and not p["gamma"] >= 1:
            raise ValueError("low_light.gamma must be >= 1")
        if self.kind == "blur" and not p["radius"] > 0:
            raise ValueError("blur.radius must be > 0")
        if self.kind == "rain" and not (0 < p["density"] <= 1):
            raise ValueError("rain.density must be in (0, 1]")
        if self.kind == "haze":
            if not (0 < p["transmission"] <= 1):
                raise ValueError("haze.transmission must be in (0, 1]")
            if not (0 <= p["airlight"] <= 1):
                raise ValueError("haze.airlight must be in [0, 1]")

    def apply(self, img) -> np.ndarray:
        p = self.params
        if self.kind == "gaussian_noise":
            return add_gaussian_noise(img, p["sigma"], self.seed)
        if self.kind == "low_light":
            return gamma_darken(img, p["gamma"])
        if self.kind == "blur":
            return gaussian_blur(img, p["radius"])
        if self.kind == "rain":
            return rain_streaks(img, p["density"], p["angle"], int(p["length"]), self.seed)
        return haze(img, p["transmission"], p["airlight"])

    def to_dict(self) -> dict:
        d = {"kind": self.kind, **self.params}
        d["seed"] = self.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DegradationSpec":
        d = dict(d)
        try:
            kind = d.pop("kind")
        except KeyError:
            raise ValueError("degradation spec needs a 'kind' field") from None
        seed = int(d.pop("seed", 0))
        return cls(kind=kind, params=d, seed=seed)

    @classmethod
    def from_json(cls, text: str) -> "DegradationSpec":
        return cls.from_dict(json.loads(text))
