"""Procedural grayscale test scenes and the bundled texture set.

Four texture families (clouds, marble, wood, patches) generated entirely
from the package RNG, so any number of distinct clean scenes is available
hermetically. The four canonical 128x128 textures shipped under data/
were rendered by this module with the seeds in BUNDLED_SEEDS and are used
by the acceptance benchmark.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np
from scipy import ndimage

from .rng import random_uniform

STREAM_SCENE = 10
STREAM_GRAIN = 11

DEFAULT_SIZE = 128
GRAIN_AMPLITUDE = 0.015  # fine deterministic grain so scenes carry high-frequency signal

TEXTURE_KINDS = ("clouds", "marble", "wood", "patches")
BUNDLED_SEEDS = {"clouds": 101, "marble": 202, "wood": 303, "patches": 404}


def _noise(seed: int, h: int, w: int, substream: int = 0) -> np.ndarray:
    return random_uniform(seed, STREAM_SCENE + 1000 * substream, h * w).reshape(h, w)


def _smooth(seed: int, h: int, w: int, sigma: float, substream: int = 0) -> np.ndarray:
    return ndimage.gaussian_filter(_noise(seed, h, w, substream), sigma=sigma, mode="wrap")


def _stretch(x: np.ndarray, lo: float = 0.03, hi: float = 0.97) -> np.ndarray:
    xmin, xmax = float(np.min(x)), float(np.max(x))
    if xmax - xmin < 1e-12:
        return np.full_like(x, 0.5)
    return lo + (hi - lo) * (x - xmin) / (xmax - xmin)


def _with_grain(img: np.ndarray, seed: int) -> np.ndarray:
    h, w = img.shape
    grain = random_uniform(seed, STREAM_GRAIN, h * w).reshape(h, w) - 0.5
    return np.clip(img + GRAIN_AMPLITUDE * grain, 0.0, 1.0)


def clouds(seed: int, height: int = DEFAULT_SIZE, width: int = DEFAULT_SIZE) -> np.ndarray:
    acc = np.zeros((height, width))
    for i, sigma in enumerate((2, 4, 8, 16, 32)):
        acc += sigma * _smooth(seed, height, width, sigma, substream=i)
    return _with_grain(_stretch(acc), seed)


def marble(seed: int, height: int = DEFAULT_SIZE, width: int = DEFAULT_SIZE) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    warp = _smooth(seed, height, width, 6.0)
    veins = np.sin(2.0 * np.pi * (xx / 23.0 + yy / 67.0) + 9.0 * warp)
    return _with_grain(_stretch(0.6 * veins + 1.5 * _smooth(seed, height, width, 12.0, substream=1)), seed)


def wood(seed: int, height: int = DEFAULT_SIZE, width: int = DEFAULT_SIZE) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    cy = height * (0.3 + 0.4 * float(random_uniform(seed, STREAM_SCENE + 5000, 1)[0]))
    cx = width * (0.3 + 0.4 * float(random_uniform(seed, STREAM_SCENE + 5000, 1, start=1)[0]))
    r = np.hypot(yy - cy, xx - cx)
    rings = np.sin(2.0 * np.pi * r / 11.0 + 5.0 * _smooth(seed, height, width, 8.0))
    return _with_grain(_stretch(rings + 0.8 * _smooth(seed, height, width, 20.0, substream=1)), seed)


def patches(seed: int, height: int = DEFAULT_SIZE, width: int = DEFAULT_SIZE) -> np.ndarray:
    base = _smooth(seed, height, width, 9.0)
    levels = np.quantile(base, [0.2, 0.4, 0.6, 0.8])
    quantized = np.digitize(base, levels) / 4.0
    softened = ndimage.gaussian_filter(quantized, sigma=1.0, mode="reflect")
    return _with_grain(_stretch(softened), seed)


_GENERATORS = {"clouds": clouds, "marble": marble, "wood": wood, "patches": patches}


def generate_texture(kind: str, seed: int, height: int = DEFAULT_SIZE, width: int = DEFAULT_SIZE) -> np.ndarray:
    try:
        gen = _GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown texture kind {kind!r}") from None
    return gen(seed, height, width)


def synthetic_scene(index: int, height: int = DEFAULT_SIZE, width: int = DEFAULT_SIZE) -> np.ndarray:
    """Deterministic varied clean scene: cycles texture kinds over index."""
    kind = TEXTURE_KINDS[index % len(TEXTURE_KINDS)]
    return generate_texture(kind, seed=10_000 + index, height=height, width=width)


def bundled_texture_paths() -> dict[str, Path]:
    data_dir = resources.files("dfcurve") / "data"
    return {kind: Path(str(data_dir / f"texture_{kind}.png")) for kind in TEXTURE_KINDS}


def bundled_textures() -> dict[str, np.ndarray]:
    """The four committed 128x128 grayscale textures, as float planes."""
    from .imgio import read_png

    return {kind: read_png(path) for kind, path in bundled_texture_paths().items()}
