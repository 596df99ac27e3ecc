"""Image file I/O: 8/16-bit PNG (via OpenCV) and binary PPM (P6, own codec).

Images are exchanged with the rest of the package as float64 arrays in
[0, 1], shape (H, W) for grayscale or (H, W, 3) RGB. Alpha channels are
dropped on read. Format is picked by file extension.
"""

from __future__ import annotations

import re
from pathlib import Path

import cv2
import numpy as np

PNG_EXTS = {".png"}
PPM_EXTS = {".ppm", ".pgm"}


def _to_unit_float(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == np.uint8:
        return arr.astype(np.float64) / 255.0
    if arr.dtype == np.uint16:
        return arr.astype(np.float64) / 65535.0
    raise ValueError(f"unsupported sample depth {arr.dtype}")


def _from_unit_float(arr: np.ndarray, bit_depth: int) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    scale = 255 if bit_depth == 8 else 65535
    dtype = np.uint8 if bit_depth == 8 else np.uint16
    return (np.clip(arr, 0.0, 1.0) * scale + 0.5).astype(dtype)


def read_png(path) -> np.ndarray:
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise OSError(f"cannot read PNG: {path}")
    if raw.ndim == 3:
        if raw.shape[2] == 4:
            raw = raw[:, :, :3]
        raw = raw[:, :, ::-1]  # BGR -> RGB
    return _to_unit_float(raw)


def write_png(path, img, bit_depth: int = 8) -> None:
    if bit_depth not in (8, 16):
        raise ValueError(f"bit_depth must be 8 or 16, got {bit_depth}")
    data = _from_unit_float(img, bit_depth)
    if data.ndim == 3:
        data = data[:, :, ::-1]  # RGB -> BGR
    elif data.ndim != 2:
        raise ValueError(f"expected (H, W) or (H, W, 3), got shape {data.shape}")
    if not cv2.imwrite(str(path), data):
        raise OSError(f"cannot write PNG: {path}")


_PPM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n)*(\S+)")


def _ppm_tokens(blob: bytes, count: int, start: int) -> tuple[list[bytes], int]:
    tokens = []
    pos = start
    for _ in range(count):
        m = _PPM_TOKEN.match(blob, pos)
        if not m:
            raise ValueError("truncated PPM header")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def read_ppm(path) -> np.ndarray:
    """Binary PPM (P6, color) or PGM (P5, gray); maxval up to 65535."""
    blob = Path(path).read_bytes()
    (magic,), pos = _ppm_tokens(blob, 1, 0)
    if magic not in (b"P6", b"P5"):
        raise ValueError(f"unsupported PNM magic {magic!r} in {path}")
    (w_tok, h_tok, max_tok), pos = _ppm_tokens(blob, 3, pos)
    width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    if width <= 0 or height <= 0 or not (0 < maxval < 65536):
        raise ValueError(f"bad PNM dimensions/maxval in {path}")
    pos += 1  # single whitespace byte after maxval
    channels = 3 if magic == b"P6" else 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height * channels
    data = np.frombuffer(blob, dtype=dtype, count=count, offset=pos)
    if data.size < count:
        raise ValueError(f"truncated PNM pixel data in {path}")
    img = data.astype(np.float64).reshape(height, width, channels) / maxval
    return img[:, :, 0] if channels == 1 else img


def write_ppm(path, img, bit_depth: int = 8) -> None:
    if bit_depth not in (8, 16):
        raise ValueError(f"bit_depth must be 8 or 16, got {bit_depth}")
    data = _from_unit_float(img, bit_depth)
    if data.ndim == 2:
        magic, channels = b"P5", 1
    elif data.ndim == 3 and data.shape[2] == 3:
        magic, channels = b"P6", 3
    else:
        raise ValueError(f"expected (H, W) or (H, W, 3), got shape {np.shape(img)}")
    h, w = data.shape[:2]
    maxval = 255 if bit_depth == 8 else 65535
    if bit_depth == 16:
        data = data.astype(">u2")
    header = b"%s\n%d %d\n%d\n" % (magic, w, h, maxval)
    Path(path).write_bytes(header + data.tobytes())


def read_image(path) -> np.ndarray:
    """Read PNG or PNM by extension; float64 in [0, 1], gray or RGB."""
    ext = Path(path).suffix.lower()
    if ext in PNG_EXTS:
        return read_png(path)
    if ext in PPM_EXTS:
        return read_ppm(path)
    raise ValueError(f"unsupported image extension {ext!r} (use .png, .ppm, or .pgm)")


def write_image(path, img, bit_depth: int = 8) -> None:
    ext = Path(path).suffix.lower()
    if ext in PNG_EXTS:
        write_png(path, img, bit_depth)
    elif ext in PPM_EXTS:
        write_ppm(path, img, bit_depth)
    else:
        raise ValueError(f"unsupported image extension {ext!r} (use .png, .ppm, or .pgm)")
