"""SVG figure rendering for curves, profiles, and calibrations.

All figures are written through matplotlib's SVG backend with a fixed
hash salt and no embedded date, so repeated renders are byte-identical.
"""

from __future__ import annotations

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure
import numpy as np

from .fingerprint import DegradationProfile, SeverityCalibration
from .spectral import DegradationFrequencyCurve

FREQ_LABEL = "radial frequency (pixels)"
RESPONSE_LABEL = "normalized response"


def _new_axes(title: str | None):
    fig = Figure(figsize=(6.4, 4.0))
    FigureCanvasSVG(fig)
    ax = fig.add_subplot(111)
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    return fig, ax


def _save_svg(fig: Figure, out_path) -> None:
    with matplotlib.rc_context({"svg.hashsalt": "dfcurve"}):
        fig.savefig(out_path, format="svg", metadata={"Date": None}, bbox_inches="tight")


def save_curve_figure(dfc: DegradationFrequencyCurve, out_path, title: str | None = None) -> None:
    """Line chart of the unit-sum curve over its band centers."""
    fig, ax = _new_axes(title)
    ax.plot(dfc.centers, dfc.normalized, marker=".", color="tab:blue")
    ax.set_xlabel(FREQ_LABEL)
    ax.set_ylabel(RESPONSE_LABEL)
    _save_svg(fig, out_path)


def save_profile_figure(profile: DegradationProfile, out_path, title: str | None = None) -> None:
    """Mean curve with a shaded one-standard-deviation band."""
    fig, ax = _new_axes(title or profile.label)
    bands = np.arange(profile.band_count)
    std = np.sqrt(profile.var_curve)
    ax.plot(bands, profile.mean_curve, marker=".", color="tab:blue", label="mean")
    ax.fill_between(
        bands, profile.mean_curve - std, profile.mean_curve + std, alpha=0.3, color="tab:blue", label="+/- 1 std"
    )
    ax.set_xlabel("band index")
    ax.set_ylabel(RESPONSE_LABEL)
    ax.legend()
    _save_svg(fig, out_path)


def save_calibration_figure(calibration: SeverityCalibration, out_path, title: str | None = None) -> None:
    """Severity parameter vs. mean peak amplitude."""
    fig, ax = _new_axes(title or f"severity calibration: {calibration.label}")
    ax.plot(calibration.levels, calibration.peak_amplitudes, marker="o", color="tab:orange")
    ax.set_xlabel("severity level")
    ax.set_ylabel("peak raw ratio")
    _save_svg(fig, out_path)
