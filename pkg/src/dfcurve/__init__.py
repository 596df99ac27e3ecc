"""Band-wise spectral signatures of image degradation.

Compute unit-sum degradation frequency curves from degraded/clean image
pairs, tokenize them into equal-mass band segments, fingerprint and
classify degradation families, estimate severity, and run a band-gain
restoration baseline.
"""

from .bandfilter import GainCurve, apply_gains, wiener_gains
from .degrade import (
    DegradationSpec,
    add_gaussian_noise,
    gamma_darken,
    gaussian_blur,
    haze,
    rain_streaks,
)
from .fingerprint import (
    DegradationProfile,
    SeverityCalibration,
    build_calibration,
    build_profile,
    classify,
    curve_peak_amplitude,
    estimate_severity,
    load_profile_library,
    profile_distance,
)
from .metrics import psnr, ssim
from .spectral import (
    BandMaskSet,
    BandMaskSpec,
    DEFAULT_BAND_COUNT,
    DegradationFrequencyCurve,
    NoDegradationSignal,
    band_ratios,
    compute_dfc,
    compute_dfc_rgb,
    default_mask_set,
    energy_map,
    max_radial_frequency,
    naive_dft_energy,
    normalize_ratios,
    residual,
    to_luma,
    uniform_curve,
)
from .tokens import (
    BandToken,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_TOKEN_COUNT,
    Partition,
    SampledParams,
    equal_area_partition,
    initial_params,
    mass_capture_weights,
    sample_and_aggregate,
    tokenize,
    uniform_weights,
)

__version__ = "0.1.0"

__all__ = [
    "BandMaskSet",
    "BandMaskSpec",
    "BandToken",
    "DEFAULT_BAND_COUNT",
    "DEFAULT_SAMPLE_COUNT",
    "DEFAULT_TOKEN_COUNT",
    "DegradationFrequencyCurve",
    "DegradationProfile",
    "DegradationSpec",
    "GainCurve",
    "NoDegradationSignal",
    "Partition",
    "SampledParams",
    "SeverityCalibration",
    "add_gaussian_noise",
    "apply_gains",
    "band_ratios",
    "build_calibration",
    "build_profile",
    "classify",
    "compute_dfc",
    "compute_dfc_rgb",
    "curve_peak_amplitude",
    "default_mask_set",
    "energy_map",
    "equal_area_partition",
    "estimate_severity",
    "gamma_darken",
    "gaussian_blur",
    "haze",
    "initial_params",
    "load_profile_library",
    "mass_capture_weights",
    "max_radial_frequency",
    "naive_dft_energy",
    "normalize_ratios",
    "profile_distance",
    "psnr",
    "rain_streaks",
    "residual",
    "sample_and_aggregate",
    "ssim",
    "to_luma",
    "tokenize",
    "uniform_curve",
    "uniform_weights",
    "wiener_gains",
]
