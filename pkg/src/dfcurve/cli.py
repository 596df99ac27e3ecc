"""Command-line interface.

Exit codes: 0 success, 1 usage or I/O error, 2 degenerate-data signal
(residual carries no measurable degradation). The DFC_SEED environment
variable overrides the default seed of seeded commands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bandfilter import apply_gains, wiener_gains
from .bench import report_to_csv, run_bench
from .degrade import DegradationSpec
from .fingerprint import (
    DegradationProfile,
    SeverityCalibration,
    build_profile,
    classify,
    estimate_severity,
    load_profile_library,
)
from .imgio import read_image, write_image
from .metrics import psnr, ssim
from .plotting import save_calibration_figure, save_curve_figure, save_profile_figure
from .spectral import (
    DEFAULT_BAND_COUNT,
    DegradationFrequencyCurve,
    NoDegradationSignal,
    compute_dfc,
    compute_dfc_rgb,
    to_luma,
)
from .tokens import (
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_TOKEN_COUNT,
    mass_capture_weights,
    tokenize,
    tokens_to_json,
)


@dataclass(frozen=True)
class RunConfig:
    """Resolved per-invocation settings; defaults B=25, N=4, K=5, seed 0."""

    command: str
    band_count: int = DEFAULT_BAND_COUNT
    token_count: int = DEFAULT_TOKEN_COUNT
    sample_count: int = DEFAULT_SAMPLE_COUNT
    seed: int = 0
    output_format: str = "json"


DEFAULTS = RunConfig(command="")


def default_seed() -> int:
    return int(os.environ.get("DFC_SEED", str(DEFAULTS.seed)))


def run_config(args) -> RunConfig:
    """Snapshot of the settings an invocation actually resolved to."""
    return RunConfig(
        command=args.command,
        band_count=getattr(args, "band_count", DEFAULTS.band_count),
        token_count=getattr(args, "token_count", DEFAULTS.token_count),
        sample_count=getattr(args, "sample_count", DEFAULTS.sample_count),
        seed=getattr(args, "seed", None) if getattr(args, "seed", None) is not None else default_seed(),
        output_format=getattr(args, "output_format", DEFAULTS.output_format),
    )


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for degenerate data."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_gray(path: str) -> np.ndarray:
    img = read_image(path)
    return to_luma(img) if img.ndim == 3 else img


def _curve_pair(args) -> DegradationFrequencyCurve:
    degraded = read_image(args.degraded)
    clean = read_image(args.clean)
    if degraded.shape != clean.shape:
        raise ValueError(f"dimension mismatch: {degraded.shape} vs {clean.shape}")
    if degraded.ndim == 3:
        return compute_dfc_rgb(
            degraded,
            clean,
            args.band_count,
            channel_mode=args.channel_mode,
            fallback_uniform=args.fallback_uniform,
        )
    return compute_dfc(degraded, clean, args.band_count, fallback_uniform=args.fallback_uniform)


def _cmd_dfc(args) -> int:
    curve = _curve_pair(args)
    text = curve.to_json() if args.output_format == "json" else curve.to_csv()
    _emit(text, args.out)
    if args.plot:
        save_curve_figure(curve, args.plot)
    return 0


def _cmd_synth(args) -> int:
    spec_text = Path(args.spec[1:]).read_text() if args.spec.startswith("@") else args.spec
    spec_dict = json.loads(spec_text)
    spec_dict.setdefault("seed", default_seed())
    spec = DegradationSpec.from_dict(spec_dict)
    clean = _load_gray(args.clean)
    write_image(args.out, spec.apply(clean), bit_depth=args.bit_depth)
    return 0


def _cmd_profile(args) -> int:
    curves = [DegradationFrequencyCurve.from_json(Path(p).read_text()) for p in args.curves]
    profile = build_profile(curves, args.label)
    _emit(profile.to_json(), args.out)
    if args.plot:
        save_profile_figure(profile, args.plot)
    return 0


def _cmd_classify(args) -> int:
    curve = DegradationFrequencyCurve.from_json(Path(args.curve).read_text())
    profiles = load_profile_library(args.profiles)
    label, ranked = classify(curve, profiles)
    print(f"label: {label}")
    print("profile,distance")
    for name, dist in ranked:
        print(f"{name},{dist!r}")
    return 0


def _cmd_severity(args) -> int:
    curve = DegradationFrequencyCurve.from_json(Path(args.curve).read_text())
    calibration = SeverityCalibration.from_json(Path(args.calibration).read_text())
    level, clamped = estimate_severity(curve, calibration)
    print(json.dumps({"label": calibration.label, "level": level, "clamped": clamped}))
    return 0


def _cmd_tokenize(args) -> int:
    curve = DegradationFrequencyCurve.from_json(Path(args.curve).read_text())
    weight_fn = mass_capture_weights(curve) if args.weight_fn == "mass-capture" else None
    tokens = tokenize(
        curve,
        region_count=args.token_count,
        sample_count=args.sample_count,
        jitter_frac=args.jitter_frac,
        weight_fn=weight_fn,
        seed=args.seed,
    )
    _emit(tokens_to_json(tokens), args.out)
    return 0


def _cmd_filter(args) -> int:
    if not args.dfc and not args.clean:
        raise ValueError("filter needs --dfc or --clean to derive gains from")
    degraded = _load_gray(args.degraded)
    if args.dfc:
        curve = DegradationFrequencyCurve.from_json(Path(args.dfc).read_text())
    else:
        clean = _load_gray(args.clean)
        curve = compute_dfc(degraded, clean, args.band_count)
    gains = wiener_gains(curve, args.strength)
    restored = apply_gains(degraded, gains, pin_dc=not args.no_pin_dc)
    write_image(args.out, restored)
    if args.gains_out:
        text = gains.to_csv() if args.gains_out.endswith(".csv") else gains.to_json()
        Path(args.gains_out).write_text(text)
    if args.clean:
        clean = _load_gray(args.clean)
        print(
            json.dumps(
                {
                    "psnr_degraded": psnr(degraded, clean),
                    "psnr_restored": psnr(restored, clean),
                    "ssim_degraded": ssim(degraded, clean),
                    "ssim_restored": ssim(restored, clean),
                }
            )
        )
    return 0


def _cmd_plot(args) -> int:
    payload = json.loads(Path(args.input).read_text())
    if "normalized" in payload:
        save_curve_figure(DegradationFrequencyCurve.from_dict(payload), args.out, title=args.title)
    elif "variance" in payload:
        save_profile_figure(DegradationProfile.from_dict(payload), args.out, title=args.title)
    elif "peak_amplitudes" in payload:
        save_calibration_figure(SeverityCalibration.from_json(json.dumps(payload)), args.out, title=args.title)
    else:
        raise ValueError("input JSON is neither a curve, a profile, nor a calibration")
    return 0


def _cmd_bench(args) -> int:
    report, artifacts = run_bench(jobs=args.jobs)
    text = json.dumps(report, indent=2, sort_keys=True)
    _emit(text, args.out)
    if args.report_dir:
        report_dir = Path(args.report_dir)
        figures = report_dir / "figures"
        figures.mkdir(parents=True, exist_ok=True)
        (report_dir / "report.json").write_text(text + "\n")
        (report_dir / "report.csv").write_text(report_to_csv(report))
        for profile in artifacts.profiles:
            save_profile_figure(profile, figures / f"profile_{profile.label}.svg")
        for name, calibration in artifacts.calibrations.items():
            save_calibration_figure(calibration, figures / f"severity_{name}.svg")
    return 0 if report["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dfcurve", description=__doc__)
    parser.add_argument("--version", action="version", version=f"dfcurve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dfc", help="compute a degradation frequency curve from a degraded/clean pair")
    p.add_argument("degraded")
    p.add_argument("clean")
    p.add_argument("--band-count", type=int, default=DEFAULTS.band_count)
    p.add_argument("--output-format", choices=("json", "csv"), default=DEFAULTS.output_format)
    p.add_argument("--out", help="write to file instead of stdout")
    p.add_argument("--fallback-uniform", action="store_true", help="return the flat 1/B curve on degenerate residuals")
    p.add_argument("--channel-mode", choices=("luma", "per-channel"), default="luma")
    p.add_argument("--plot", help="also render the curve to this SVG file")
    p.set_defaults(fn=_cmd_dfc)

    p = sub.add_parser("synth", help="apply a degradation spec to a clean image")
    p.add_argument("clean")
    p.add_argument("--spec", required=True, help="degradation spec JSON, or @file")
    p.add_argument("--out", required=True)
    p.add_argument("--bit-depth", type=int, choices=(8, 16), default=8)
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("profile", help="build a degradation profile from curve JSON files")
    p.add_argument("curves", nargs="+")
    p.add_argument("--label", required=True)
    p.add_argument("--out")
    p.add_argument("--plot", help="also render the profile to this SVG file")
    p.set_defaults(fn=_cmd_profile)

    p = sub.add_parser("classify", help="nearest-profile classification of a curve")
    p.add_argument("curve")
    p.add_argument("--profiles", required=True, help="directory of profile JSON files")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("severity", help="estimate severity from a curve and a calibration")
    p.add_argument("curve")
    p.add_argument("--calibration", required=True)
    p.set_defaults(fn=_cmd_severity)

    p = sub.add_parser("tokenize", help="equal-area band tokens of a curve")
    p.add_argument("curve")
    p.add_argument("--token-count", type=int, default=DEFAULTS.token_count)
    p.add_argument("--sample-count", type=int, default=DEFAULTS.sample_count)
    p.add_argument("--jitter-frac", type=float, default=0.1)
    p.add_argument("--weight-fn", choices=("uniform", "mass-capture"), default="uniform")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_tokenize)

    p = sub.add_parser("filter", help="band-gain restoration of a degraded image")
    p.add_argument("degraded")
    p.add_argument("--out", required=True)
    p.add_argument("--dfc", help="curve JSON to derive gains from")
    p.add_argument("--clean", help="clean reference: derives the curve and reports PSNR/SSIM")
    p.add_argument("--strength", type=float, default=1.0)
    p.add_argument("--band-count", type=int, default=DEFAULTS.band_count)
    p.add_argument("--no-pin-dc", action="store_true", help="let the gain curve attenuate the DC bin too")
    p.add_argument("--gains-out", help="write the gain curve (.json or .csv)")
    p.set_defaults(fn=_cmd_filter)

    p = sub.add_parser("plot", help="render curve/profile/calibration JSON to SVG")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--title")
    p.set_defaults(fn=_cmd_plot)

    p = sub.add_parser("bench", help="run the acceptance benchmark and emit a JSON report")
    p.add_argument("--out", help="write the JSON report to a file instead of stdout")
    p.add_argument("--report-dir", help="also write report.json, report.csv, and figures here")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.config = run_config(args)
    if getattr(args, "seed", "absent") is None:
        args.seed = args.config.seed
    try:
        return args.fn(args)
    except NoDegradationSignal as e:
        print(f"dfcurve: degenerate data: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"dfcurve: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
