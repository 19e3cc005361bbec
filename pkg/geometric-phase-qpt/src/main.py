"""
Command-line front end
Subcommands: sweep (tables and charts over parameter grids), scaling (finite-size-scaling
report), oracle (analytic-versus-brute-force checks) and plot (SVG from a sweep CSV)
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from errors import ConfigError, InvalidParameterError, NumericalError
from export import read_sweep_csv, to_csv_text, to_json_text, write_svg
from models import ModelKind, OutputFormat, ScalingReport, SweepConfig
from scaling import DEFAULT_SIZES, probe_scaling_report, xy_scaling_report
from settings import OUTPUT_DIR, configure_logging, default_threads, load_config_file, merge_settings
from sweep import run_sweep
from validation import format_report, run_oracle_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

_NOT_CONFIG = {"command", "config", "input"}


class CLIParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors surface as ConfigError (exit code 1)"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _common_flags() -> argparse.ArgumentParser:
    common = CLIParser(add_help=False)
    common.add_argument("--model", choices=[kind.value for kind in ModelKind])
    common.add_argument("--gamma", help="anisotropy (xy, probe) or LMG gamma: a or a:b:steps")
    common.add_argument("--lambda-range", help="transverse field a:b:steps")
    common.add_argument("--h-range", help="LMG field a:b:steps")
    common.add_argument("--alpha-range", help="Dicke alpha a:b:steps")
    common.add_argument("--dicke-d", help="Dicke D = 2Δ/ω")
    common.add_argument("--mu", help="probe z-field")
    common.add_argument("--nu", help="probe x-field")
    common.add_argument("--eta", help="probe-ring coupling")
    common.add_argument("--sizes", help="comma-separated sizes, 'inf' for the thermodynamic limit")
    common.add_argument("--out", type=Path, help="output path (stdout for csv/json when omitted)")
    common.add_argument("--format", choices=[fmt.value for fmt in OutputFormat])
    common.add_argument("--config", type=Path, help="TOML file with the same keys as the long flags")
    common.add_argument("--threads", type=int, help="worker processes (default $QPT_GEOM_THREADS or 1)")
    common.add_argument("--seed", type=int, help="seed of the randomized oracle checks")
    common.add_argument("--y", help="output column to plot (svg)")
    common.add_argument("--verbose", action="store_true", default=None, help="DEBUG logging")
    return common


def build_parser() -> CLIParser:
    common = _common_flags()
    parser = CLIParser(prog="geometric-phase-qpt",
                       description="Geometric phases and quantum phase transitions in exactly solvable models")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("sweep", parents=[common], help="evaluate a model over a parameter grid")
    subparsers.add_parser("scaling", parents=[common], help="finite-size-scaling report (xy, probe)")
    subparsers.add_parser("oracle", parents=[common], help="run the oracle checks")
    plot = subparsers.add_parser("plot", parents=[common], help="render a sweep CSV as SVG")
    plot.add_argument("input", type=Path, help="CSV written by the sweep command")
    return parser


def load_config(args: argparse.Namespace, file_values: Optional[Dict[str, Any]] = None) -> SweepConfig:
    """defaults < environment < --config file < flags"""
    if file_values is None:
        file_values = load_config_file(args.config)
    flags = {key: value for key, value in vars(args).items() if key not in _NOT_CONFIG}
    merged = merge_settings({"threads": default_threads()}, file_values, flags)
    try:
        return SweepConfig(**merged)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.write_text(text, encoding="utf-8", newline="\n")
    logger.info("Wrote %s", out)


def cmd_sweep(config: SweepConfig) -> int:
    frame = run_sweep(config, progress=sys.stderr.isatty())
    if config.format == OutputFormat.CSV:
        _emit(to_csv_text(frame), config.out)
    elif config.format == OutputFormat.JSON:
        _emit(to_json_text(frame), config.out)
    else:
        out = config.out
        if out is None:
            OUTPUT_DIR.mkdir(exist_ok=True)
            out = OUTPUT_DIR / f"{config.model.value}_sweep.svg"
        write_svg(frame, out, config.model, config.y)
        print(f"Chart saved: {out}")
    return EXIT_OK


def _single(axis, name: str) -> float:
    values = axis.values()
    if len(values) != 1:
        raise ConfigError(f"scaling takes a single --{name} value")
    return float(values[0])


def _finite_sizes(config: SweepConfig, explicit: bool) -> List[int]:
    if not explicit:
        return list(DEFAULT_SIZES) if config.model == ModelKind.XY else [13, 51, 251, 501]
    return [size for size in config.sizes if size is not None]


def report_payload(report: ScalingReport) -> Dict[str, Any]:
    """Flat JSON object of the scaling command"""
    return {
        "model": report.model.value,
        "gamma": report.gamma,
        "kappa1": report.kappa1,
        "kappa2": report.kappa2,
        "nu": report.nu,
        "shift_exponent": report.shift_exponent,
        "z": report.z,
        "peaks": [{"n": peak.n_sites, "lambda_m": peak.lambda_m, "height": peak.height}
                  for peak in report.peaks],
        "fits": {name: fit.model_dump(mode="json") for name, fit in report.fits.items()},
    }


def print_scaling_summary(report: ScalingReport) -> None:
    print("=" * 60)
    print(f"SCALING REPORT ({report.model.value}, gamma={report.gamma:g})")
    print("=" * 60)
    for name in ("kappa1", "kappa2", "nu", "shift_exponent", "z"):
        value = getattr(report, name)
        print(f"{name:>15}: {'n/a' if value is None else f'{value:.5f}'}")
    for peak in report.peaks:
        print(f"{'N=' + str(peak.n_sites):>15}: lambda_m={peak.lambda_m:.8f} height={peak.height:.6f}")


def cmd_scaling(config: SweepConfig, explicit_sizes: bool = False) -> int:
    gamma = _single(config.gamma, "gamma")
    sizes = _finite_sizes(config, explicit_sizes)
    if config.model == ModelKind.XY:
        report = xy_scaling_report(gamma, sizes)
    elif config.model == ModelKind.PROBE:
        report = probe_scaling_report(_single(config.mu, "mu"), _single(config.nu, "nu"),
                                      _single(config.eta, "eta"), gamma, sizes)
    else:
        raise ConfigError(f"scaling supports xy and probe, not {config.model.value}")
    text = json.dumps(report_payload(report), sort_keys=True, indent=2) + "\n"
    _emit(text, config.out)
    if config.out is not None:
        print_scaling_summary(report)
    return EXIT_OK


def cmd_oracle(config: SweepConfig) -> int:
    results = run_oracle_suite(config.seed)
    print(format_report(results))
    return EXIT_OK if all(result.passed for result in results) else EXIT_NUMERICAL


def cmd_plot(config: SweepConfig, input_path: Path) -> int:
    model, frame = read_sweep_csv(input_path)
    out = config.out
    if out is None:
        OUTPUT_DIR.mkdir(exist_ok=True)
        out = OUTPUT_DIR / f"{Path(input_path).stem}.svg"
    write_svg(frame, out, model, config.y)
    print(f"Chart saved: {out}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        file_values = load_config_file(args.config)
        config = load_config(args, file_values)
        configure_logging(config.verbose)
        if args.command == "sweep":
            return cmd_sweep(config)
        if args.command == "scaling":
            explicit = args.sizes is not None or "sizes" in file_values
            return cmd_scaling(config, explicit_sizes=explicit)
        if args.command == "oracle":
            return cmd_oracle(config)
        return cmd_plot(config, args.input)
    except (InvalidParameterError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
