#!/usr/bin/env python3
import sys
import argparse
from pathlib import Path
from typing import List, Optional

# Add project root to path
PROJECT_ROOT = Path(__file__).parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from cli.report import render  # type: ignore
from cli.run import COMMANDS, ERROR, RunOptions, run  # type: ignore
from cli.spec_loader import load_spec  # type: ignore
from utils.config import Config, load_config, set_config  # type: ignore
from utils.errors import ToolkitError  # type: ignore
from utils.io_utils import write_text  # type: ignore
from utils.logging_utils import set_level  # type: ignore


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Certified checks for irrationality-degree criteria of infinite products")
    parser.add_argument("command", choices=COMMANDS, help="Operation to run on the spec document")
    parser.add_argument("spec", help="Path to a JSON spec document")
    parser.add_argument("--config", "-c", help="Path to configuration file (default: config.yaml)")
    parser.add_argument("--out", "-o", help="Write the report here instead of standard output")
    parser.add_argument("--format", choices=["text", "structured"], help="Report format (overrides config)")
    parser.add_argument("--prefix", type=int, help="Prefix length N (overrides config and spec)")
    parser.add_argument("--precision", type=int, help="Starting working precision in bits (overrides config)")
    parser.add_argument("--target-radius", help="Target radius for eval, e.g. 1e-30 (overrides config)")
    parser.add_argument("--d-max", type=int, help="Check D = 1..d_max")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="Logging level (overrides config)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # Load configuration
    try:
        config = load_config(args.config) if args.config else _default_config()
    except FileNotFoundError:
        print(f"Error: Configuration file not found: {args.config}", file=sys.stderr)
        return ERROR
    except Exception as e:
        print(f"Error loading configuration: {e}", file=sys.stderr)
        return ERROR

    # Override config with command line arguments
    if args.format:
        config.report.format = args.format
    if args.precision is not None:
        low, high = config.precision.min_bits, config.precision.cap_bits
        if not low <= args.precision <= high:
            parser.error(f"--precision must be between {low} and {high} bits, got {args.precision}")
        config.precision.start_bits = args.precision
    if args.target_radius:
        config.evaluator.target_radius = args.target_radius
    if args.log_level:
        config.logging.level = args.log_level
    set_config(config)
    set_level(config.logging.level)

    # the combined report is always structured
    fmt = "structured" if args.command == "report" else config.report.format
    options = RunOptions(prefix=args.prefix, precision=args.precision, target_radius=args.target_radius,
                         d_max=args.d_max)
    try:
        document = load_spec(args.spec)
        status, report = run(args.command, document, options)
    except ToolkitError as e:
        print(e.render(), file=sys.stderr)
        return ERROR
    except (ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR

    text = render(report, fmt)
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return status


def _default_config() -> Config:
    try:
        return load_config()
    except FileNotFoundError:
        return Config()


if __name__ == "__main__":
    sys.exit(main())
