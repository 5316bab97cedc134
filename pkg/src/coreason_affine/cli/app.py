# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

"""
Argument parsing and dispatch for the `coreason-affine` command.
"""

import argparse
import sys
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from coreason_affine.cli.commands import constants, kernel, sample, variance, verify
from coreason_affine.cli.schemas import RunConfig
from coreason_affine.exceptions import AffineEnsembleError, DomainError
from coreason_affine.models import Normalization
from coreason_affine.utils.logger import logger

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "kernel": kernel.run,
    "constants": constants.run,
    "variance": variance.run,
    "sample": sample.run,
    "verify": verify.run,
}


def _kernel_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("kernel")
    group.add_argument("--B", type=float, help="magnetic field strength (Maass-Landau level)")
    group.add_argument("--alpha", type=float, help="Laguerre mother parameter")
    group.add_argument("--n", type=int, help="level or Laguerre degree (default 0)")
    group.add_argument("--profile", type=str, help="sampled frequency profile file")
    group.add_argument("--decay-exponent", type=float, help="small-frequency power of --profile")
    group.add_argument(
        "--normalization",
        choices=[n.value for n in Normalization],
        help="diagonal1 (default) or projection",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    """
    Factory function to create the command-line parser.
    """
    parser = argparse.ArgumentParser(
        prog="coreason-affine",
        description="Affine ensembles: wavelet-kernel determinantal point processes on the hyperbolic half-plane",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    kernel_options = [_kernel_options()]
    kernel.register(subparsers, kernel_options)
    constants.register(subparsers, kernel_options)
    variance.register(subparsers, kernel_options)
    sample.register(subparsers, kernel_options)
    verify.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    try:
        cfg = RunConfig.from_namespace(args)
        logger.info(f"Running {cfg.command}")
        return COMMANDS[cfg.command](cfg)
    except (ValidationError, DomainError, OSError) as e:
        logger.error(f"Invalid arguments for {args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (AffineEnsembleError, ValueError) as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
