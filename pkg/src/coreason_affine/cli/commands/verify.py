# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

import argparse
from typing import Sequence

from coreason_affine.cli.schemas import RunConfig
from coreason_affine.config import TOLERANCE_PROFILES
from coreason_affine.services.export import write_atomic
from coreason_affine.services.verification import VerificationSuite


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]", parents: Sequence[argparse.ArgumentParser] = ()
) -> None:
    parser = subparsers.add_parser(
        "verify", help="Run the acceptance checks", parents=list(parents)
    )
    parser.add_argument("--only", help="comma-separated modules to check")
    parser.add_argument("--tol-profile", choices=sorted(TOLERANCE_PROFILES), help="tolerance profile")
    parser.add_argument("--depth", type=int, help="base grid depth")
    parser.add_argument("--seed", type=int, help="seed of the random test inputs")
    parser.add_argument("--json", dest="out_json", type=str, help="JSON report path")


def run(cfg: RunConfig) -> int:
    suite = VerificationSuite(TOLERANCE_PROFILES[cfg.tol_profile], seed=cfg.seed, depth=cfg.depth)
    report = suite.run(cfg.only or None)
    print(report.render())
    if cfg.out_json is not None:
        write_atomic(cfg.resolve(cfg.out_json), report.model_dump_json(indent=2) + "\n")
    for failure in report.failures():
        print(f"failed: {failure.module}.{failure.name}")
    return 0 if report.passed else 1
