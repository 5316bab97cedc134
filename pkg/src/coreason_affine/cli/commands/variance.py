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
from typing import Optional, Sequence

from coreason_affine.cli.schemas import RunConfig
from coreason_affine.config import get_settings
from coreason_affine.models import AsymptoticConstant
from coreason_affine.services.export import variance_csv, variance_json, write_atomic
from coreason_affine.variance import asymptotic_constant, variance_sweep


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]", parents: Sequence[argparse.ArgumentParser] = ()
) -> None:
    parser = subparsers.add_parser(
        "variance", help="Number variance of D(i, R) over a sweep of R", parents=list(parents)
    )
    parser.add_argument("--R", help="comma-separated radii in (0, 1)")
    parser.add_argument("--method", help="geometric,double,trace or all")
    parser.add_argument("--depth", type=int, help="grid depth")
    parser.add_argument("--asymptotic", action="store_true", help="add the c estimate")
    parser.add_argument("--out-csv", type=str, help="CSV output path")
    parser.add_argument("--out-json", type=str, help="JSON output path")


def run(cfg: RunConfig) -> int:
    assert cfg.kernel is not None
    spec = cfg.kernel.to_spec()
    radii = cfg.radii or list(get_settings().R_SWEEP)

    asymptotic: Optional[AsymptoticConstant] = asymptotic_constant(spec, cfg.depth) if cfg.asymptotic else None
    reports = variance_sweep(spec, radii, cfg.methods, cfg.depth, asymptotic)

    table = variance_csv(reports)
    print(table, end="")
    if cfg.out_csv is not None:
        write_atomic(cfg.resolve(cfg.out_csv), table)
    if cfg.out_json is not None:
        write_atomic(cfg.resolve(cfg.out_json), variance_json(reports) + "\n")
    return 0
