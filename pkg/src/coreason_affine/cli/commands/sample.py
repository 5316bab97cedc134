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
from coreason_affine.concentration import build_operator, traces
from coreason_affine.exceptions import DomainError
from coreason_affine.sampler import batch_stats, sample
from coreason_affine.services.export import configuration_json, configuration_svg, eigenvalues_csv, write_atomic


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]", parents: Sequence[argparse.ArgumentParser] = ()
) -> None:
    parser = subparsers.add_parser(
        "sample", help="Exact samples of the discretized ensemble on a disc", parents=list(parents)
    )
    parser.add_argument("--R", required=True, help="pseudohyperbolic radius of the disc")
    parser.add_argument("--center", help="disc center as x,s (default 0,1)")
    parser.add_argument("--seed", type=int, help="seed of the first sample (default 0)")
    parser.add_argument("--samples", type=int, help="number of samples, seeds seed..seed+samples-1")
    parser.add_argument("--stats", action="store_true", help="print count statistics instead of points")
    parser.add_argument("--depth", type=int, help="grid depth")
    parser.add_argument("--out", type=str, help="JSON output path")
    parser.add_argument("--svg", type=str, help="SVG scatter of the first sample")
    parser.add_argument("--eigenvalues", type=str, help="CSV dump of the operator spectrum")


def run(cfg: RunConfig) -> int:
    assert cfg.kernel is not None
    if len(cfg.radii) != 1:
        raise DomainError("sample takes a single --R")
    op = build_operator(cfg.kernel.to_spec(), cfg.region, cfg.depth)

    if cfg.eigenvalues is not None:
        write_atomic(cfg.resolve(cfg.eigenvalues), eigenvalues_csv(op.eigenvalues))

    if cfg.stats:
        if cfg.samples < 2:
            raise DomainError("--stats needs --samples >= 2")
        stats = batch_stats(op, cfg.samples, cfg.seed)
        summary = traces(op)
        print(f"samples: {stats.n_samples}")
        print(f"mean: {stats.mean:.6f} +- {stats.se_mean:.6f}")
        print(f"variance: {stats.variance:.6f} +- {stats.se_variance:.6f}")
        print(f"expected (trace): {summary.expected:.6f}")
        print(f"variance (trace): {summary.variance:.6f}")
        print(f"total variation to eigenvalue law: {stats.total_variation:.4f}")
        return 0

    configs = [sample(op, cfg.seed + k) for k in range(cfg.samples)]
    document = configuration_json(configs) + "\n"
    if cfg.out is not None:
        write_atomic(cfg.resolve(cfg.out), document)
    else:
        print(document, end="")
    if cfg.svg is not None:
        write_atomic(cfg.resolve(cfg.svg), configuration_svg(configs[0]))
    return 0
