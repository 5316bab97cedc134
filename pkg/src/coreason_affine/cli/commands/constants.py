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
import math
from typing import Sequence

from coreason_affine.cli.schemas import RunConfig
from coreason_affine.kernels import admissibility, landau_levels
from coreason_affine.models import MaassLandau
from coreason_affine.variance import asymptotic_constant


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]", parents: Sequence[argparse.ArgumentParser] = ()
) -> None:
    parser = subparsers.add_parser(
        "constants", help="Admissibility constant, density and asymptotic constant", parents=list(parents)
    )
    parser.add_argument("--levels", action="store_true", help="list every Landau level of --B")
    parser.add_argument("--skip-asymptotic", action="store_true", help="omit the variance asymptotics")
    parser.add_argument("--depth", type=int, help="grid depth for the asymptotic constant")


def run(cfg: RunConfig) -> int:
    assert cfg.kernel is not None
    spec = cfg.kernel.to_spec()

    C = admissibility(spec)
    print(f"C: {C:.12g}")
    print(f"density: {1.0 / C:.12g}")
    if spec.alpha is not None:
        print(f"alpha: {spec.alpha:.12g}")
        print(f"4pi/alpha: {4.0 * math.pi / spec.alpha:.12g}")

    if cfg.levels and isinstance(spec.variant, MaassLandau):
        print("levels:")
        for level in landau_levels(spec.variant.B):
            c_text = f"{level.admissibility:.12g}" if level.admissibility is not None else "inf"
            d_text = f"{level.density:.12g}" if level.density is not None else "0"
            print(f"  n={level.n} alpha={level.alpha:g} eigenvalue={level.eigenvalue:.12g} C={c_text} density={d_text}")

    if not cfg.skip_asymptotic and spec.closed_form:
        result = asymptotic_constant(spec, cfg.depth)
        print(f"c_extrapolated: {result.c_extrapolated:.10g}")
        print(f"c_integral: {result.c_integral:.10g}")
        print(f"kappa: {result.kappa:.10g}")
        print(f"relative_gap: {result.relative_gap:.3e}")
    return 0
