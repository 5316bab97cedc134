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
from coreason_affine.exceptions import AdmissibilityError, DomainError
from coreason_affine.kernels import kernel_jacobi_form, kernel_quadrature, kernel_value
from coreason_affine.models import Normalization

QUADRATURE_AGREEMENT = 1e-6


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]", parents: Sequence[argparse.ArgumentParser] = ()
) -> None:
    parser = subparsers.add_parser(
        "kernel", help="Evaluate K(z, w) in both normalizations", parents=list(parents)
    )
    parser.add_argument("--z", required=True, help="first point, a+bi")
    parser.add_argument("--w", required=True, help="second point, a+bi")
    parser.add_argument("--check-quadrature", action="store_true", help="compare with the frequency-side integral")


def run(cfg: RunConfig) -> int:
    assert cfg.kernel is not None
    if cfg.z is None or cfg.w is None:
        raise DomainError("kernel needs --z and --w")
    spec = cfg.kernel.to_spec()

    value = kernel_value(spec.with_normalization(Normalization.DIAGONAL1), cfg.z, cfg.w)
    print(f"z: {cfg.z.z}")
    print(f"w: {cfg.w.z}")
    print(f"value (diagonal1): {value.value.real:.15g}{value.value.imag:+.15g}i")
    print(f"modulus: {value.modulus:.15g}")
    try:
        projection = kernel_value(spec.with_normalization(Normalization.PROJECTION), cfg.z, cfg.w)
        print(f"value (projection): {projection.value.real:.15g}{projection.value.imag:+.15g}i")
    except AdmissibilityError as e:
        print(f"value (projection): undefined ({e})")

    if spec.closed_form:
        jacobi_value = kernel_jacobi_form(spec, cfg.z, cfg.w)
        print(f"jacobi form: {jacobi_value.real:.15g}{jacobi_value.imag:+.15g}i")

    if cfg.check_quadrature:
        numeric = kernel_quadrature(spec.with_normalization(Normalization.DIAGONAL1), cfg.z, cfg.w).value
        difference = abs(numeric - value.value)
        print(f"quadrature: {numeric.real:.15g}{numeric.imag:+.15g}i")
        print(f"difference: {difference:.3e}")
        if spec.closed_form and difference > QUADRATURE_AGREEMENT * max(value.modulus, 1e-3):
            print("closed form and quadrature disagree")
            return 1
    return 0
