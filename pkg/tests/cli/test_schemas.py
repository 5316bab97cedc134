# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

import pytest
from pydantic import ValidationError

from coreason_affine.cli.app import build_parser
from coreason_affine.cli.schemas import KernelOptions, RunConfig, parse_complex, parse_floats
from coreason_affine.models import LaguerreMode, MaassLandau, Normalization


def test_parse_complex_syntax() -> None:
    """a+bi forms, including bare i."""
    assert parse_complex("i") == 1j
    assert parse_complex("2i") == 2j
    assert parse_complex("0.3+1.2i") == 0.3 + 1.2j
    assert parse_complex("-1+0.5i") == -1 + 0.5j
    assert parse_complex(" 0.3 + 1.2I ") == 0.3 + 1.2j
    with pytest.raises(ValueError):
        parse_complex("1+")


def test_parse_floats() -> None:
    """Comma-separated lists ignore empty items."""
    assert parse_floats("0.5,0.7,") == [0.5, 0.7]
    with pytest.raises(ValueError):
        parse_floats("0.5,x")


def test_kernel_options_to_spec() -> None:
    """--B builds a Maass-Landau level, --alpha a Laguerre mode."""
    spec = KernelOptions(B=3.5, n=1, normalization=Normalization.PROJECTION).to_spec()
    assert isinstance(spec.variant, MaassLandau)
    assert spec.normalization == Normalization.PROJECTION
    assert isinstance(KernelOptions(alpha=2.0).to_spec().variant, LaguerreMode)


def test_kernel_options_choice() -> None:
    """Exactly one family, and profiles need their decay exponent."""
    with pytest.raises(ValidationError):
        KernelOptions()
    with pytest.raises(ValidationError):
        KernelOptions(B=1.0, alpha=1.0)
    with pytest.raises(ValidationError, match="decay-exponent"):
        KernelOptions(profile="profile.txt")


def test_run_config_from_namespace() -> None:
    """Parsed flags become a validated RunConfig."""
    args = build_parser().parse_args(
        ["variance", "--B", "3.5", "--R", "0.5,0.7", "--method", "all", "--depth", "2", "--out-csv", "v.csv"]
    )
    cfg = RunConfig.from_namespace(args)
    assert cfg.radii == [0.5, 0.7]
    assert cfg.methods == ["geometric", "double", "trace"]
    assert cfg.depth == 2
    assert cfg.out_csv is not None and cfg.out_csv.name == "v.csv"
    assert cfg.kernel is not None and cfg.kernel.B == 3.5


def test_run_config_region() -> None:
    """The region is the disc about --center with the first radius."""
    args = build_parser().parse_args(["sample", "--alpha", "2", "--R", "0.4", "--center", "0.5,2"])
    cfg = RunConfig.from_namespace(args)
    assert cfg.region.R == 0.4
    assert cfg.region.center.as_pair() == [0.5, 2.0]
    assert cfg.seed == 0
    assert cfg.samples == 1


def test_run_config_validation() -> None:
    """Radii, methods, depths and profiles are validated."""
    with pytest.raises(ValidationError):
        RunConfig(command="variance", radii=[0.5, 1.0])
    with pytest.raises(ValidationError):
        RunConfig(command="variance", methods=["geometric", "exact"])
    with pytest.raises(ValidationError):
        RunConfig(command="variance", depth=0)
    with pytest.raises(ValidationError):
        RunConfig(command="verify", tol_profile="loose")
    with pytest.raises(ValidationError):
        RunConfig(command="sample", seed=-1)
