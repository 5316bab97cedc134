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
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from coreason_affine.config import TOLERANCE_PROFILES, get_settings
from coreason_affine.exceptions import DomainError
from coreason_affine.models import (
    GenericWavelet,
    HalfPlanePoint,
    HyperbolicDisc,
    KernelSpec,
    LaguerreMode,
    MaassLandau,
    Normalization,
)
from coreason_affine.profiles import load_profile_samples
from coreason_affine.variance import METHODS


def parse_complex(text: str) -> complex:
    """Parses `a+bi` syntax: "i", "2i", "0.3+1.2i", "-1+0.5i"."""
    cleaned = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as e:
        raise DomainError(f"cannot parse {text!r} as a complex number a+bi") from e


def parse_floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise DomainError(f"cannot parse {text!r} as a comma-separated list of numbers") from e


class KernelOptions(BaseModel):
    """
    Kernel selection shared by every command: a Maass-Landau level, a Laguerre mother or a profile file.
    """

    model_config = ConfigDict(frozen=True)

    B: Optional[float] = Field(None, description="Magnetic field strength")
    alpha: Optional[float] = Field(None, description="Laguerre mother parameter")
    n: int = Field(0, ge=0, description="Level / Laguerre degree")
    profile: Optional[Path] = Field(None, description="Two- or three-column profile samples")
    decay_exponent: Optional[float] = Field(None, description="Small-frequency power of the profile")
    normalization: Normalization = Normalization.DIAGONAL1

    @model_validator(mode="after")
    def validate_choice(self) -> "KernelOptions":
        chosen = [name for name in ("B", "alpha", "profile") if getattr(self, name) is not None]
        if len(chosen) != 1:
            raise ValueError("choose exactly one of --B, --alpha or --profile")
        if self.profile is not None and self.decay_exponent is None:
            raise ValueError("--profile needs --decay-exponent")
        return self

    def to_spec(self) -> KernelSpec:
        if self.B is not None:
            variant: Union[MaassLandau, LaguerreMode, GenericWavelet] = MaassLandau(B=self.B, n=self.n)
        elif self.alpha is not None:
            variant = LaguerreMode(alpha=self.alpha, n=self.n)
        else:
            assert self.profile is not None and self.decay_exponent is not None
            xi, values = load_profile_samples(self.profile)
            variant = GenericWavelet(xi=xi, values=values, decay_exponent=self.decay_exponent)
        return KernelSpec(variant=variant, normalization=self.normalization)


class RunConfig(BaseModel):
    """
    Validated parameters of one command invocation.
    """

    model_config = ConfigDict(frozen=True)

    command: str
    kernel: Optional[KernelOptions] = None
    z: Optional[HalfPlanePoint] = None
    w: Optional[HalfPlanePoint] = None
    check_quadrature: bool = False
    levels: bool = False
    skip_asymptotic: bool = False
    asymptotic: bool = False
    radii: List[float] = Field(default_factory=list)
    methods: List[str] = Field(default_factory=lambda: list(METHODS))
    depth: Optional[int] = Field(None, ge=1)
    center: HalfPlanePoint = HalfPlanePoint(x=0.0, s=1.0)
    seed: int = Field(0, ge=0)
    samples: int = Field(1, ge=1)
    stats: bool = False
    out: Optional[Path] = None
    out_csv: Optional[Path] = None
    out_json: Optional[Path] = None
    svg: Optional[Path] = None
    eigenvalues: Optional[Path] = None
    only: List[str] = Field(default_factory=list)
    tol_profile: str = "default"

    @field_validator("radii")
    @classmethod
    def validate_radii(cls, v: List[float]) -> List[float]:
        for R in v:
            if not 0.0 < R < 1.0:
                raise ValueError(f"every R must lie in (0, 1), got {R}")
        return v

    @field_validator("methods")
    @classmethod
    def validate_methods(cls, v: List[str]) -> List[str]:
        if v == ["all"]:
            return list(METHODS)
        unknown = [m for m in v if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {list(METHODS)} or 'all'")
        return v

    @field_validator("tol_profile")
    @classmethod
    def validate_profile(cls, v: str) -> str:
        if v not in TOLERANCE_PROFILES:
            raise ValueError(f"unknown tolerance profile {v!r}; choose from {list(TOLERANCE_PROFILES)}")
        return v

    @property
    def region(self) -> HyperbolicDisc:
        return HyperbolicDisc(center=self.center, R=self.radii[0])

    @staticmethod
    def resolve(path: Path) -> Path:
        """Relative output paths land under AFFINE_OUTPUT_DIR."""
        return path if path.is_absolute() else get_settings().OUTPUT_DIR / path

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        values = vars(args)
        data: Dict[str, Any] = {"command": args.command}
        if any(values.get(k) is not None for k in ("B", "alpha", "profile")) or args.command in (
            "kernel",
            "constants",
            "variance",
            "sample",
        ):
            data["kernel"] = KernelOptions(
                B=values.get("B"),
                alpha=values.get("alpha"),
                n=values.get("n") or 0,
                profile=values.get("profile"),
                decay_exponent=values.get("decay_exponent"),
                normalization=values.get("normalization") or Normalization.DIAGONAL1,
            )
        for key in ("z", "w"):
            if values.get(key) is not None:
                data[key] = HalfPlanePoint.from_complex(parse_complex(values[key]))
        if values.get("R") is not None:
            data["radii"] = parse_floats(values["R"])
        if values.get("center") is not None:
            x, s = _pair(values["center"])
            data["center"] = HalfPlanePoint(x=x, s=s)
        if values.get("method") is not None:
            data["methods"] = [m.strip() for m in values["method"].split(",") if m.strip()]
        if values.get("only") is not None:
            data["only"] = [m.strip() for m in values["only"].split(",") if m.strip()]
        for key in (
            "check_quadrature",
            "levels",
            "skip_asymptotic",
            "asymptotic",
            "depth",
            "seed",
            "samples",
            "stats",
            "out",
            "out_csv",
            "out_json",
            "svg",
            "eigenvalues",
            "tol_profile",
        ):
            if values.get(key) is not None:
                data[key] = values[key]
        return cls.model_validate(data)


def _pair(text: str) -> Tuple[float, float]:
    parts = parse_floats(text)
    if len(parts) != 2:
        raise DomainError(f"--center expects x,s, got {text!r}")
    return parts[0], parts[1]
