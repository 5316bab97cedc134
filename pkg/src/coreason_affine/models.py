# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

import math
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from coreason_affine.profiles import SampledProfile


class Normalization(str, Enum):
    """Kernel scaling: unit diagonal, or the reproducing projection with diagonal 1/C."""

    DIAGONAL1 = "diagonal1"
    PROJECTION = "projection"


class HalfPlanePoint(BaseModel):
    """
    A point z = x + is of the upper half-plane, also an element of the ax+b group.
    """

    model_config = ConfigDict(frozen=True)

    x: float
    s: float

    @field_validator("x")
    @classmethod
    def validate_x(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("x must be finite")
        return v

    @field_validator("s")
    @classmethod
    def validate_s(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"s must be finite and > 0, got {v}")
        return v

    @property
    def z(self) -> complex:
        return complex(self.x, self.s)

    @classmethod
    def from_complex(cls, z: complex) -> "HalfPlanePoint":
        return cls(x=float(z.real), s=float(z.imag))

    def as_pair(self) -> List[float]:
        return [self.x, self.s]


I = HalfPlanePoint(x=0.0, s=1.0)


class DiskPoint(BaseModel):
    """
    A point of the open unit disc.
    """

    model_config = ConfigDict(frozen=True)

    u: complex

    @field_validator("u")
    @classmethod
    def validate_u(cls, v: complex) -> complex:
        if not abs(v) < 1.0:
            raise ValueError(f"|u| must be < 1, got {abs(v)}")
        return v


class MobiusMap(BaseModel):
    """
    Fractional linear map z -> (az+b)/(cz+d), rescaled to unit determinant when the determinant is positive.
    """

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    c: float
    d: float

    @model_validator(mode="before")
    @classmethod
    def normalize_determinant(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        a, b, c, d = (float(data[k]) for k in ("a", "b", "c", "d"))
        det = a * d - b * c
        if det == 0.0 or not math.isfinite(det):
            raise ValueError("Mobius map must have a nonzero finite determinant")
        if det > 0.0:
            scale = 1.0 / math.sqrt(det)
            a, b, c, d = a * scale, b * scale, c * scale, d * scale
        return {"a": a, "b": b, "c": c, "d": d}

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c


class HyperbolicDisc(BaseModel):
    """
    Pseudohyperbolic ball D(center, R) = {w : rho(w, center) < R}.
    """

    model_config = ConfigDict(frozen=True)

    center: HalfPlanePoint = I
    R: float = Field(gt=0.0, lt=1.0, description="Pseudohyperbolic radius")


class MaassLandau(BaseModel):
    """
    Hyperbolic Landau level n of the Maass Laplacian with magnetic field B.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["maass_landau"] = "maass_landau"
    B: float = Field(gt=0.5)
    n: int = Field(ge=0)

    @model_validator(mode="after")
    def validate_level(self) -> "MaassLandau":
        top = math.floor(self.B - 0.5)
        if self.n > top:
            raise ValueError(f"Landau level n={self.n} exceeds floor(B - 1/2) = {top} for B={self.B}")
        return self

    @property
    def alpha(self) -> float:
        return 2.0 * (self.B - self.n) - 1.0

    @property
    def eigenvalue(self) -> float:
        return (self.B - self.n) * (1.0 - self.B + self.n)


class LaguerreMode(BaseModel):
    """
    Mother wavelet xi^(alpha/2) e^(-xi) L_n^alpha(2 xi).
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["laguerre"] = "laguerre"
    alpha: float = Field(gt=0.0)
    n: int = Field(ge=0)


class GenericWavelet(BaseModel):
    """
    Frequency profile given by samples on a strictly increasing grid of positive frequencies.

    `decay_exponent` is the power p with fhat(xi) ~ xi^p as xi -> 0+; it drives the extrapolation
    below the first sample and the admissibility test (p > 0).
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["generic"] = "generic"
    xi: Tuple[float, ...]
    values: Tuple[complex, ...]
    decay_exponent: float

    _profile: SampledProfile = PrivateAttr()

    @model_validator(mode="after")
    def validate_samples(self) -> "GenericWavelet":
        if len(self.xi) < 64:
            raise ValueError(f"at least 64 samples are required, got {len(self.xi)}")
        if len(self.xi) != len(self.values):
            raise ValueError("xi and values must have the same length")
        if self.xi[0] <= 0.0 or any(b <= a for a, b in zip(self.xi, self.xi[1:], strict=False)):
            raise ValueError("xi must be strictly increasing and positive")
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in self.values):
            raise ValueError("profile samples must be finite")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._profile = SampledProfile(self.xi, self.values, self.decay_exponent)

    @property
    def profile(self) -> SampledProfile:
        return self._profile


KernelVariant = Annotated[Union[MaassLandau, LaguerreMode, GenericWavelet], Field(discriminator="kind")]


class KernelSpec(BaseModel):
    """
    Which correlation kernel, and how it is normalized.
    """

    model_config = ConfigDict(frozen=True)

    variant: KernelVariant
    normalization: Normalization = Normalization.DIAGONAL1

    @property
    def closed_form(self) -> bool:
        return not isinstance(self.variant, GenericWavelet)

    @property
    def alpha(self) -> Optional[float]:
        if isinstance(self.variant, GenericWavelet):
            return None
        return self.variant.alpha

    @property
    def n(self) -> Optional[int]:
        if isinstance(self.variant, GenericWavelet):
            return None
        return self.variant.n

    def with_normalization(self, normalization: Normalization) -> "KernelSpec":
        return self.model_copy(update={"normalization": normalization})

    def summary(self) -> Dict[str, Any]:
        """Provenance record; sampled profiles are summarized rather than copied."""
        if isinstance(self.variant, GenericWavelet):
            variant: Dict[str, Any] = {
                "kind": "generic",
                "samples": len(self.variant.xi),
                "xi_range": [self.variant.xi[0], self.variant.xi[-1]],
                "decay_exponent": self.variant.decay_exponent,
            }
        else:
            variant = self.variant.model_dump()
            variant["alpha"] = self.variant.alpha
        return {"variant": variant, "normalization": self.normalization.value}


class KernelValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: complex
    normalization: Normalization

    @property
    def modulus(self) -> float:
        return abs(self.value)


class ReducedKernelValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: complex
    empty: bool = Field(description="True when the reduced ensemble has no eigenfunctions")


class LandauLevel(BaseModel):
    """
    One point of the discrete Maass spectrum.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    alpha: float
    eigenvalue: float
    admissibility: Optional[float] = Field(None, description="4 pi / alpha, undefined at alpha = 0")
    density: Optional[float] = Field(None, description="Expected points per unit hyperbolic area")


class TraceSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    expected: float
    trace_sq: float
    variance: float
    n_omega: int


class PointConfiguration(BaseModel):
    """
    One sample of the discretized ensemble, reported at grid nodes.
    """

    model_config = ConfigDict(frozen=True)

    points: List[HalfPlanePoint]
    node_indices: List[int]
    region: HyperbolicDisc
    seed: int
    kernel: Dict[str, Any]

    @property
    def count(self) -> int:
        return len(self.points)


class BatchStatistics(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_samples: int
    base_seed: int
    mean: float
    variance: float
    se_mean: float
    se_variance: float
    expected: float
    trace_variance: float
    count_histogram: List[int]
    count_law: List[float]
    total_variation: float
    pair_edges: List[float]
    pair_counts: List[int]
    poisson_pair_benchmark: List[float]
    dpp_pair_expectation: List[float]


class LensFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    kappa: float
    r_squared: float
    rho: List[float]
    limits: List[float]


class AsymptoticConstant(BaseModel):
    model_config = ConfigDict(frozen=True)

    c_extrapolated: float
    c_integral: float
    kappa: float
    radii: List[float]
    sequence: List[float]
    increasing: bool
    relative_gap: float


class BoundsReport(BaseModel):
    """
    Upper bounds on the disc variance with their margins, and the empirical lower-bound ratios.
    """

    model_config = ConfigDict(frozen=True)

    R: float
    normalization: Normalization
    v_geometric: float
    v_double: float
    v_trace: float
    expected: float
    bound_area: float
    bound_admissible: float
    below_expected: bool
    below_admissible: bool
    below_area: bool
    margin_expected: float
    margin_admissible: float
    margin_area: float
    lower_ratios: Dict[str, float]
    ratio_band: Tuple[float, float]


class VarianceReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    R: float
    v_geometric: Optional[float] = None
    v_double: Optional[float] = None
    v_trace: Optional[float] = None
    expected: float
    normalization: Normalization
    c_estimate: Optional[float] = None
    kappa: Optional[float] = None
    bounds: Dict[str, float]
