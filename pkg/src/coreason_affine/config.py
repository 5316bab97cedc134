# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

from functools import lru_cache
from pathlib import Path
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="AFFINE_", extra="ignore")

    OUTPUT_DIR: Path = Path("out")
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Path = Path("logs")

    # Grids
    GRID_DEPTH: int = 3
    VARIANCE_DEPTH: int = 3
    RADIAL_NODES_BASE: int = 4
    ANGULAR_STEP_BASE: float = 2.0
    MIN_RING_NODES: int = 16
    MAX_RING_NODES: int = 2048
    MAX_RADIAL_STEP: float = 0.5
    LENS_ANGLES_BASE: int = 64
    HALFPLANE_R_MAX: float = 0.999
    TAIL_RADIUS: float = 0.99
    TAIL_TOLERANCE: float = 0.01

    # Operators
    MAX_OPERATOR_NODES: int = 6000
    EIGEN_CLAMP_TOL: float = 1e-8
    EIGEN_RESIDUAL_TOL: float = 1e-10

    # Oscillatory quadrature
    QUAD_RTOL: float = 1e-9
    QUAD_MAX_LEVELS: int = 10
    PANEL_NODES: int = 16

    # Reports
    R_SWEEP: Tuple[float, ...] = (0.5, 0.7, 0.9)
    ASYMPTOTIC_RADII: Tuple[float, ...] = (0.9, 0.95, 0.975, 0.99)
    LOWER_BOUND_RADII: Tuple[float, ...] = (0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    LENS_FIT_CENTERS: int = 20
    WORKERS: int = 1


class ToleranceProfile(BaseModel):
    """
    Scaling applied to verification tolerances and grid depths.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    scale: float = Field(gt=0, description="Multiplier applied to every check tolerance")
    depth_bonus: int = Field(ge=0, description="Extra refinement levels for grid-based checks")


TOLERANCE_PROFILES: Dict[str, ToleranceProfile] = {
    "default": ToleranceProfile(name="default", scale=1.0, depth_bonus=0),
    "strict": ToleranceProfile(name="strict", scale=0.1, depth_bonus=1),
}


@lru_cache
def get_settings() -> Settings:
    return Settings()
