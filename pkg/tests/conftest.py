# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

from typing import Generator

import pytest

from coreason_affine.config import get_settings
from coreason_affine.models import KernelSpec, LaguerreMode, MaassLandau, Normalization


@pytest.fixture
def maass_spec() -> KernelSpec:
    return KernelSpec(variant=MaassLandau(B=3.5, n=0))


@pytest.fixture
def maass_projection() -> KernelSpec:
    return KernelSpec(variant=MaassLandau(B=3.5, n=0), normalization=Normalization.PROJECTION)


@pytest.fixture
def laguerre_spec() -> KernelSpec:
    return KernelSpec(variant=LaguerreMode(alpha=6.0, n=0))


@pytest.fixture
def clean_settings() -> Generator[None, None, None]:
    # get_settings is cached.
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
