# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

import numpy as np
import pytest
from pydantic import ValidationError

from coreason_affine.exceptions import AdmissibilityError, DomainError, ResolutionError
from coreason_affine.kernels import (
    admissibility,
    kernel_bergman,
    kernel_closed,
    kernel_jacobi_form,
    kernel_matrix,
    landau_levels,
    maass_residual,
    oscillatory_integral,
)
from coreason_affine.models import GenericWavelet, HalfPlanePoint, KernelSpec, MaassLandau, Normalization
from coreason_affine.profiles import sample_laguerre_profile


def _generic(decay: float) -> KernelSpec:
    xi, values = sample_laguerre_profile(6.0, 0)
    return KernelSpec(variant=GenericWavelet(xi=xi, values=values, decay_exponent=decay))


def test_level_above_the_discrete_spectrum() -> None:
    """n > floor(B - 1/2) is rejected with the bound in the message."""
    with pytest.raises(ValidationError) as exc:
        MaassLandau(B=0.6, n=1)
    assert "floor(B - 1/2)" in str(exc.value)


def test_field_at_or_below_one_half() -> None:
    """B <= 1/2 has no discrete spectrum."""
    with pytest.raises(ValidationError):
        MaassLandau(B=0.5, n=0)
    with pytest.raises(DomainError):
        landau_levels(0.5)


def test_top_level_at_half_integer_field_is_not_admissible() -> None:
    """B - n = 1/2 gives alpha = 0 and an infinite admissibility constant."""
    spec = KernelSpec(variant=MaassLandau(B=3.5, n=3))
    with pytest.raises(AdmissibilityError):
        admissibility(spec)
    with pytest.raises(AdmissibilityError):
        kernel_matrix(spec.with_normalization(Normalization.PROJECTION), [1j])


def test_top_level_diagonal1_kernel_is_still_defined() -> None:
    """The Diagonal1 kernel needs no admissibility constant."""
    spec = KernelSpec(variant=MaassLandau(B=3.5, n=3))
    z = HalfPlanePoint(x=0.1, s=1.4)
    assert kernel_closed(spec, z, z).value == pytest.approx(1.0)


def test_non_admissible_sampled_profile() -> None:
    """A nonpositive small-frequency exponent makes C infinite."""
    with pytest.raises(AdmissibilityError):
        admissibility(_generic(0.0))


def test_closed_form_paths_reject_sampled_profiles() -> None:
    """Closed-form and Jacobi evaluation need a Laguerre-family kernel."""
    spec = _generic(3.0)
    z = HalfPlanePoint(x=0.0, s=1.0)
    with pytest.raises(DomainError):
        kernel_closed(spec, z, z)
    with pytest.raises(DomainError):
        kernel_jacobi_form(spec, z, z)


def test_bergman_rejects_negative_alpha() -> None:
    """alpha < 0 is outside the weighted Bergman family."""
    z = HalfPlanePoint(x=0.0, s=1.0)
    with pytest.raises(DomainError):
        kernel_bergman(-0.5, z, z)


def test_maass_residual_invalid_steps() -> None:
    """Nonpositive steps and stencils leaving the half-plane raise DomainError."""
    mode = MaassLandau(B=3.5, n=0)
    w0 = HalfPlanePoint(x=0.0, s=1.0)
    with pytest.raises(DomainError):
        maass_residual(mode, w0, 0.0)
    with pytest.raises(DomainError):
        maass_residual(mode, w0, 0.5, points=[HalfPlanePoint(x=0.0, s=0.1)])


def test_kernel_far_apart_decays_without_nan() -> None:
    """Widely separated points give tiny finite values."""
    spec = KernelSpec(variant=MaassLandau(B=3.5, n=0))
    value = kernel_matrix(spec, [1j], [1e4 + 1e-3j])[0, 0]
    assert np.isfinite(value)
    assert abs(value) < 1e-10


def test_oscillatory_integral_unresolved() -> None:
    """An integrand that never settles raises ResolutionError with the last iterates."""
    rng = np.random.default_rng(0)

    def noise(xi: np.ndarray) -> np.ndarray:
        return rng.normal(size=xi.shape).astype(np.complex128)

    with pytest.raises(ResolutionError) as exc:
        oscillatory_integral(noise, 1.0, 1.0)
    assert len(exc.value.iterates) == 2
