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

from coreason_affine.concentration import (
    build_operator,
    reduced_kernel,
    reduced_kernel_matrix,
    trace_statistics,
    traces,
)
from coreason_affine.exceptions import ResourceError
from coreason_affine.models import HalfPlanePoint, HyperbolicDisc, KernelSpec, Normalization


def test_operator_trace_is_expected_count(maass_spec: KernelSpec) -> None:
    """tr T on D(i, 0.8) is |D|_h / C = 6 * 0.64 / 0.36."""
    op = build_operator(maass_spec, HyperbolicDisc(R=0.8), 2)
    summary = traces(op)
    assert summary.expected == pytest.approx(6.0 * 0.64 / 0.36, rel=1e-3)
    assert summary.n_omega == 10
    assert 0.0 < summary.variance < summary.expected


def test_operator_spectrum_is_sorted_and_clamped(maass_spec: KernelSpec) -> None:
    """Eigenvalues are descending in [0, 1] and the matrix is Hermitian."""
    op = build_operator(maass_spec, HyperbolicDisc(center=HalfPlanePoint(x=1.0, s=2.0), R=0.6), 2)
    assert np.all(np.diff(op.eigenvalues) <= 0.0)
    assert np.all((op.eigenvalues >= 0.0) & (op.eigenvalues <= 1.0))
    assert np.allclose(op.matrix, op.matrix.conj().T)
    assert op.residual < 1e-10
    assert op.spec.normalization == Normalization.PROJECTION
    assert op.size == op.grid.size


def test_trace_is_invariant_under_moving_the_disc(maass_spec: KernelSpec) -> None:
    """The expected count depends on the region only through its area."""
    here = traces(build_operator(maass_spec, HyperbolicDisc(R=0.6), 2)).expected
    there = traces(build_operator(maass_spec, HyperbolicDisc(center=HalfPlanePoint(x=-3.0, s=0.2), R=0.6), 2))
    assert there.expected == pytest.approx(here, rel=1e-6)


def test_trace_statistics_agree_with_the_spectrum(maass_spec: KernelSpec) -> None:
    """The eigendecomposition-free traces match those of the built operator."""
    region = HyperbolicDisc(R=0.7)
    from_spectrum = traces(build_operator(maass_spec, region, 2))
    direct = trace_statistics(maass_spec, region, 2)
    assert direct.expected == pytest.approx(from_spectrum.expected, rel=1e-5)
    assert direct.variance == pytest.approx(from_spectrum.variance, rel=1e-3)


def test_reduced_kernel_has_rank_n(maass_spec: KernelSpec) -> None:
    """The reduced kernel integrates to N = floor(tr T) on the region."""
    op = build_operator(maass_spec, HyperbolicDisc(R=0.8), 2)
    K = reduced_kernel_matrix(op, op.grid.nodes)
    assert np.allclose(K, K.conj().T, atol=1e-10)
    assert float(np.real(np.sum(np.diag(K) * op.grid.weights))) == pytest.approx(10.0, rel=1e-8)

    z = HalfPlanePoint(x=0.1, s=1.1)
    value = reduced_kernel(op, z, z)
    assert not value.empty
    assert value.value.real > 0.0


def test_reduced_kernel_is_empty_below_one_expected_point(maass_spec: KernelSpec) -> None:
    """tr T < 1 leaves no eigenfunctions."""
    op = build_operator(maass_spec, HyperbolicDisc(R=0.2), 2)
    z = HalfPlanePoint(x=0.0, s=1.0)
    value = reduced_kernel(op, z, z)
    assert value.empty
    assert value.value == 0j
    assert reduced_kernel_matrix(op, [1j, 2j]).shape == (2, 2)


def test_operator_budget(maass_spec: KernelSpec, clean_settings: None, monkeypatch: pytest.MonkeyPatch) -> None:
    """Grids above MAX_OPERATOR_NODES raise ResourceError with a shallower depth."""
    monkeypatch.setenv("AFFINE_MAX_OPERATOR_NODES", "200")
    with pytest.raises(ResourceError) as exc:
        build_operator(maass_spec, HyperbolicDisc(R=0.8), 3)
    assert exc.value.suggested_depth is not None
    assert 1 <= exc.value.suggested_depth < 3
