# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

"""
Discretized concentration (Toeplitz) operators T f(z) = int_Omega f(w) p(z, w) dmu+(w).

The operator is represented by the Hermitian matrix M = W^(1/2) P W^(1/2) on a disc grid, where P is
the Projection kernel between nodes and W the quadrature weights. Its eigenvalues approximate the
spectrum of T, its eigenvectors the eigenfunctions sampled at the nodes.
"""

import math
from typing import Optional

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict
from scipy.linalg import eigh

from coreason_affine.config import get_settings
from coreason_affine.exceptions import ConvergenceError, ResourceError
from coreason_affine.kernels import kernel_matrix
from coreason_affine.models import (
    HalfPlanePoint,
    HyperbolicDisc,
    KernelSpec,
    Normalization,
    ReducedKernelValue,
    TraceSummary,
)
from coreason_affine.quadrature import QuadratureGrid, disc_grid
from coreason_affine.utils.logger import logger

ComplexArray = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]

TRACE_CHUNK = 1024


class ConcentrationOperator(BaseModel):
    """
    A built operator. `eigenvalues` are sorted descending and clamped to [0, 1];
    `raw_eigenvalues` keep the solver output.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: KernelSpec
    region: HyperbolicDisc
    grid: QuadratureGrid
    matrix: ComplexArray
    eigenvalues: RealArray
    raw_eigenvalues: RealArray
    eigenvectors: ComplexArray
    clamp_magnitude: float
    hermitian_defect: float
    residual: float

    @property
    def size(self) -> int:
        return self.grid.size


def _suggest_depth(size: int, depth: int, limit: int) -> int:
    # Node counts grow about fourfold per level.
    return max(1, depth - math.ceil(math.log(size / limit, 4)))


def build_operator(spec: KernelSpec, region: HyperbolicDisc, depth: Optional[int] = None) -> ConcentrationOperator:
    settings = get_settings()
    depth = settings.GRID_DEPTH if depth is None else depth

    # 1. Projection kernel, whatever the caller asked for
    projection = spec.with_normalization(Normalization.PROJECTION)

    # 2. Grid and memory budget
    grid = disc_grid(region.center, region.R, depth)
    if grid.size > settings.MAX_OPERATOR_NODES:
        suggested = _suggest_depth(grid.size, depth, settings.MAX_OPERATOR_NODES)
        logger.error(f"Operator on {grid.size} nodes exceeds MAX_OPERATOR_NODES={settings.MAX_OPERATOR_NODES}")
        raise ResourceError(
            f"grid of {grid.size} nodes exceeds the limit of {settings.MAX_OPERATOR_NODES}; try depth {suggested}",
            suggested_depth=suggested,
        )

    # 3. Symmetric discretization
    sw = np.sqrt(grid.weights)
    matrix = sw[:, None] * kernel_matrix(projection, grid.nodes) * sw[None, :]
    hermitian_defect = float(np.max(np.abs(matrix - matrix.conj().T)))
    matrix = (matrix + matrix.conj().T) / 2.0

    # 4. Dense Hermitian eigensolver, descending order
    values, vectors = eigh(matrix)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()

    # 5. Residual check
    scale = float(np.linalg.norm(matrix))
    residual = float(np.max(np.linalg.norm(matrix @ vectors - vectors * values[None, :], axis=0))) / max(scale, 1e-300)
    if residual > settings.EIGEN_RESIDUAL_TOL:
        logger.error(f"Eigen residual {residual:.3e} exceeds {settings.EIGEN_RESIDUAL_TOL}")
        raise ConvergenceError(
            f"eigendecomposition residual {residual:.3e} exceeds {settings.EIGEN_RESIDUAL_TOL}",
            diagnostics={"residual": residual, "size": grid.size},
        )

    # 6. Clamp to [0, 1]
    clamped = np.clip(values, 0.0, 1.0)
    clamp_magnitude = float(np.max(np.abs(values - clamped))) if values.size else 0.0
    if clamp_magnitude > settings.EIGEN_CLAMP_TOL:
        logger.warning(f"Eigenvalues clamped into [0, 1] by up to {clamp_magnitude:.3e}")

    logger.info(
        f"Built concentration operator on {grid.size} nodes (R={region.R}, depth={depth}), "
        f"trace={float(np.sum(clamped)):.6f}"
    )
    return ConcentrationOperator(
        spec=projection,
        region=region,
        grid=grid,
        matrix=matrix,
        eigenvalues=clamped,
        raw_eigenvalues=values,
        eigenvectors=vectors,
        clamp_magnitude=clamp_magnitude,
        hermitian_defect=hermitian_defect,
        residual=residual,
    )


def traces(op: ConcentrationOperator) -> TraceSummary:
    """tr T, tr T^2, their difference (the count variance) and N = floor(tr T)."""
    expected = float(np.sum(op.eigenvalues))
    trace_sq = float(np.sum(op.eigenvalues**2))
    return TraceSummary(
        expected=expected,
        trace_sq=trace_sq,
        variance=max(expected - trace_sq, 0.0),
        n_omega=math.floor(expected),
    )


def trace_statistics(spec: KernelSpec, region: HyperbolicDisc, depth: Optional[int] = None) -> TraceSummary:
    """
    The same traces without an eigendecomposition: tr M from the diagonal and tr M^2 as the
    weighted double sum of |p|^2, accumulated in row blocks.
    """
    depth = get_settings().GRID_DEPTH if depth is None else depth
    projection = spec.with_normalization(Normalization.PROJECTION)
    grid = disc_grid(region.center, region.R, depth)
    nodes, weights = grid.nodes, grid.weights

    diagonal = np.real(kernel_matrix(projection, nodes[:1]))[0, 0]
    expected = float(diagonal * np.sum(weights))
    trace_sq = 0.0
    for start in range(0, grid.size, TRACE_CHUNK):
        rows = slice(start, start + TRACE_CHUNK)
        block = np.abs(kernel_matrix(projection, nodes[rows], nodes)) ** 2
        trace_sq += float(weights[rows] @ block @ weights)
    logger.debug(f"Trace statistics on {grid.size} nodes: tr={expected:.6f}, tr2={trace_sq:.6f}")
    return TraceSummary(
        expected=expected,
        trace_sq=trace_sq,
        variance=max(expected - trace_sq, 0.0),
        n_omega=math.floor(expected),
    )


def _eigenfunctions(op: ConcentrationOperator, zs: ComplexArray, count: int) -> ComplexArray:
    """Nystrom extension phi_j(z) = (1 / lambda_j) sum_i p(z, z_i) sqrt(w_i) V_ij for j < count."""
    lam = op.eigenvalues[:count]
    weighted = np.sqrt(op.grid.weights)[:, None] * op.eigenvectors[:, :count]
    return np.asarray(kernel_matrix(op.spec, zs, op.grid.nodes) @ weighted / lam[None, :])


def _reduced_count(op: ConcentrationOperator) -> int:
    n_omega = traces(op).n_omega
    return int(min(n_omega, np.count_nonzero(op.eigenvalues > 0.0)))


def reduced_kernel_matrix(
    op: ConcentrationOperator, zs: npt.ArrayLike, ws: Optional[npt.ArrayLike] = None
) -> ComplexArray:
    z_arr = np.atleast_1d(np.asarray(zs, dtype=np.complex128))
    w_arr = z_arr if ws is None else np.atleast_1d(np.asarray(ws, dtype=np.complex128))
    count = _reduced_count(op)
    if count == 0:
        return np.zeros((z_arr.shape[0], w_arr.shape[0]), dtype=np.complex128)
    phi_z = _eigenfunctions(op, z_arr, count)
    phi_w = phi_z if ws is None else _eigenfunctions(op, w_arr, count)
    return np.asarray(phi_z @ phi_w.conj().T)


def reduced_kernel(op: ConcentrationOperator, z: HalfPlanePoint, w: HalfPlanePoint) -> ReducedKernelValue:
    """Sum over the top N eigenfunctions of phi_j(z) conj(phi_j(w)); `empty` flags N = 0."""
    count = _reduced_count(op)
    if count == 0:
        return ReducedKernelValue(value=0j, empty=True)
    value = complex(reduced_kernel_matrix(op, [z.z], [w.z])[0, 0])
    return ReducedKernelValue(value=value, empty=False)
