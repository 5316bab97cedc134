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
Quadrature against the invariant measure dmu+ = s^-2 dx ds.

Grids are geodesic polar grids about a center: Gauss-Legendre in the hyperbolic radius rho and a
uniform angular rule per ring whose size follows the ring circumference 2 pi sinh(rho). In these
coordinates dmu+ = sinh(rho) drho dtheta, so every weight is finite and positive.
"""

import math
from typing import Callable, List, Literal, Optional, Sequence

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from coreason_affine.config import Settings, get_settings
from coreason_affine.exceptions import DomainError, EvaluationError, ResolutionError
from coreason_affine.geometry import from_disc_model, geodesic_radius, rho
from coreason_affine.models import I, HalfPlanePoint, LensFit
from coreason_affine.utils.logger import logger

ComplexArray = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]
Integrand = Callable[[ComplexArray], npt.ArrayLike]


class GridRegion(BaseModel):
    """Region covered by a grid: a disc, an annulus R_inner <= rho < R, or the truncated half-plane."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["disc", "annulus", "halfplane"]
    center: HalfPlanePoint = I
    R: float = Field(gt=0.0, lt=1.0)
    R_inner: float = Field(default=0.0, ge=0.0, lt=1.0)


class QuadratureGrid(BaseModel):
    """
    Nodes z_k in the half-plane with weights w_k carrying the dmu+ density.

    Ring bookkeeping (`ring_index`, `ring_rho`, `ring_weights`, `ring_points`) lets rotation-invariant
    integrands be summed one representative per ring.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nodes: ComplexArray
    weights: RealArray
    region: GridRegion
    depth: int
    ring_index: npt.NDArray[np.int64]
    ring_rho: RealArray
    ring_weights: RealArray
    ring_points: ComplexArray

    @property
    def size(self) -> int:
        return int(self.nodes.shape[0])

    def points(self) -> List[HalfPlanePoint]:
        return [HalfPlanePoint.from_complex(complex(z)) for z in self.nodes]


def _check_depth(depth: int) -> None:
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")


def _check_radius(R: float) -> None:
    if not 0.0 < R < 1.0:
        raise DomainError(f"R must lie in (0, 1), got {R}")


def _ring_sizes(ring_rho: RealArray, depth: int, settings: Settings) -> npt.NDArray[np.int64]:
    step = settings.ANGULAR_STEP_BASE / 2**depth
    counts = np.ceil(2.0 * np.pi * np.sinh(ring_rho) / step)
    counts = np.clip(counts, settings.MIN_RING_NODES, settings.MAX_RING_NODES)
    # Multiples of four keep the quarter turns on every ring.
    return (4 * np.ceil(counts / 4.0)).astype(np.int64)


def _polar_grid(
    center: HalfPlanePoint, rho_in: float, rho_out: float, depth: int, region: GridRegion
) -> QuadratureGrid:
    settings = get_settings()
    n_rings = settings.RADIAL_NODES_BASE * 2**depth
    step = (rho_out - rho_in) / n_rings
    if step > settings.MAX_RADIAL_STEP:
        needed = math.ceil(math.log2((rho_out - rho_in) / (settings.MAX_RADIAL_STEP * settings.RADIAL_NODES_BASE)))
        logger.error(f"Radial step {step:.3f} exceeds {settings.MAX_RADIAL_STEP} for R={region.R} at depth {depth}")
        raise ResolutionError(
            f"R={region.R} is too close to 1 for depth {depth}: radial step {step:.3f} exceeds "
            f"{settings.MAX_RADIAL_STEP}; use depth >= {needed}"
        )

    x, w = np.polynomial.legendre.leggauss(n_rings)
    half = (rho_out - rho_in) / 2.0
    ring_rho = rho_in + half * (x + 1.0)
    radial_w = half * w * np.sinh(ring_rho)
    sizes = _ring_sizes(ring_rho, depth, settings)

    ring_index = np.repeat(np.arange(n_rings, dtype=np.int64), sizes)
    offsets = np.arange(ring_index.shape[0]) - np.repeat(np.cumsum(sizes) - sizes, sizes)
    theta = 2.0 * np.pi * offsets / sizes[ring_index]
    u = np.tanh(ring_rho[ring_index] / 2.0) * np.exp(1j * theta)

    nodes = from_disc_model(center.z, u)
    weights = radial_w[ring_index] * 2.0 * np.pi / sizes[ring_index]
    ring_weights = 2.0 * np.pi * radial_w
    ring_points = from_disc_model(center.z, np.tanh(ring_rho / 2.0).astype(np.complex128))

    logger.debug(f"Built {region.kind} grid: {n_rings} rings, {nodes.shape[0]} nodes, depth {depth}")
    return QuadratureGrid(
        nodes=nodes,
        weights=weights,
        region=region,
        depth=depth,
        ring_index=ring_index,
        ring_rho=ring_rho,
        ring_weights=ring_weights,
        ring_points=ring_points,
    )


def disc_grid(center: HalfPlanePoint, R: float, depth: int) -> QuadratureGrid:
    """Grid on the pseudohyperbolic disc D(center, R)."""
    _check_radius(R)
    _check_depth(depth)
    region = GridRegion(kind="disc", center=center, R=R)
    return _polar_grid(center, 0.0, geodesic_radius(R), depth, region)


def annulus_grid(center: HalfPlanePoint, R_inner: float, R: float, depth: int) -> QuadratureGrid:
    """Grid on R_inner <= rho(w, center) < R."""
    _check_radius(R)
    _check_depth(depth)
    if not 0.0 < R_inner < R:
        raise DomainError(f"inner radius must lie in (0, {R}), got {R_inner}")
    region = GridRegion(kind="annulus", center=center, R=R, R_inner=R_inner)
    return _polar_grid(center, geodesic_radius(R_inner), geodesic_radius(R), depth, region)


def halfplane_grid(R_max: Optional[float] = None, depth: int = 3) -> QuadratureGrid:
    """
    Truncation of the whole half-plane to D(i, R_max).

    Integrands must decay towards the boundary; `tail_estimate` measures what the truncation drops.
    """
    R_max = get_settings().HALFPLANE_R_MAX if R_max is None else R_max
    _check_radius(R_max)
    _check_depth(depth)
    region = GridRegion(kind="halfplane", center=I, R=R_max)
    return _polar_grid(I, 0.0, geodesic_radius(R_max), depth, region)


def integrate(f: Integrand, grid: QuadratureGrid) -> complex:
    """
    Sum of f(z_k) w_k. `f` is evaluated once on the complex array of all nodes.
    """
    values = np.broadcast_to(np.asarray(f(grid.nodes), dtype=np.complex128), grid.nodes.shape)
    finite = np.isfinite(values)
    if not np.all(finite):
        k = int(np.argmin(finite))
        node = complex(grid.nodes[k])
        logger.error(f"Integrand is not finite at node {k} ({node})")
        raise EvaluationError(f"integrand returned {values[k]} at node {node}", node=node)
    return complex(np.sum(values * grid.weights))


def tail_estimate(f: Integrand, depth: int, R_inner: Optional[float] = None) -> float:
    """|integral| of f over TAIL_RADIUS <= rho(w, i) < HALFPLANE_R_MAX."""
    settings = get_settings()
    R_inner = settings.TAIL_RADIUS if R_inner is None else R_inner
    grid = annulus_grid(I, R_inner, settings.HALFPLANE_R_MAX, depth)
    return abs(integrate(f, grid))


def lens_area_rho(v: float, R: float, depth: int) -> float:
    """
    Hyperbolic area of D(w, R) minus D(i, R) for any w with rho(w, i) = v.

    In the disc model centered at w the disc D(i, R) is the Euclidean disc of `disc_model_circle`,
    moved onto the positive real axis. Each ray from 0 is integrated exactly with the antiderivative
    2 / (1 - r^2) of the density 4r / (1 - r^2)^2; the angle uses a periodic trapezoid rule.
    """
    _check_radius(R)
    _check_depth(depth)
    if not 0.0 <= v < 1.0:
        raise DomainError(f"pseudohyperbolic distance must lie in [0, 1), got {v}")
    settings = get_settings()
    n_angles = settings.LENS_ANGLES_BASE * 2 ** (depth + 2)
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles

    q = 1.0 - R * R * v * v
    c = v * (1.0 - R * R) / q
    radius = R * (1.0 - v * v) / q

    def G(r: RealArray) -> RealArray:
        return np.asarray(2.0 / (1.0 - r * r))

    disc = radius * radius - (c * np.sin(theta)) ** 2
    root = np.sqrt(np.maximum(disc, 0.0))
    lo = np.clip(c * np.cos(theta) - root, 0.0, R)
    hi = np.clip(c * np.cos(theta) + root, 0.0, R)
    removed = np.where(disc > 0.0, G(hi) - G(lo), 0.0)
    full = 2.0 / (1.0 - R * R) - 2.0
    return float(np.sum(full - removed) * 2.0 * np.pi / n_angles)


def lens_area(w: HalfPlanePoint, R: float, depth: int) -> float:
    """|D(i,R)^c intersected with D(w,R)|_h."""
    return lens_area_rho(rho(w, I), R, depth)


def lens_area_profile(rhos: Sequence[float], R: float, depth: int) -> RealArray:
    return np.array([lens_area_rho(v, R, depth) for v in rhos])


def extrapolate_to_zero(eps: Sequence[float], values: Sequence[float], degree: int = 2) -> float:
    """Polynomial least-squares fit in eps evaluated at eps = 0."""
    if len(eps) != len(values):
        raise DomainError("eps and values must have equal length")
    if len(eps) <= degree:
        raise DomainError(f"need more than {degree} points to extrapolate, got {len(eps)}")
    coefficients = np.polyfit(np.asarray(eps, dtype=np.float64), np.asarray(values, dtype=np.float64), degree)
    return float(coefficients[-1])


def fit_lens_constant(
    depth: int, radii: Optional[Sequence[float]] = None, centers: Optional[Sequence[float]] = None
) -> LensFit:
    """
    Fits the limit of (1 - R^2) lens_area as R -> 1 against arccos(1 - 2 rho^2).

    The slope is a least-squares fit through the origin; r_squared measures the proportionality.
    """
    settings = get_settings()
    radii = settings.ASYMPTOTIC_RADII if radii is None else radii
    if centers is None:
        centers = [float(v) for v in np.linspace(0.05, 0.7, settings.LENS_FIT_CENTERS)]

    eps = [1.0 - R * R for R in radii]
    limits = []
    for v in centers:
        scaled = [e * lens_area_rho(v, R, depth) for e, R in zip(eps, radii, strict=True)]
        limits.append(extrapolate_to_zero(eps, scaled))

    g = np.arccos(1.0 - 2.0 * np.asarray(centers) ** 2)
    lim = np.asarray(limits)
    kappa = float(np.dot(g, lim) / np.dot(g, g))
    ss_res = float(np.sum((lim - kappa * g) ** 2))
    ss_tot = float(np.sum((lim - lim.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    logger.info(f"Lens constant kappa={kappa:.6f} (r^2={r_squared:.6f}) over {len(centers)} centers")
    return LensFit(kappa=kappa, r_squared=r_squared, rho=list(centers), limits=limits)
