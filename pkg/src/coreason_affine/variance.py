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
Number variance of D(i, R) by three independent routes.

- geometric: int |K(i, w)|^2 |D(w, R) minus D(i, R)|_h dmu+(w), ring by ring
- double: int over D(i, R) x complement of |K(z, w)|^2
- trace: tr T - tr T^2 of the concentration operator

All three are quadratic in K, so Diagonal1 values are C^2 times the Projection values.
"""

from typing import Dict, List, Optional, Sequence

import numpy as np
import numpy.typing as npt

from coreason_affine.concentration import trace_statistics
from coreason_affine.config import get_settings
from coreason_affine.exceptions import ConvergenceError, DomainError, ResolutionError
from coreason_affine.geometry import disc_area
from coreason_affine.kernels import admissibility, closed_form_values
from coreason_affine.models import (
    I,
    AsymptoticConstant,
    BoundsReport,
    HyperbolicDisc,
    KernelSpec,
    Normalization,
    VarianceReport,
)
from coreason_affine.quadrature import (
    annulus_grid,
    disc_grid,
    extrapolate_to_zero,
    fit_lens_constant,
    halfplane_grid,
    lens_area_rho,
)
from coreason_affine.utils.logger import logger

RealArray = npt.NDArray[np.float64]

METHODS = ("geometric", "double", "trace")


def _require_closed_form(spec: KernelSpec) -> None:
    if not spec.closed_form:
        raise DomainError("half-plane variance integrals need a Laguerre or Maass-Landau kernel")


def _squared_scale(spec: KernelSpec) -> float:
    """Factor turning a Diagonal1 |K|^2 integral into the kernel's normalization."""
    if spec.normalization == Normalization.PROJECTION:
        return 1.0 / admissibility(spec) ** 2
    return 1.0


def _modulus_squared(spec: KernelSpec, z: npt.ArrayLike, w: npt.ArrayLike) -> RealArray:
    alpha, n = float(spec.alpha), int(spec.n)  # type: ignore[arg-type]
    return np.asarray(np.abs(closed_form_values(alpha, n, z, w)) ** 2)


def _depth(depth: Optional[int]) -> int:
    return get_settings().VARIANCE_DEPTH if depth is None else depth


def variance_geometric(spec: KernelSpec, R: float, depth: Optional[int] = None) -> float:
    """
    Ring sum of |K(i, w)|^2 times the lens area over the truncated half-plane.

    |K(i, w)| and the lens area depend on w only through rho(w, i), so each ring of the half-plane
    grid contributes its total weight times one evaluation.
    """
    _require_closed_form(spec)
    if not 0.0 < R < 1.0:
        raise DomainError(f"R must lie in (0, 1), got {R}")
    depth = _depth(depth)
    settings = get_settings()
    scale = _squared_scale(spec)

    grid = halfplane_grid(depth=depth)
    ring_pseudo = np.tanh(grid.ring_rho / 2.0)
    lens = np.array([lens_area_rho(float(v), R, depth) for v in ring_pseudo])
    contributions = grid.ring_weights * _modulus_squared(spec, 1j, grid.ring_points) * lens

    total = float(np.sum(contributions))
    tail = float(np.sum(contributions[ring_pseudo > settings.TAIL_RADIUS]))
    if tail > settings.TAIL_TOLERANCE * total:
        logger.error(f"Truncation tail {tail:.3e} is {tail / total:.2%} of the geometric variance")
        raise ResolutionError(
            f"half-plane truncation tail {tail:.3e} exceeds {settings.TAIL_TOLERANCE:.0%} of {total:.6e}",
            iterates=[total - tail, total],
        )
    value = total * scale
    logger.debug(f"Geometric variance R={R}: {value:.8f}")
    return value


def variance_double(spec: KernelSpec, R: float, depth: Optional[int] = None, swap: bool = False) -> float:
    """
    Double integral of |K(z, w)|^2 over D(i, R) x (R <= rho(w, i) < R_max).

    The outer factor is rotation invariant about i, so it is summed one representative per ring;
    `swap` exchanges which factor is the outer one.
    """
    _require_closed_form(spec)
    if not 0.0 < R < 1.0:
        raise DomainError(f"R must lie in (0, 1), got {R}")
    depth = _depth(depth)
    settings = get_settings()
    if R >= settings.HALFPLANE_R_MAX:
        raise DomainError(f"R must be below the truncation radius {settings.HALFPLANE_R_MAX}")

    inside = disc_grid(I, R, depth)
    outside = annulus_grid(I, R, settings.HALFPLANE_R_MAX, depth)
    outer, inner = (outside, inside) if swap else (inside, outside)

    total = 0.0
    for weight, rep in zip(outer.ring_weights, outer.ring_points, strict=True):
        total += float(weight) * float(np.sum(inner.weights * _modulus_squared(spec, rep, inner.nodes)))
    value = total * _squared_scale(spec)
    logger.debug(f"Double-integral variance R={R} (swap={swap}): {value:.8f}")
    return value


def variance_trace(spec: KernelSpec, R: float, depth: Optional[int] = None) -> float:
    """tr T - tr T^2 of the disc operator, in the kernel's normalization."""
    if not 0.0 < R < 1.0:
        raise DomainError(f"R must lie in (0, 1), got {R}")
    summary = trace_statistics(spec, HyperbolicDisc(center=I, R=R), _depth(depth))
    if spec.normalization == Normalization.DIAGONAL1:
        return summary.variance * admissibility(spec) ** 2
    return summary.variance


def expected_count(spec: KernelSpec, R: float) -> float:
    """tr T: |Omega|_h / C under Projection, |Omega|_h under Diagonal1."""
    area = disc_area(R)
    if spec.normalization == Normalization.PROJECTION:
        return area / admissibility(spec)
    return area


def halfplane_integral(spec: KernelSpec, weight_fn: Optional[str] = None, depth: Optional[int] = None) -> float:
    """
    Ring sum of |K(i, w)|^2 over the truncated half-plane, optionally times arccos(1 - 2 rho^2).

    With no weight this is the total mass C (Diagonal1).
    """
    _require_closed_form(spec)
    grid = halfplane_grid(depth=_depth(depth))
    values = grid.ring_weights * _modulus_squared(spec, 1j, grid.ring_points)
    if weight_fn == "arccos":
        pseudo = np.tanh(grid.ring_rho / 2.0)
        values = values * np.arccos(1.0 - 2.0 * pseudo**2)
    elif weight_fn is not None:
        raise DomainError(f"unknown weight {weight_fn!r}")
    return float(np.sum(values)) * _squared_scale(spec)


def asymptotic_constant(
    spec: KernelSpec, depth: Optional[int] = None, radii: Optional[Sequence[float]] = None
) -> AsymptoticConstant:
    """
    Limit of (1 - R^2) V(R) as R -> 1, by extrapolation of the geometric variance and by the
    integral of |K(i, w)|^2 arccos(1 - 2 rho^2) against the measured lens constant.
    """
    _require_closed_form(spec)
    admissibility(spec)
    depth = _depth(depth)
    radii = list(get_settings().ASYMPTOTIC_RADII if radii is None else radii)

    eps = [1.0 - R * R for R in radii]
    sequence = [e * variance_geometric(spec, R, depth) for e, R in zip(eps, radii, strict=True)]
    steps = np.diff(sequence)
    increasing = bool(np.all(steps > 0.0))
    if not increasing and not np.all(steps < 0.0):
        logger.error(f"Scaled variance sequence is not monotone: {sequence}")
        raise ConvergenceError(
            "scaled variance sequence is not monotone in R", diagnostics={"radii": radii, "sequence": sequence}
        )
    if not increasing:
        logger.warning(f"Scaled variance decreases towards its limit: {sequence}")

    c_extrapolated = extrapolate_to_zero(eps, sequence)
    kappa = fit_lens_constant(depth, radii=radii).kappa
    c_integral = kappa * halfplane_integral(spec, "arccos", depth)
    gap = abs(c_extrapolated - c_integral) / abs(c_integral) if c_integral else float("inf")
    logger.info(f"Asymptotic constant: extrapolated={c_extrapolated:.6f}, integral={c_integral:.6f}, gap={gap:.2%}")
    return AsymptoticConstant(
        c_extrapolated=c_extrapolated,
        c_integral=c_integral,
        kappa=kappa,
        radii=radii,
        sequence=sequence,
        increasing=increasing,
        relative_gap=gap,
    )


def bounds_report(spec: KernelSpec, R: float, depth: Optional[int] = None) -> BoundsReport:
    """
    All three variances against the upper bounds |Omega|_h and C |Omega|_h, in the kernel's normalization.

    `below_*` and `margin_*` use the largest of the three variance estimates.
    """
    _require_closed_form(spec)
    depth = _depth(depth)
    C = admissibility(spec)
    area = disc_area(R)
    projection = spec.normalization == Normalization.PROJECTION
    squared = 1.0 if projection else C * C

    v_geometric = variance_geometric(spec, R, depth)
    v_double = variance_double(spec, R, depth)
    v_trace = variance_trace(spec, R, depth)
    v = max(v_geometric, v_double, v_trace)

    expected = expected_count(spec, R)
    bound_admissible = area / C if projection else C * area
    expected_equivalent = squared * area / C

    lower: Dict[str, float] = {}
    proj_spec = spec.with_normalization(Normalization.PROJECTION)
    for radius in get_settings().LOWER_BOUND_RADII:
        lower[f"{radius:g}"] = variance_geometric(proj_spec, radius, depth) / expected_count(proj_spec, radius)
    ratios = list(lower.values())

    return BoundsReport(
        R=R,
        normalization=spec.normalization,
        v_geometric=v_geometric,
        v_double=v_double,
        v_trace=v_trace,
        expected=expected,
        bound_area=area,
        bound_admissible=bound_admissible,
        below_expected=v <= expected_equivalent,
        below_admissible=v <= bound_admissible,
        below_area=v <= area,
        margin_expected=expected_equivalent - v,
        margin_admissible=bound_admissible - v,
        margin_area=area - v,
        lower_ratios=lower,
        ratio_band=(min(ratios), max(ratios)),
    )


def variance_report(
    spec: KernelSpec,
    R: float,
    methods: Sequence[str] = METHODS,
    depth: Optional[int] = None,
    asymptotic: Optional[AsymptoticConstant] = None,
) -> VarianceReport:
    """One report row; methods not requested stay empty."""
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise DomainError(f"unknown variance methods {unknown}; choose from {list(METHODS)}")
    depth = _depth(depth)
    C = admissibility(spec)
    area = disc_area(R)
    values: Dict[str, Optional[float]] = {m: None for m in METHODS}
    if "geometric" in methods:
        values["geometric"] = variance_geometric(spec, R, depth)
    if "double" in methods:
        values["double"] = variance_double(spec, R, depth)
    if "trace" in methods:
        values["trace"] = variance_trace(spec, R, depth)

    bound_admissible = area / C if spec.normalization == Normalization.PROJECTION else C * area
    logger.info(f"Variance report R={R}: {values}")
    return VarianceReport(
        R=R,
        v_geometric=values["geometric"],
        v_double=values["double"],
        v_trace=values["trace"],
        expected=expected_count(spec, R),
        normalization=spec.normalization,
        c_estimate=asymptotic.c_extrapolated if asymptotic is not None else None,
        kappa=asymptotic.kappa if asymptotic is not None else None,
        bounds={"upper_area": area, "upper_admissible": bound_admissible},
    )


def variance_sweep(
    spec: KernelSpec,
    radii: Optional[Sequence[float]] = None,
    methods: Sequence[str] = METHODS,
    depth: Optional[int] = None,
    asymptotic: Optional[AsymptoticConstant] = None,
) -> List[VarianceReport]:
    radii = get_settings().R_SWEEP if radii is None else radii
    return [variance_report(spec, R, methods, depth, asymptotic) for R in radii]

