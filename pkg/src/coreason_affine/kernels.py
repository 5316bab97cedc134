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
Correlation kernels of the affine ensembles.

Two evaluation paths are kept side by side: the closed hypergeometric form for the Laguerre mothers
(and hence the Maass-Landau levels), and the frequency-side integral

    K(z, w) = (s s')^(1/2) int_0^inf psi(s' xi) conj(psi(s xi)) e^(i (x - x') xi) dxi / ||psi||^2

for any sampled profile. Diagonal1 kernels have K(z, z) = 1; Projection kernels are divided by the
admissibility constant C and reproduce under dmu+.
"""

import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from coreason_affine.config import get_settings
from coreason_affine.exceptions import AdmissibilityError, ConvergenceError, DomainError, ResolutionError
from coreason_affine.geometry import from_disc_model
from coreason_affine.interfaces import FrequencyProfile
from coreason_affine.models import (
    GenericWavelet,
    HalfPlanePoint,
    KernelSpec,
    KernelValue,
    LandauLevel,
    MaassLandau,
    Normalization,
)
from coreason_affine.profiles import LaguerreProfile
from coreason_affine.specfun import PolyParams, gamma_ratio, hyp2f1_terminating, jacobi
from coreason_affine.utils.logger import logger

ComplexArray = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]

# Geometric grading of the first frequency panel towards xi = 0.
GRADING_RATIO = 0.25
GRADING_LEVELS = 8
GRAM_CHUNK = 8192


def profile_for(spec: KernelSpec) -> FrequencyProfile:
    """The (unnormalized) mother profile of a kernel."""
    if isinstance(spec.variant, GenericWavelet):
        return spec.variant.profile
    return LaguerreProfile(spec.variant.alpha, spec.variant.n)


def admissibility(spec: KernelSpec) -> float:
    """
    C = 2 pi int |psi(t)|^2 dt / t for the unit-norm mother.

    4 pi / alpha in closed form for the Laguerre mothers, independent of n.
    """
    if spec.closed_form:
        alpha = float(spec.variant.alpha)  # type: ignore[union-attr]
        if alpha <= 0.0:
            raise AdmissibilityError(f"admissibility constant 4 pi / alpha is infinite at alpha={alpha}")
        return 4.0 * math.pi / alpha

    assert isinstance(spec.variant, GenericWavelet)
    profile = spec.variant.profile
    if profile.small_xi_exponent <= 0.0:
        raise AdmissibilityError(
            f"profile ~ xi^{profile.small_xi_exponent} at 0 makes int |psi|^2 / t diverge (need exponent > 0)"
        )
    try:
        return 2.0 * math.pi * profile.moment(-1.0) / profile.norm_squared()
    except ConvergenceError as e:
        logger.error(f"Admissibility quadrature failed: {e}")
        raise AdmissibilityError(f"admissibility quadrature did not converge: {e}") from e


def _normalization_factor(spec: KernelSpec) -> float:
    if spec.normalization == Normalization.PROJECTION:
        return 1.0 / admissibility(spec)
    return 1.0


def closed_form_values(alpha: float, n: int, z: npt.ArrayLike, w: npt.ArrayLike) -> ComplexArray:
    """
    Diagonal1 closed form, broadcasting over complex arrays z and w:

        (-1)^n Gamma-ratio t^a u^(a+n) F(n+alpha+1, -n; 1+alpha; t),  a = (alpha+1)/2,

    with t = 4 Im z Im w / |z - conj(w)|^2 and the unimodular u = (conj(z) - w) / (conj(w) - z).
    """
    zz = np.asarray(z, dtype=np.complex128)
    ww = np.asarray(w, dtype=np.complex128)
    a = (alpha + 1.0) / 2.0
    t = np.minimum(4.0 * zz.imag * ww.imag / np.abs(zz - np.conj(ww)) ** 2, 1.0)
    u = (np.conj(zz) - ww) / (np.conj(ww) - zz)
    series = np.asarray(hyp2f1_terminating(n + alpha + 1.0, n, 1.0 + alpha, t))
    value = (-1.0) ** n * gamma_ratio(n, alpha) * t**a * np.power(u, a + n) * series
    return np.asarray(value, dtype=np.complex128)


def kernel_closed(spec: KernelSpec, z: HalfPlanePoint, w: HalfPlanePoint) -> KernelValue:
    if not spec.closed_form:
        raise DomainError("closed-form evaluation needs a Laguerre or Maass-Landau kernel")
    alpha, n = float(spec.alpha), int(spec.n)  # type: ignore[arg-type]
    value = complex(closed_form_values(alpha, n, z.z, w.z)) * _normalization_factor(spec)
    return KernelValue(value=value, normalization=spec.normalization)


def kernel_bergman(alpha: float, z: HalfPlanePoint, w: HalfPlanePoint) -> complex:
    """Lowest-level weighted Bergman kernel (4 s s')^((alpha+1)/2) / (-i (z - conj(w)))^(alpha+1)."""
    if alpha < 0.0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    a = (alpha + 1.0) / 2.0
    base = -1j * (z.z - np.conj(w.z))
    return complex((4.0 * z.s * w.s) ** a * np.power(base, -(alpha + 1.0)))


def kernel_jacobi_form(spec: KernelSpec, z: HalfPlanePoint, w: HalfPlanePoint) -> complex:
    """
    Diagonal1 kernel through its Jacobi-polynomial form

        (4 s s')^a i^-(alpha+1) (w - conj(z))^n (conj(w) - z)^-(alpha+n+1) P_n^(alpha,0)(1 - 2t).
    """
    if not spec.closed_form:
        raise DomainError("the Jacobi form needs a Laguerre or Maass-Landau kernel")
    alpha, n = float(spec.alpha), int(spec.n)  # type: ignore[arg-type]
    a = (alpha + 1.0) / 2.0
    t = 4.0 * z.s * w.s / abs(z.z - w.z.conjugate()) ** 2
    poly = float(jacobi(PolyParams(n=n, alpha=alpha), 1.0 - 2.0 * t))  # type: ignore[arg-type]
    value = (
        (4.0 * z.s * w.s) ** a
        * np.power(1j, -(alpha + 1.0))
        * (w.z - z.z.conjugate()) ** n
        * np.power(w.z.conjugate() - z.z, -(alpha + n + 1.0))
        * poly
    )
    return complex(value)


def frequency_rule(upper: float, width: float, panel_nodes: int) -> Tuple[RealArray, RealArray]:
    """
    Composite Gauss-Legendre rule on (0, upper] with panels of at most `width`.

    The first panel is split geometrically towards 0 for profiles with fractional powers there.
    """
    x, w = np.polynomial.legendre.leggauss(panel_nodes)
    n_panels = max(1, math.ceil(upper / width))
    edges = np.linspace(0.0, upper, n_panels + 1)
    first = edges[1]
    graded = np.concatenate(([0.0], first * GRADING_RATIO ** np.arange(GRADING_LEVELS, 0, -1), [first]))
    breaks = np.concatenate((graded, edges[2:]))
    lo, hi = breaks[:-1], breaks[1:]
    half = (hi - lo) / 2.0
    nodes = (lo[:, None] + half[:, None] * (x[None, :] + 1.0)).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def oscillatory_integral(f: Callable[[RealArray], ComplexArray], upper: float, width: float) -> complex:
    """
    Integral of f over (0, upper], doubling the panel count until two successive values agree to
    QUAD_RTOL relative to max(|value|, 1e-3 * int |f|).
    """
    settings = get_settings()
    previous: Optional[complex] = None
    iterates: List[complex] = []
    for level in range(settings.QUAD_MAX_LEVELS):
        nodes, weights = frequency_rule(upper, width / 2**level, settings.PANEL_NODES)
        values = f(nodes)
        value = complex(np.sum(values * weights))
        iterates.append(value)
        if previous is not None:
            scale = max(abs(value), 1e-3 * float(np.sum(np.abs(values) * weights)))
            if abs(value - previous) <= settings.QUAD_RTOL * scale:
                return value
            logger.debug(f"Oscillatory rule level {level}: change {abs(value - previous):.3e}")
        previous = value
    logger.error(f"Oscillatory rule did not settle after {settings.QUAD_MAX_LEVELS} levels")
    raise ResolutionError(
        f"panel refinement did not converge in {settings.QUAD_MAX_LEVELS} levels", iterates=iterates[-2:]
    )


def _panel_width(scale: float, shift: float) -> float:
    width = 1.0 / scale
    if shift > 0.0:
        width = min(width, math.pi / (4.0 * shift))
    return width


def _pair_integral(profile: FrequencyProfile, z: complex, w: complex) -> complex:
    x, s = z.real, z.imag
    xp, sp = w.real, w.imag

    def integrand(xi: RealArray) -> ComplexArray:
        return np.asarray(
            math.sqrt(s * sp) * profile(sp * xi) * np.conj(profile(s * xi)) * np.exp(1j * (x - xp) * xi)
        )

    top = max(s, sp)
    return oscillatory_integral(integrand, profile.xi_max / top, _panel_width(top, abs(x - xp)))


def kernel_quadrature(spec: KernelSpec, z: HalfPlanePoint, w: HalfPlanePoint) -> KernelValue:
    """The frequency-side integral, normalized by its own value at z = w = i."""
    profile = profile_for(spec)
    diagonal = _pair_integral(profile, 1j, 1j).real
    value = _pair_integral(profile, z.z, w.z) / diagonal * _normalization_factor(spec)
    return KernelValue(value=value, normalization=spec.normalization)


def kernel_value(spec: KernelSpec, z: HalfPlanePoint, w: HalfPlanePoint) -> KernelValue:
    if spec.closed_form:
        return kernel_closed(spec, z, w)
    return kernel_quadrature(spec, z, w)


def _gram(profile: FrequencyProfile, zs: ComplexArray, ws: ComplexArray) -> ComplexArray:
    points = np.concatenate((zs, ws))
    s_min, s_max = float(points.imag.min()), float(points.imag.max())
    spread = float(points.real.max() - points.real.min())
    settings = get_settings()
    xi, wq = frequency_rule(profile.xi_max / s_min, _panel_width(s_max, spread), settings.PANEL_NODES)

    gram = np.zeros((zs.shape[0], ws.shape[0]), dtype=np.complex128)
    for start in range(0, xi.shape[0], GRAM_CHUNK):
        chunk = xi[start : start + GRAM_CHUNK]
        weights = wq[start : start + GRAM_CHUNK]
        a_z = np.sqrt(zs.imag)[:, None] * profile(np.outer(zs.imag, chunk)) * np.exp(-1j * np.outer(zs.real, chunk))
        a_w = np.sqrt(ws.imag)[:, None] * profile(np.outer(ws.imag, chunk)) * np.exp(-1j * np.outer(ws.real, chunk))
        gram += np.conj(a_z) @ (weights[None, :] * a_w).T
    return gram / profile.norm_squared()


def kernel_matrix(spec: KernelSpec, zs: npt.ArrayLike, ws: Optional[npt.ArrayLike] = None) -> ComplexArray:
    """
    Matrix K(zs[i], ws[j]) in the kernel's normalization.

    Sampled profiles share one frequency rule across all pairs, resolving the widest spread of
    positions and scales.
    """
    z_arr = np.atleast_1d(np.asarray(zs, dtype=np.complex128))
    w_arr = z_arr if ws is None else np.atleast_1d(np.asarray(ws, dtype=np.complex128))
    factor = _normalization_factor(spec)
    if spec.closed_form:
        alpha, n = float(spec.alpha), int(spec.n)  # type: ignore[arg-type]
        return closed_form_values(alpha, n, z_arr[:, None], w_arr[None, :]) * factor
    return _gram(profile_for(spec), z_arr, w_arr) * factor


def wavelet_transform(fhat: FrequencyProfile, spec: KernelSpec, z: HalfPlanePoint) -> complex:
    """
    W f(z) = s^(1/2) int f(xi) e^(i x xi) conj(psi(s xi)) dxi against the unit-norm analyzing profile.
    """
    psi = profile_for(spec).normalized()
    x, s = z.x, z.s

    def integrand(xi: RealArray) -> ComplexArray:
        return np.asarray(math.sqrt(s) * fhat(xi) * np.conj(psi(s * xi)) * np.exp(1j * x * xi))

    upper = min(fhat.xi_max, psi.xi_max / s)
    return oscillatory_integral(integrand, upper, _panel_width(max(s, 1.0), abs(x)))


def _maass_test_points(w0: HalfPlanePoint) -> List[complex]:
    angles = 2.0 * np.pi * np.arange(6) / 6.0
    ring = np.concatenate([r * np.exp(1j * angles) for r in (0.1, 0.25)])
    return [w0.z] + [complex(p) for p in from_disc_model(w0.z, ring)]


def maass_residual(
    spec: MaassLandau, w0: HalfPlanePoint, h: float, points: Optional[Sequence[HalfPlanePoint]] = None
) -> float:
    """
    Largest relative residual |A f - eps f| / |f| of f = K(., w0) under the central-difference
    discretization of A = -s^2 (d_xx + d_ss) + 2 i B s d_x, whose eigenvalue is eps = (B-n)(1-B+n).

    Points where |f| < 1e-3 are skipped.
    """
    if h <= 0.0:
        raise DomainError(f"step h must be positive, got {h}")
    zs = np.array([p.z for p in points] if points is not None else _maass_test_points(w0))
    if np.any(zs.imag - h <= 0.0):
        raise DomainError(f"the stencil with h={h} leaves the half-plane")

    def f(z: ComplexArray) -> ComplexArray:
        return closed_form_values(spec.alpha, spec.n, z, w0.z)

    center = f(zs)
    fxx = (f(zs + h) - 2.0 * center + f(zs - h)) / h**2
    fss = (f(zs + 1j * h) - 2.0 * center + f(zs - 1j * h)) / h**2
    fx = (f(zs + h) - f(zs - h)) / (2.0 * h)
    s = zs.imag
    applied = -(s**2) * (fxx + fss) + 2j * spec.B * s * fx

    keep = np.abs(center) >= 1e-3
    residual = np.abs(applied - spec.eigenvalue * center)[keep] / np.abs(center[keep])
    return float(residual.max()) if residual.size else 0.0


def landau_levels(B: float) -> List[LandauLevel]:
    """Every level n <= floor(B - 1/2) with its alpha, eigenvalue, C and point density 1/C."""
    if not B > 0.5:
        raise DomainError(f"the discrete spectrum needs B > 1/2, got {B}")
    levels = []
    for n in range(math.floor(B - 0.5) + 1):
        mode = MaassLandau(B=B, n=n)
        admissible = mode.alpha > 0.0
        levels.append(
            LandauLevel(
                n=n,
                alpha=mode.alpha,
                eigenvalue=mode.eigenvalue,
                admissibility=4.0 * math.pi / mode.alpha if admissible else None,
                density=mode.alpha / (4.0 * math.pi) if admissible else None,
            )
        )
    return levels
