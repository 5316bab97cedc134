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
Poincare half-plane geometry.

Point-level functions take and return the pydantic domain types; the `*_array` variants work on
complex numpy arrays z = x + is and back the vectorized quadrature code.
"""

import math
from typing import Tuple

import numpy as np
import numpy.typing as npt

from coreason_affine.exceptions import DomainError
from coreason_affine.models import DiskPoint, HalfPlanePoint, MobiusMap

ComplexArray = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]


def group_mul(g1: HalfPlanePoint, g2: HalfPlanePoint) -> HalfPlanePoint:
    """The ax+b product (x, s)(x', s') = (x + s x', s s')."""
    return HalfPlanePoint(x=g1.x + g1.s * g2.x, s=g1.s * g2.s)


def group_inv(g: HalfPlanePoint) -> HalfPlanePoint:
    return HalfPlanePoint(x=-g.x / g.s, s=1.0 / g.s)


def rho_array(z1: npt.ArrayLike, z2: npt.ArrayLike) -> RealArray:
    """Pseudohyperbolic distance |z1 - z2| / |z1 - conj(z2)|, broadcasting."""
    a = np.asarray(z1, dtype=np.complex128)
    b = np.asarray(z2, dtype=np.complex128)
    return np.asarray(np.abs(a - b) / np.abs(a - np.conj(b)))


def rho(z1: HalfPlanePoint, z2: HalfPlanePoint) -> float:
    return float(rho_array(z1.z, z2.z))


def hyp_dist_array(z1: npt.ArrayLike, z2: npt.ArrayLike) -> RealArray:
    return np.asarray(2.0 * np.arctanh(rho_array(z1, z2)))


def hyp_dist(z1: HalfPlanePoint, z2: HalfPlanePoint) -> float:
    """Hyperbolic distance 2 artanh(rho) = log((1 + rho) / (1 - rho))."""
    return float(hyp_dist_array(z1.z, z2.z))


def cayley_array(z: npt.ArrayLike) -> ComplexArray:
    zz = np.asarray(z, dtype=np.complex128)
    return np.asarray((zz - 1j) / (zz + 1j))


def cayley_inv_array(u: npt.ArrayLike) -> ComplexArray:
    uu = np.asarray(u, dtype=np.complex128)
    return np.asarray(1j * (1.0 + uu) / (1.0 - uu))


def cayley(z: HalfPlanePoint) -> DiskPoint:
    return DiskPoint(u=complex(cayley_array(z.z)))


def cayley_inv(u: DiskPoint) -> HalfPlanePoint:
    return HalfPlanePoint.from_complex(complex(cayley_inv_array(u.u)))


def to_disc_model(center: complex, z: npt.ArrayLike) -> ComplexArray:
    """Isometry (z - c) / (z - conj(c)) of the half-plane onto the disc sending `center` to 0."""
    zz = np.asarray(z, dtype=np.complex128)
    return np.asarray((zz - center) / (zz - np.conj(center)))


def from_disc_model(center: complex, u: npt.ArrayLike) -> ComplexArray:
    """Inverse of `to_disc_model`."""
    uu = np.asarray(u, dtype=np.complex128)
    return np.asarray((center - np.conj(center) * uu) / (1.0 - uu))


def mobius_array(m: MobiusMap, z: npt.ArrayLike) -> ComplexArray:
    if m.det <= 0.0:
        raise DomainError(f"Mobius map must preserve the half-plane (det > 0), got det={m.det}")
    zz = np.asarray(z, dtype=np.complex128)
    return np.asarray((m.a * zz + m.b) / (m.c * zz + m.d))


def mobius(m: MobiusMap, z: HalfPlanePoint) -> HalfPlanePoint:
    return HalfPlanePoint.from_complex(complex(mobius_array(m, z.z)))


def disc_area(R: float) -> float:
    """Hyperbolic area of a pseudohyperbolic disc of radius R, 4 pi R^2 / (1 - R^2)."""
    if not 0.0 < R < 1.0:
        raise DomainError(f"R must lie in (0, 1), got {R}")
    return 4.0 * math.pi * R * R / (1.0 - R * R)


def in_disc(center: HalfPlanePoint, R: float, w: HalfPlanePoint) -> bool:
    return rho(w, center) < R


def disc_model_circle(v: complex, R: float) -> Tuple[complex, float]:
    """
    Euclidean center and radius of the pseudohyperbolic disc of radius R about v in the unit disc.
    """
    q = 1.0 - R * R * abs(v) ** 2
    return v * (1.0 - R * R) / q, R * (1.0 - abs(v) ** 2) / q


def geodesic_radius(R: float) -> float:
    """Hyperbolic radius 2 artanh(R) of a pseudohyperbolic disc."""
    return 2.0 * math.atanh(R)
