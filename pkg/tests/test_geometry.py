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

import numpy as np
import pytest

from coreason_affine.geometry import (
    cayley,
    cayley_array,
    cayley_inv,
    cayley_inv_array,
    disc_area,
    disc_model_circle,
    from_disc_model,
    geodesic_radius,
    group_inv,
    group_mul,
    hyp_dist,
    in_disc,
    mobius,
    mobius_array,
    rho,
    rho_array,
    to_disc_model,
)
from coreason_affine.models import I, DiskPoint, HalfPlanePoint, MobiusMap


def _random_points(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.uniform(-3.0, 3.0, count) + 1j * np.exp(rng.uniform(-1.5, 1.5, count))


def test_group_identity_and_inverse() -> None:
    """i is the identity and group_inv undoes group_mul."""
    g = HalfPlanePoint(x=1.5, s=0.25)
    assert group_mul(g, I) == g
    assert group_mul(I, g) == g
    e = group_mul(g, group_inv(g))
    assert e.x == pytest.approx(0.0, abs=1e-15)
    assert e.s == pytest.approx(1.0)


def test_group_product_is_the_action_on_i() -> None:
    """(x, s)(x', s') is the affine map w -> x + s w applied to x' + i s'."""
    g, h = HalfPlanePoint(x=0.3, s=2.0), HalfPlanePoint(x=-1.0, s=0.5)
    assert group_mul(g, h).z == pytest.approx(g.x + g.s * h.z)


def test_rho_known_values() -> None:
    """rho(i, 2i) = 1/3 and rho(z, z) = 0."""
    assert rho(I, HalfPlanePoint(x=0.0, s=2.0)) == pytest.approx(1.0 / 3.0)
    z = HalfPlanePoint(x=0.7, s=1.3)
    assert rho(z, z) == 0.0


def test_rho_symmetric_and_bounded() -> None:
    """rho is symmetric with values in [0, 1)."""
    rng = np.random.default_rng(1)
    a, b = _random_points(rng, 200), _random_points(rng, 200)
    r = rho_array(a, b)
    assert np.allclose(r, rho_array(b, a), atol=1e-15)
    assert np.all((r >= 0.0) & (r < 1.0))


def test_rho_group_invariance() -> None:
    """rho(z^-1 w, i) = rho(w, z) for every group element z."""
    rng = np.random.default_rng(2)
    for z, w in zip(_random_points(rng, 30), _random_points(rng, 30), strict=True):
        gz, gw = HalfPlanePoint.from_complex(z), HalfPlanePoint.from_complex(w)
        assert rho(group_mul(group_inv(gz), gw), I) == pytest.approx(rho(gw, gz), abs=1e-12)


def test_rho_of_a_product() -> None:
    """rho(z w, i) = rho(z^-1, w), while rho(w^-1, z) generally differs."""
    rng = np.random.default_rng(3)
    worst_mismatch = 0.0
    for z, w in zip(_random_points(rng, 200), _random_points(rng, 200), strict=True):
        gz, gw = HalfPlanePoint.from_complex(z), HalfPlanePoint.from_complex(w)
        product = rho(group_mul(gz, gw), I)
        assert product == pytest.approx(rho(group_inv(gz), gw), abs=1e-12)
        worst_mismatch = max(worst_mismatch, abs(product - rho(group_inv(gw), gz)))
    assert worst_mismatch > 1e-2


def test_hyp_dist_is_two_artanh_rho() -> None:
    """d(i, e^t i) = t along the imaginary axis."""
    for t in (0.1, 1.0, 3.0):
        assert hyp_dist(I, HalfPlanePoint(x=0.0, s=math.exp(t))) == pytest.approx(t, rel=1e-12)


def test_cayley_round_trip_and_base_point() -> None:
    """C(i) = 0 and the inverse map returns to the half-plane point."""
    assert cayley(I).u == 0j
    z = HalfPlanePoint(x=-0.4, s=2.2)
    back = cayley_inv(cayley(z))
    assert back.x == pytest.approx(z.x)
    assert back.s == pytest.approx(z.s)
    u = DiskPoint(u=0.3 - 0.5j)
    assert cayley(cayley_inv(u)).u == pytest.approx(u.u)


def test_cayley_preserves_rho() -> None:
    """rho in the half-plane equals the disc pseudohyperbolic distance of the images."""
    rng = np.random.default_rng(3)
    a, b = _random_points(rng, 50), _random_points(rng, 50)
    ua, ub = cayley_array(a), cayley_array(b)
    disc_rho = np.abs(ua - ub) / np.abs(1.0 - np.conj(ua) * ub)
    assert np.allclose(disc_rho, rho_array(a, b), atol=1e-12)
    assert np.allclose(cayley_inv_array(ua), a)


def test_disc_model_centering() -> None:
    """to_disc_model sends the center to 0 and |image| = rho."""
    c = 0.5 + 2.0j
    rng = np.random.default_rng(4)
    z = _random_points(rng, 40)
    u = to_disc_model(c, z)
    assert abs(complex(to_disc_model(c, c))) == 0.0
    assert np.allclose(np.abs(u), rho_array(z, c))
    assert np.allclose(from_disc_model(c, u), z)


def test_mobius_preserves_rho() -> None:
    """rho is invariant under orientation-preserving Mobius maps."""
    m = MobiusMap(a=2.0, b=1.0, c=0.5, d=1.5)
    assert m.det == pytest.approx(1.0)
    rng = np.random.default_rng(5)
    a, b = _random_points(rng, 50), _random_points(rng, 50)
    assert np.allclose(rho_array(mobius_array(m, a), mobius_array(m, b)), rho_array(a, b), atol=1e-12)
    image = mobius(m, HalfPlanePoint(x=0.0, s=1.0))
    assert image.s > 0.0


def test_disc_area_closed_form() -> None:
    """|D(z, R)|_h = 4 pi R^2 / (1 - R^2); R = 1/2 gives 4 pi / 3."""
    assert disc_area(0.5) == pytest.approx(4.0 * math.pi / 3.0)
    assert disc_area(0.8) == pytest.approx(4.0 * math.pi * 0.64 / 0.36)


def test_in_disc() -> None:
    """Membership follows the pseudohyperbolic radius."""
    assert in_disc(I, 0.5, HalfPlanePoint(x=0.0, s=1.5))
    assert not in_disc(I, 0.1, HalfPlanePoint(x=0.0, s=1.5))


def test_disc_model_circle_about_origin() -> None:
    """About u = 0 the disc is the Euclidean circle of radius R."""
    center, radius = disc_model_circle(0j, 0.6)
    assert center == 0j
    assert radius == pytest.approx(0.6)


def test_disc_model_circle_contains_boundary_points() -> None:
    """Points at pseudohyperbolic distance R from v lie on the returned circle."""
    v, R = 0.4 + 0.2j, 0.5
    center, radius = disc_model_circle(v, R)
    theta = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
    boundary = (v + R * np.exp(1j * theta)) / (1.0 + np.conj(v) * R * np.exp(1j * theta))
    assert np.allclose(np.abs(boundary - center), radius)


def test_geodesic_radius() -> None:
    """The hyperbolic radius of D(z, R) is 2 artanh(R)."""
    assert geodesic_radius(1.0 / 3.0) == pytest.approx(math.log(2.0))
