"""Envelope reconstruction and its inverse point-model image."""
import math

import numpy as np
import pytest

from lagmin.errors import NonImmersed
from lagmin.fields import (
    make_elliptic_field,
    make_hyperbolic_field,
    make_polynomial_field,
)
from lagmin.reconstruct import isotropic_image, reconstruct_surface
from lagmin.surfaces import block_field, building_block

ROUND_TRIP_TOL = 1e-10


def safe_points(rng, n, lo=0.3, hi=1.8):
    r = rng.uniform(lo, hi, n)
    t = rng.uniform(0, 2 * math.pi, n)
    x, y = r * np.cos(t), r * np.sin(t)
    x = np.where(np.abs(x) < 0.05, x + 0.1, x)
    return x, y


def test_paraboloid_field_reconstructs_to_unit_sphere():
    F = make_polynomial_field({(2, 0): 0.5, (0, 2): 0.5, (0, 0): 0.5})
    S = reconstruct_surface(F)
    rng = np.random.default_rng(6)
    x, y = safe_points(rng, 300)
    pts = S.point(x, y)
    assert np.max(np.abs(np.linalg.norm(pts, axis=-1) - 1.0)) < ROUND_TRIP_TOL


def test_point_sphere_field_reconstructs_to_point():
    # z = x encodes the point sphere at (-1, 0, 0)
    F = make_polynomial_field({(1, 0): 1.0})
    S = reconstruct_surface(F)
    rng = np.random.default_rng(7)
    x, y = safe_points(rng, 100)
    pts = S.point(x, y)
    assert np.max(np.abs(pts - np.array([-1.0, 0.0, 0.0]))) < ROUND_TRIP_TOL


def test_graph_identity_round_trip():
    F = make_elliptic_field(a1=1.0, a3=-1.0)
    S = reconstruct_surface(F)
    rng = np.random.default_rng(12)
    x, y = safe_points(rng, 200)
    img = isotropic_image(S, x, y)
    assert np.max(np.abs(img[..., 0] - x)) < 1e-8
    assert np.max(np.abs(img[..., 1] - y)) < 1e-8
    assert np.max(np.abs(img[..., 2] - F.value(x, y))) < 1e-8


def test_scalar_round_trip_returns_iso_point():
    F = make_hyperbolic_field(a1=0.5, gamma4=1.0)
    S = reconstruct_surface(F)
    q = isotropic_image(S, 1.3, 0.7)
    assert abs(q.x - 1.3) < 1e-9
    assert abs(q.y - 0.7) < 1e-9
    assert abs(q.z - F.value(1.3, 0.7)) < 1e-9


def test_normal_is_inverse_stereographic_preimage():
    F = make_elliptic_field(a1=1.0, a3=-1.0)
    S = reconstruct_surface(F)
    rng = np.random.default_rng(3)
    x, y = safe_points(rng, 100)
    n = S.normal(x, y)
    s = x * x + y * y
    want = np.stack([2 * x, 2 * y, 1 - s], axis=-1) / (1 + s)[..., None]
    assert np.max(np.abs(n - want)) < 1e-9


def test_frame_derivatives_match_finite_differences():
    F = make_elliptic_field(a1=1.0, a3=-1.0)
    S = reconstruct_surface(F)
    u, v = 0.9, 0.5
    fr = S.frame(u, v, order=2)
    h = 1e-5
    fd_ru = (S.point(u + h, v) - S.point(u - h, v)) / (2 * h)
    fd_rv = (S.point(u, v + h) - S.point(u, v - h)) / (2 * h)
    assert np.max(np.abs(fr.ru - fd_ru)) < 1e-8
    assert np.max(np.abs(fr.rv - fd_rv)) < 1e-8
    fd_ruu = (S.point(u + h, v) - 2 * S.point(u, v) + S.point(u - h, v)) / h**2
    fd_rvv = (S.point(u, v + h) - 2 * S.point(u, v) + S.point(u, v - h)) / h**2
    fd_ruv = (
        S.point(u + h, v + h)
        - S.point(u + h, v - h)
        - S.point(u - h, v + h)
        + S.point(u - h, v - h)
    ) / (4 * h**2)
    assert np.max(np.abs(fr.ruu - fd_ruu)) < 1e-4
    assert np.max(np.abs(fr.ruv - fd_ruv)) < 1e-4
    assert np.max(np.abs(fr.rvv - fd_rvv)) < 1e-4


def test_non_immersed_parametrization_raises():
    # this field reconstructs to a curve, so the cross product vanishes
    S = reconstruct_surface(block_field("r2"))
    with pytest.raises(NonImmersed):
        isotropic_image(S, 0.8, 0.4)


def test_field_surface_carries_its_field():
    F = make_elliptic_field(a1=1.0, a3=-1.0)
    S = reconstruct_surface(F)
    assert S.field is F
    assert S.provenance == "reconstructed-from-field"


def test_tilde_block_round_trip():
    S = building_block("r4~")
    rng = np.random.default_rng(9)
    x, y = safe_points(rng, 100, lo=0.3, hi=0.9)
    img = isotropic_image(S, x, y)
    assert np.max(np.abs(img[..., 0] - x)) < 1e-8
    assert np.max(np.abs(img[..., 1] - y)) < 1e-8
