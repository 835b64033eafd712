import math
from types import SimpleNamespace

import numpy as np
import pytest

from lagmin.errors import EmptyIntersection, SingularPoint
from lagmin.fields import (
    bilaplacian,
    fd_bilaplacian,
    make_bump_field,
    make_elliptic_field,
    make_exceptional_field,
    make_hyperbolic_field,
    make_parabolic_field,
    make_polynomial_field,
    make_remark_counterexample,
    pushforward_inversion,
    reduce_elliptic_field,
    restrict_to_circle,
    sum_fields,
)

BIHARMONIC_TOL = 1e-9
VALUE_TOL = 1e-12

# one representative of each closed family, fixed random coefficients
RNG = np.random.default_rng(20260823)
ELLIPTIC = make_elliptic_field(*RNG.normal(size=12).round(3))
HYPERBOLIC = make_hyperbolic_field(*RNG.normal(size=19).round(3))
PARABOLIC = make_parabolic_field(*RNG.normal(size=12).round(3))
EXCEPTIONAL = make_exceptional_field(*RNG.normal(size=8).round(3))


def annulus_points(rng, n, lo=0.4, hi=2.5, min_abs_x=0.05):
    r = rng.uniform(lo, hi, n)
    t = rng.uniform(0, 2 * math.pi, n)
    x, y = r * np.cos(t), r * np.sin(t)
    # keep clear of the branch line x = 0 used by the angular factor
    x = np.where(np.abs(x) < min_abs_x, x + np.sign(x + 0.5) * 2 * min_abs_x, x)
    return x, y


@pytest.mark.parametrize(
    "field", [ELLIPTIC, HYPERBOLIC, PARABOLIC, EXCEPTIONAL], ids=lambda f: f.family
)
def test_family_fields_have_vanishing_bilaplacian(field):
    rng = np.random.default_rng(1)
    x, y = annulus_points(rng, 400)
    vals = field.bilaplacian(x, y)
    assert np.max(np.abs(vals)) < BIHARMONIC_TOL


def test_elliptic_frozen_value():
    F = make_elliptic_field(a1=1.0, a3=-1.0)
    assert abs(F.value(1.0, 1.0) - math.pi / 4) < VALUE_TOL


def test_remark_counterexample_values():
    F = make_remark_counterexample()
    assert abs(F.value(0.0, 0.0) - 1.0) < VALUE_TOL
    # frozen: 41/128, computed once from the exact fourth derivatives
    assert abs(F.bilaplacian(1.0, 1.0) - 0.3203125) < 1e-9
    assert abs(F.bilaplacian(1.0, 1.0)) > 1e-3


def test_gradient_and_laplacian_channels():
    F = make_polynomial_field({(2, 0): 1.0, (0, 2): 3.0, (1, 1): -2.0})
    g = F.gradient(1.0, 2.0)
    assert np.allclose(g, (2.0 - 4.0, 12.0 - 2.0), atol=VALUE_TOL)
    assert abs(F.laplacian(1.0, 2.0) - 8.0) < VALUE_TOL


def test_bilaplacian_helper_matches_method():
    x, y = 1.2, -0.7
    assert abs(bilaplacian(EXCEPTIONAL, x, y) - EXCEPTIONAL.bilaplacian(x, y)) < 1e-14


def test_singular_guard_raises_and_masks():
    F = make_elliptic_field(a1=1.0, a3=-1.0, guard=1e-3)
    assert not F.is_safe(0.0, 0.0)
    assert F.is_safe(0.5, 0.5)
    with pytest.raises(SingularPoint):
        F.jet(0.0, 0.0, 2)
    centers = list(F.singular_centers())
    assert (0.0, 0.0) in [(cx, cy) for cx, cy in centers]


def test_branch_shifts_angular_multiple():
    F = make_elliptic_field(a3=1.0)  # F = Arctan(y/x)
    base = F.value(1.0, 1.0)
    up = F.with_branch(1).value(1.0, 1.0)
    assert abs(up - base - math.pi) < VALUE_TOL


def test_fd_stencil_examples():
    Fq = make_polynomial_field({(4, 0): 1.0})
    assert abs(fd_bilaplacian(Fq, 0.3, -1.1, 1e-2) - 24.0) < 1e-6
    Fc = make_polynomial_field({(2, 1): 1.0})
    assert abs(fd_bilaplacian(Fc, 0.3, -1.1, 1e-2)) < 1e-8
    Fe = make_elliptic_field(a1=1.0, a3=-1.0)
    assert abs(fd_bilaplacian(Fe, 2.0, 1.0, 1e-3)) < 1e-4


def test_fd_stencil_error_drops_by_four_per_halving():
    F = HYPERBOLIC
    x, y = 1.3, 0.8
    e1 = abs(fd_bilaplacian(F, x, y, 2e-2) - F.bilaplacian(x, y))
    e2 = abs(fd_bilaplacian(F, x, y, 1e-2) - F.bilaplacian(x, y))
    assert e1 / e2 == pytest.approx(4.0, rel=0.35)


def test_kelvin_pushforward_value_matches_substitution():
    G = pushforward_inversion(ELLIPTIC)
    rng = np.random.default_rng(8)
    x, y = annulus_points(rng, 50)
    r2 = x * x + y * y
    want = r2 * ELLIPTIC.value(x / r2, y / r2)
    assert np.allclose(G.value(x, y), want, atol=1e-10)


def test_kelvin_is_an_involution():
    G = pushforward_inversion(ELLIPTIC)
    F2 = pushforward_inversion(G)
    assert abs(F2.value(1.3, -0.8) - ELLIPTIC.value(1.3, -0.8)) < 1e-10


def test_kelvin_preserves_biharmonicity():
    G = pushforward_inversion(HYPERBOLIC)
    rng = np.random.default_rng(13)
    x, y = annulus_points(rng, 100)
    assert np.max(np.abs(G.bilaplacian(x, y))) < 1e-7


def test_restrictions_are_low_degree_on_cycles():
    Cyc = SimpleNamespace
    # gamma-only field restricted to the circle r = 2 is linear there
    F = make_hyperbolic_field(gamma1=-1.0, gamma2=-1.0, gamma3=-1.0, gamma4=1.0)
    assert restrict_to_circle(F, Cyc(a=1, b=0, c=0, d=-4), 1) < 1e-9
    # elliptic field on a line through the origin is quadratic in arclength
    assert restrict_to_circle(ELLIPTIC, Cyc(a=0, b=2, c=-1, d=0), 2) < 1e-8
    # the quartic counterexample is linear on its own nested circles
    t = 2.0
    F = make_remark_counterexample()
    assert restrict_to_circle(F, Cyc(a=1, b=-t, c=0, d=-math.sqrt(t * t - 1)), 1) < 1e-9


def test_restriction_flags_non_linear_field():
    Cyc = SimpleNamespace
    Fq = make_polynomial_field({(4, 0): 1.0})
    assert restrict_to_circle(Fq, Cyc(a=1, b=0, c=0, d=-1), 1) > 1e-3


def test_restriction_rejects_empty_locus():
    Cyc = SimpleNamespace
    with pytest.raises(EmptyIntersection):
        restrict_to_circle(ELLIPTIC, Cyc(a=1, b=0, c=0, d=1), 1)


def test_reduction_kills_redundant_coefficients():
    reduced, psi, removed = reduce_elliptic_field(ELLIPTIC)
    for name in ("a4", "b3", "c3", "d1", "d2"):
        assert getattr(reduced, name) == 0.0
    assert set(removed) == {"rsq", "x", "y", "const"}


def test_reduction_identity_up_to_branch_wraps():
    reduced, psi, removed = reduce_elliptic_field(ELLIPTIC)
    cs, sn = math.cos(psi), math.sin(psi)
    rng = np.random.default_rng(40)
    gap = 0.0
    checked = 0
    for _ in range(60):
        r = rng.uniform(0.3, 3.0)
        t = rng.uniform(0, 2 * math.pi)
        px, py = r * math.cos(t), r * math.sin(t)
        rx, ry = cs * px + sn * py, -sn * px + cs * py
        if abs(rx) < 0.05 or abs(px) < 0.05:
            continue
        lhs = ELLIPTIC.value(rx, ry)
        # rotating shifts the angle by psi modulo whole turns of the branch
        alpha = math.atan(ry / rx)
        beta = math.atan(py / px)
        k = round((alpha - (beta - psi)) / math.pi)
        r2 = px * px + py * py
        afac = ELLIPTIC.a1 * r2 + reduced.a2 * px + ELLIPTIC.a3
        rhs = (
            reduced.value(px, py)
            + removed["rsq"] * r2
            + removed["x"] * px
            + removed["y"] * py
            + removed["const"]
            + k * math.pi * afac
        )
        gap = max(gap, abs(lhs - rhs))
        checked += 1
    assert checked > 30
    assert gap < 1e-9


def test_sum_and_bump_fields():
    F = sum_fields(
        [
            (2.0, make_polynomial_field({(1, 0): 1.0})),
            (1.0, make_polynomial_field({(0, 1): 1.0})),
        ]
    )
    assert abs(F.value(3.0, 4.0) - 10.0) < VALUE_TOL
    bump = make_bump_field((1.0, 0.0), 0.5, 2.0)
    assert abs(bump.value(2.0, 2.0)) < VALUE_TOL  # compact support
    assert abs(bump.value(1.0, 0.0) - 2.0) < VALUE_TOL
    j = bump.jet(1.0, 0.0, 4)
    assert np.isfinite(j.d).all()
