"""Closed-form blocks, convolutions, ruling families, and cone preimages."""
import math

import numpy as np
import pytest

from lagmin.errors import (
    DegenerateCone,
    DegenerateFamily,
    ProvenanceMismatch,
    UnknownName,
    ZeroGaussCurvature,
)
from lagmin.fields import make_polynomial_field
from lagmin.reconstruct import reconstruct_surface
from lagmin.surfaces import (
    BLOCK_NAMES,
    CycloLine,
    block_field,
    building_block,
    cone_spheres,
    convolve,
    cyclographic_preimage,
    ruled_surface,
    rulings_of_convolution,
)

POINT_TOL = 1e-12
GAUSS_TOL = 1e-8
GRID = np.meshgrid(np.linspace(-2, 2, 60), np.linspace(-2, 2, 60))


def inverse_stereo(u, v):
    s = u * u + v * v
    return np.stack([2 * u, 2 * v, 1 - s], axis=-1) / (1 + s)[..., None]


def test_block_example_points():
    r1 = building_block("r1")
    assert np.allclose(r1.point(1.0, 1.0), (0.5, -0.5, math.pi / 2), atol=POINT_TOL)
    r3 = building_block("r3")
    assert np.allclose(r3.point(1.0, 1.0), (-0.25, 0.25, 0.5), atol=POINT_TOL)
    r4 = building_block("r4")
    assert np.allclose(r4.point(1.0, 0.0), (2.0, 0.0, 0.0), atol=POINT_TOL)


def test_convolution_adds_pointwise():
    conv = convolve([(1.0, building_block("r1")), (1.0, building_block("r3"))])
    assert np.allclose(
        conv.point(1.0, 1.0), (0.25, -0.25, math.pi / 2 + 0.5), atol=POINT_TOL
    )


def test_unknown_block_name_rejected():
    with pytest.raises(UnknownName):
        building_block("r12")


@pytest.mark.parametrize("name", [n for n in BLOCK_NAMES if n != "r2"])
def test_gauss_map_identity(name):
    s = building_block(name)
    uu, vv = GRID
    ok = s.is_safe(uu, vv)
    assert ok.sum() > 2000
    n = s.normal(uu[ok], vv[ok])
    res = np.abs(n - inverse_stereo(uu[ok], vv[ok])).max()
    assert res < GAUSS_TOL


@pytest.mark.parametrize(
    "name,theta",
    [("r1", 0.0), ("r2", 0.0), ("r3", 0.7), ("r6", 1.1), ("r7", 0.4), ("r9", 0.0)],
)
def test_closed_block_matches_reconstructed_field(name, theta):
    blk = building_block(name, theta if theta else None)
    fs = reconstruct_surface(block_field(name, theta))
    uu, vv = GRID
    ok = blk.is_safe(uu, vv) & (uu**2 + vv**2 > 1e-4)
    d = np.abs(blk.point(uu[ok], vv[ok]) - fs.point(uu[ok], vv[ok])).max()
    assert d < GAUSS_TOL


def test_conoid_orientation_pairing():
    """x y² expands on the block with the opposite rotation sign."""
    xy2 = make_polynomial_field({(1, 2): 1.0})
    fs = reconstruct_surface(xy2)
    uu, vv = GRID
    good = building_block("r9", -math.pi / 2)
    d = np.abs(good.point(uu, vv) - fs.point(uu, vv)).max()
    assert d < GAUSS_TOL
    other = building_block("r9", math.pi / 2)
    d2 = np.abs(other.point(uu, vv) - fs.point(uu, vv)).max()
    assert d2 > 1e-2


def test_helicoid_lies_on_its_lines():
    r1 = building_block("r1")
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(50):
        phi = rng.uniform(-1.4, 1.4)
        s = rng.uniform(0.2, 1.8)
        if abs(s - 1) < 1e-3:
            continue
        u, v = s * math.cos(phi), -s * math.sin(phi)
        lam = 1.0 / s - s
        tgt = np.array([0, 0, -2 * phi]) + lam * np.array(
            [math.sin(phi), math.cos(phi), 0]
        )
        worst = max(worst, np.abs(r1.point(u, v) - tgt).max())
    assert worst < 1e-10


def test_rulings_examples():
    fam = rulings_of_convolution(1.0, 0.0, 0.0)
    p, d = fam.line(math.pi / 2)
    assert np.allclose(p, (0.0, 0.0, -math.pi), atol=POINT_TOL)
    assert np.allclose(d, (1.0, 0.0, 0.0), atol=POINT_TOL)
    fam2 = rulings_of_convolution(0.0, 1.0, 0.0)
    p, d = fam2.line(0.0)
    assert np.allclose(p, (0.0, 1.0, 0.0), atol=POINT_TOL)
    assert np.allclose(d, (0.0, 1.0, 0.0), atol=POINT_TOL)


def test_ruling_incidence_random_families():
    rng = np.random.default_rng(5)
    worst = 0.0
    tested = 0
    while tested < 8:
        a1, a2, a3 = rng.uniform(-1, 1, 3)
        if a1 * a1 + a3 * a3 <= 0.1:
            continue
        th = rng.uniform(-1.5, 1.5)
        fam = rulings_of_convolution(a1, a2, a3, th)
        surf = fam.surface()
        for _ in range(5):
            phi = rng.uniform(-1.4, 1.4)
            s = rng.uniform(0.25, 1.7)
            if abs(s - 1) < 5e-2:
                continue
            u, v = fam.gauss_point(phi, s)
            lam = (1.0 / s - s) * (
                a1 + a3 * math.sin(phi + th) * math.cos(phi + th)
            ) - a2 * math.cos(phi)
            P, D = fam.line(phi)
            worst = max(worst, np.abs(surf.point(u, v) - (P + lam * D)).max())
        tested += 1
    assert worst < 1e-10


def test_degenerate_ruling_family_guards():
    fam0 = rulings_of_convolution(0.0, 5.0, 0.0)
    assert fam0.degenerate
    with pytest.raises(DegenerateFamily):
        fam0.surface()


def test_ruled_patch_matches_conoid_preimage():
    rp = ruled_surface(0.0, 0.0, 0.0, 0.5)
    fam = cyclographic_preimage("R3")
    worst = 0.0
    for phi in np.linspace(-3, 3, 13):
        for lam in (-1.0, 0.3, 0.8):
            a = rp.frame(phi, lam, order=0).r
            L = fam.line(phi)
            b = (L.base + lam * L.dir)[:3] - np.array([0.0, 0.0, 0.5])
            worst = max(worst, np.abs(a - b).max())
    assert worst < 1e-12


def test_ruled_patch_degenerate_flag_and_rulings():
    rp = ruled_surface(1.0, 1.0, 0.0, 0.0)
    assert rp.degenerate
    point, direction = rp.ruling(0.3)
    # the ruling is a straight line on the patch
    for lam in (-0.5, 0.0, 0.7):
        got = rp.frame(0.3, lam, order=0).r
        assert np.allclose(got, point + lam * direction, atol=1e-12)


def test_preimage_line_examples():
    L = cyclographic_preimage("R4").line(0.0)
    assert np.allclose(L.base, (0, 0, 0, -2), atol=POINT_TOL)
    assert np.allclose(L.dir, (0, 0, 1, 0), atol=POINT_TOL)
    L = cyclographic_preimage("R7").line(1.0)
    assert np.allclose(L.base, (0, 0, -0.5, 0.5), atol=POINT_TOL)
    assert np.allclose(L.dir, (1, 0, -1, 1), atol=POINT_TOL)
    ell = cyclographic_preimage(("elliptic", (0, 0, 1, 0, 0, 0, 0)))
    L = ell.line(0.7)
    assert np.allclose(L.base, (0, 0, 0.7, 0), atol=POINT_TOL)
    assert np.allclose(L.dir, (math.sin(0.7), math.cos(0.7), 0, 0), atol=POINT_TOL)


def test_cone_spheres_lie_on_the_line():
    L = cyclographic_preimage("R4").line(0.0)
    spheres = cone_spheres(L, 3)
    assert len(spheres) == 3
    for s in spheres:
        # recover the line parameter from the z component and check all four
        lam = (s.m[2] - L.base[2]) / L.dir[2]
        want = L.base + lam * L.dir
        assert np.allclose(s.m, want[:3], atol=POINT_TOL)
        assert abs(s.r - want[3]) < POINT_TOL


def test_zero_direction_cone_rejected():
    with pytest.raises(DegenerateCone):
        CycloLine(np.zeros(4), np.zeros(4))


def test_unknown_preimage_rejected():
    with pytest.raises(UnknownName):
        cyclographic_preimage("R99")


def test_flat_patch_has_no_curvature_radii():
    with pytest.raises(ZeroGaussCurvature):
        from lagmin.verify import omega_integrand

        omega_integrand(ruled_surface(1.0, 0.0, 0.0, 0.0), 0.3, 0.2)


def test_ruling_family_rejects_foreign_surface():
    fam = rulings_of_convolution(1.0, 0.0, 0.0)
    from lagmin.verify import ruling_residual

    with pytest.raises(ProvenanceMismatch):
        ruling_residual(building_block("r4"), fam)
