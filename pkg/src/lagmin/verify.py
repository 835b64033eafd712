"""Numerical certification of the geometric claims.

Curvatures come from exact derivative jets, never finite differences.
The energy integrand (H^2 - K)/K is only ever integrated over compact
bump supports, because the full integral need not converge; the first
variation compares reconstructions of F + eps*bump and F - eps*bump.
Residual checks return CheckReport records with a stable JSON form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import meshing
from .errors import (
    NonImmersed,
    ProvenanceMismatch,
    SingularPoint,
    UnknownName,
    ZeroGaussCurvature,
)
from .fields import make_bump_field, make_polynomial_field, sum_fields
from .isotropic import stereographic
from .reconstruct import reconstruct_surface
from .surfaces import BlockSurface, ConvolutionSurface, RotatedSurface

IMMERSION_TOL = 1e-10
K_TOL = 1e-12
BISECT_TOL = 1e-12
BIHARMONIC_TOL = 1e-9
CURVATURE_FD_TOL = 1e-5
GAUSSMAP_TOL = 1e-8
RULING_TOL = 1e-8
STATIONARITY_RATIO = 0.1
TANGENCY_TOL = 1e-5


@dataclass
class CheckReport:
    check: str
    samples: int
    max_residual: float
    rms_residual: float
    tolerance: float
    passed: bool
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_residuals(cls, check, residuals, tolerance, meta=None):
        res = np.asarray(residuals, dtype=float)
        if res.size == 0:
            mx = rms = 0.0
        else:
            mx = float(np.max(res))
            rms = float(np.sqrt(np.mean(res * res)))
        return cls(check, int(res.size), mx, rms, float(tolerance),
                   mx <= float(tolerance), dict(meta or {}))


def _json_value(obj) -> str:
    import json as _json

    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (float, np.floating)):
        return "%.17g" % float(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return _json.dumps(obj)
    if isinstance(obj, dict):
        inner = ", ".join(
            "%s: %s" % (_json.dumps(str(k)), _json_value(v)) for k, v in obj.items()
        )
        return "{" + inner + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def json_text(value) -> str:
    """Deterministic JSON for report-like values (17-digit floats)."""
    return _json_value(value)


def report_json(report: CheckReport) -> str:
    """Stable-order JSON record; floats carry 17 significant digits."""
    payload = {
        "check": report.check,
        "samples": report.samples,
        "max_residual": float(report.max_residual),
        "rms_residual": float(report.rms_residual),
        "tolerance": float(report.tolerance),
        "pass": bool(report.passed),
        "meta": report.meta,
    }
    return _json_value(payload)


def write_reports(reports, path):
    body = "[\n" + ",\n".join("  " + report_json(r) for r in reports) + "\n]\n"
    meshing.atomic_write_text(path, body)


# -- curvature and energy ---------------------------------------------


def curvatures(S, u, v):
    """Mean and Gauss curvature from the exact second-order frame."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    fr = S.frame(u, v, order=2)
    E = np.sum(fr.ru * fr.ru, axis=-1)
    F = np.sum(fr.ru * fr.rv, axis=-1)
    G = np.sum(fr.rv * fr.rv, axis=-1)
    cr = np.cross(fr.ru, fr.rv)
    ln = np.linalg.norm(cr, axis=-1)
    if np.any(ln <= IMMERSION_TOL):
        raise NonImmersed(
            "curvature undefined at %d point(s)" % int(np.sum(ln <= IMMERSION_TOL))
        )
    n = S._orient(cr / ln[..., None], u, v)
    L = np.sum(n * fr.ruu, axis=-1)
    M = np.sum(n * fr.ruv, axis=-1)
    N = np.sum(n * fr.rvv, axis=-1)
    den = E * G - F * F
    K = (L * N - M * M) / den
    H = (E * N - 2.0 * F * M + G * L) / (2.0 * den)
    if u.ndim == 0 and v.ndim == 0:
        return float(H), float(K)
    return H, K


def omega_integrand(S, u, v):
    """(H^2 - K)/K, the Laguerre energy density; needs K != 0."""
    H, K = curvatures(S, u, v)
    if np.any(np.abs(np.asarray(K)) <= K_TOL):
        raise ZeroGaussCurvature("energy integrand undefined where K = 0")
    return (H * H - K) / K


def _local_energy(fieldobj, uu, vv, wts):
    S = reconstruct_surface(fieldobj)
    fr = S.frame(uu, vv, order=2)
    E = np.sum(fr.ru * fr.ru, axis=-1)
    F = np.sum(fr.ru * fr.rv, axis=-1)
    G = np.sum(fr.rv * fr.rv, axis=-1)
    cr = np.cross(fr.ru, fr.rv)
    ln = np.linalg.norm(cr, axis=-1)
    if np.any(ln <= IMMERSION_TOL):
        raise NonImmersed("bump support touches a non-immersed point")
    n = S._orient(cr / ln[..., None], uu, vv)
    L = np.sum(n * fr.ruu, axis=-1)
    M = np.sum(n * fr.ruv, axis=-1)
    N = np.sum(n * fr.rvv, axis=-1)
    den = E * G - F * F
    K = (L * N - M * M) / den
    H = (E * N - 2.0 * F * M + G * L) / (2.0 * den)
    if np.any(np.abs(K) <= K_TOL):
        raise ZeroGaussCurvature("bump support touches a K = 0 point")
    return float(np.sum(wts * (H * H - K) / K * ln))


def first_variation(F, center, radius, amplitude, *, eps=1e-4, nodes=16):
    """Central-difference d(Omega_local)/d(eps) of the bump perturbation.

    Omega_local integrates (H^2-K)/K dA over the bump's support square
    with tensor Gauss-Legendre quadrature; Richardson extrapolation over
    {eps, eps/2} removes the leading truncation term.
    """
    bump = make_bump_field(center, radius, amplitude)
    x, w = np.polynomial.legendre.leggauss(int(nodes))
    r = float(radius)
    gu = center[0] + r * x
    gv = center[1] + r * x
    uu, vv = np.meshgrid(gu, gv)
    wts = np.outer(w, w) * r * r
    if not np.all(F.is_safe(uu, vv)):
        raise ValueError("bump support overlaps a guarded point of the field")

    def omega(e):
        return _local_energy(sum_fields([(1.0, F), (e, bump)]), uu, vv, wts)

    def central(e):
        return (omega(e) - omega(-e)) / (2.0 * e)

    d1 = central(float(eps))
    d2 = central(float(eps) / 2.0)
    return (4.0 * d2 - d1) / 3.0


# -- residual checks ---------------------------------------------------


def gaussmap_identity_residual(S, window=None, shape=(100, 100),
                               tolerance=GAUSSMAP_TOL) -> CheckReport:
    """Round trip: the stereographic top view of the oriented unit
    normal at (u, v) must reproduce (u, v)."""
    if not getattr(S, "immersed", True):
        return CheckReport.from_residuals(
            "gaussmap-identity", [], tolerance,
            {"note": "skipped: NonImmersed (degenerate curve locus)"},
        )
    if window is None:
        window = S.default_window
    u, v = meshing.grid_axes(window, shape)
    uu, vv = np.meshgrid(u, v)
    ok = np.broadcast_to(S.is_safe(uu, vv), uu.shape).copy()
    skipped = int(ok.size - ok.sum())
    fu = uu[ok]
    fv = vv[ok]
    fr = S.frame(fu, fv, order=1)
    cr = np.cross(fr.ru, fr.rv)
    ln = np.linalg.norm(cr, axis=-1)
    good = ln > IMMERSION_TOL
    skipped += int(np.sum(~good))
    n = S._orient(cr[good] / ln[good, None], fu[good], fv[good])
    top = stereographic(n)
    res = np.hypot(top[..., 0] - fu[good], top[..., 1] - fv[good])
    return CheckReport.from_residuals(
        "gaussmap-identity", res, tolerance,
        {"grid": [int(shape[0]), int(shape[1])],
         "window": [float(t) for t in window],
         "skipped": skipped},
    )


def _canonical_weights(S):
    """(a1, a2, a3, theta) of a surface built from the kinematic blocks."""
    key = {"r1": 0, "r2": 1, "r3": 2}

    def one(surf):
        theta = 0.0
        if isinstance(surf, RotatedSurface):
            theta = surf.theta
            surf = surf.base
        if isinstance(surf, BlockSurface) and surf.name in key:
            return key[surf.name], theta
        raise ProvenanceMismatch(
            f"surface {getattr(surf, 'provenance', surf)!r} is not a kinematic block"
        )

    weights = [0.0, 0.0, 0.0]
    theta = None
    if isinstance(S, ConvolutionSurface):
        terms = S.terms
    else:
        terms = ((1.0, S),)
    for w, surf in terms:
        idx, th = one(surf)
        weights[idx] += w
        if idx == 2 and w != 0.0:
            if theta is not None and abs(theta - th) > 1e-12:
                raise ProvenanceMismatch("mixed conoid rotations")
            theta = th
    return weights[0], weights[1], weights[2], (theta or 0.0)


def ruling_residual(S, family, *, phis=None, lams=None,
                    tolerance=RULING_TOL) -> CheckReport:
    """Distance from ruling points to the surface at the matched Gauss
    coordinates.

    A ruling with direction (sin phi, cos phi, 0) meets the surface
    along the Gauss line (u, v) = s (cos phi, -sin phi); the radius s
    belonging to a given lambda solves a monotone 1-D equation, handled
    by bracketed bisection.
    """
    a1, a2, a3 = family.a
    theta = family.theta
    got = _canonical_weights(S)
    want = (a1, a2, a3, theta)
    if any(abs(g - w) > 1e-12 for g, w in zip(got, want)):
        raise ProvenanceMismatch(f"surface weights {got} != family weights {want}")

    if phis is None:
        phis = np.linspace(-1.2, 1.2, 13)
    if lams is None:
        lams = (-0.8, -0.3, 0.2, 0.7)
    residuals = []
    skipped = 0
    for phi in phis:
        c = a1 + a3 * np.sin(phi + theta) * np.cos(phi + theta)
        if abs(c) < 1e-12:
            skipped += len(lams)
            continue
        point, direction = family.line(float(phi))
        for lam in lams:
            t = (lam + a2 * np.cos(phi)) / c

            def g(s):
                return (1.0 / s - s) - t

            guess = 0.5 * (-t + np.sqrt(t * t + 4.0))
            lo, hi = 0.5 * guess, 2.0 * guess
            if g(lo) < 0.0 or g(hi) > 0.0:
                skipped += 1
                continue
            while hi - lo > BISECT_TOL * max(1.0, guess):
                mid = 0.5 * (lo + hi)
                if g(mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            s = 0.5 * (lo + hi)
            u = s * np.cos(phi)
            v = -s * np.sin(phi)
            if not bool(np.all(S.is_safe(u, v))):
                skipped += 1
                continue
            p = S.frame(u, v, order=0).r
            q = point + lam * direction
            residuals.append(float(np.linalg.norm(p - q)))
    return CheckReport.from_residuals(
        "ruling-incidence", residuals, tolerance,
        {"phis": len(phis), "lams": len(lams), "skipped": skipped},
    )


def tangency_residual(S, spheres, *, window=None, shape=(400, 400),
                      tolerance=TANGENCY_TOL) -> CheckReport:
    """Max over spheres of the min contact gap | |r - m| - |R| | over
    mesh vertices: small means every sphere of the family touches S."""
    if shape[0] < 400 or shape[1] < 400:
        raise ValueError("mesh resolution must be at least 400x400")
    mesh = meshing.surface_mesh(S, window, shape)
    verts = mesh.vertices
    minima = []
    for sp in spheres:
        m = np.asarray(sp.m, dtype=float)
        gaps = np.abs(np.linalg.norm(verts - m, axis=-1) - abs(float(sp.r)))
        minima.append(float(np.min(gaps)))
    return CheckReport.from_residuals(
        "cone-tangency", minima, tolerance,
        {"grid": [int(shape[0]), int(shape[1])],
         "window": [float(t) for t in (window or S.default_window)],
         "vertices": int(len(verts))},
    )


# -- seeded point checks ----------------------------------------------


def _safe_samples(is_safe, rng, window, count, max_draw=100):
    u0, u1, v0, v1 = window
    xs = np.empty(0)
    ys = np.empty(0)
    for _ in range(max_draw):
        x = rng.uniform(u0, u1, count)
        y = rng.uniform(v0, v1, count)
        ok = np.broadcast_to(is_safe(x, y), x.shape)
        xs = np.concatenate([xs, x[ok]])
        ys = np.concatenate([ys, y[ok]])
        if xs.size >= count:
            return xs[:count], ys[:count]
    raise ValueError("could not draw enough safe sample points")


def biharmonic_residual(F, *, seed=0, samples=1000, margin=0.1,
                        window=(-2.0, 2.0, -2.0, 2.0),
                        tolerance=BIHARMONIC_TOL) -> CheckReport:
    """|Laplacian^2 F| at seeded random safe points (exact jets).

    Samples stay `margin` away from the field's singular centers: the
    exact fourth derivatives cancel analytically but their individual
    terms grow like negative powers of the distance, so points right at
    the guard radius would measure rounding noise, not biharmonicity.
    """
    centers = [(float(cx), float(cy)) for cx, cy in F.singular_centers()]
    m2 = float(margin) ** 2

    def safe(x, y):
        ok = np.broadcast_to(F.is_safe(x, y), np.broadcast(x, y).shape).copy()
        for cx, cy in centers:
            ok &= (x - cx) ** 2 + (y - cy) ** 2 >= m2
        return ok

    rng = np.random.default_rng(seed)
    x, y = _safe_samples(safe, rng, window, int(samples))
    res = np.abs(F.bilaplacian(x, y))
    return CheckReport.from_residuals(
        "biharmonic", res, tolerance,
        {"seed": int(seed), "margin": float(margin),
         "window": [float(t) for t in window]},
    )


def fd_curvature_check(S, *, seed=0, samples=20, step=1e-4,
                       rmin=0.3, rmax=1.5, curvature_cap=25.0,
                       tolerance=CURVATURE_FD_TOL) -> CheckReport:
    """Exact-jet H, K against finite-difference fundamental forms.

    Samples live in the parameter annulus rmin <= |(u,v)| <= rmax and
    are rejected where |H| + |K| exceeds `curvature_cap`: several
    blocks carry genuine curvature blowup loci (the conoid's axis
    image, the ring of the surfaces of revolution) where a fixed step
    cannot resolve the geometry, and curvature magnitude is exactly
    the scale that drives the truncation error there.
    """
    rng = np.random.default_rng(seed)
    h = float(step)

    def stencil_safe(x, y):
        ok = np.ones(np.broadcast(x, y).shape, dtype=bool)
        for dx in (-h, 0.0, h):
            for dy in (-h, 0.0, h):
                ok &= np.broadcast_to(S.is_safe(x + dx, y + dy), ok.shape)
        return ok

    u = np.empty(0)
    v = np.empty(0)
    draws = 0
    while u.size < int(samples) and draws < 100:
        draws += 1
        ang = rng.uniform(0.0, 2.0 * np.pi, 2 * int(samples))
        rad = rng.uniform(float(rmin), float(rmax), 2 * int(samples))
        x = rad * np.cos(ang)
        y = rad * np.sin(ang)
        ok = stencil_safe(x, y)
        if not ok.any():
            continue
        He, Ke = curvatures(S, x[ok], y[ok])
        keep = (np.abs(He) + np.abs(Ke)) <= float(curvature_cap)
        u = np.concatenate([u, x[ok][keep]])
        v = np.concatenate([v, y[ok][keep]])
    if u.size < int(samples):
        raise ValueError("could not draw enough resolvable sample points")
    u = u[: int(samples)]
    v = v[: int(samples)]
    H, K = curvatures(S, u, v)

    def f(a, b):
        return S.frame(a, b, order=0).r

    ru = (f(u + h, v) - f(u - h, v)) / (2 * h)
    rv = (f(u, v + h) - f(u, v - h)) / (2 * h)
    ruu = (f(u + h, v) - 2 * f(u, v) + f(u - h, v)) / (h * h)
    rvv = (f(u, v + h) - 2 * f(u, v) + f(u, v - h)) / (h * h)
    ruv = (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h)
           + f(u - h, v - h)) / (4 * h * h)
    E = np.sum(ru * ru, axis=-1)
    Ff = np.sum(ru * rv, axis=-1)
    G = np.sum(rv * rv, axis=-1)
    cr = np.cross(ru, rv)
    ln = np.linalg.norm(cr, axis=-1)
    n = S._orient(cr / ln[..., None], u, v)
    L = np.sum(n * ruu, axis=-1)
    M = np.sum(n * ruv, axis=-1)
    N = np.sum(n * rvv, axis=-1)
    den = E * G - Ff * Ff
    Kf = (L * N - M * M) / den
    Hf = (E * N - 2 * Ff * M + G * L) / (2 * den)
    res = np.maximum(np.abs(H - Hf) / (1.0 + np.abs(Hf)),
                     np.abs(K - Kf) / (1.0 + np.abs(Kf)))
    return CheckReport.from_residuals(
        "curvature-fd", res, tolerance,
        {"seed": int(seed), "step": h,
         "annulus": [float(rmin), float(rmax)]},
    )


def stationarity_check(F, *, seed=0, bumps=5, control=None,
                       ratio=STATIONARITY_RATIO, box=(0.5, 1.4),
                       radii=(0.25, 0.45)) -> CheckReport:
    """|dOmega| of F against the (non-stationary) x^4 control on the
    same seeded random bumps; each residual is the ratio of the two."""
    if control is None:
        control = make_polynomial_field({(4, 0): 1.0})
    rng = np.random.default_rng(seed)
    ratios = []
    tried = 0
    while len(ratios) < int(bumps) and tried < 60 * int(bumps):
        tried += 1
        cx = rng.uniform(*box) * (1 if rng.uniform() < 0.5 else -1)
        cy = rng.uniform(*box) * (1 if rng.uniform() < 0.5 else -1)
        r = rng.uniform(*radii)
        try:
            d = first_variation(F, (cx, cy), r, 1.0)
            dc = first_variation(control, (cx, cy), r, 1.0)
        except (ValueError, NonImmersed, ZeroGaussCurvature, SingularPoint):
            continue
        if abs(dc) < 1e-9:
            continue
        ratios.append(abs(d) / abs(dc))
    return CheckReport.from_residuals(
        "stationarity", ratios, ratio,
        {"seed": int(seed), "bumps": int(bumps), "tried": tried},
    )


# -- frozen sphere-tangency plans -------------------------------------

# Tuned offline per family: (phi, lambda) samples whose contact points
# land inside the stated mesh window, keeping sphere radii away from
# zero (point spheres leave a first-order pit no mesh can resolve).


def _r1_vertex_pairs():
    # exact alignment: contact points of the helicoid's point spheres
    # are placed on 400x400 grid vertices of the (-2,2)^2 window
    delta = 4.0 / 399.0
    ks = {(1, 1): (99, 141, 197), (1, -1): (99, 141, 197),
          (3, 1): (45, 63, 89), (3, -1): (45, 63, 89),
          (1, 3): (45, 63, 89)}
    pairs = []
    for (p, q), kk in ks.items():
        for k in kk:
            s = k * (delta / 2.0) * math.hypot(p, q)
            pairs.append((math.atan2(-q, p), 1.0 / s - s))
    return pairs


def _grid_pairs(phis, lams):
    return [(p, l) for p in phis for l in lams]


def _curve_pairs(phis, offs, lam_of):
    return [(p + o, lam_of(p + o)) for p in phis for o in offs]


def tangency_plan(block_name):
    """Frozen (family name, (phi, lambda) pairs, mesh window) triples
    for every block with a stated cone-family preimage."""
    plans = {
        "r1": [("R1", _r1_vertex_pairs(), (-2.0, 2.0, -2.0, 2.0))],
        "r4": [("R4",
                _curve_pairs((-0.3, -0.15, 0.0, 0.15, 0.3),
                             (-0.04, 0.0, 0.04), lambda p: -2.0 * math.sinh(p)),
                (-1.092, 0.092, -1.442, -0.534))],
        "r5": [("R5",
                _grid_pairs((0.2, 0.215, 0.23, 0.245, 0.26), (0.2, 0.26, 0.32)),
                (0.025, 0.101, 0.742, 0.842))],
        "r6": [("R6",
                _grid_pairs((-0.27, -0.25, 0.23, 0.25, 0.27), (0.18, 0.2, 0.22)),
                (0.080, 0.169, 1.225, 1.331))],
        "r7": [("R7",
                _curve_pairs((0.24, 0.26, 0.28, 0.30, 0.32),
                             (-0.008, 0.0, 0.008), lambda p: -p),
                (0.202, 0.358, -0.020, 0.020)),
               ("R7b",
                _grid_pairs((0.3, 0.35, 0.4, 0.45, 0.5), (0.2, 0.28, 0.36)),
                (-1.318, -0.317, 0.169, 0.450))],
        "r8": [("R8",
                _curve_pairs((0.24, 0.26, 0.28, 0.30, 0.32),
                             (-0.008, 0.0, 0.008), lambda p: -3.0 * p * p),
                (0.202, 0.358, -0.020, 0.020))],
        "r9": [("R9",
                _grid_pairs((0.45, 0.475, 0.5, 0.525, 0.55), (0.2, 0.3, 0.4)),
                (0.420, 0.580, -0.491, -0.136)),
               ("R9b",
                _grid_pairs((0.3, 0.325, 0.35, 0.375, 0.4), (-0.4, -0.3, -0.2)),
                (0.573, 0.892, 0.270, 0.430))],
        "r10": [("R10",
                 _grid_pairs((0.3, 0.34, 0.38, 0.42, 0.46), (0.1, 0.15, 0.2)),
                 (0.264, 0.496, -0.745, -0.472))],
        "r11": [("R11",
                 _grid_pairs((0.32, 0.36, 0.4, 0.44, 0.48), (0.16, 0.2, 0.24)),
                 (0.284, 0.516, 0.425, 0.577))],
        "r1~": [("R1~",
                 _grid_pairs((0.13, 0.14, 0.15, 0.16, 0.17), (0.5, 0.52, 0.54)),
                 (-2.380, -2.226, 0.266, 0.432))],
        "r3~": [("R3~",
                 _grid_pairs((0.26, 0.29, 0.32, 0.35, 0.38), (-0.5, -0.47, -0.44)),
                 (-0.486, -0.288, 0.056, 0.210))],
    }
    if block_name not in plans:
        raise UnknownName(
            "no stated cone-family preimage for block %r" % (block_name,)
        )
    return plans[block_name]


def tangency_check(block_name, *, shape=(400, 400),
                   tolerance=TANGENCY_TOL):
    """All frozen sphere-tangency reports for one named block."""
    from .surfaces import building_block, cyclographic_preimage

    S = building_block(block_name)
    reports = []
    for fam_name, pairs, window in tangency_plan(block_name):
        fam = cyclographic_preimage(fam_name)
        spheres = [fam.line(p).sphere(l) for p, l in pairs]
        rep = tangency_residual(S, spheres, window=window, shape=shape,
                                tolerance=tolerance)
        rep.meta["family"] = fam_name
        reports.append(rep)
    return reports
