"""From scalar fields to surfaces and back.

`reconstruct_surface` turns a field F into the enveloping surface whose
Gauss map, read through stereographic projection, is the identity on the
field coordinates: the surface point over (x, y) is

    r = ((x²−y²−1)F_x + 2xy F_y − 2x F,
         (y²−x²−1)F_y + 2xy F_x − 2y F,
         2x F_x + 2y F_y − 2F) / (x²+y²+1).

`isotropic_image` goes the other way: take the oriented tangent plane of a
parametrized surface and project it to the point model.  The round trip
over a field graph is the identity (x, y, F(x, y)), which is what fixes the
orientation convention used here.

Surface derivative jets come from analytic differentiation (field jets one
order higher), never from finite differences, so curvature formulas
downstream see exact second derivatives.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IdealImage, NonImmersed
from .fields import ScalarField
from .isotropic import IsoPoint, inverse_stereographic
from .jets import jet_xy

IMMERSION_TOL = 1e-10
IDEAL_TOL = 1e-9


@dataclass
class SurfaceJet:
    """Position and partial derivatives of a parametrization, each an
    (..., 3) array; second-order entries are None for low-order frames."""

    r: np.ndarray
    ru: np.ndarray = None
    rv: np.ndarray = None
    ruu: np.ndarray = None
    ruv: np.ndarray = None
    rvv: np.ndarray = None


class ParamSurface:
    """Map (u, v) -> R³ with derivative jets and a provenance tag."""

    provenance = "surface"
    immersed = True
    default_window = (-2.0, 2.0, -2.0, 2.0)

    def is_safe(self, u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        return np.ones(np.broadcast(u, v).shape, dtype=bool)

    def frame(self, u, v, order=2) -> SurfaceJet:
        raise NotImplementedError

    def point(self, u, v):
        return self.frame(u, v, order=0).r

    def raw_normal(self, u, v):
        """Unnormalized r_u × r_v and its length (no orientation, no raise)."""
        fr = self.frame(u, v, order=1)
        cr = np.cross(fr.ru, fr.rv)
        return cr, np.linalg.norm(cr, axis=-1)

    def normal(self, u, v):
        cr, ln = self.raw_normal(u, v)
        if np.any(ln <= IMMERSION_TOL):
            raise NonImmersed(
                "parametrization is not immersed at %d sampled point(s)"
                % int(np.sum(ln <= IMMERSION_TOL))
            )
        return self._orient(cr / ln[..., None], u, v)

    def _orient(self, n, u, v):
        return n


class GaussMappedSurface(ParamSurface):
    """Surfaces in Gauss coordinates: (u, v) is the stereographic top view
    of the unit normal, and the normal sign is chosen per point to agree
    with that preimage (the only orientation making the round trip hold)."""

    def _orient(self, n, u, v):
        ref = inverse_stereographic(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        sign = np.where(np.sum(n * ref, axis=-1) >= 0.0, 1.0, -1.0)
        return n * sign[..., None]


class FieldSurface(GaussMappedSurface):
    """Envelope reconstructed from a scalar field."""

    provenance = "reconstructed-from-field"

    def __init__(self, field: ScalarField):
        self.field = field

    def is_safe(self, u, v):
        return self.field.is_safe(u, v)

    def frame(self, u, v, order=2) -> SurfaceJet:
        fj = self.field.jet(u, v, order + 1)
        fx = fj.shift(1, 0)
        fy = fj.shift(0, 1)
        f0 = fj.truncate(order)
        jx, jy = jet_xy(np.asarray(u), np.asarray(v), order)
        inv = (jx * jx + jy * jy + 1.0).reciprocal()
        X = ((jx * jx - jy * jy - 1.0) * fx + (jx * jy) * fy * 2.0 - jx * f0 * 2.0) * inv
        Y = ((jy * jy - jx * jx - 1.0) * fy + (jx * jy) * fx * 2.0 - jy * f0 * 2.0) * inv
        Z = (jx * fx * 2.0 + jy * fy * 2.0 - f0 * 2.0) * inv
        def pick(i, j):
            return np.stack(
                [X.entry(i, j), Y.entry(i, j), Z.entry(i, j)], axis=-1
            )
        out = SurfaceJet(r=pick(0, 0))
        if order >= 1:
            out.ru = pick(1, 0)
            out.rv = pick(0, 1)
        if order >= 2:
            out.ruu = pick(2, 0)
            out.ruv = pick(1, 1)
            out.rvv = pick(0, 2)
        return out


def reconstruct_surface(F: ScalarField) -> FieldSurface:
    """Surface enveloped by the plane family encoded in F (exact jets)."""
    return FieldSurface(F)


def isotropic_image(S: ParamSurface, u, v):
    """Point-model image of the oriented tangent plane of S at (u, v).

    Scalar (u, v) gives an IsoPoint; array input gives an (..., 3) array of
    image coordinates.  NonImmersed where the cross product vanishes,
    IdealImage when the unit normal points straight down (n₃ = −1).
    """
    ua = np.asarray(u, dtype=float)
    va = np.asarray(v, dtype=float)
    fr = S.frame(ua, va, order=1)
    cr = np.cross(fr.ru, fr.rv)
    ln = np.linalg.norm(cr, axis=-1)
    if np.any(ln <= IMMERSION_TOL):
        raise NonImmersed(
            "tangent plane undefined at %d point(s)" % int(np.sum(ln <= IMMERSION_TOL))
        )
    n = S._orient(cr / ln[..., None], ua, va)
    w = 1.0 + n[..., 2]
    if np.any(np.abs(w) <= IDEAL_TOL):
        raise IdealImage("tangent plane maps to an ideal point (n3 = -1)")
    h = -np.sum(n * fr.r, axis=-1)
    img = np.stack([n[..., 0] / w, n[..., 1] / w, h / w], axis=-1)
    if ua.ndim == 0 and va.ndim == 0:
        return IsoPoint.finite(float(img[0]), float(img[1]), float(img[2]))
    return img
