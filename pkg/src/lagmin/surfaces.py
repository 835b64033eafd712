"""The concrete surface zoo.

Closed-form building blocks r1..r11 in Gauss coordinates (the stereographic
top view of the unit normal is the parameter point), their rotated copies,
reconstruction-defined tilde variants, convolution surfaces, the ruled
family R(phi, lambda) = (A phi, B phi, C phi + D cos 2 phi) + lambda
(sin phi, cos phi, 0), kinematic ruling families, and cone families
represented as lines in the space of oriented spheres (center, signed
radius) in R^4.

Block derivatives come from the same exact-jet arithmetic the fields use,
so frames are closed-form everywhere they are defined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateCone,
    DegenerateFamily,
    DomainMismatch,
    UnknownName,
)
from .fields import (
    EllipticField,
    HyperbolicField,
    ScalarField,
    make_polynomial_field,
)
from .jets import Jet, jet_arctan_ratio, jet_log_rsq, jet_polynomial, jet_xy
from .geom_core import OrientedSphere
from .reconstruct import (
    FieldSurface,
    GaussMappedSurface,
    ParamSurface,
    SurfaceJet,
)

SQRT2 = math.sqrt(2.0)
BLOCK_GUARD = 1e-6


def _assemble(X, Y, Z, order) -> SurfaceJet:
    def pick(i, j):
        return np.stack([X.entry(i, j), Y.entry(i, j), Z.entry(i, j)], axis=-1)

    out = SurfaceJet(r=pick(0, 0))
    if order >= 1:
        out.ru = pick(1, 0)
        out.rv = pick(0, 1)
    if order >= 2:
        out.ruu = pick(2, 0)
        out.ruv = pick(1, 1)
        out.rvv = pick(0, 2)
    return out


# -- closed-form component builders (u, v are Gauss coordinates) ------


def _b_r1(u, v, order):
    ju, jv = jet_xy(u, v, order)
    ir2 = (ju * ju + jv * jv).reciprocal()
    atn = jet_arctan_ratio(u, v, order)
    return jv - jv * ir2, ju * ir2 - ju, atn * 2.0


def _b_r2(u, v, order):
    ju, jv = jet_xy(u, v, order)
    ir2 = (ju * ju + jv * jv).reciprocal()
    atn = jet_arctan_ratio(u, v, order)
    return ju * jv * ir2 - atn, jv * jv * ir2, jet_polynomial(u, v, {}, order)


def _b_r3(u, v, order):
    ju, jv = jet_xy(u, v, order)
    ir2 = (ju * ju + jv * jv).reciprocal()
    pref = ju * jv * ir2
    # the z-component u^2/(u^2+v^2) is the (u/v)-form with the v=0
    # singularity cancelled
    return (jv * ir2 - jv) * pref, (ju - ju * ir2) * pref, ju * ju * ir2


def _b_r4(u, v, order):
    ju, jv = jet_xy(u, v, order)
    ir2 = (ju * ju + jv * jv).reciprocal()
    return ju + ju * ir2, jv + jv * ir2, jet_log_rsq(u, v, order)


def _b_r5(u, v, order):
    ju, jv = jet_xy(u, v, order)
    g = 1.0 - (ju * ju + jv * jv).reciprocal()
    X = (ju * ju - jv * jv) * g - jet_log_rsq(u, v, order)
    return X, ju * jv * g * 2.0, ju * 4.0


def _b_r6(u, v, order):
    ju, jv = jet_xy(u, v, order)
    g = 1.0 - (ju * ju + jv * jv).reciprocal()
    g2 = g * g
    return (ju * ju - jv * jv) * g2, ju * jv * g2 * 2.0, ju * g * 4.0


def _rational(numx, numy, numz):
    def build(u, v, order):
        ju, jv = jet_xy(u, v, order)
        w = (ju * ju + jv * jv + 1.0).reciprocal()
        return (
            jet_polynomial(u, v, numx, order) * w,
            jet_polynomial(u, v, numy, order) * w,
            jet_polynomial(u, v, numz, order) * w,
        )

    return build


_b_r7 = _rational({(1, 0): -1.0, (1, 2): -1.0}, {(2, 1): 1.0}, {(2, 0): 1.0})
_b_r8 = _rational(
    {(4, 0): 1.0, (2, 2): -3.0, (2, 0): -3.0}, {(3, 1): 4.0}, {(3, 0): 4.0}
)
_b_r9 = _rational(
    {(3, 1): 2.0, (1, 3): -2.0, (1, 1): -2.0},
    {(2, 2): 3.0, (4, 0): -1.0, (2, 0): -1.0},
    {(2, 1): 4.0},
)
_b_r10 = _rational(
    {(5, 0): 1.0, (3, 0): -2.0, (3, 2): -8.0, (1, 2): 3.0, (1, 4): 3.0},
    {(2, 1): 3.0, (4, 1): 6.0, (2, 3): -6.0},
    {(4, 0): 3.0, (2, 2): -9.0},
)
_b_r11 = _rational(
    {(6, 0): 3.0, (4, 0): -5.0, (4, 2): -30.0, (2, 2): 15.0, (2, 4): 15.0},
    {(3, 1): 10.0, (5, 1): 18.0, (3, 3): -30.0},
    {(5, 0): 8.0, (3, 2): -40.0},
)


class BlockSurface(GaussMappedSurface):
    """Closed-form building block evaluated through exact jets."""

    def __init__(self, name, builder, origin_guard=False, ring_guard=False,
                 immersed=True, window=(-2.0, 2.0, -2.0, 2.0)):
        self.name = name
        self.provenance = name
        self._builder = builder
        self._origin_guard = origin_guard
        self._ring_guard = ring_guard
        self.immersed = immersed
        self.default_window = window
        self.guard = BLOCK_GUARD

    def is_safe(self, u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        ok = np.ones(np.broadcast(u, v).shape, dtype=bool)
        r2 = u * u + v * v
        if self._origin_guard:
            ok = ok & (r2 >= self.guard * self.guard)
        if self._ring_guard:
            ok = ok & (np.abs(np.sqrt(r2) - 1.0) >= self.guard)
        return ok

    def frame(self, u, v, order=2) -> SurfaceJet:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        X, Y, Z = self._builder(u, v, order)
        return _assemble(X, Y, Z, order)


class RotatedSurface(GaussMappedSurface):
    """theta-rotated copy: r(u,v) = R_theta base(R_{-theta}(u,v)), where
    R_theta is the counterclockwise rotation about the z axis."""

    def __init__(self, base: ParamSurface, theta: float):
        self.base = base
        self.theta = float(theta)
        self.provenance = "%s@theta=%g" % (base.provenance, self.theta)
        self.immersed = base.immersed
        self.default_window = base.default_window

    def _params(self, u, v):
        c, s = math.cos(self.theta), math.sin(self.theta)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return c * u + s * v, -s * u + c * v, c, s

    def is_safe(self, u, v):
        s0, t0, _, _ = self._params(u, v)
        return self.base.is_safe(s0, t0)

    def frame(self, u, v, order=2) -> SurfaceJet:
        s0, t0, c, s = self._params(u, v)
        bf = self.base.frame(s0, t0, order)

        def rot(vec):
            if vec is None:
                return None
            out = np.empty_like(vec)
            out[..., 0] = c * vec[..., 0] - s * vec[..., 1]
            out[..., 1] = s * vec[..., 0] + c * vec[..., 1]
            out[..., 2] = vec[..., 2]
            return out

        out = SurfaceJet(r=rot(bf.r))
        if order >= 1:
            out.ru = rot(c * bf.ru - s * bf.rv)
            out.rv = rot(s * bf.ru + c * bf.rv)
        if order >= 2:
            ruu = c * c * bf.ruu - 2.0 * c * s * bf.ruv + s * s * bf.rvv
            ruv = c * s * bf.ruu + (c * c - s * s) * bf.ruv - c * s * bf.rvv
            rvv = s * s * bf.ruu + 2.0 * c * s * bf.ruv + c * c * bf.rvv
            out.ruu = rot(ruu)
            out.ruv = rot(ruv)
            out.rvv = rot(rvv)
        return out


class ConvolutionSurface(GaussMappedSurface):
    """Pointwise weighted sum of Gauss-coordinate surfaces."""

    def __init__(self, terms):
        self.terms = tuple((float(w), s) for w, s in terms)
        self.provenance = "convolution(%s)" % ", ".join(
            "%g*%s" % (w, s.provenance) for w, s in self.terms
        )
        lo_u = max(s.default_window[0] for _, s in self.terms)
        hi_u = min(s.default_window[1] for _, s in self.terms)
        lo_v = max(s.default_window[2] for _, s in self.terms)
        hi_v = min(s.default_window[3] for _, s in self.terms)
        if lo_u >= hi_u or lo_v >= hi_v:
            raise DomainMismatch("convolution terms have no common window")
        self.default_window = (lo_u, hi_u, lo_v, hi_v)
        gu = np.linspace(lo_u, hi_u, 25)
        gv = np.linspace(lo_v, hi_v, 25)
        uu, vv = np.meshgrid(gu, gv)
        if not np.any(self.is_safe(uu, vv)):
            raise DomainMismatch("convolution terms share no safe domain")

    def is_safe(self, u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        ok = np.ones(np.broadcast(u, v).shape, dtype=bool)
        for _, s in self.terms:
            ok = ok & s.is_safe(u, v)
        return ok

    def frame(self, u, v, order=2) -> SurfaceJet:
        out = None
        for w, s in self.terms:
            fr = s.frame(u, v, order)
            if out is None:
                out = SurfaceJet(
                    r=w * fr.r,
                    ru=None if fr.ru is None else w * fr.ru,
                    rv=None if fr.rv is None else w * fr.rv,
                    ruu=None if fr.ruu is None else w * fr.ruu,
                    ruv=None if fr.ruv is None else w * fr.ruv,
                    rvv=None if fr.rvv is None else w * fr.rvv,
                )
            else:
                out.r = out.r + w * fr.r
                if order >= 1:
                    out.ru = out.ru + w * fr.ru
                    out.rv = out.rv + w * fr.rv
                if order >= 2:
                    out.ruu = out.ruu + w * fr.ruu
                    out.ruv = out.ruv + w * fr.ruv
                    out.rvv = out.rvv + w * fr.rvv
        if out is None:
            raise DomainMismatch("empty convolution")
        return out


def convolve(terms) -> ConvolutionSurface:
    return ConvolutionSurface(terms)


class RuledPatch(ParamSurface):
    """(A phi, B phi, C phi + D cos 2 phi) + lambda (sin phi, cos phi, 0).

    Parameters are (phi, lambda).  C = D = 0 is allowed but flagged: those
    patches fall outside the minimal ruled family.
    """

    def __init__(self, A, B, C, D):
        self.A = float(A)
        self.B = float(B)
        self.C = float(C)
        self.D = float(D)
        self.degenerate = self.C == 0.0 and self.D == 0.0
        self.provenance = "ruled(%g,%g,%g,%g)" % (self.A, self.B, self.C, self.D)
        self.default_window = (-math.pi, math.pi, -2.0, 2.0)

    def ruling(self, phi):
        phi = np.asarray(phi, dtype=float)
        zero = np.zeros_like(phi)
        point = np.stack(
            [self.A * phi, self.B * phi, self.C * phi + self.D * np.cos(2 * phi)],
            axis=-1,
        )
        direction = np.stack([np.sin(phi), np.cos(phi), zero], axis=-1)
        return point, direction

    def frame(self, phi, lam, order=2) -> SurfaceJet:
        phi = np.asarray(phi, dtype=float)
        lam = np.asarray(lam, dtype=float)
        phi, lam = np.broadcast_arrays(phi, lam)
        sn, cs = np.sin(phi), np.cos(phi)
        zero = np.zeros_like(phi)
        out = SurfaceJet(
            r=np.stack(
                [
                    self.A * phi + lam * sn,
                    self.B * phi + lam * cs,
                    self.C * phi + self.D * np.cos(2 * phi),
                ],
                axis=-1,
            )
        )
        if order >= 1:
            out.ru = np.stack(
                [
                    self.A + lam * cs,
                    self.B - lam * sn,
                    self.C - 2.0 * self.D * np.sin(2 * phi),
                ],
                axis=-1,
            )
            out.rv = np.stack([sn, cs, zero], axis=-1)
        if order >= 2:
            out.ruu = np.stack(
                [-lam * sn, -lam * cs, -4.0 * self.D * np.cos(2 * phi)], axis=-1
            )
            out.ruv = np.stack([cs, -sn, zero], axis=-1)
            out.rvv = np.zeros(phi.shape + (3,))
        return out


def ruled_surface(A, B, C, D) -> RuledPatch:
    return RuledPatch(A, B, C, D)


# -- building-block registry ------------------------------------------

_CLOSED_BLOCKS = {
    "r1": dict(builder=_b_r1, origin_guard=True),
    "r2": dict(builder=_b_r2, origin_guard=True, immersed=False),
    "r3": dict(builder=_b_r3, origin_guard=True),
    "r4": dict(builder=_b_r4, origin_guard=True),
    "r5": dict(builder=_b_r5, origin_guard=True, ring_guard=True),
    "r6": dict(builder=_b_r6, origin_guard=True, ring_guard=True),
    "r7": dict(builder=_b_r7),
    "r8": dict(builder=_b_r8),
    "r9": dict(builder=_b_r9),
    "r10": dict(builder=_b_r10),
    "r11": dict(builder=_b_r11),
}

_TILDE_NAMES = ("r1~", "r3~", "r4~", "r6~")

BLOCK_NAMES = tuple(_CLOSED_BLOCKS) + _TILDE_NAMES

_K3T = 1.0 / (4.0 * SQRT2)
_LN2 = math.log(2.0)


def block_field(name: str, theta: float = 0.0) -> ScalarField:
    """The scalar field whose reconstruction is the named block (rotated by
    theta where the family admits a closed coefficient form)."""
    c, s = math.cos(theta), math.sin(theta)
    if name == "r1":
        f = EllipticField(a1=1.0, a3=-1.0)
        needs_zero_theta = True
    elif name == "r2":
        # x*Arctan(y/x) - y; traces the cycloid point locus
        f = EllipticField(a2=1.0, d2=-1.0)
        needs_zero_theta = True
    elif name == "r3":
        f = EllipticField(
            c1=0.5 * s * s, c2=c * s, c3=0.5 * c * c,
            b1=-0.5 * s * s, b2=-c * s, b3=-0.5 * c * c,
        )
        needs_zero_theta = False
    elif name == "r4":
        f = HyperbolicField(gamma1=-1.0, gamma2=-1.0, gamma3=-1.0, gamma4=1.0)
        needs_zero_theta = True
    elif name == "r5":
        f = HyperbolicField(a2=1.0, c2=1.0, alpha1=-1.0)
        needs_zero_theta = True
    elif name == "r6":
        f = HyperbolicField(
            b1=s, b2=c, c1=s, c2=c, alpha1=-2.0 * c, beta1=-2.0 * s
        )
        needs_zero_theta = False
    elif name == "r7":
        f = make_polynomial_field({(2, 0): 0.5 * c * c, (1, 1): c * s, (0, 2): 0.5 * s * s})
        needs_zero_theta = False
    elif name == "r8":
        f = make_polynomial_field({(3, 0): 1.0})
        needs_zero_theta = True
    elif name == "r9":
        # x^2 y composed with the rotation by -theta
        f = make_polynomial_field(
            {
                (3, 0): -c * c * s,
                (2, 1): c * c * c - 2.0 * c * s * s,
                (1, 2): 2.0 * c * c * s - s * s * s,
                (0, 3): c * s * s,
            }
        )
        needs_zero_theta = False
    elif name == "r10":
        f = make_polynomial_field({(4, 0): 0.5, (2, 2): -1.5})
        needs_zero_theta = True
    elif name == "r11":
        f = make_polynomial_field({(5, 0): 1.0, (3, 2): -5.0})
        needs_zero_theta = True
    elif name == "r1~":
        f = EllipticField(a1=1.0 / (2.0 * SQRT2), a3=-1.0 / SQRT2)
        needs_zero_theta = True
    elif name == "r3~":
        f = EllipticField(
            c1=s * s * _K3T, c2=2.0 * c * s * _K3T, c3=c * c * _K3T,
            b1=-2.0 * s * s * _K3T, b2=-4.0 * c * s * _K3T, b3=-2.0 * c * c * _K3T,
        )
        needs_zero_theta = False
    elif name == "r4~":
        f = HyperbolicField(
            gamma1=(_LN2 - 2.0) / (2.0 * SQRT2),
            gamma2=-(2.0 + _LN2) / (4.0 * SQRT2),
            gamma3=-1.0 / SQRT2,
            gamma4=1.0 / (2.0 * SQRT2),
        )
        needs_zero_theta = True
    elif name == "r6~":
        f = HyperbolicField(
            b1=s, b2=c, c1=0.25 * s, c2=0.25 * c, alpha1=-c, beta1=-s
        )
        needs_zero_theta = True
    else:
        raise UnknownName("no field for building block %r" % (name,))
    if needs_zero_theta and theta != 0.0:
        raise UnknownName(
            "block %r has no closed rotated field; rotate the surface instead"
            % (name,)
        )
    return f


def building_block(name: str, theta: float = None) -> ParamSurface:
    """Closed-form block by name; tilde variants are reconstructions of
    their fields (they have no standalone closed form)."""
    if name in _CLOSED_BLOCKS:
        surf = BlockSurface(name, **_CLOSED_BLOCKS[name])
    elif name in _TILDE_NAMES:
        surf = FieldSurface(block_field(name))
        surf.provenance = name
        surf.name = name
    else:
        raise UnknownName("unknown building block %r" % (name,))
    if theta is not None and theta != 0.0:
        surf = RotatedSurface(surf, theta)
    return surf


# -- cone families as lines of oriented spheres -----------------------


@dataclass(frozen=True, eq=False)
class CycloLine:
    """A cone of revolution as a line lam -> (m, R) + lam*dir in the space
    of oriented spheres (center, signed radius)."""

    base: np.ndarray
    dir: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        object.__setattr__(self, "dir", np.asarray(self.dir, dtype=float))
        if self.base.shape != (4,) or self.dir.shape != (4,):
            raise ValueError("cone lines live in R^4")
        if float(np.linalg.norm(self.dir)) == 0.0:
            raise DegenerateCone("cone line needs a nonzero direction")

    def sphere(self, lam: float) -> OrientedSphere:
        p = self.base + float(lam) * self.dir
        return OrientedSphere(m=p[:3], r=float(p[3]))


def cone_spheres(L: CycloLine, samples: int):
    """Oriented spheres inscribed in the cone, lam in [0, 1] equispaced."""
    return [L.sphere(t) for t in np.linspace(0.0, 1.0, int(samples))]


class RulingFamily:
    """phi -> ruling line of the convolution a1*r1 + a2*r2 + a3*r3@theta.

    The three kinematic generators share the direction (sin phi, cos phi, 0)
    once the rotated conoid term is sampled at phi + theta; the base point
    is the weighted sum of the generator base points.
    """

    def __init__(self, a1, a2, a3, theta=0.0):
        self.a = (float(a1), float(a2), float(a3))
        self.theta = float(theta)
        # with only the cycloid term the lines still exist (tangent lines
        # of the cycloid) but they do not rule an immersed surface
        self.degenerate = a1 == 0.0 and a3 == 0.0

    def line(self, phi):
        phi = np.asarray(phi, dtype=float)
        a1, a2, a3 = self.a
        point = np.stack(
            [
                a2 * phi,
                a2 * np.ones_like(phi),
                -2.0 * a1 * phi + 0.5 * a3 * (np.cos(2.0 * (phi + self.theta)) + 1.0),
            ],
            axis=-1,
        )
        direction = np.stack(
            [np.sin(phi), np.cos(phi), np.zeros_like(phi)], axis=-1
        )
        return point, direction

    def cyclo_line(self, phi: float) -> CycloLine:
        point, direction = self.line(float(phi))
        return CycloLine(np.append(point, 0.0), np.append(direction, 0.0))

    def gauss_point(self, phi, s):
        """Parameter-plane point at radius s on the Gauss line of phi."""
        phi = np.asarray(phi, dtype=float)
        s = np.asarray(s, dtype=float)
        return s * np.cos(phi), -s * np.sin(phi)

    def surface(self) -> ConvolutionSurface:
        if self.degenerate:
            raise DegenerateFamily(
                "need a helicoid or conoid term for an immersed ruled surface"
            )
        a1, a2, a3 = self.a
        conoid = building_block("r3", self.theta if self.theta else None)
        return convolve(
            [
                (a1, building_block("r1")),
                (a2, building_block("r2")),
                (a3, conoid),
            ]
        )


def rulings_of_convolution(a1, a2, a3, theta=0.0) -> RulingFamily:
    return RulingFamily(a1, a2, a3, theta)


# -- cyclographic preimages -------------------------------------------


def _lines_elliptic(coeffs):
    A, B, C, D, E, F, G = coeffs

    def fn(p):
        return (
            np.array(
                [
                    A * p,
                    B * p,
                    C * p + D * math.cos(2 * p),
                    E * p + F * math.cos(2 * p) + G * math.sin(2 * p),
                ]
            ),
            np.array([math.sin(p), math.cos(p), 0.0, 0.0]),
        )

    return fn

def _lines_hyperbolic(coeffs):
    A, B, C, D, E, F, G = coeffs

    def fn(p):
        return (
            np.array(
                [
                    A * p + B * math.cosh(2 * p),
                    C * p + D * math.cosh(2 * p) + E * math.sinh(2 * p),
                    F * p,
                    G * p,
                ]
            ),
            np.array([0.0, 0.0, math.cosh(p), math.sinh(p)]),
        )

    return fn

def _lines_parabolic(coeffs):
    A, B, C, D, E, F, G = coeffs

    def fn(p):
        even = F * (3 * p**2 + 4 * p**4) + G * (5 * p**3 + 6 * p**5)
        odd = F * (3 * p**2 - 4 * p**4) + G * (5 * p**3 - 6 * p**5)
        return (
            np.array(
                [
                    0.0,
                    A * p + B * p**2,
                    C * p + D * p**2 + E * p**3 + even,
                    C * p - D * p**2 - E * p**3 + odd,
                ]
            ),
            np.array([1.0, 0.0, -p, p]),
        )

    return fn


_PREIMAGES = {
    "R1": lambda p: (
        np.array([0.0, 0.0, -2.0 * p, 0.0]),
        np.array([math.sin(p), math.cos(p), 0.0, 0.0]),
    ),
    "R2": lambda p: (
        np.array([p, 1.0, 0.0, 0.0]),
        np.array([math.sin(p), math.cos(p), 0.0, 0.0]),
    ),
    "R3": lambda p: (
        np.array([0.0, 0.0, 0.5 * (math.cos(2 * p) + 1.0), 0.0]),
        np.array([math.sin(p), math.cos(p), 0.0, 0.0]),
    ),
    "R4": lambda p: (
        np.array([0.0, 0.0, -2.0 * p, -2.0]),
        np.array([0.0, 0.0, math.cosh(p), math.sinh(p)]),
    ),
    "R5": lambda p: (
        np.array([1.0 - math.exp(-2.0 * p) + 2.0 * p, 0.0, 0.0, 0.0]),
        np.array([0.0, 0.0, math.cosh(p), math.sinh(p)]),
    ),
    "R6": lambda p: (
        np.array([2.0 - 2.0 * math.cosh(2.0 * p), 0.0, 0.0, 0.0]),
        np.array([0.0, 0.0, math.cosh(p), math.sinh(p)]),
    ),
    "R7": lambda p: (
        np.array([0.0, 0.0, -0.5 * p * p, 0.5 * p * p]),
        np.array([1.0, 0.0, -p, p]),
    ),
    "R7b": lambda p: (
        np.array([0.0, 0.0, 0.5 * math.cos(p) ** 2, 0.5 * math.cos(p) ** 2]),
        np.array([math.sin(p), math.cos(p), 0.0, 0.0]),
    ),
    "R8": lambda p: (
        np.array([0.0, 0.0, -p**3, p**3]),
        np.array([1.0, 0.0, -p, p]),
    ),
    "R9": lambda p: (
        np.array([0.0, -p * p, 0.0, 0.0]),
        np.array([1.0, 0.0, -p, p]),
    ),
    "R9b": lambda p: (
        np.array([0.0, 0.0, p + p**3, p - p**3]),
        np.array([0.0, 1.0, -p, p]),
    ),
    "R10": lambda p: (
        np.array(
            [0.0, 0.0, 0.5 * (-3 * p**2 - 4 * p**4), 0.5 * (-3 * p**2 + 4 * p**4)]
        ),
        np.array([1.0, 0.0, -p, p]),
    ),
    "R11": lambda p: (
        np.array([0.0, 0.0, -5 * p**3 - 6 * p**5, -5 * p**3 + 6 * p**5]),
        np.array([1.0, 0.0, -p, p]),
    ),
    "R1~": lambda p: (
        np.array([0.0, 0.0, -3.0 * p, p]) / (2.0 * SQRT2),
        np.array([math.sin(p), math.cos(p), 0.0, 0.0]),
    ),
    "R3~": lambda p: (
        np.array(
            [0.0, 0.0, 3.0 * math.cos(p) ** 2, -math.cos(p) ** 2]
        )
        / (4.0 * SQRT2),
        np.array([math.sin(p), math.cos(p), 0.0, 0.0]),
    ),
}

_FAMILY_KINDS = {
    "elliptic": _lines_elliptic,
    "hyperbolic": _lines_hyperbolic,
    "parabolic": _lines_parabolic,
}


@dataclass(frozen=True, eq=False)
class PreimageFamily:
    """phi -> cone line; either a named example or a coefficient family."""

    name: str
    fn: object = field(repr=False)

    def line(self, phi: float) -> CycloLine:
        base, direction = self.fn(float(phi))
        return CycloLine(base, direction)

    def __call__(self, phi: float) -> CycloLine:
        return self.line(phi)


def cyclographic_preimage(spec) -> PreimageFamily:
    """Named cone family ("R1".."R11", "R7b", "R9b", "R1~", "R3~") or a
    (kind, coefficients) pair with kind in {elliptic, hyperbolic,
    parabolic} and seven coefficients A..G."""
    if isinstance(spec, str):
        if spec not in _PREIMAGES:
            raise UnknownName("unknown cyclographic preimage %r" % (spec,))
        return PreimageFamily(spec, _PREIMAGES[spec])
    kind, coeffs = spec
    if kind not in _FAMILY_KINDS:
        raise UnknownName("unknown cone-family kind %r" % (kind,))
    coeffs = tuple(float(c) for c in coeffs)
    if len(coeffs) != 7:
        raise ValueError("cone families take seven coefficients A..G")
    return PreimageFamily("%s%s" % (kind, coeffs), _FAMILY_KINDS[kind](coeffs))
