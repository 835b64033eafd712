"""Scalar fields F(x, y) with exact derivative jets, one class per family.

Graphs z = F(x, y) of biharmonic functions are the isotropic-model shadows
of L-minimal surfaces, so everything downstream (reconstruction, rulings,
verification) consumes these field objects.  Each family stores its
coefficient vector and hands out exact partial-derivative tables up to
order 4 through `jet`; the bilaplacian comes from the order-4 jet in closed
form, with a 13-point finite-difference stencil as an independent
cross-check.  Fields are frozen dataclasses: evaluation is pure and safe to
run over whole grids at once.

Multi-valued terms: only Arctan(y/x) carries the branch integer (value
plus branch*pi); the logarithm of x^2 + y^2 is single-valued off the
origin.  Evaluation inside the singular guard raises SingularPoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EmptyIntersection, SingularPoint
from .jets import (
    Jet,
    compose,
    jet_arctan_ratio,
    jet_log_rsq,
    jet_polynomial,
    jet_rsq,
    jet_xy,
)

# Default exclusion radius around singular loci.  Fourth derivatives of
# 1/(x^2+y^2) terms grow like r^-6, so anything much smaller than this
# produces garbage jets long before it produces infinities.
GUARD_EPS = 1e-6

# Circle/line restriction fits: deterministic equi-angular sampling.
FIT_SAMPLES = 50
LINE_SPAN = 3.0

# 13-point biharmonic stencil: (offset_x, offset_y, weight), center first.
_STENCIL = (
    (0, 0, 20),
    (1, 0, -8),
    (-1, 0, -8),
    (0, 1, -8),
    (0, -1, -8),
    (1, 1, 2),
    (1, -1, 2),
    (-1, 1, 2),
    (-1, -1, 2),
    (2, 0, 1),
    (-2, 0, 1),
    (0, 2, 1),
    (0, -2, 1),
)


def _nonzero(*vals) -> bool:
    return any(v != 0.0 for v in vals)


@dataclass(frozen=True)
class ScalarField:
    """Base class: guarded evaluation plus jet-derived differential helpers."""

    guard: float = field(default=GUARD_EPS, kw_only=True)
    branch: int = field(default=0, kw_only=True)

    family = "custom"

    def singular_centers(self):
        """Finite points excluded from the domain (with radius `guard`)."""
        return ()

    def is_safe(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        ok = np.ones(np.broadcast(x, y).shape, dtype=bool)
        g2 = self.guard * self.guard
        for cx, cy in self.singular_centers():
            ok = ok & ((x - cx) ** 2 + (y - cy) ** 2 >= g2)
        return ok

    def jet(self, x, y, order=4):
        x = np.asarray(x)
        y = np.asarray(y)
        ok = self.is_safe(x, y)
        if not np.all(ok):
            bad = int(np.sum(~np.atleast_1d(ok)))
            raise SingularPoint(
                "%d evaluation point(s) inside the %g singular guard of a %s field"
                % (bad, self.guard, self.family)
            )
        return self._jet(x, y, order)

    def _jet(self, x, y, order):
        raise NotImplementedError

    def value(self, x, y):
        return self.jet(x, y, 0).value[()]

    def gradient(self, x, y):
        j = self.jet(x, y, 1)
        return np.stack([j.entry(1, 0), j.entry(0, 1)], axis=-1)

    def laplacian(self, x, y):
        j = self.jet(x, y, 2)
        return (j.entry(2, 0) + j.entry(0, 2))[()]

    def bilaplacian(self, x, y):
        j = self.jet(x, y, 4)
        return (j.entry(4, 0) + 2.0 * j.entry(2, 2) + j.entry(0, 4))[()]

    def with_branch(self, k: int) -> "ScalarField":
        return replace(self, branch=int(k))

    def with_guard(self, eps: float) -> "ScalarField":
        return replace(self, guard=float(eps))


@dataclass(frozen=True)
class EllipticField(ScalarField):
    """(a1(x²+y²)+a2x+a3+a4y)·Arctan(y/x) + (b1y²+b2xy+b3x²)/(x²+y²)
    + c1y² + c2xy + c3x² + d1x + d2y.

    Restricted to any punctured line through the origin this is quadratic in
    the arclength parameter, which is the property that pins the family.
    """

    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0
    a4: float = 0.0
    b1: float = 0.0
    b2: float = 0.0
    b3: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    d1: float = 0.0
    d2: float = 0.0

    family = "elliptic"

    def singular_centers(self):
        if _nonzero(self.a1, self.a2, self.a3, self.a4, self.b1, self.b2, self.b3):
            return ((0.0, 0.0),)
        return ()

    def _jet(self, x, y, order):
        out = jet_polynomial(
            x,
            y,
            {
                (0, 2): self.c1,
                (1, 1): self.c2,
                (2, 0): self.c3,
                (1, 0): self.d1,
                (0, 1): self.d2,
            },
            order,
        )
        if _nonzero(self.a1, self.a2, self.a3, self.a4):
            factor = jet_polynomial(
                x,
                y,
                {
                    (2, 0): self.a1,
                    (0, 2): self.a1,
                    (1, 0): self.a2,
                    (0, 0): self.a3,
                    (0, 1): self.a4,
                },
                order,
            )
            out = out + factor * jet_arctan_ratio(x, y, order, self.branch)
        if _nonzero(self.b1, self.b2, self.b3):
            num = jet_polynomial(
                x, y, {(0, 2): self.b1, (1, 1): self.b2, (2, 0): self.b3}, order
            )
            out = out + num * jet_rsq(x, y, order).reciprocal()
        return out


@dataclass(frozen=True)
class HyperbolicField(ScalarField):
    """Fields linear on every circle centered at the origin.

    Reduced part: (a1(x²+y²)+a2x+a3)·ln(x²+y²) + (b1y+b2x)/(x²+y²)
    + (c1y+c2x)(x²+y²).  The alpha/beta/gamma vectors add the full radial
    solution bases a(r)cosφ, b(r)sinφ, c(r) with
    a(r) = α1·r + α2·r·ln(r) + α3/r + α4·r³ (same shape for b with β) and
    c(r) = γ1 + γ2·r² + γ3·ln(r) + γ4·r²·ln(r).
    """

    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0
    b1: float = 0.0
    b2: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0
    alpha4: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    beta3: float = 0.0
    beta4: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    gamma3: float = 0.0
    gamma4: float = 0.0

    family = "hyperbolic"

    def _log_coeffs(self):
        return {
            (2, 0): self.a1 + 0.5 * self.gamma4,
            (0, 2): self.a1 + 0.5 * self.gamma4,
            (1, 0): self.a2 + 0.5 * self.alpha2,
            (0, 1): 0.5 * self.beta2,
            (0, 0): self.a3 + 0.5 * self.gamma3,
        }

    def _inv_coeffs(self):
        return {(1, 0): self.b2 + self.alpha3, (0, 1): self.b1 + self.beta3}

    def singular_centers(self):
        if _nonzero(*self._log_coeffs().values()) or _nonzero(
            *self._inv_coeffs().values()
        ):
            return ((0.0, 0.0),)
        return ()

    def _jet(self, x, y, order):
        # In Cartesian form with rho^2 = x^2 + y^2 the whole family is
        # P0 + P1*ln(rho^2) + P2/rho^2 for three fixed polynomials.
        poly = {
            (3, 0): self.c2 + self.alpha4,
            (1, 2): self.c2 + self.alpha4,
            (2, 1): self.c1 + self.beta4,
            (0, 3): self.c1 + self.beta4,
            (1, 0): self.alpha1,
            (0, 1): self.beta1,
            (0, 0): self.gamma1,
            (2, 0): self.gamma2,
            (0, 2): self.gamma2,
        }
        out = jet_polynomial(x, y, poly, order)
        logc = self._log_coeffs()
        if _nonzero(*logc.values()):
            out = out + jet_polynomial(x, y, logc, order) * jet_log_rsq(x, y, order)
        invc = self._inv_coeffs()
        if _nonzero(*invc.values()):
            out = out + jet_polynomial(x, y, invc, order) * jet_rsq(
                x, y, order
            ).reciprocal()
        return out


@dataclass(frozen=True)
class ParabolicField(ScalarField):
    """a(x)·y² + b(x)·y + c(x) with cubic a, b and the quintic correction
    c(x) = γ0+γ1x+γ2x²+γ3x³ − α2x⁴/3 − α3x⁵/5 that kills the bilaplacian.

    Entire: restriction to any vertical line is exactly quadratic in y.
    """

    alpha0: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0
    beta0: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    beta3: float = 0.0
    gamma0: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    gamma3: float = 0.0

    family = "parabolic"

    def _jet(self, x, y, order):
        coeffs = {
            (0, 2): self.alpha0,
            (1, 2): self.alpha1,
            (2, 2): self.alpha2,
            (3, 2): self.alpha3,
            (0, 1): self.beta0,
            (1, 1): self.beta1,
            (2, 1): self.beta2,
            (3, 1): self.beta3,
            (0, 0): self.gamma0,
            (1, 0): self.gamma1,
            (2, 0): self.gamma2,
            (3, 0): self.gamma3,
            (4, 0): -self.alpha2 / 3.0,
            (5, 0): -self.alpha3 / 5.0,
        }
        return jet_polynomial(x, y, coeffs, order)


@dataclass(frozen=True)
class ExceptionalField(ScalarField):
    """A((x−a)²+(y−b)²) + (B(x−c)²+C(x−c)(y−d)+D(y−d)²)/((x−c)²+(y−d)²).

    Linear on every circle through (c, d); the one biharmonic shape that is
    linear on a two-parameter circle family rather than a pencil.
    """

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    A: float = 0.0
    B: float = 0.0
    C: float = 0.0
    D: float = 0.0

    family = "exceptional"

    def singular_centers(self):
        if _nonzero(self.B, self.C, self.D):
            return ((self.c, self.d),)
        return ()

    def _jet(self, x, y, order):
        out = jet_polynomial(
            x,
            y,
            {
                (2, 0): self.A,
                (0, 2): self.A,
                (1, 0): -2.0 * self.A * self.a,
                (0, 1): -2.0 * self.A * self.b,
                (0, 0): self.A * (self.a * self.a + self.b * self.b),
            },
            order,
        )
        if _nonzero(self.B, self.C, self.D):
            jx, jy = jet_xy(x, y, order)
            ju = jx - self.c
            jv = jy - self.d
            u2 = ju * ju
            v2 = jv * jv
            num = u2 * self.B + (ju * jv) * self.C + v2 * self.D
            out = out + num * (u2 + v2).reciprocal()
        return out


@dataclass(frozen=True)
class RootQuarticField(ScalarField):
    """sqrt((x²+y²)² − x² + 1): entire, linear on the circles
    x²+y²−tx−sqrt(t²−1) = 0 for t ≥ 1, and NOT biharmonic.

    Negative control showing that linearity on a mere one-parameter circle
    family (no three pairwise-independent members) proves nothing.
    """

    family = "remark-counterexample"

    def _jet(self, x, y, order):
        r2 = jet_rsq(x, y, order)
        jx, _ = jet_xy(x, y, order)
        return (r2 * r2 - jx * jx + 1.0).sqrt()


@dataclass(frozen=True)
class PolynomialField(ScalarField):
    """Plain polynomial sum coeffs[(i, j)]·x^i·y^j; entire."""

    coeffs: tuple = ()

    family = "polynomial"

    def _jet(self, x, y, order):
        return jet_polynomial(x, y, dict(self.coeffs), order)


@dataclass(frozen=True)
class SumField(ScalarField):
    """Weighted sum of other fields; guards accumulate."""

    terms: tuple = ()

    family = "custom-sum"

    def singular_centers(self):
        out = []
        for _, f in self.terms:
            out.extend(f.singular_centers())
        return tuple(out)

    def is_safe(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        ok = np.ones(np.broadcast(x, y).shape, dtype=bool)
        for _, f in self.terms:
            ok = ok & f.is_safe(x, y)
        return ok

    def _jet(self, x, y, order):
        out = None
        for w, f in self.terms:
            j = f.jet(x, y, order) * float(w)
            out = j if out is None else out + j
        if out is None:
            shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
            out = Jet.constant(np.zeros(shape), order)
        return out

    def with_branch(self, k: int) -> "SumField":
        return replace(
            self, terms=tuple((w, f.with_branch(k)) for w, f in self.terms)
        )


@dataclass(frozen=True)
class BumpField(ScalarField):
    """amplitude·(1 − ρ̂²)⁴ inside the disk of given radius, 0 outside,
    where ρ̂ is the distance to the center over the radius.  Compactly
    supported with continuous derivatives through order 3; entire enough
    for variation tests whose quadrature stays inside the support."""

    cx: float = 0.0
    cy: float = 0.0
    radius: float = 1.0
    amplitude: float = 1.0

    family = "custom"

    def _jet(self, x, y, order):
        jx, jy = jet_xy(x, y, order)
        du = jx - self.cx
        dv = jy - self.cy
        s = (du * du + dv * dv) * (1.0 / (self.radius * self.radius))
        q = 1.0 - s
        q2 = q * q
        out = q2 * q2 * self.amplitude
        inside = s.value < 1.0
        return Jet(out.d * inside, order)


@dataclass(frozen=True)
class KelvinField(ScalarField):
    """(x²+y²)·F(x/(x²+y²), y/(x²+y²)): the pushforward of F under
    inversion in the unit circle.  Exact jets by truncated-Taylor
    composition; involutive (applying twice restores F's values)."""

    inner: ScalarField = None

    family = "custom"

    def singular_centers(self):
        return ((0.0, 0.0),)

    def is_safe(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        r2 = x * x + y * y
        ok = r2 >= self.guard * self.guard
        safe = np.where(ok, r2, 1.0)
        return ok & self.inner.is_safe(x / safe, y / safe)

    def _jet(self, x, y, order):
        jx, jy = jet_xy(x, y, order)
        r2 = jx * jx + jy * jy
        inv = r2.reciprocal()
        ju = jx * inv
        jv = jy * inv
        fjet = self.inner.jet(ju.value, jv.value, order)
        return r2 * compose(fjet, ju, jv)

    def with_branch(self, k: int) -> "KelvinField":
        return replace(self, inner=self.inner.with_branch(k))


# -- constructors -----------------------------------------------------


def make_elliptic_field(
    a1=0.0,
    a2=0.0,
    a3=0.0,
    a4=0.0,
    b1=0.0,
    b2=0.0,
    b3=0.0,
    c1=0.0,
    c2=0.0,
    c3=0.0,
    d1=0.0,
    d2=0.0,
    *,
    guard=GUARD_EPS,
    branch=0,
) -> EllipticField:
    return EllipticField(
        a1, a2, a3, a4, b1, b2, b3, c1, c2, c3, d1, d2, guard=guard, branch=branch
    )


def make_hyperbolic_field(
    a1=0.0,
    a2=0.0,
    a3=0.0,
    b1=0.0,
    b2=0.0,
    c1=0.0,
    c2=0.0,
    alpha1=0.0,
    alpha2=0.0,
    alpha3=0.0,
    alpha4=0.0,
    beta1=0.0,
    beta2=0.0,
    beta3=0.0,
    beta4=0.0,
    gamma1=0.0,
    gamma2=0.0,
    gamma3=0.0,
    gamma4=0.0,
    *,
    guard=GUARD_EPS,
) -> HyperbolicField:
    return HyperbolicField(
        a1,
        a2,
        a3,
        b1,
        b2,
        c1,
        c2,
        alpha1,
        alpha2,
        alpha3,
        alpha4,
        beta1,
        beta2,
        beta3,
        beta4,
        gamma1,
        gamma2,
        gamma3,
        gamma4,
        guard=guard,
    )


def make_parabolic_field(
    alpha0=0.0,
    alpha1=0.0,
    alpha2=0.0,
    alpha3=0.0,
    beta0=0.0,
    beta1=0.0,
    beta2=0.0,
    beta3=0.0,
    gamma0=0.0,
    gamma1=0.0,
    gamma2=0.0,
    gamma3=0.0,
    *,
    guard=GUARD_EPS,
) -> ParabolicField:
    return ParabolicField(
        alpha0,
        alpha1,
        alpha2,
        alpha3,
        beta0,
        beta1,
        beta2,
        beta3,
        gamma0,
        gamma1,
        gamma2,
        gamma3,
        guard=guard,
    )


def make_exceptional_field(
    a=0.0, b=0.0, c=0.0, d=0.0, A=0.0, B=0.0, C=0.0, D=0.0, *, guard=GUARD_EPS
) -> ExceptionalField:
    return ExceptionalField(a, b, c, d, A, B, C, D, guard=guard)


def make_remark_counterexample(*, guard=GUARD_EPS) -> RootQuarticField:
    return RootQuarticField(guard=guard)


def make_polynomial_field(coeffs, *, guard=GUARD_EPS) -> PolynomialField:
    items = []
    for (p, q), cval in sorted(dict(coeffs).items()):
        p = int(p)
        q = int(q)
        if p < 0 or q < 0:
            raise ValueError("polynomial exponents must be non-negative")
        if cval != 0.0:
            items.append(((p, q), float(cval)))
    return PolynomialField(tuple(items), guard=guard)


def sum_fields(terms, *, guard=GUARD_EPS) -> SumField:
    return SumField(tuple((float(w), f) for w, f in terms), guard=guard)


def make_bump_field(center, radius, amplitude, *, guard=GUARD_EPS) -> BumpField:
    radius = float(radius)
    if radius <= 0.0:
        raise ValueError("bump radius must be positive")
    return BumpField(
        float(center[0]), float(center[1]), radius, float(amplitude), guard=guard
    )


def pushforward_inversion(F: ScalarField, *, guard=None) -> KelvinField:
    return KelvinField(inner=F, guard=F.guard if guard is None else float(guard))


# -- module-level evaluation helpers ----------------------------------


def eval_jet(F: ScalarField, x, y) -> Jet:
    """Order-4 jet of F at (x, y); SingularPoint inside the guard."""
    return F.jet(x, y, 4)


def bilaplacian(F: ScalarField, x, y):
    """F_xxxx + 2 F_xxyy + F_yyyy from the exact order-4 jet."""
    return F.bilaplacian(x, y)


def fd_bilaplacian(F: ScalarField, x, y, h):
    """13-point stencil estimate of the bilaplacian.

    Internally evaluates in extended precision: the stencil divides by h^4,
    so double-precision value noise alone would swamp the estimate for
    small h.  Center-value subtraction keeps the large cancelling sums
    tame.  Agrees with the exact bilaplacian to O(h^2) wherever F is smooth
    and single-valued across the whole stencil box; for Arctan-carrying
    fields keep the box clear of the value jump along x = 0.  On fields of
    polynomial degree five or less the stencil is exact and the residual is
    pure rounding.
    """
    x = np.asarray(x, dtype=np.longdouble)
    y = np.asarray(y, dtype=np.longdouble)
    h = np.longdouble(h)
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)) or h <= 0:
        raise ValueError("fd_bilaplacian needs finite points and h > 0")
    reach = 2.0 * math.sqrt(2.0) * float(h) + F.guard
    for cx, cy in F.singular_centers():
        if np.any((x - cx) ** 2 + (y - cy) ** 2 <= reach * reach):
            raise SingularPoint("stencil box overlaps a singular locus")
    xs = np.stack([x + np.longdouble(dx) * h for dx, _, _ in _STENCIL])
    ys = np.stack([y + np.longdouble(dy) * h for _, dy, _ in _STENCIL])
    vals = F.jet(xs, ys, 0).value
    diff = vals - vals[0]
    w = np.array([wt for _, _, wt in _STENCIL], dtype=np.longdouble)
    w = w.reshape((len(_STENCIL),) + (1,) * x.ndim)
    est = np.sum(w * diff, axis=0) / h**4
    return np.asarray(est, dtype=float)[()]


def restrict_to_circle(F: ScalarField, S, degree: int = 1):
    """RMS residual of fitting F on the cycle S by low-degree models.

    On a genuine circle: degree 1 fits {1, x, y} (what "linear on the
    circle" means, since x²+y² is affine there), degree 2 adds the
    second circle harmonics.  On a line cycle: polynomial of the given
    degree in the arclength parameter.  Deterministic sampling, 50 points,
    guarded points skipped; EmptyIntersection when nothing survives.
    """
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    a = float(S.a)
    b = float(S.b)
    c = float(S.c)
    d = float(S.d)
    scale = max(abs(b), abs(c), 1.0)
    if abs(a) <= 1e-12 * scale:
        nrm = math.hypot(b, c)
        if nrm <= 1e-12:
            raise EmptyIntersection("cycle has no locus")
        px = -d * b / (nrm * nrm)
        py = -d * c / (nrm * nrm)
        s = np.linspace(-LINE_SPAN, LINE_SPAN, FIT_SAMPLES)
        xs = px + s * (c / nrm)
        ys = py - s * (b / nrm)
        cols = [np.ones_like(s), s]
        if degree == 2:
            cols.append(s * s)
    else:
        disc = b * b + c * c - 4.0 * a * d
        if disc <= 0.0:
            raise EmptyIntersection("cycle has empty or point locus")
        cx = -b / (2.0 * a)
        cy = -c / (2.0 * a)
        rad = math.sqrt(disc) / (2.0 * abs(a))
        t = np.arange(FIT_SAMPLES) * (2.0 * math.pi / FIT_SAMPLES)
        xs = cx + rad * np.cos(t)
        ys = cy + rad * np.sin(t)
        cols = [np.ones_like(t), xs, ys]
        if degree == 2:
            cols.extend([np.cos(2.0 * t), np.sin(2.0 * t)])
    keep = F.is_safe(xs, ys)
    if not np.any(keep):
        raise EmptyIntersection("all cycle samples fall inside the singular guard")
    design = np.column_stack([col[keep] for col in cols])
    vals = np.asarray(F.value(xs[keep], ys[keep]), dtype=float)
    coef, _, _, _ = np.linalg.lstsq(design, vals, rcond=None)
    resid = vals - design @ coef
    return float(np.sqrt(np.mean(resid * resid)))


def reduce_elliptic_field(F: EllipticField):
    """Normalize an elliptic field to the five-coefficient reduced shape.

    Returns (reduced, psi, removed) with the exact identity
    F(R(-psi)·p) = reduced(p) + removed["rsq"]·(x²+y²)
    + removed["x"]·x + removed["y"]·y + removed["const"].
    The rotation angle psi kills the a4 coefficient; the removed pieces are
    exactly the ones a motion of the ambient model can absorb.  When
    a2 = a4 = 0 any psi works and 0 is chosen (the normal form is not
    canonical there).
    """
    psi = -math.atan2(F.a4, F.a2) if _nonzero(F.a2, F.a4) else 0.0
    cs, sn = math.cos(psi), math.sin(psi)
    rot = np.array([[cs, -sn], [sn, cs]])
    a2r = F.a2 * cs - F.a4 * sn
    qb = np.array([[F.b3, 0.5 * F.b2], [0.5 * F.b2, F.b1]])
    qc = np.array([[F.c3, 0.5 * F.c2], [0.5 * F.c2, F.c1]])
    qb = rot @ qb @ rot.T
    qc = rot @ qc @ rot.T
    dvec = rot @ np.array([F.d1, F.d2])
    b1r, b2r, b3r = qb[1, 1], 2.0 * qb[0, 1], qb[0, 0]
    c1r, c2r, c3r = qc[1, 1], 2.0 * qc[0, 1], qc[0, 0]
    # Rotating the Arctan shifts its value by -psi, which spills the
    # multiplier polynomial into removable pieces.
    reduced = EllipticField(
        a1=F.a1,
        a2=a2r,
        a3=F.a3,
        b1=b1r - b3r,
        b2=b2r,
        c1=c1r - c3r,
        c2=c2r,
        guard=F.guard,
        branch=F.branch,
    )
    removed = {
        "rsq": c3r - psi * F.a1,
        "x": dvec[0] - psi * a2r,
        "y": dvec[1],
        "const": b3r - psi * F.a3,
    }
    return reduced, psi, removed
