"""Circles as cycles, pencil classification, and the recovery fits.

A cycle is the coefficient vector (a, b, c, d) of
a(x^2+y^2) + bx + cy + d = 0, so lines (a = 0) live in the same
4-dimensional space as circles.  The inversive quadratic form
Q = b^2 + c^2 - 4ad separates genuine circles (Q > 0) from
point-circles (Q = 0) and imaginary ones (Q < 0), and a family of
cycles is a pencil exactly when its coefficient matrix has rank 2.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadFit,
    DegenerateCone,
    DependentCircles,
    NoCommonPoint,
    NotLinearOnCircle,
    PencilDegeneracy,
    TooFew,
)

RANK_TOL = 1e-9          # singular value ratio declaring rank deficiency
DISC_TOL = 1e-9          # relative discriminant size treated as a double root
LINEAR_TOL = 1e-8        # max residual for "restriction is linear"
CENTER_TOL = 1e-9        # linearity residual in center_constraint_check
COMMON_TOL = 1e-8        # consensus radius for the common-point vote
TINY = 1e-12


@dataclass(frozen=True)
class Cycle:
    """Solution set of a(x^2+y^2) + bx + cy + d = 0."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a == 0.0 and self.b == 0.0 and self.c == 0.0 and self.d == 0.0:
            raise ValueError("cycle coefficients must not all vanish")

    def vec(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=float)

    def q(self) -> float:
        """Inversive quadratic form b^2 + c^2 - 4ad."""
        return self.b * self.b + self.c * self.c - 4.0 * self.a * self.d

    @property
    def is_line(self) -> bool:
        return self.a == 0.0

    def is_circle(self) -> bool:
        return self.a != 0.0 and self.q() > 0.0

    def evaluate(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.a * (x * x + y * y) + self.b * x + self.c * y + self.d

    def center(self):
        if self.a == 0.0:
            raise ValueError("a line has no center")
        return (-self.b / (2.0 * self.a), -self.c / (2.0 * self.a))

    def radius(self) -> float:
        qv = self.q()
        if self.a == 0.0 or qv < 0.0:
            raise ValueError("not a real circle")
        return float(np.sqrt(qv) / (2.0 * abs(self.a)))

    def canonical(self) -> "Cycle":
        """Scale so the first nonzero of (a, b, c) is +1 (or d = 1)."""
        for lead in (self.a, self.b, self.c, self.d):
            if lead != 0.0:
                return Cycle(self.a / lead, self.b / lead, self.c / lead, self.d / lead)
        raise ValueError("cycle coefficients must not all vanish")

    @classmethod
    def from_circle(cls, center, radius) -> "Cycle":
        cx, cy = float(center[0]), float(center[1])
        r = float(radius)
        return cls(1.0, -2.0 * cx, -2.0 * cy, cx * cx + cy * cy - r * r)


def q_bilinear(u, w) -> float:
    """Polarization of the inversive form on coefficient 4-vectors."""
    return float(u[1] * w[1] + u[2] * w[2] - 2.0 * (u[0] * w[3] + u[3] * w[0]))


@dataclass(frozen=True)
class PencilClass:
    """Classification verdict for a finite cycle family.

    base_points holds the two common points (elliptic), the two limit
    points (hyperbolic) or the single tangency point (parabolic); the
    value None inside the tuple stands for the ideal point.  tangent is
    the common tangent line of a parabolic pencil when the span
    contains one.
    """

    tag: str
    base_points: tuple = ()
    rank: int = 0
    singular_values: tuple = ()
    tangent: Cycle | None = field(default=None, compare=False)


def _point_of_degenerate(w):
    """Center of a point-circle member, or None for the ideal cycle."""
    scale = float(np.max(np.abs(w)))
    if abs(w[0]) > TINY * scale:
        return (float(-w[1] / (2.0 * w[0])), float(-w[2] / (2.0 * w[0])))
    return None


def _line_member(c1, c2):
    """The a = 0 member of span{c1, c2}, if a unique one exists."""
    if abs(c2[0]) > TINY:
        w = c1 - (c1[0] / c2[0]) * c2
    elif abs(c1[0]) > TINY:
        w = c2
    else:
        return None
    if np.max(np.abs(w[1:3])) <= TINY * np.max(np.abs(w)):
        return None
    return Cycle(0.0, float(w[1]), float(w[2]), float(w[3])).canonical()


def _intersect_span(c1, c2):
    """Real common points of the cycles spanned by c1, c2."""
    # pick the most circle-like member available for the quadratic part
    cands = [c1, c2, c1 + c2, c1 - c2]
    circ = max(cands, key=lambda w: abs(w[0]))
    if abs(circ[0]) < TINY:
        # two lines: a single linear system
        mat = np.array([[c1[1], c1[2]], [c2[1], c2[2]]])
        rhs = -np.array([c1[3], c2[3]])
        if abs(np.linalg.det(mat)) < TINY:
            return []
        pt = np.linalg.solve(mat, rhs)
        return [(float(pt[0]), float(pt[1]))]
    other = c2 if circ is not c2 else c1
    # radical line: eliminate the quadratic term
    w = other - (other[0] / circ[0]) * circ
    bb, cc, dd = w[1], w[2], w[3]
    nrm = float(np.hypot(bb, cc))
    if nrm < TINY:
        return []
    bb, cc, dd = bb / nrm, cc / nrm, dd / nrm
    # foot of the line plus its direction
    p0 = np.array([-bb * dd, -cc * dd])
    dvec = np.array([-cc, bb])
    b, c, d = circ[1] / circ[0], circ[2] / circ[0], circ[3] / circ[0]
    # substitute p0 + t*dvec into x^2+y^2+bx+cy+d
    beta = 2.0 * float(p0 @ dvec) + b * dvec[0] + c * dvec[1]
    gamma = float(p0 @ p0) + b * p0[0] + c * p0[1] + d
    disc = beta * beta / 4.0 - gamma
    if disc < 0.0:
        return []
    root = np.sqrt(disc)
    out = []
    for t in (-beta / 2.0 - root, -beta / 2.0 + root):
        pt = p0 + t * dvec
        out.append((float(pt[0]), float(pt[1])))
    return out


def classify_family(cycles, *, rank_tol=RANK_TOL) -> PencilClass:
    """Type a finite cycle family: pencil (and which kind) or not.

    Rank of the row-normalized coefficient matrix decides pencil-hood;
    a rank-2 family is typed by the discriminant of Q restricted to the
    span, equivalently by how many degenerate members the pencil has.
    """
    if len(cycles) < 3:
        raise TooFew("need at least 3 cycles to classify")
    mat = np.stack([cy.vec() for cy in cycles])
    mat = mat / np.linalg.norm(mat, axis=1, keepdims=True)
    sv = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.sum(sv > rank_tol * sv[0]))
    svals = tuple(float(s) for s in sv)
    if rank >= 3:
        return PencilClass("not-a-pencil", (), rank, svals)
    if rank <= 1:
        return PencilClass("degenerate", (), rank, svals)

    _, _, vt = np.linalg.svd(mat)
    c1, c2 = vt[0], vt[1]
    alpha = q_bilinear(c2, c2)
    beta = q_bilinear(c1, c2)
    gamma = q_bilinear(c1, c1)
    scale = max(abs(alpha), abs(beta), abs(gamma))
    if scale == 0.0:
        return PencilClass("degenerate", (), rank, svals)
    disc = beta * beta - alpha * gamma

    if abs(disc) <= DISC_TOL * scale * scale:
        if abs(alpha) > DISC_TOL * scale:
            w = c1 + (-beta / alpha) * c2
        else:
            w = c2
        return PencilClass(
            "parabolic", (_point_of_degenerate(w),), rank, svals,
            tangent=_line_member(c1, c2),
        )
    if disc > 0.0:
        root = np.sqrt(disc)
        if abs(alpha) > DISC_TOL * scale:
            members = [c1 + ((-beta - root) / alpha) * c2,
                       c1 + ((-beta + root) / alpha) * c2]
        else:
            members = [c1 + (-gamma / (2.0 * beta)) * c2, c2]
        pts = tuple(_point_of_degenerate(w) for w in members)
        return PencilClass("hyperbolic", pts, rank, svals)
    return PencilClass("elliptic", tuple(_intersect_span(c1, c2)), rank, svals)


# -- the constructive recovery fits -----------------------------------


def _fit_linear(points, values):
    pts = np.asarray(points, dtype=float)
    vals = np.asarray(values, dtype=float)
    design = np.column_stack([pts[:, 0], pts[:, 1], np.ones(len(pts))])
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    resid = float(np.max(np.abs(design @ coef - vals)))
    return coef, resid


def _normalized(circles):
    rows = []
    for cy in circles:
        if abs(cy.a) < TINY:
            raise DependentCircles("a line cannot be brought to normalized form")
        rows.append(cy.vec() / cy.a)
    return np.stack(rows)


def recover_crossing(circles, samples):
    """Rebuild F = A((x-a)^2 + (y-b)^2) + B from linear restrictions.

    circles are pairwise crossing and not all in one pencil; samples is
    one (points, values) pair per circle.  The construction mirrors the
    identity l_t - l_s = k_st (s_t - s_s) between the restriction and
    the normalized circle equations: fit the restriction on the first
    circle, read k off a pair, expand, complete the square.
    """
    if len(circles) < 3:
        raise TooFew("need at least 3 circles")
    if len(samples) != len(circles):
        raise ValueError("one (points, values) sample set per circle")
    norm = _normalized(circles)
    lins = []
    for (pts, vals) in samples:
        coef, resid = _fit_linear(pts, vals)
        if resid > LINEAR_TOL:
            raise NotLinearOnCircle(f"restriction fit residual {resid:.2e}")
        lins.append(coef)

    indep = None
    for triple in itertools.combinations(range(len(circles)), 3):
        sub = norm[list(triple)]
        sv = np.linalg.svd(sub, compute_uv=False)
        if sv[2] > RANK_TOL * sv[0]:
            indep = triple
            break
    if indep is None:
        raise DependentCircles("every circle triple lies in one pencil")

    # F = k*s_i + l_i must restrict to l_j on S_j, where s_i = s_i - s_j;
    # hence (l_j - l_i) = -k (s_j - s_i)
    i, j = indep[0], indep[1]
    ds = norm[j, 1:] - norm[i, 1:]
    dl = lins[j] - lins[i]
    denom = float(ds @ ds)
    k = -float(ds @ dl) / denom if denom > TINY else 0.0

    # F = k*s_i + l_i, expanded and completed
    px = k * norm[i, 1] + lins[i][0]
    py = k * norm[i, 2] + lins[i][1]
    pc = k * norm[i, 3] + lins[i][2]
    if abs(k) < TINY:
        return (0.0, 0.0, 0.0, float(pc))
    a = -px / (2.0 * k)
    b = -py / (2.0 * k)
    return (float(k), float(a), float(b), float(pc - k * (a * a + b * b)))


def _common_point(circles):
    norm = _normalized(circles)
    axes = [norm[i, 1:] - norm[j, 1:]
            for i, j in itertools.combinations(range(min(3, len(circles))), 2)]
    cands = []
    for la, lb in itertools.combinations(axes, 2):
        mat = np.array([la[:2], lb[:2]])
        det = float(np.linalg.det(mat))
        if abs(det) < TINY:
            continue
        cands.append(np.linalg.solve(mat, -np.array([la[2], lb[2]])))
    if not cands:
        raise NoCommonPoint("radical axes do not intersect")
    cands = np.stack(cands)
    if np.max(np.abs(cands - cands[0])) > COMMON_TOL:
        raise NoCommonPoint("radical-axis intersections disagree")
    origin = cands.mean(axis=0)
    scale = 1.0 + float(origin @ origin)
    for row in norm:
        val = float(origin @ origin + row[1:3] @ origin + row[3])
        if abs(val) > COMMON_TOL * scale:
            raise NoCommonPoint("a circle misses the candidate common point")
    return origin


def recover_common_point(circles, samples):
    """Recover (a, b, A, B, C, D) with the common point moved to the origin.

    F(x, y) = A((x-a)^2 + (y-b)^2) + (Bx^2 + Cxy + Dy^2) / (x^2 + y^2)
    in coordinates centered at the detected common point.  The fit goes
    through the inversion (x, y) -> (x, y)/(x^2+y^2), which turns the
    circles into lines and F into a plain quadratic polynomial.
    """
    if len(circles) < 3:
        raise TooFew("need at least 3 circles")
    if len(samples) != len(circles):
        raise ValueError("one (points, values) sample set per circle")
    for triple in itertools.combinations(range(len(circles)), 3):
        sub = _normalized([circles[t] for t in triple])
        sv = np.linalg.svd(sub, compute_uv=False)
        if sv[2] <= RANK_TOL * sv[0]:
            raise PencilDegeneracy("three of the circles lie in one pencil")
    for (pts, vals) in samples:
        _, resid = _fit_linear(pts, vals)
        if resid > LINEAR_TOL:
            raise NotLinearOnCircle(f"restriction fit residual {resid:.2e}")
    origin = _common_point(circles)

    upts = []
    gvals = []
    for (pts, vals) in samples:
        pts = np.asarray(pts, dtype=float) - origin
        vals = np.asarray(vals, dtype=float)
        r2 = np.sum(pts * pts, axis=1)
        keep = r2 > 1e-9
        upts.append(pts[keep] / r2[keep, None])
        gvals.append(vals[keep] / r2[keep])
    u = np.concatenate([p[:, 0] for p in upts])
    v = np.concatenate([p[:, 1] for p in upts])
    g = np.concatenate(gvals)
    design = np.column_stack([np.ones_like(u), u, v, u * u, u * v, v * v])
    coef, *_ = np.linalg.lstsq(design, g, rcond=None)
    g0, g1, g2, g3, g4, g5 = (float(t) for t in coef)

    A = g0
    if abs(A) > TINY:
        a = -g1 / (2.0 * A)
        b = -g2 / (2.0 * A)
    else:
        A, a, b = 0.0, 0.0, 0.0
    shift = A * (a * a + b * b)
    return (a, b, A, g3 - shift, g4, g5 - shift)


def _circle_points(center, radius, count):
    th = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
    return np.column_stack([center[0] + radius * np.cos(th),
                            center[1] + radius * np.sin(th)])


def fit_nested(F, *, samples_per_circle=50):
    """Fit F = (x^2+y^2)(Ax + By + C) + ax + by + c from the two circles
    x^2+y^2 = 1 and x^2+y^2 = 2 plus a fixed ring of interior points.

    Returns (A, B, C, a, b, c).  BadFit means the 6-parameter model
    cannot reproduce the interior samples, which is the expected verdict
    for functions that are only biharmonic away from the origin.
    """
    rings = []
    for r in (1.0, np.sqrt(2.0)):
        pts = _circle_points((0.0, 0.0), r, samples_per_circle)
        vals = np.asarray(F.value(pts[:, 0], pts[:, 1]), dtype=float)
        _, resid = _fit_linear(pts, vals)
        if resid > LINEAR_TOL:
            raise NotLinearOnCircle(f"restriction fit residual {resid:.2e}")
        rings.append((pts, vals))
    golden = 2.399963229728653
    idx = np.arange(20)
    rad = 1.05 + 0.33 * idx / 19.0
    ang = golden * idx
    interior = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    ivals = np.asarray(F.value(interior[:, 0], interior[:, 1]), dtype=float)

    pts = np.vstack([rings[0][0], rings[1][0], interior])
    vals = np.concatenate([rings[0][1], rings[1][1], ivals])
    x, y = pts[:, 0], pts[:, 1]
    r2 = x * x + y * y
    design = np.column_stack([r2 * x, r2 * y, r2, x, y, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    resid = float(np.max(np.abs(design @ coef - vals)))
    if resid >= 1e-7:
        raise BadFit(f"nested-circle model residual {resid:.2e}")
    return tuple(float(t) for t in coef)


def center_constraint_check(A, B, C, a, b, c, S: Cycle, *, samples=60) -> bool:
    """Is (x^2+y^2)(Ax+By+C) + ax+by+c linear along the circle S?

    For A^2 + B^2 != 0 this holds exactly when S is centered at the
    origin; with A = B = 0 the function is affine plus a multiple of
    x^2+y^2 and the restriction is linear on every circle.
    """
    if S.a == 0.0 or S.q() <= 0.0:
        raise ValueError("S must be a genuine circle")
    pts = _circle_points(S.center(), S.radius(), samples)
    x, y = pts[:, 0], pts[:, 1]
    r2 = x * x + y * y
    vals = r2 * (A * x + B * y + C) + a * x + b * y + c
    _, resid = _fit_linear(pts, vals)
    return resid < CENTER_TOL


# -- Gauss images of cone families ------------------------------------


def gauss_circle_of_cone(line) -> Cycle:
    """Stereographic image of the cone's circle of unit normals.

    The tangent planes common to every sphere (m + t*mdot, R + t*Rdot)
    have unit normals n with n . mdot = Rdot, a circle on the sphere;
    projecting from (0, 0, -1) turns it into the cycle below.
    """
    mdot = np.asarray(line.dir[:3], dtype=float)
    rdot = float(line.dir[3])
    if np.linalg.norm(mdot) < TINY:
        raise DegenerateCone("sphere line with stationary center")
    return Cycle(
        -(mdot[2] + rdot), 2.0 * mdot[0], 2.0 * mdot[1], mdot[2] - rdot
    )


def gauss_pencil_of_cones(family, samples=9, phi_range=(-1.0, 1.0)) -> PencilClass:
    """Classify the Gauss image of a 1-parameter cone family."""
    if samples < 3:
        raise TooFew("need at least 3 sampled cones")
    phis = np.linspace(phi_range[0], phi_range[1], samples)
    return classify_family([gauss_circle_of_cone(family(p)) for p in phis])


# -- text interfaces ---------------------------------------------------


def parse_cycle_lines(text: str):
    """One JSON object per non-blank line, either cycle coefficients
    {a, b, c, d} or a circle {center: [x, y], radius: r}."""
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        raw = raw.strip()
        if not raw:
            continue
        rec = json.loads(raw)
        try:
            if "center" in rec:
                out.append(Cycle.from_circle(rec["center"],
                                             float(rec["radius"])))
            else:
                out.append(Cycle(float(rec["a"]), float(rec["b"]),
                                 float(rec["c"]), float(rec["d"])))
        except KeyError as exc:
            raise ValueError(f"line {ln}: missing cycle coefficient {exc}")
    return out


def read_cycle_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_cycle_lines(fh.read())


def classification_report(pc: PencilClass) -> dict:
    return {
        "tag": pc.tag,
        "base_points": [list(p) if p is not None else None for p in pc.base_points],
        "rank": pc.rank,
        "singular_values": list(pc.singular_values),
    }
