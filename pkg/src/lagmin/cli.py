"""Command-line front end.

Subcommands: generate, ruled, verify, classify-pencil, isotropic,
gallery.  Exit codes: 0 success (and all checks passing), 1 check
failure (reports are still written), 2 usage error (the spec grammar
is printed).  All outputs are deterministic for fixed argv and seed.
"""

from __future__ import annotations

import argparse
import re
import sys
from types import SimpleNamespace

import numpy as np

from . import grammar, meshing, pencils, verify
from .errors import GrammarError, IdealImage, LagminError, NonImmersed
from .fields import sum_fields
from .reconstruct import isotropic_image, reconstruct_surface
from .surfaces import (
    block_field,
    building_block,
    ruled_surface,
    rulings_of_convolution,
)

CHECK_NAMES = ("biharmonic", "gaussmap", "ruling", "curvature",
               "stationarity", "tangency")

_CONFIG_KEYS = CHECK_NAMES + ("guard",)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        # accept comma-joined negative numerics like "-2,2,-2,2" as values
        self._negative_number_matcher = re.compile(r"^-[\d.]")

    def error(self, message):
        raise _UsageError(message)


def _parse_grid(text):
    m = re.match(r"^(\d+)x(\d+)$", text)
    if not m:
        raise _UsageError("--grid wants NxM, got %r" % (text,))
    shape = (int(m.group(1)), int(m.group(2)))
    if shape[0] < 2 or shape[1] < 2:
        raise _UsageError("--grid must be at least 2x2")
    return shape


def _parse_floats(text, count, flag):
    parts = text.split(",")
    if len(parts) != count:
        raise _UsageError("%s wants %d comma-separated numbers, got %r"
                          % (flag, count, text))
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise _UsageError("%s wants numbers, got %r" % (flag, text))


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _UsageError("cannot read config: %s" % (exc,))
    cfg = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise _UsageError("config line %d: expected key=value" % lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise _UsageError(
                "config line %d: unknown key %r (allowed: %s)"
                % (lineno, key, ", ".join(_CONFIG_KEYS))
            )
        try:
            cfg[key] = float(val.strip())
        except ValueError:
            raise _UsageError("config line %d: bad number %r" % (lineno, val))
    return cfg


# -- field / family derivation from surface specs ----------------------


def _field_for(spec, branch, guard):
    """The scalar field behind a surface spec, for field-level checks."""
    spec = spec.strip().replace(" ", "")
    if spec.startswith("field:"):
        return grammar.parse_field(spec[len("field:"):], branch=branch,
                                   guard=guard)
    if spec.startswith("ruled("):
        raise _UsageError("check needs a field-backed surface, not ruled(...)")
    if spec.startswith("conv("):
        surf = grammar.parse_surface(spec)
        terms = []
        for w, s in surf.terms:
            name = getattr(s, "name", None)
            if name is None and hasattr(s, "base"):
                terms.append((w, block_field(s.base.name, s.theta)))
            else:
                terms.append((w, block_field(name)))
        return sum_fields(terms)
    name, theta = grammar._parse_block_ref(spec)
    f = block_field(name, theta or 0.0)
    if guard is not None:
        f = f.with_guard(guard)
    return f


def _family_for(S):
    a1, a2, a3, theta = verify._canonical_weights(S)
    return rulings_of_convolution(a1, a2, a3, theta)


def _run_check(name, spec, args, cfg):
    branch = getattr(args, "branch", 0)
    guard = cfg.get("guard")
    tol = cfg.get(name)
    seed = args.seed
    if name == "biharmonic":
        F = _field_for(spec, branch, guard)
        kw = {} if tol is None else {"tolerance": tol}
        return [verify.biharmonic_residual(F, seed=seed, **kw)]
    if name == "gaussmap":
        S = grammar.parse_surface(spec, branch=branch, guard=guard)
        kw = {} if tol is None else {"tolerance": tol}
        return [verify.gaussmap_identity_residual(S, **kw)]
    if name == "ruling":
        S = grammar.parse_surface(spec, branch=branch, guard=guard)
        kw = {} if tol is None else {"tolerance": tol}
        return [verify.ruling_residual(S, _family_for(S), **kw)]
    if name == "curvature":
        S = grammar.parse_surface(spec, branch=branch, guard=guard)
        kw = {} if tol is None else {"tolerance": tol}
        return [verify.fd_curvature_check(S, seed=seed, **kw)]
    if name == "stationarity":
        F = _field_for(spec, branch, guard)
        kw = {} if tol is None else {"ratio": tol}
        return [verify.stationarity_check(F, seed=seed, **kw)]
    if name == "tangency":
        block, theta = grammar._parse_block_ref(spec.strip().replace(" ", ""))
        if theta:
            raise _UsageError("tangency plans exist for unrotated blocks only")
        kw = {} if tol is None else {"tolerance": tol}
        return verify.tangency_check(block, **kw)
    raise _UsageError(
        "unknown check %r (allowed: %s)" % (name, ", ".join(CHECK_NAMES))
    )


# -- meshing helpers ---------------------------------------------------


def _isotropic_mesh(S, window, shape):
    u, v = meshing.grid_axes(window, shape)
    uu, vv = np.meshgrid(u, v)
    ok = np.broadcast_to(S.is_safe(uu, vv), uu.shape).copy()
    pts = np.full(ok.shape + (3,), np.nan)
    fu = uu[ok]
    fv = vv[ok]
    if fu.size:
        try:
            pts[ok] = isotropic_image(S, fu, fv)
        except (NonImmersed, IdealImage):
            # fall back to per-point evaluation, dropping the bad spots
            vals = np.full((fu.size, 3), np.nan)
            for i in range(fu.size):
                try:
                    vals[i] = isotropic_image(S, fu[i : i + 1], fv[i : i + 1])
                except (NonImmersed, IdealImage):
                    pass
            pts[ok] = vals
    return meshing.mesh_from_grid(pts, ok, window, shape)


def _merge_meshes(parts):
    """Concatenate (mesh, x-offset) pairs into one vertex/face soup."""
    verts = []
    faces = []
    base = 0
    for mesh, dx in parts:
        moved = mesh.vertices.copy()
        moved[:, 0] += dx
        verts.append(moved)
        faces.extend(tuple(i + base for i in quad) for quad in mesh.faces)
        base += len(mesh.vertices)
    return SimpleNamespace(
        vertices=np.concatenate(verts) if verts else np.zeros((0, 3)),
        faces=faces,
    )


# -- subcommands -------------------------------------------------------


def _cmd_generate(args, cfg):
    S = grammar.parse_surface(args.surface, branch=args.branch,
                              guard=cfg.get("guard"))
    shape = _parse_grid(args.grid)
    window = _parse_floats(args.range, 4, "--range")
    mesh = meshing.surface_mesh(S, window, shape)
    meshing.write_obj(mesh, args.output,
                      comment="surface %s grid %s range %s"
                      % (args.surface, args.grid, args.range))
    return 0


def _cmd_ruled(args, cfg):
    S = ruled_surface(args.A, args.B, args.C, args.D)
    p0, p1 = _parse_floats(args.phi_range, 2, "--phi-range")
    l0, l1 = _parse_floats(args.lambda_range, 2, "--lambda-range")
    window = (p0, p1, l0, l1)
    mesh = meshing.surface_mesh(S, window, _parse_grid(args.grid))
    polys = []
    for phi in np.linspace(p0, p1, 9):
        point, direction = S.ruling(phi)
        polys.append(np.stack([point + l0 * direction,
                               point + l1 * direction]))
    meshing.write_obj(mesh, args.output, polylines=polys,
                      comment="ruled A=%g B=%g C=%g D=%g"
                      % (args.A, args.B, args.C, args.D))
    return 0


def _cmd_verify(args, cfg):
    checks = [c for c in args.checks.split(",") if c]
    if not checks:
        raise _UsageError("--checks wants a comma list from: %s"
                          % (", ".join(CHECK_NAMES),))
    for c in checks:
        if c not in CHECK_NAMES:
            raise _UsageError("unknown check %r (allowed: %s)"
                              % (c, ", ".join(CHECK_NAMES)))
    reports = []
    for c in checks:
        reports.extend(_run_check(c, args.surface, args, cfg))
    if args.report:
        verify.write_reports(reports, args.report)
    for rep in reports:
        tag = "pass" if rep.passed else "FAIL"
        print("%s: %s (max %.3g, tol %.3g, n=%d)"
              % (rep.check, tag, rep.max_residual, rep.tolerance, rep.samples))
    return 0 if all(r.passed for r in reports) else 1


def _cmd_classify_pencil(args, cfg):
    try:
        cycles = pencils.read_cycle_file(args.input)
    except OSError as exc:
        raise _UsageError("cannot read input: %s" % (exc,))
    except ValueError as exc:
        raise _UsageError("bad circles file: %s" % (exc,))
    pc = pencils.classify_family(cycles)
    report = pencils.classification_report(pc)
    if args.report:
        meshing.atomic_write_text(args.report, verify.json_text(report) + "\n")
    print("tag:", pc.tag)
    return 0


def _cmd_isotropic(args, cfg):
    S = grammar.parse_surface(args.surface, branch=args.branch,
                              guard=cfg.get("guard"))
    mesh = _isotropic_mesh(S, S.default_window, (100, 100))
    meshing.write_obj(mesh, args.output,
                      comment="isotropic image of %s" % (args.surface,))
    return 0


_GALLERY = (
    ("hyperbolic-general.obj",
     "field:hyperbolic(a2=0.3,c1=0.4,alpha1=1,beta2=0.5,gamma1=0.2)"),
    ("elliptic-blocks.obj", ("r1", "r3", "r1~", "r3~")),
    ("ruled-convolution.obj", None),     # convolution with ruling polylines
    ("hyperbolic-blocks.obj", ("r4", "r5", "r6", "r4~", "r6~")),
    ("parabolic-blocks.obj", ("r7", "r8", "r9", "r10", "r11")),
    ("parabolic-general.obj",
     "field:parabolic(alpha0=1,alpha2=0.4,beta1=0.6,gamma0=0.3,gamma3=0.1)"),
)


def _cmd_gallery(args, cfg):
    import os

    outdir = args.output
    os.makedirs(outdir, exist_ok=True)
    for fname, spec in _GALLERY:
        path = os.path.join(outdir, fname)
        if fname == "ruled-convolution.obj":
            fam = rulings_of_convolution(1.0, 0.3, 0.6, 0.0)
            S = fam.surface()
            mesh = meshing.surface_mesh(S, shape=(100, 100))
            polys = []
            for phi in np.linspace(-1.2, 1.2, 9):
                point, direction = fam.line(float(phi))
                polys.append(np.stack([point - 2.0 * direction,
                                       point + 2.0 * direction]))
            meshing.write_obj(mesh, path, polylines=polys,
                              comment="convolution a=(1,0.3,0.6) theta=0 "
                                      "with rulings phi in [-1.2,1.2]")
        elif isinstance(spec, tuple):
            parts = []
            for k, name in enumerate(spec):
                S = building_block(name)
                parts.append((meshing.surface_mesh(S, shape=(60, 60)),
                              6.0 * k))
            merged = _merge_meshes(parts)
            meshing.atomic_write_text(
                path,
                meshing.obj_text(merged,
                                 comment="blocks %s spaced 6 apart on x"
                                 % (", ".join(spec),)),
            )
        else:
            S = grammar.parse_surface(spec)
            mesh = meshing.surface_mesh(S, shape=(100, 100))
            meshing.write_obj(mesh, path, comment=spec)
    print("gallery: wrote %d meshes to %s" % (len(_GALLERY), outdir))
    return 0


# -- argument wiring ---------------------------------------------------


def _build_parser():
    top = _Parser(prog="lagmin", description=__doc__)
    sub = top.add_subparsers(dest="command", metavar="command")

    common = _Parser(add_help=False)
    common.add_argument("--config", default=None,
                        help="flat key=value file with tolerances and guard")

    p = sub.add_parser("generate", parents=[common],
                       help="mesh a surface spec to an OBJ file")
    p.add_argument("--surface", required=True)
    p.add_argument("--grid", required=True, help="NxM")
    p.add_argument("--range", required=True, help="u0,u1,v0,v1")
    p.add_argument("--branch", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("ruled", parents=[common],
                       help="mesh a ruled patch with its rulings")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--phi-range", required=True, help="phi0,phi1")
    p.add_argument("--lambda-range", required=True, help="lam0,lam1")
    p.add_argument("--grid", default="100x100", help="NxM")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_ruled)

    p = sub.add_parser("verify", parents=[common],
                       help="run residual checks and write a JSON report")
    p.add_argument("--surface", required=True)
    p.add_argument("--checks", required=True,
                   help="comma list from: %s" % (",".join(CHECK_NAMES),))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--branch", type=int, default=0)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("classify-pencil", parents=[common],
                       help="classify a circle family from a JSON file")
    p.add_argument("--input", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_classify_pencil)

    p = sub.add_parser("isotropic", parents=[common],
                       help="mesh the isotropic-model graph of a surface")
    p.add_argument("--surface", required=True)
    p.add_argument("--branch", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_isotropic)

    p = sub.add_parser("gallery", parents=[common],
                       help="write the six reference figure meshes")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=_cmd_gallery)

    return top


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if getattr(args, "func", None) is None:
            raise _UsageError("a subcommand is required")
        cfg = _load_config(args.config) if args.config else {}
        return args.func(args, cfg)
    except _UsageError as exc:
        print("usage error:", exc, file=sys.stderr)
        print(file=sys.stderr)
        print(grammar.GRAMMAR_HELP, file=sys.stderr)
        return 2
    except GrammarError as exc:
        print("spec error:", exc, file=sys.stderr)
        print(file=sys.stderr)
        print(grammar.GRAMMAR_HELP, file=sys.stderr)
        return 2
    except LagminError as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 2
    except OSError as exc:
        print("i/o error:", exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
