"""Parsers for the surface and field specification strings of the CLI.

Surface specs:   r1 | r3@theta=0.5 | r3~@theta=0.5 | ruled(A,B,C,D)
                 | conv(1.0*r1, 0.5*r2, 0.3*r3@theta=0.4) | field:<field>
Field specs:     elliptic(a1=1,a3=-1) | hyperbolic(...) | parabolic(...)
                 | exceptional(...) | poly(x^2*y - 0.5*x) | sum(w*spec, ...)

Whitespace is ignored everywhere.  Unknown names and unknown keyword
coefficients raise GrammarError.
"""

from __future__ import annotations

import re

from .errors import GrammarError
from .fields import (
    make_elliptic_field,
    make_exceptional_field,
    make_hyperbolic_field,
    make_parabolic_field,
    make_polynomial_field,
    sum_fields,
)
from .reconstruct import reconstruct_surface
from .surfaces import BLOCK_NAMES, building_block, convolve, ruled_surface

GRAMMAR_HELP = """\
surface spec grammar:
  <block>                 one of %s
  <block>@theta=<num>     the block rotated by theta (radians)
  ruled(A,B,C,D)          the ruled patch (A p, B p, C p + D cos 2p) + l (sin p, cos p, 0)
  conv(w1*<block>, ...)   weighted convolution of blocks (each may carry @theta=...)
  field:<field spec>      reconstruction of a scalar field

field spec grammar:
  elliptic(a1=..,a2=..,a3=..,a4=..,b1=..,b2=..,b3=..,c1=..,c2=..,c3=..,d1=..,d2=..)
  hyperbolic(a1..a3, b1, b2, c1, c2, alpha1..alpha4, beta1..beta4, gamma1..gamma4)
  parabolic(alpha0..alpha3, beta0..beta3, gamma0..gamma3)
  exceptional(a=..,b=..,c=..,d=..,A=..,B=..,C=..,D=..)
  poly(<monomial sum>)    e.g. poly(x^2*y - 0.5*x + 3)
  sum(w1*<field spec>, w2*<field spec>, ...)
""" % (", ".join(BLOCK_NAMES),)

_FIELD_KEYS = {
    "elliptic": ("a1", "a2", "a3", "a4", "b1", "b2", "b3",
                 "c1", "c2", "c3", "d1", "d2"),
    "hyperbolic": ("a1", "a2", "a3", "b1", "b2", "c1", "c2",
                   "alpha1", "alpha2", "alpha3", "alpha4",
                   "beta1", "beta2", "beta3", "beta4",
                   "gamma1", "gamma2", "gamma3", "gamma4"),
    "parabolic": ("alpha0", "alpha1", "alpha2", "alpha3",
                  "beta0", "beta1", "beta2", "beta3",
                  "gamma0", "gamma1", "gamma2", "gamma3"),
    "exceptional": ("a", "b", "c", "d", "A", "B", "C", "D"),
}

_FIELD_MAKERS = {
    "elliptic": make_elliptic_field,
    "hyperbolic": make_hyperbolic_field,
    "parabolic": make_parabolic_field,
    "exceptional": make_exceptional_field,
}

_NUM_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _strip(spec: str) -> str:
    return re.sub(r"\s+", "", spec)


def _number(tok: str, where: str) -> float:
    if not _NUM_RE.match(tok):
        raise GrammarError("expected a number in %s, got %r" % (where, tok))
    return float(tok)


def _split_top(text: str, sep: str = ","):
    """Split on `sep` outside parentheses."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GrammarError("unbalanced parentheses in %r" % (text,))
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise GrammarError("unbalanced parentheses in %r" % (text,))
    parts.append("".join(cur))
    return parts


def _call_body(spec: str, name: str) -> str:
    if not (spec.startswith(name + "(") and spec.endswith(")")):
        raise GrammarError("malformed %s(...) spec: %r" % (name, spec))
    return spec[len(name) + 1 : -1]


def _kwargs(body: str, allowed, where: str) -> dict:
    out = {}
    if body == "":
        return out
    for item in _split_top(body):
        if "=" not in item:
            raise GrammarError(
                "expected key=value in %s, got %r" % (where, item)
            )
        key, val = item.split("=", 1)
        if key not in allowed:
            raise GrammarError(
                "unknown key %r in %s (allowed: %s)"
                % (key, where, ", ".join(allowed))
            )
        if key in out:
            raise GrammarError("duplicate key %r in %s" % (key, where))
        out[key] = _number(val, where)
    return out


# -- polynomial bodies -------------------------------------------------


def _split_terms(body: str):
    terms = []
    cur = ""
    for i, ch in enumerate(body):
        if ch in "+-" and i > 0 and body[i - 1] not in "eE^*+-":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    return [t for t in terms if t not in ("", "+")]


def _parse_monomial_term(term: str):
    sign = 1.0
    while term and term[0] in "+-":
        if term[0] == "-":
            sign = -sign
        term = term[1:]
    if term == "":
        raise GrammarError("empty polynomial term")
    coeff = sign
    dx = dy = 0
    for factor in term.split("*"):
        if factor == "":
            raise GrammarError("empty factor in polynomial term %r" % (term,))
        m = re.match(r"^([xy])(?:\^(\d+))?$", factor)
        if m:
            k = int(m.group(2) or 1)
            if m.group(1) == "x":
                dx += k
            else:
                dy += k
        else:
            coeff *= _number(factor, "poly(...)")
    return (dx, dy), coeff


def _parse_poly(body: str):
    if body == "":
        raise GrammarError("poly(...) needs at least one term")
    coeffs = {}
    for term in _split_terms(body):
        key, c = _parse_monomial_term(term)
        coeffs[key] = coeffs.get(key, 0.0) + c
    return make_polynomial_field(coeffs)


# -- field specs -------------------------------------------------------


def _weight_split(item: str):
    """Leading `w*rest` if w parses as a number, else weight 1."""
    depth = 0
    for i, ch in enumerate(item):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            head = item[:i]
            if _NUM_RE.match(head):
                return float(head), item[i + 1 :]
            return 1.0, item
    return 1.0, item


def parse_field(spec: str, *, branch: int = 0, guard: float = None):
    """Field object from a field spec string."""
    spec = _strip(spec)
    if spec == "":
        raise GrammarError("empty field spec")
    m = re.match(r"^([a-z]+)\(", spec)
    kind = m.group(1) if m else None
    if kind == "poly":
        f = _parse_poly(_call_body(spec, "poly"))
    elif kind == "sum":
        body = _call_body(spec, "sum")
        terms = []
        for item in _split_top(body):
            w, sub = _weight_split(item)
            terms.append((w, parse_field(sub, branch=branch, guard=guard)))
        if not terms:
            raise GrammarError("sum(...) needs at least one term")
        f = sum_fields(terms)
    elif kind in _FIELD_MAKERS:
        kw = _kwargs(_call_body(spec, kind), _FIELD_KEYS[kind],
                     kind + "(...)")
        if kind == "elliptic":
            kw["branch"] = int(branch)
        f = _FIELD_MAKERS[kind](**kw)
    else:
        raise GrammarError(
            "unknown field family in %r (allowed: elliptic, hyperbolic, "
            "parabolic, exceptional, poly, sum)" % (spec,)
        )
    if guard is not None:
        f = f.with_guard(float(guard))
    return f


# -- surface specs -----------------------------------------------------


def _parse_block_ref(spec: str):
    name = spec
    theta = None
    if "@" in spec:
        name, _, tail = spec.partition("@")
        if not tail.startswith("theta="):
            raise GrammarError("expected @theta=<num> in %r" % (spec,))
        theta = _number(tail[len("theta="):], "theta")
    if name not in BLOCK_NAMES:
        raise GrammarError(
            "unknown building block %r (allowed: %s)"
            % (name, ", ".join(BLOCK_NAMES))
        )
    return name, theta


def parse_surface(spec: str, *, branch: int = 0, guard: float = None):
    """Surface object from a surface spec string."""
    spec = _strip(spec)
    if spec == "":
        raise GrammarError("empty surface spec")
    if spec.startswith("field:"):
        return reconstruct_surface(
            parse_field(spec[len("field:"):], branch=branch, guard=guard)
        )
    if spec.startswith("ruled("):
        body = _call_body(spec, "ruled")
        parts = _split_top(body)
        if len(parts) != 4:
            raise GrammarError("ruled(...) takes exactly A,B,C,D")
        return ruled_surface(*(_number(p, "ruled(...)") for p in parts))
    if spec.startswith("conv("):
        body = _call_body(spec, "conv")
        terms = []
        for item in _split_top(body):
            w, sub = _weight_split(item)
            name, theta = _parse_block_ref(sub)
            terms.append((w, building_block(name, theta)))
        if not terms:
            raise GrammarError("conv(...) needs at least one term")
        return convolve(terms)
    name, theta = _parse_block_ref(spec)
    return building_block(name, theta)
