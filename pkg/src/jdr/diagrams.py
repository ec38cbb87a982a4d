"""Degree-2 diagram generators and their canonical forms.

Slot conventions.  A YY diagram has legs 1..6; legs 1,2,3 sit on tripod A and
4,5,6 on tripod B, each listed counterclockwise starting from the top leg.
An H diagram has legs (top-left, bottom-left, bottom-right, top-right); the
left vertex is oriented (1, 2, middle edge) and the right one (3, 4, middle
edge).

Lower-order shapes only appear as opaque tokens:

* ``TwoLeg`` (x, y; m): two trivalent vertices joined by a double edge, one
  of the edges carrying t^m oriented from x's vertex to y's vertex.
* ``HLoop`` (y1, y2; m): a vertex carrying a loop labelled t^m, joined to a
  vertex with legs y1, y2.
* ``Lollipop`` (u; y1, y2, y3; m): a loop on a stem with leg u, next to a
  tripod.
* ``ZeroLeg`` (m, n): a closed theta graph.
"""

from __future__ import annotations

import itertools
import re
from collections import namedtuple
from functools import lru_cache

from .algebra import (
    AnnihilatorSpec,
    LaurentPoly,
    ParamPoly,
    format_param,
    laurent_bar,
    parse_param,
)

GAMMA = "g"
ETA = "e"


class Leg(namedtuple("Leg", "k copy basis")):
    """Leg labelled t^k times the basis element ``basis`` of copy ``copy``."""

    __slots__ = ()

    def __new__(cls, k, copy, basis=GAMMA):
        return super().__new__(cls, int(k), int(copy), basis)

    def shift(self, m):
        return Leg(self.k + m, self.copy, self.basis)

    def recopy(self, mapping):
        return Leg(self.k, mapping[self.copy], self.basis)

    def __repr__(self):
        return format_leg(self)


def format_leg(leg):
    if leg.basis == GAMMA:
        return "(%d,%d)" % (leg.k, leg.copy)
    if leg.k == 0:
        return "(%s,%d)" % (leg.basis, leg.copy)
    return "(%d,%s,%d)" % (leg.k, leg.basis, leg.copy)


SHAPES = ("YY", "H", "TwoLeg", "HLoop", "Lollipop", "ZeroLeg")
LEG_COUNT = {"YY": 6, "H": 4, "TwoLeg": 2, "HLoop": 2, "Lollipop": 4, "ZeroLeg": 0}


class Diagram(namedtuple("Diagram", "shape legs m")):
    """A generator: shape, leg tuple and (for tokens) an edge exponent."""

    __slots__ = ()

    def __new__(cls, shape, legs, m=0):
        if shape not in SHAPES:
            raise ValueError("unknown shape %r" % shape)
        legs = tuple(l if isinstance(l, Leg) else Leg(*l) for l in legs)
        if len(legs) != LEG_COUNT[shape]:
            raise ValueError("%s needs %d legs" % (shape, LEG_COUNT[shape]))
        if shape == "ZeroLeg":
            m = tuple(m)
        return super().__new__(cls, shape, legs, m)

    @property
    def is_token(self):
        return self.shape not in ("YY", "H")

    def exponents(self):
        return tuple(l.k for l in self.legs)

    def copies(self):
        return tuple(l.copy for l in self.legs)

    def __str__(self):
        return format_diagram(self)

    def __repr__(self):
        return "Diagram(%s)" % format_diagram(self)


def YY(*legs):
    if len(legs) == 1:
        legs = legs[0]
    return Diagram("YY", legs)


def H(*legs):
    if len(legs) == 1:
        legs = legs[0]
    return Diagram("H", legs)


def format_diagram(d):
    f = [format_leg(l) for l in d.legs]
    if d.shape == "YY":
        return "YY[%s;%s]" % (",".join(f[:3]), ",".join(f[3:]))
    if d.shape == "H":
        return "H[%s|%s]" % (",".join(f[:2]), ",".join(f[2:]))
    if d.shape == "TwoLeg":
        return "TwoLeg[%s;%d]" % (",".join(f), d.m)
    if d.shape == "HLoop":
        return "HLoop[%s;%d]" % (",".join(f), d.m)
    if d.shape == "Lollipop":
        return "Lollipop[%s;%s;%d]" % (f[0], ",".join(f[1:]), d.m)
    return "ZeroLeg[%s]" % ",".join(str(x) for x in d.m)


# ---------------------------------------------------------------- symmetries

def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _yy_symmetries():
    out = []
    for pa in itertools.permutations(range(3)):
        for pb in itertools.permutations(range(3)):
            s = _perm_sign(pa) * _perm_sign(pb)
            perm = tuple(pa) + tuple(3 + j for j in pb)
            out.append((perm, s))
            out.append((perm[3:] + perm[:3], s))
    return tuple(out)


# new_legs[i] = legs[perm[i]]
_YY_SYM = _yy_symmetries()
_H_SYM = (
    ((0, 1, 2, 3), 1),
    ((2, 3, 0, 1), 1),
    ((3, 2, 1, 0), 1),
    ((1, 0, 3, 2), 1),
    ((1, 0, 2, 3), -1),
    ((0, 1, 3, 2), -1),
    ((3, 2, 0, 1), -1),
    ((2, 3, 1, 0), -1),
)
_TRIPOD = tuple((p, _perm_sign(p)) for p in itertools.permutations(range(3)))


def _copy_maps(legs):
    """Bijections from the copies in use onto 1..k (copy permutations are exact)."""
    used = sorted({l.copy for l in legs})
    for image in itertools.permutations(range(1, len(used) + 1)):
        yield dict(zip(used, image))


def _variants(d, as_sign):
    """All (legs, m, sign) presentations of d under AS-type moves (no copy maps)."""
    legs, m = d.legs, d.m
    if d.shape == "YY":
        for perm, s in _YY_SYM:
            yield tuple(legs[i] for i in perm), m, (s if as_sign == -1 else 1)
    elif d.shape == "H":
        for perm, s in _H_SYM:
            yield tuple(legs[i] for i in perm), m, (s if as_sign == -1 else 1)
    elif d.shape == "TwoLeg":
        yield legs, m, 1
        yield (legs[1], legs[0]), -m, 1
    elif d.shape == "HLoop":
        a, b = legs
        yield (a, b), m, 1
        yield (a, b), -m, -1
        yield (b, a), m, -1
        yield (b, a), -m, 1
    elif d.shape == "Lollipop":
        # the stem label is irrelevant (Hol')
        u = Leg(0, legs[0].copy, legs[0].basis)
        y = legs[1:]
        for p, s in _TRIPOD:
            yt = tuple(y[i] for i in p)
            yield (u,) + yt, m, s
            yield (u,) + yt, -m, -s
    else:
        yield legs, m, 1


@lru_cache(maxsize=None)
def _canonical(d, as_sign, copy_maps):
    if d.shape in ("HLoop", "Lollipop") and d.m == 0:
        return 0, None
    best = None
    best_sign = 0
    if copy_maps:
        maps = list(_copy_maps(d.legs))
    else:
        maps = [None]
    for legs, m, s in _variants(d, as_sign):
        for cmap in maps:
            if cmap:
                key = (tuple((l[0], cmap[l[1]], l[2]) for l in legs), m)
            else:
                key = (tuple(tuple(l) for l in legs), m)
            if best is None or key < best:
                best, best_sign = key, s
            elif key == best and s != best_sign:
                best_sign = 0
    s = best_sign
    if s == 0:
        return 0, None
    out = Diagram(d.shape, best[0], best[1])
    if copy_maps and out in _PREFERRED:
        rep, s_rep = _PREFERRED[out]
        return s * (s_rep if as_sign == -1 else 1), rep
    return s, out


def canonicalize(d, as_sign=-1, copy_maps=True):
    """Return (sign, canonical diagram); sign 0 means the diagram vanishes.

    The representative is the lexicographically least presentation, except
    that orbits of named generators are represented by the named diagram.
    Vanishing happens when some AS move maps the diagram to minus itself,
    for instance two equal legs at one trivalent vertex.
    """
    return _canonical(d, as_sign, copy_maps)


# lex-least form -> (named representative, sign with rep = sign * lex-least)
_PREFERRED = {}


def register_preferred(d):
    _canonical.cache_clear()
    s, least = _canonical(d, -1, True)
    if s == 0:
        raise ValueError("cannot register a vanishing diagram")
    if least in _PREFERRED and _PREFERRED[least][0] != d:
        raise ValueError("orbit already has a representative")
    _PREFERRED[least] = (d, s)
    _canonical.cache_clear()


def is_as_degenerate(d):
    if d.shape == "YY":
        a, b = d.legs[:3], d.legs[3:]
        return len(set(a)) < 3 or len(set(b)) < 3
    if d.shape == "H":
        return d.legs[0] == d.legs[1] or d.legs[2] == d.legs[3]
    return False


# ---------------------------------------------------------------- linear combinations

class LinCombo:
    """Formal sum of canonical diagrams with ParamPoly coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for d, c in (terms.items() if isinstance(terms, dict) else terms):
                self.add(d, c)

    @classmethod
    def of(cls, d, coeff=1, canonical=True, as_sign=-1):
        out = cls()
        if canonical:
            out.add_canonical(d, coeff, as_sign)
        else:
            out.add(d, coeff)
        return out

    def add(self, d, c):
        c = ParamPoly.coerce(c)
        if not c:
            return self
        if d in self.terms:
            v = self.terms[d] + c
            if v:
                self.terms[d] = v
            else:
                del self.terms[d]
        else:
            self.terms[d] = c
        return self

    def add_canonical(self, d, c, as_sign=-1):
        s, cd = canonicalize(d, as_sign)
        if s:
            self.add(cd, ParamPoly.coerce(c) * s)
        return self

    def iadd(self, other, scale=1):
        for d, c in other.terms.items():
            self.add(d, c * scale if not isinstance(scale, int) or scale != 1 else c)
        return self

    def __add__(self, other):
        return LinCombo(self.terms).iadd(other)

    def __sub__(self, other):
        return LinCombo(self.terms).iadd(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = ParamPoly.coerce(c)
        out = LinCombo()
        if c:
            for d, v in self.terms.items():
                out.add(d, v * c)
        return out

    __rmul__ = lambda self, c: self.scale(c)

    def coeff(self, d):
        return self.terms.get(d, ParamPoly.const(0))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def items(self):
        return self.terms.items()

    def map_coeffs(self, fn):
        out = LinCombo()
        for d, c in self.terms.items():
            out.add(d, fn(c))
        return out

    def filter(self, pred):
        return LinCombo({d: c for d, c in self.terms.items() if pred(d)})

    def __eq__(self, other):
        if not isinstance(other, LinCombo):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return format_combo(self)

    def __repr__(self):
        return "LinCombo(%s)" % format_combo(self)


def _shape_rank(d):
    return (SHAPES.index(d.shape), d.legs, d.m)


def format_combo(combo, names=None):
    """Deterministic text, using ``names`` (diagram -> str) where available."""
    names = names or {}
    parts = []
    for d in sorted(combo.terms, key=_shape_rank):
        c = combo.terms[d]
        label = names.get(d, format_diagram(d))
        if c == 1:
            parts.append(label)
        elif c == -1:
            parts.append("-" + label)
        elif len(c.terms) == 1:
            parts.append("%s*%s" % (format_param(c), label))
        else:
            parts.append("(%s)*%s" % (format_param(c), label))
    if not parts:
        return "0"
    s = parts[0]
    for p in parts[1:]:
        s += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
    return s


# ---------------------------------------------------------------- Blanchfield data

class BlanchfieldSpec:
    """Annihilator, number of copies and the canonical pairing convention."""

    def __init__(self, annihilator=None, copies=2):
        self.annihilator = annihilator or AnnihilatorSpec.cyclic()
        if copies not in (1, 2, 3):
            raise ValueError("copies must be 1, 2 or 3")
        self.copies = copies

    @property
    def cyclic(self):
        return self.annihilator.is_cyclic

    @property
    def basis(self):
        return (GAMMA,) if self.cyclic else (GAMMA, ETA)

    def pairing_numerator(self, b1, b2):
        """Numerator of f(b1, b2) over delta for basis letters of one copy."""
        if self.cyclic:
            return LaurentPoly({0: ParamPoly.var("r")})
        if (b1, b2) == (GAMMA, ETA):
            return LaurentPoly({0: 1})
        if (b1, b2) == (ETA, GAMMA):
            return LaurentPoly({1: 1})
        return LaurentPoly({})

    def __repr__(self):
        return "BlanchfieldSpec(%r, copies=%d)" % (self.annihilator, self.copies)


def linking(v, w, spec):
    """Numerator L with f_vw = L / delta for the canonical convention."""
    if v.copy != w.copy:
        return LaurentPoly({})
    return spec.pairing_numerator(v.basis, w.basis).shift(v.k - w.k)


# General labels: a dict (copy, basis) -> LaurentPoly.

def monomial_label(leg):
    return {(leg.copy, leg.basis): LaurentPoly({leg.k: 1})}


def label_shift(label, m):
    return {key: q.shift(m) for key, q in label.items()}


def label_scale(label, c):
    return {key: q * c for key, q in label.items()}


def label_add(*labels):
    out = {}
    for lab in labels:
        for key, q in lab.items():
            out[key] = out[key] + q if key in out else q
    return {k: q for k, q in out.items() if q}


def label_linking(x, y, spec):
    """Sesquilinear extension of the canonical linking numerator."""
    total = LaurentPoly({})
    for (c1, b1), p in x.items():
        for (c2, b2), q in y.items():
            if c1 != c2:
                continue
            pn = spec.pairing_numerator(b1, b2)
            if pn:
                total = total + p * laurent_bar(q) * pn
    return total


def label_monomials(label):
    """Expand a general label into (coefficient, Leg) pairs."""
    out = []
    for (copy, basis), q in sorted(label.items()):
        for k in sorted(q.terms):
            out.append((q.terms[k], Leg(k, copy, basis)))
    return out


def expand_multilinear(shape, general_legs, coeff=1, m=0, as_sign=-1):
    """Distribute the vertex-linearity relation over every leg."""
    expanded = [label_monomials(lab) if isinstance(lab, dict) else list(lab) for lab in general_legs]
    coeff = ParamPoly.coerce(coeff)
    partial = [(_plain(coeff), ())]
    for options in expanded:
        options = [(_plain(cc), leg) for cc, leg in options]
        partial = [(c * cc, legs + (leg,)) for c, legs in partial for cc, leg in options]
    out = LinCombo()
    for c, legs in partial:
        out.add_canonical(Diagram(shape, legs, m), c, as_sign)
    return out


def _plain(c):
    """Constants become Fractions so that products stay cheap."""
    if isinstance(c, ParamPoly) and c.is_constant() and not c.constrained:
        return c.constant_value()
    return c


def naive_expansion_count(general_legs):
    n = 1
    for lab in general_legs:
        n *= len(label_monomials(lab))
    return n


# ---------------------------------------------------------------- essential sets

def _legs(spec_list, copies):
    return tuple(Leg(k, c) for k, c in zip(spec_list, copies))


_C2 = (1, 2, 2, 1, 2, 2)
_H2 = (1, 2, 1, 2)
_SIX = (1, 2, 3, 1, 2, 3)
_SIXBIS = (1, 2, 2, 1, 3, 3)

ESSENTIAL_CYCLIC2 = {
    "Gamma1": YY(_legs((0, 0, 1, 0, 0, 1), _C2)),
    "Gamma2": YY(_legs((0, 0, 1, 1, 0, 1), _C2)),
    "H1": H(_legs((0, 0, 0, 0), _H2)),
    "H2": H(_legs((0, 0, 0, 1), _H2)),
    "H3": H(_legs((0, 0, 1, 1), _H2)),
    "H4": H(_legs((0, 1, 1, 0), _H2)),
}
GAMMA3 = YY(_legs((1, 0, 1, 1, 0, 1), _C2))

ESSENTIAL_CYCLIC3 = {
    "D1": YY(_legs((0, 0, 1, 0, 0, 1), _SIXBIS)),
    "D2": YY(_legs((0, 0, 1, 1, 0, 1), _SIXBIS)),
    "G1": YY(_legs((0, 0, 0, 0, 0, 0), _SIX)),
    "G2": YY(_legs((0, 0, 0, 0, 0, 1), _SIX)),
    "G3": YY(_legs((0, 0, 1, 0, 1, 0), _SIX)),
    "G4": YY(_legs((0, 0, 1, 1, 1, 0), _SIX)),
}

g, e = GAMMA, ETA
ESSENTIAL_NONCYCLIC = {
    "Y1": YY(Leg(0, 1, g), Leg(0, 2, g), Leg(0, 2, e), Leg(0, 1, e), Leg(0, 3, g), Leg(0, 3, e)),
    "Y2": YY(Leg(0, 1, g), Leg(0, 2, g), Leg(0, 3, g), Leg(0, 1, e), Leg(0, 2, e), Leg(0, 3, e)),
    "X1": H(Leg(0, 1, g), Leg(0, 2, g), Leg(0, 1, e), Leg(0, 2, e)),
    "X2": H(Leg(0, 1, g), Leg(0, 2, e), Leg(0, 1, e), Leg(0, 2, g)),
}
del g, e

for _d in (list(ESSENTIAL_CYCLIC2.values()) + [GAMMA3] + list(ESSENTIAL_CYCLIC3.values())
           + list(ESSENTIAL_NONCYCLIC.values())):
    register_preferred(_d)
del _d


# ---------------------------------------------------------------- parsing

_LEG_RE = re.compile(r"\(\s*([^()]*?)\s*\)")


def _parse_leg(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 2:
        a, b = parts
        if a in (GAMMA, ETA):
            return Leg(0, int(b), a)
        return Leg(int(a), int(b), GAMMA)
    if len(parts) == 3:
        return Leg(int(parts[0]), int(parts[2]), parts[1])
    raise ValueError("bad leg %r" % text)


def _parse_legs(text):
    legs = [_parse_leg(m.group(1)) for m in _LEG_RE.finditer(text)]
    return legs


_DIAG_RE = re.compile(r"(YY|H|TwoLeg|HLoop|Lollipop|ZeroLeg)\[([^\]]*)\]\s*$")


def parse_diagram(text):
    m = _DIAG_RE.match(text.strip())
    if not m:
        raise ValueError("cannot parse diagram %r" % text)
    shape, body = m.groups()
    if shape == "YY":
        a, b = body.split(";")
        legs = _parse_legs(a) + _parse_legs(b)
        return Diagram("YY", legs)
    if shape == "H":
        a, b = body.split("|")
        return Diagram("H", _parse_legs(a) + _parse_legs(b))
    if shape == "ZeroLeg":
        return Diagram("ZeroLeg", (), tuple(int(x) for x in body.split(",") if x.strip()))
    chunks = body.split(";")
    mval = int(chunks[-1])
    legs = []
    for c in chunks[:-1]:
        legs += _parse_legs(c)
    return Diagram(shape, legs, mval)


NAMED = dict(ESSENTIAL_CYCLIC2, Gamma3=GAMMA3, **ESSENTIAL_CYCLIC3, **ESSENTIAL_NONCYCLIC)
_ALIASES = {"Γ1": "Gamma1", "Γ2": "Gamma2", "Γ3": "Gamma3"}
_NAME_RE = re.compile(r"(Gamma[123]|Γ[123]|H[1-4]|G[1-4]|D[12]|Y[12]|X[12])\s*$")


def _split_terms(text):
    """Split at top-level + and - signs (outside brackets and parentheses)."""
    terms = []
    depth = 0
    cur = ""
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("^", "*")):
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


def parse_combo(text, canonical=True):
    """Parse ``2*H[...] - r*YY[...]``; coefficients may be parameter polynomials.

    Named generators (``Gamma1``, ``H3``, ``G2``, ``Y1``, ...) may replace the bracket form.
    """
    out = LinCombo()
    text = text.strip()
    if text == "0":
        return out
    for term in _split_terms(text):
        term = term.strip()
        m = re.search(r"(YY|TwoLeg|HLoop|Lollipop|ZeroLeg|H)\[", term)
        named = _NAME_RE.search(term)
        if m:
            start = m.start()
            d = parse_diagram(term[start:])
        elif named:
            start = named.start()
            d = NAMED[_ALIASES.get(named.group(1), named.group(1))]
        else:
            raise ValueError("no diagram in term %r" % term)
        cpart = term[:start].strip()
        if cpart.endswith("*"):
            cpart = cpart[:-1].strip()
        sign = 1
        if cpart.startswith("+"):
            cpart = cpart[1:].strip()
        elif cpart.startswith("-"):
            sign = -1
            cpart = cpart[1:].strip()
        coeff = parse_param(cpart) if cpart else ParamPoly.const(1)
        if canonical:
            out.add_canonical(d, coeff * sign)
        else:
            out.add(d, coeff * sign)
    return out
