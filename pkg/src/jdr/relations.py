"""Relations obtained by acting on generators with module automorphisms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    A,
    B,
    C,
    D,
    AnnihilatorSpec,
    LaurentPoly,
    ParamPoly,
)
from .diagrams import (
    ESSENTIAL_CYCLIC2,
    ESSENTIAL_CYCLIC3,
    ESSENTIAL_NONCYCLIC,
    ETA,
    GAMMA,
    GAMMA3,
    LinCombo,
    label_shift,
    linking,
    monomial_label,
)
from .reduction import CASE_NAMES, BasisVector, Engine, NonCyclicMode

GENERATORS = {
    "cyclic2": dict(ESSENTIAL_CYCLIC2, Gamma3=GAMMA3),
    "cyclic3": dict(ESSENTIAL_CYCLIC3, **{k: ESSENTIAL_CYCLIC2[k] for k in ("H1", "H2", "H3", "H4")}),
    "noncyclic3": ESSENTIAL_NONCYCLIC,
}


@dataclass(frozen=True)
class AutSpec:
    """One automorphism (or holonomy move) and its parameters.

    kinds: ``t`` (copy, power), ``holbar`` (side, power), ``lambda`` (a, b, c, d),
    ``chi`` (a, b with P = a*t + b), ``mu`` (x, copy), ``nu`` (copy), ``rho`` (y, copy).
    ``copy`` may be a tuple to act on several copies at once.
    """

    kind: str
    params: tuple = ()

    def __str__(self):
        def fmt(p):
            if isinstance(p, tuple):
                return "".join(str(x) for x in p)
            return str(p)
        return "%s(%s)" % (self.kind, ",".join(fmt(p) for p in self.params))

    def label_map(self):
        """Image of a basis label (copy, basis) as a general label, or None if fixed."""
        k, p = self.kind, self.params
        if k == "t":
            copies = _as_set(p[0])
            power = p[1] if len(p) > 1 else 1
            return lambda c, b: {(c, b): LaurentPoly.monomial(power)} if c in copies else None
        if k == "lambda":
            a, b, cc, d = (ParamPoly.coerce(x) for x in p)
            P = LaurentPoly({1: a, 0: b})
            Q = LaurentPoly({1: cc, 0: d})
            Pb, Qb = _bar(P), _bar(Q)

            def lam(c, basis):
                if c == 1:
                    return {(1, basis): P, (2, basis): Q}
                if c == 2:
                    return {(1, basis): Qb, (2, basis): -Pb}
                return None
            return lam
        if k == "chi":
            a, b = p[0], p[1]
            copy = p[2] if len(p) > 2 else 1
            P = LaurentPoly({1: a, 0: b})
            return lambda c, basis: {(c, basis): P} if c == copy else None
        if k == "mu":
            x, copies = Fraction(p[0]), _as_set(p[1])

            def mu(c, basis):
                if c not in copies:
                    return None
                s = x if basis == GAMMA else 1 / x
                return {(c, basis): LaurentPoly({0: s})}
            return mu
        if k == "nu":
            copies = _as_set(p[0])

            def nu(c, basis):
                if c not in copies:
                    return None
                if basis == GAMMA:
                    return {(c, ETA): LaurentPoly({0: 1})}
                return {(c, GAMMA): LaurentPoly({0: -1})}
            return nu
        if k == "rho":
            y, copies = Fraction(p[0]), _as_set(p[1])

            def rho(c, basis):
                if c not in copies or basis != GAMMA:
                    return None
                return {(c, GAMMA): LaurentPoly({0: 1}), (c, ETA): LaurentPoly({0: y})}
            return rho
        raise ValueError("no label map for %s" % k)


def _as_set(x):
    return set(x) if isinstance(x, (tuple, list, set, frozenset)) else {x}


def _bar(q):
    return LaurentPoly({-k: c for k, c in q.terms.items()})


def AutT(copy, power=1):
    return AutSpec("t", (copy, power))


def HolBar(side=0, power=1):
    return AutSpec("holbar", (side, power))


def AutLambda(a, b, c, d):
    return AutSpec("lambda", (a, b, c, d))


def AutChi(a, b, copy=1):
    return AutSpec("chi", (a, b, copy))


def Mu(x, copy):
    return AutSpec("mu", (x, copy))


def Nu(copy):
    return AutSpec("nu", (copy,))


def Rho(y, copy):
    return AutSpec("rho", (y, copy))


@dataclass
class Relation:
    """The statement ``lhs - rhs = 0``; ``vector`` holds lhs - rhs."""

    lhs: str
    rhs: BasisVector
    aut: AutSpec = None
    vector: BasisVector = field(default=None)

    def __post_init__(self):
        if self.vector is None:
            unit = BasisVector.unit_like(self.rhs, self.lhs) if self.lhs else BasisVector(self.rhs.names)
            self.vector = unit - self.rhs

    @classmethod
    def from_vector(cls, vec, aut=None, lhs=""):
        return cls(lhs, BasisVector(vec.names), aut, vec)

    def normalized(self):
        return Relation.from_vector(normalize_sign(self.vector), self.aut, self.lhs)

    def is_trivial(self):
        return self.vector.is_zero()

    def __str__(self):
        return "%s = 0" % self.vector


def _unit_like(vec, name):
    return BasisVector(vec.names, {name: 1})


BasisVector.unit_like = staticmethod(_unit_like)


def normalize_sign(vec):
    """Scale by -1 if needed so the first nonzero coordinate has a positive leading term."""
    for n in vec.names:
        c = vec.coords[n]
        if c:
            lead = c.leading_coeff()
            return vec.scale(-1) if lead < 0 else vec
    for d, c in vec.lower.items():
        return vec.scale(-1) if c.leading_coeff() < 0 else vec
    return vec


# ---------------------------------------------------------------- applying automorphisms

def transform(d, aut, spec):
    """Labels after the automorphism, plus the linkings the diagram keeps.

    Returns (labels, actual) for :meth:`Engine.omega_reduce`.
    """
    if aut.kind == "holbar":
        side, power = aut.params[0], (aut.params[1] if len(aut.params) > 1 else 1)
        if d.shape != "YY":
            raise ValueError("the holonomy move needs a YY diagram")
        labels = [label_shift(monomial_label(l), power if p // 3 == side else 0) for p, l in enumerate(d.legs)]
        return labels, None
    fn = aut.label_map()
    labels = []
    for l in d.legs:
        img = fn(l.copy, l.basis)
        if img is None:
            labels.append(monomial_label(l))
        else:
            labels.append(label_shift(img, l.k))
    actual = {}
    for i, j in itertools.combinations(range(len(d.legs)), 2):
        actual[(i, j)] = linking(d.legs[i], d.legs[j], spec)
    return labels, actual


def reduce_for_case(engine, combo, case):
    if case == "cyclic2":
        return engine.reduce_combo2(combo)
    if case == "cyclic3":
        return engine.reduce_combo3(combo)
    if case == "noncyclic3":
        return engine.reduce_noncyclic(combo)
    raise ValueError(case)


def apply_to_diagram(engine, d, aut, case, coeff=1):
    """Coordinates of aut.d over the named generators of ``case``."""
    if aut.kind in ("mu", "nu", "rho") and engine.cyclic:
        raise NonCyclicMode("%s acts only on the t+1 module" % aut.kind)
    labels, actual = transform(d, aut, engine.spec)
    combo = engine.omega_reduce(d.shape, labels, actual, coeff, d.m)
    return BasisVector.from_combo(reduce_for_case(engine, combo, case), case)


def apply_aut(engine, name, aut, case):
    """Relation ``name = aut.(name)`` reduced over the named generators."""
    d = GENERATORS[case][name]
    rhs = apply_to_diagram(engine, d, aut, case)
    if name in CASE_NAMES[case]:
        return Relation(name, rhs, aut)
    own = BasisVector.from_combo(reduce_for_case(engine, LinCombo.of(d, as_sign=engine.as_sign), case), case)
    return Relation.from_vector(own - rhs, aut, name)


def forms(engine, d):
    """In-range diagrams reachable from d by exact multiplication moves."""
    seen = {d}
    todo = [d]
    while todo:
        cur = todo.pop()
        for nd in engine._orbit_moves(cur):
            if nd not in seen:
                seen.add(nd)
                todo.append(nd)
    return sorted(seen)


def cyclic_relations(engine, case="cyclic3", all_forms=True):
    """Every Aut_t and holonomy relation on the named generators (and their other forms)."""
    names = CASE_NAMES[case]
    out = []
    for name in names:
        d = GENERATORS[case][name]
        ds = forms(engine, d) if all_forms else [d]
        copies = sorted({l.copy for l in d.legs})
        for dd in ds:
            own = BasisVector.from_combo(
                reduce_for_case(engine, LinCombo.of(dd, as_sign=engine.as_sign), case), case)
            auts = [AutT(c) for c in copies]
            if dd.shape == "YY":
                auts += [HolBar(0), HolBar(1)]
            for aut in auts:
                rhs = apply_to_diagram(engine, dd, aut, case)
                vec = own - rhs
                if not vec.is_zero():
                    out.append(Relation.from_vector(vec, aut, "%s:%s" % (name, "".join(str(l.k) for l in dd.legs))))
    return out


# ---------------------------------------------------------------- lambda

def lambda_inputs():
    """The three generators the lambda family is applied to."""
    return {"Gamma1": ESSENTIAL_CYCLIC2["Gamma1"], "Gamma2": ESSENTIAL_CYCLIC2["Gamma2"], "Gamma3": GAMMA3}


def substitute_h(vec):
    """Apply H1 = -2*H2 and H4 = -H2 - H3 (the 4-leg relations at alpha = 1)."""
    c = dict(vec.coords)
    h1, h4 = c.pop("H1"), c.pop("H4")
    c["H2"] = c["H2"] - h1 * 2 - h4
    c["H3"] = c["H3"] - h4
    c["H1"] = 0
    c["H4"] = 0
    return BasisVector(vec.names, c, vec.lower)


def lambda_relation(name, params=None, engine=None):
    """Relation from lambda_{a,b,c,d} on Gamma1, Gamma2 or Gamma3 at alpha = 1."""
    engine = engine or Engine(AnnihilatorSpec.cyclic(1))
    if engine.alpha != 1:
        raise ValueError("the lambda family is computed at alpha = 1")
    if params is None:
        params = (A, B, C, D)
    d = lambda_inputs()[name]
    rhs = apply_to_diagram(engine, d, AutLambda(*params), "cyclic2")
    own = BasisVector.from_combo(engine.reduce_combo2(LinCombo.of(d, as_sign=engine.as_sign)), "cyclic2")
    vec = substitute_h((own - rhs).without_lower())
    return Relation.from_vector(normalize_sign(vec), AutLambda(*params), name)


def known_k(r=None):
    """K = Gamma1 + 2*Gamma2 - 3*r*H3."""
    from .algebra import R
    r = R if r is None else ParamPoly.coerce(r)
    return BasisVector(CASE_NAMES["cyclic2"], {"Gamma1": 1, "Gamma2": 2, "H3": r * -3})


# ---------------------------------------------------------------- linear algebra

def _vec(v):
    if isinstance(v, Relation):
        v = v.vector
    return v


class Echelon(list):
    """Rows produced by :func:`echelon`; can be reused by reduce_against."""


def echelon(vectors):
    """Fraction-free echelon form: list of (pivot name, vector).

    Pivots with a constant coefficient are preferred, which keeps the
    polynomial coefficients small.
    """
    rows = Echelon()
    for v in vectors:
        v = _reduce(_vec(v).without_lower(), rows)
        nz = [n for n in v.names if v.coords[n]]
        if nz:
            const = [n for n in nz if v.coords[n].is_constant()]
            rows.append(((const or nz)[0], v))
    return rows


def _reduce(v, rows):
    for piv, row in rows:
        c = v.coords[piv]
        if c:
            pc = row.coords[piv]
            if pc.is_constant():
                v = v - row.scale(c * (Fraction(1) / pc.constant_value()))
            else:
                v = v.scale(pc) - row.scale(c)
    return v


def reduce_against(rel, known):
    """Remainder of rel after elimination against the span of ``known``.

    Zero means rel follows from the known relations over the fraction field
    of the parameter ring.
    """
    rows = known if isinstance(known, Echelon) else echelon(known)
    return _reduce(_vec(rel).without_lower(), rows)


def specialize(vec, values):
    return {n: vec.coords[n].evaluate(values, check_constraint=True) for n in vec.names}


def rank_at_specialization(relations, basis, samples):
    """Exact rank over Q of the relation matrix at each sample."""
    out = []
    for values in samples:
        rows = []
        for rel in relations:
            v = _vec(rel)
            ev = specialize(v, values)
            rows.append([Fraction(ev.get(n, 0)) for n in basis])
        out.append(_rank(rows))
    return out


def _rank(rows):
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def substitute_pivots(vec, steps):
    """Eliminate coordinates in order; each step is (relation, name) with a constant coefficient."""
    v = _vec(vec)
    for rel, name in steps:
        rel = _vec(rel)
        pc = rel.coords[name]
        if not pc.is_constant() or not pc:
            raise ValueError("pivot on %s is not an invertible constant" % name)
        c = v.coords[name]
        if c:
            v = v - rel.scale(c * (Fraction(1) / pc.constant_value()))
    return v


# ---------------------------------------------------------------- the cyclic three-copy system

def six_relations(r=None, alpha=None):
    """The six relations between D1, D2, G1..G4 and H1..H4, as vectors."""
    from .algebra import ALPHA, R
    a = ALPHA if alpha is None else ParamPoly.coerce(alpha)
    r = R if r is None else ParamPoly.coerce(r)
    names = CASE_NAMES["cyclic3"]

    def V(**kw):
        return BasisVector(names, kw)
    return [
        V(D1=1, D2=-1),
        V(D1=a + 2, H3=-r, H4=r),
        V(G1=a, G2=2, H1=-r),
        V(G1=1, G2=a, G4=1, H3=-r),
        V(G3=a, G4=2, H4=-r),
        V(G2=a + 1, G3=1, H2=-r),
    ]


def four_leg_relations(alpha=None, names=None):
    """alpha*H1 + 2*H2 and alpha*H2 + H3 + H4, modulo 2-leg diagrams."""
    from .algebra import ALPHA
    a = ALPHA if alpha is None else ParamPoly.coerce(alpha)
    names = names or CASE_NAMES["cyclic3"]
    return [BasisVector(names, {"H1": a, "H2": 2}), BasisVector(names, {"H2": a, "H3": 1, "H4": 1})]


def r6_vector(r=None, alpha=None):
    """(1-a)(a+2)^2 G1 - r*(4H3 + 2aH2 - 2H4 - a(a+3)H1); r = 1 gives the printed form."""
    from .algebra import ALPHA, R
    a = ALPHA if alpha is None else ParamPoly.coerce(alpha)
    r = R if r is None else ParamPoly.coerce(r)
    return BasisVector(CASE_NAMES["cyclic3"], {
        "G1": (1 - a) * (a + 2) ** 2,
        "H3": r * -4,
        "H2": r * a * -2,
        "H4": r * 2,
        "H1": r * a * (a + 3),
    })


def eliminate(vectors, names_to_remove):
    """Combine vectors (fraction-free) so that the listed coordinates vanish.

    Returns the relations left over in the remaining coordinates.
    """
    rows = [_vec(v).without_lower() for v in vectors]
    for name in names_to_remove:
        piv = None
        for i, v in enumerate(rows):
            if v.coords[name]:
                if piv is None or v.coords[name].is_constant():
                    piv = i
                    if v.coords[name].is_constant():
                        break
        if piv is None:
            continue
        p = rows.pop(piv)
        pc = p.coords[name]
        rows = [v.scale(pc) - p.scale(v.coords[name]) if v.coords[name] else v for v in rows]
    return [v for v in rows if not v.is_zero()]


# ---------------------------------------------------------------- non-cyclic

def noncyclic_relations(engine=None):
    """The relations that the t+1 module imposes on Y1, Y2, X1, X2."""
    engine = engine or Engine(AnnihilatorSpec.noncyclic())
    case = "noncyclic3"
    out = []
    for name in CASE_NAMES[case]:
        d = GENERATORS[case][name]
        auts = [Nu(c) for c in (1, 2, 3) if any(l.copy == c for l in d.legs)]
        if name == "Y2":
            auts.append(Nu((1, 2, 3)))
        auts += [Mu(2, 1), Rho(1, 1)]
        if d.shape == "YY":
            auts += [HolBar(0), HolBar(1)]
        for aut in auts:
            rel = apply_aut(engine, name, aut, case)
            if not rel.is_trivial():
                out.append(rel)
    return out


def mu_trivial_generator(d, x=2, copy=None):
    """Coefficient lost under mu_x: returns x^n, which differs from 1 when d is forced to 0."""
    total = Fraction(1)
    for l in d.legs:
        if copy is None or l.copy == copy:
            total *= Fraction(x) if l.basis == GAMMA else 1 / Fraction(x)
    return total
