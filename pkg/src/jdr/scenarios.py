"""Named reproduction scenarios and the regression harness behind ``jdr verify``."""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from .algebra import (
    AnnihilatorSpec,
    LaurentPoly,
    constraint_points,
    format_laurent,
    laurent_mod_delta,
    param_normalize,
    parse_laurent,
    parse_param,
    split_fraction,
)
from .diagrams import (
    ESSENTIAL_CYCLIC2,
    ESSENTIAL_NONCYCLIC,
    ETA,
    GAMMA,
    YY,
    Diagram,
    H,
    Leg,
    LinCombo,
    format_combo,
    parse_combo,
)
from .reduction import CASE_NAMES, BasisVector, Engine, psi2_expand
from .relations import (
    GENERATORS,
    AutChi,
    AutLambda,
    AutT,
    HolBar,
    Mu,
    Nu,
    apply_aut,
    apply_to_diagram,
    cyclic_relations,
    echelon,
    eliminate,
    four_leg_relations,
    lambda_relation,
    known_k,
    normalize_sign,
    r6_vector,
    rank_at_specialization,
    reduce_against,
    reduce_for_case,
    six_relations,
    substitute_pivots,
)


class UnknownScenario(KeyError):
    pass


@dataclass
class ScenarioReport:
    id: str
    status: str
    computed: str
    expected: str
    ms: int

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


class Context:
    """Engines shared by the scenarios of one run, built with optional broken flags."""

    def __init__(self, seed=0, **flags):
        self.seed = seed
        self.flags = flags
        self._engines = {}
        self._memo = {}

    def engine(self, alpha=None, kind="cyclic", mode="quotient"):
        key = (kind, alpha, mode)
        if key not in self._engines:
            ann = AnnihilatorSpec.noncyclic() if kind == "noncyclic" else AnnihilatorSpec.cyclic(alpha)
            self._engines[key] = Engine(ann, mode=mode, **self.flags)
        return self._engines[key]

    def memo(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def rng(self, tag):
        return random.Random("%s:%s" % (self.seed, tag))

    def alpha_samples(self, n, tag="alpha"):
        rng = self.rng(tag)
        out = []
        while len(out) < n:
            a = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
            if a not in (-2, 1) and a not in out:
                out.append(a)
        return out


REGISTRY = {}


def scenario(sid, description, negative=False):
    def deco(fn):
        REGISTRY[sid] = (description, fn, negative)
        return fn
    return deco


def _same(vec, text, case, constrained=False, up_to_sign=False):
    expected = BasisVector.parse(text, case, constrained)
    if up_to_sign:
        ok = (vec - expected).is_zero() or (vec + expected).is_zero()
    else:
        ok = (vec - expected).is_zero()
    return ok, str(vec), str(expected)


def _combine(results):
    ok = all(r[0] for r in results)
    return ok, "; ".join(r[1] for r in results), "; ".join(r[2] for r in results)


# ---------------------------------------------------------------- ring

@scenario("appendix-ring-a-squared", "a^2 is rewritten with a^2+b^2+c^2+d^2 = 1+ab+cd")
def _ring_a2(ctx):
    got = param_normalize(parse_param("a^2"), True)
    exp = parse_param("1 + a*b + c*d - b^2 - c^2 - d^2")
    return got == exp, str(got), str(exp)


@scenario("appendix-ring-t-cubed", "t^3 = 1 modulo t + 1 + t^-1")
def _ring_t3(ctx):
    got = laurent_mod_delta(LaurentPoly.monomial(3), AnnihilatorSpec.cyclic(1))
    return got == LaurentPoly.monomial(0), format_laurent(got), "1"


@scenario("ring-split-fraction-noncyclic", "-t/(1+t) = 1/(1+t) - 1")
def _ring_split(ctx):
    got = split_fraction(parse_laurent("-t"), parse_laurent("1"), AnnihilatorSpec.noncyclic())
    return got == parse_laurent("-1"), format_laurent(got), "-1"


# ---------------------------------------------------------------- reducers

@scenario("reduc-unit-vectors", "reduc6 and reduc4 send the named generators to unit vectors")
def _unit(ctx):
    E = ctx.engine()
    res = []
    for name, d in ESSENTIAL_CYCLIC2.items():
        f = E.reduc6 if d.shape == "YY" else E.reduc4
        res.append(_same(BasisVector.from_combo(f(d.legs), "cyclic2"), name, "cyclic2"))
    return _combine(res)


@scenario("reduc-as-degenerate-zero", "tuples killed by AS or by the copy parity reduce to 0")
def _degenerate(ctx):
    E = ctx.engine()
    L = Leg
    cases = [
        E.reduc6((L(0, 1), L(0, 1), L(1, 2), L(0, 2), L(1, 2), L(0, 1))),
        E.reduc6((L(0, 1), L(0, 2), L(1, 2), L(0, 1), L(1, 2), L(1, 2))),
        E.reduc4((L(0, 1), L(1, 1), L(0, 2), L(0, 2))),
        E.reduc4((L(0, 1), L(0, 1), L(1, 2), L(0, 2))),
        E.reduc4((L(0, 1), L(0, 2), L(1, 2), L(0, 2))),
    ]
    vecs = [BasisVector.from_combo(c, "cyclic2") for c in cases]
    return all(v.is_zero() for v in vecs), ", ".join(map(str, vecs)), ", ".join("0" for _ in vecs)


# ---------------------------------------------------------------- three copies, cyclic

def computed_six(engine):
    """The six three-copy relations, each from one automorphism or holonomy move."""
    E = engine
    G = GENERATORS["cyclic3"]

    def rel(d, aut, name):
        own = BasisVector.from_combo(reduce_for_case(E, LinCombo.of(d, as_sign=E.as_sign), "cyclic3"), "cyclic3")
        return own - apply_to_diagram(E, d, aut, "cyclic3")

    g1_second = Diagram("YY", (Leg(0, 1), Leg(0, 2), Leg(1, 3), Leg(0, 1), Leg(0, 2), Leg(1, 3)))
    r1 = rel(G["D1"], HolBar(0), "D1")
    r2 = rel(G["D2"], AutT(1), "D2")
    return [
        r1,
        r2 + r1.scale(2),
        rel(G["G2"], AutT(3), "G2"),
        rel(g1_second, HolBar(1), "G1"),
        rel(G["G4"], AutT(1), "G4"),
        rel(G["G3"], AutT(2), "G3"),
    ]


SIX_EXPECTED = [
    "D1 - D2",
    "(alpha+2)*D1 - r*H3 + r*H4",
    "alpha*G1 + 2*G2 - r*H1",
    "G1 + alpha*G2 + G4 - r*H3",
    "alpha*G3 + 2*G4 - r*H4",
    "(alpha+1)*G2 + G3 - r*H2",
]


@scenario("cyclic3-six-relations", "Aut_t and holonomy on D1, D2, G1..G4 give the six relations")
def _six(ctx):
    comp = ctx.memo("six", lambda: computed_six(ctx.engine(None)))
    return _combine([_same(normalize_sign(v), e, "cyclic3", up_to_sign=True) for v, e in zip(comp, SIX_EXPECTED)])


@scenario("cyclic3-r6-elimination", "eliminating D1, D2, G2, G3, G4 gives the G1-H relation")
def _r6(ctx):
    comp = ctx.memo("six", lambda: computed_six(ctx.engine(None)))
    left = eliminate(comp, ["D1", "D2", "G4", "G3", "G2"])
    if len(left) != 1:
        return False, "; ".join(map(str, left)), "one relation"
    v = normalize_sign(left[0])
    at_r1 = v.map_coeffs(lambda c: c.substitute({"r": 1}))
    ok1, s1, e1 = _same(at_r1, "(1-alpha)*(alpha+2)^2*G1 - 4*H3 - 2*alpha*H2 + 2*H4 + alpha*(alpha+3)*H1",
                        "cyclic3", up_to_sign=True)
    scaled = r6_vector()
    ok2 = (v - scaled).is_zero() or (v + scaled).is_zero()
    return ok1 and ok2, "%s (r=1: %s)" % (v, s1), "%s (r=1: %s)" % (scaled, e1)


@scenario("cyclic3-relation-span", "every Aut_t and holonomy relation follows from the six plus the two 4-leg ones")
def _span(ctx):
    E = ctx.engine(None)
    rels = ctx.memo("rels3-sym", lambda: cyclic_relations(E, "cyclic3"))
    known = echelon(six_relations() + four_leg_relations())
    left = [r for r in rels if not reduce_against(r, known).is_zero()]
    back = echelon(rels)
    missing = [v for v in six_relations() + four_leg_relations() if not reduce_against(v, back).is_zero()]
    ok = not left and not missing
    return ok, "%d relations, %d outside, %d not recovered" % (len(rels), len(left), len(missing)), \
        "%d relations, 0 outside, 0 not recovered" % len(rels)


@scenario("cyclic3-four-leg-full", "Aut_t on H2 and H4 with 2-leg diagrams kept")
def _four_full(ctx):
    E = ctx.engine(None, mode="full")
    r1 = apply_aut(E, "H2", AutT(2), "cyclic3").vector
    r2 = apply_aut(E, "H4", AutT(1), "cyclic3").vector
    res = [
        _same(r1, "alpha*H1 + 2*H2 + r*TwoLeg[(0,1),(0,1);0]", "cyclic3"),
        _same(r2, "alpha*H2 + H3 + H4 + r*TwoLeg[(0,1),(1,1);0]", "cyclic3"),
    ]
    tokens = set(r1.lower.terms) | set(r2.lower.terms)
    res.append((len(tokens) == 2, "%d tokens" % len(tokens), "2 tokens"))
    return _combine(res)


# ---------------------------------------------------------------- iota

_G_ONE_COPY = H(Leg(0, 1), Leg(1, 1), Leg(0, 1), Leg(1, 1))


@scenario("iota-expansion", "half the sum over two-copy distributions of G")
def _iota(ctx):
    E = ctx.engine(None)
    v = BasisVector.from_combo(E.iota_expand(_G_ONE_COPY), "cyclic2")
    shifted = H(*(l.shift(1) for l in _G_ONE_COPY.legs))
    w = BasisVector.from_combo(E.iota_expand(shifted), "cyclic2")
    ok, s, e = _same(v, "H1 + H3 - 2*H4", "cyclic2")
    return ok and v == w, s, e


@scenario("iota-with-r6", "the image of G in terms of G1 and H1 modulo 2-leg diagrams")
def _iota_r6(ctx):
    v = BasisVector.parse("H1 + H3 - 2*H4", "cyclic3")
    claim = BasisVector.parse("1/2*(1-alpha)*(alpha+2)^2*G1 + 1/2*(alpha+1)*(alpha+2)*H1", "cyclic3")
    known = [r6_vector(r=1)] + four_leg_relations()
    rem = reduce_against(v - claim, known)
    return rem.is_zero(), "remainder %s" % rem, "remainder 0"


# ---------------------------------------------------------------- kernel and dimensions

_KERNEL = "2*H1 + H4 - 2*H3 - H2"


def _rels3(ctx, alpha):
    E = ctx.engine(alpha)
    return ctx.memo(("rels3", alpha), lambda: cyclic_relations(E, "cyclic3"))


def _rels2(ctx, alpha):
    E = ctx.engine(alpha)
    return ctx.memo(("rels2", alpha), lambda: cyclic_relations(E, "cyclic2"))


@scenario("kernel-generator-vanishes", "2H1 + H4 - 2H3 - H2 is zero in three copies at alpha = 1")
def _kernel(ctx):
    v = BasisVector.parse(_KERNEL, "cyclic3")
    rem = reduce_against(v, _rels3(ctx, 1))
    return rem.is_zero(), "remainder %s" % rem, "remainder 0"


@scenario("kernel-generator-generic-alpha", "the same vector survives for alpha not in {-2, 1}")
def _kernel_generic(ctx):
    v = BasisVector.parse(_KERNEL, "cyclic3")
    out = []
    for a in ctx.alpha_samples(5, "kernel"):
        rem = reduce_against(v, _rels3(ctx, a))
        out.append((not rem.is_zero(), "alpha=%s: %s" % (a, "nonzero" if not rem.is_zero() else "0"),
                    "alpha=%s: nonzero" % a))
    return _combine(out)


@scenario("kernel-image-in-two-copies", "the vector is 3(H1 - H3) with two copies and is nonzero there")
def _kernel_image(ctx):
    v = BasisVector.parse(_KERNEL, "cyclic2")
    r1, r2 = four_leg_relations(1, CASE_NAMES["cyclic2"])
    img = substitute_pivots(v, [(r2, "H4"), (r1, "H2")])
    ok, s, e = _same(img, "3*H1 - 3*H3", "cyclic2")
    rem = reduce_against(img, _rels2(ctx, 1))
    return ok and not rem.is_zero(), s + " (nonzero: %s)" % (not rem.is_zero()), e + " (nonzero: True)"


def h_dimension(relations, names, part):
    """Dimension of the span of ``part`` modulo the relations, at one sample."""
    others = [n for n in names if n not in part]
    total = relations
    rank_all = rank_at_specialization(total, names, [{}])[0]
    rank_others = rank_at_specialization(total, others, [{}])[0] if others else 0
    return len(part) - (rank_all - rank_others)


def _specialized(rels, values):
    return [r.vector.map_coeffs(lambda c: c.substitute(values)) for r in rels]


def _dims(ctx, alpha, r=3):
    rels = _specialized(_rels3(ctx, None), {"alpha": alpha, "r": r})
    names = CASE_NAMES["cyclic3"]
    hs = ["H1", "H2", "H3", "H4"]
    return rels, names, hs


@scenario("dimension-generic-alpha", "4-leg part has dimension 2, spanned by H1 and H3")
def _dim_generic(ctx):
    out = []
    for a in ctx.alpha_samples(5, "dim"):
        rels, names, hs = _dims(ctx, a)
        dim = h_dimension(rels, names, hs)
        extra = rels + [BasisVector(names, {"H1": 1}), BasisVector(names, {"H3": 1})]
        spans = h_dimension(extra, names, hs) == 0
        out.append((dim == 2 and spans, "alpha=%s: dim %d%s" % (a, dim, "" if spans else " (H1,H3 do not span)"),
                    "alpha=%s: dim 2" % a))
    return _combine(out)


@scenario("dimension-alpha-one", "at alpha = 1 the 4-leg part has dimension 1, spanned by H1")
def _dim_one(ctx):
    rels, names, hs = _dims(ctx, 1)
    dim = h_dimension(rels, names, hs)
    spans = h_dimension(rels + [BasisVector(names, {"H1": 1})], names, hs) == 0
    return dim == 1 and spans, "dim %d, H1 spans: %s" % (dim, spans), "dim 1, H1 spans: True"


@scenario("dimension-noncyclic", "the t+1 module: 4-leg part of dimension 1 spanned by X1")
def _dim_nc(ctx):
    E = ctx.engine(kind="noncyclic")
    rels = [r.vector for r in ctx.memo("ncrels", lambda: _noncyclic_rels(E))]
    names = CASE_NAMES["noncyclic3"]
    dim = h_dimension(rels, names, ["X1", "X2"])
    spans = h_dimension(rels + [BasisVector(names, {"X1": 1})], names, ["X1", "X2"]) == 0
    return dim == 1 and spans, "dim %d, X1 spans: %s" % (dim, spans), "dim 1, X1 spans: True"


def _noncyclic_rels(E):
    from .relations import noncyclic_relations
    return noncyclic_relations(E)


# ---------------------------------------------------------------- non-cyclic identities

@scenario("noncyclic-nu-y1", "nu on the first copy of Y1: 2Y1 equals the gamma2 eta2 gamma3 eta3 H diagram")
def _nc_y1(ctx):
    E = ctx.engine(kind="noncyclic")
    rel = apply_aut(E, "Y1", Nu(1), "noncyclic3").vector
    four = BasisVector.from_combo(
        E.reduce_noncyclic(LinCombo.of(H(Leg(0, 2, GAMMA), Leg(0, 2, ETA), Leg(0, 3, GAMMA), Leg(0, 3, ETA)))),
        "noncyclic3")
    target = BasisVector.parse("2*Y1", "noncyclic3") - four
    hol = apply_aut(E, "Y1", HolBar(0), "noncyclic3").vector
    return _combine([
        (rel == target, str(rel), str(target)),
        (hol == target, str(hol), str(target)),
        _same(four, "X1 - X2", "noncyclic3"),
    ])


@scenario("noncyclic-omega-nu-y1", "the nu-image of Y1 before reduction: -Y1 plus one H diagram")
def _nc_omega(ctx):
    E = ctx.engine(kind="noncyclic")
    from .relations import transform
    d = ESSENTIAL_NONCYCLIC["Y1"]
    labels, actual = transform(d, Nu(1), E.spec)
    got = E.omega_reduce(d.shape, labels, actual)
    exp = parse_combo("-Y1 + H[(0,2),(e,2)|(0,3),(e,3)]")
    return got == exp, format_combo(got), format_combo(exp)


@scenario("noncyclic-y2", "2Y2 - 3X1 lies in the 2-leg part")
def _nc_y2(ctx):
    Eq = ctx.engine(kind="noncyclic")
    Ef = ctx.engine(kind="noncyclic", mode="full")
    res = []
    for aut in (Nu((1, 2, 3)), HolBar(0)):
        q = apply_aut(Eq, "Y2", aut, "noncyclic3").vector
        f = apply_aut(Ef, "Y2", aut, "noncyclic3").vector
        res.append(_same(q, "2*Y2 - 3*X1", "noncyclic3"))
        res.append((f.without_lower() == q and not f.lower.is_zero(), "lower part %s" % format_combo(f.lower),
                    "nonzero lower part"))
    return _combine(res)


@scenario("noncyclic-x1-plus-x2", "X1 + X2 = -TwoLeg(gamma1, eta1)")
def _nc_x(ctx):
    Ef = ctx.engine(kind="noncyclic", mode="full")
    res = []
    for name in ("X1", "X2"):
        for c in (1, 2):
            v = normalize_sign(apply_aut(Ef, name, Nu(c), "noncyclic3").vector)
            res.append(_same(v, "X1 + X2 + TwoLeg[(0,1),(e,1);0]", "noncyclic3"))
    return _combine(res)


@scenario("noncyclic-mu-trivial", "mu_x kills generators with a repeated label")
def _nc_mu(ctx):
    E = ctx.engine(kind="noncyclic")
    from .relations import transform
    d = YY(Leg(0, 1, GAMMA), Leg(0, 2, GAMMA), Leg(0, 2, ETA), Leg(0, 1, GAMMA), Leg(0, 3, GAMMA), Leg(0, 3, ETA))
    labels, actual = transform(d, Mu(2, 1), E.spec)
    image = E.omega_reduce(d.shape, labels, actual)
    rel = LinCombo.of(d) - image
    # d - 4d = 0 forces d = 0
    ok = rel == LinCombo.of(d).scale(-3) and E.mu_trivial(d)
    return ok, format_combo(rel), format_combo(LinCombo.of(d).scale(-3))


# ---------------------------------------------------------------- two copies

@scenario("cyclic2-holbar-gamma1", "holonomy on Gamma1: Gamma1 - Gamma2 = r*H3 - r*H(0,1,0,0) modulo 4-leg relations")
def _c2_hol(ctx):
    E = ctx.engine(1)
    v = apply_aut(E, "Gamma1", HolBar(0), "cyclic2").vector
    exp = BasisVector.parse("Gamma1 - Gamma2 - r*H3 + r*H[(0,1),(1,2)|(0,1),(0,2)]", "cyclic2")
    rem = reduce_against(v - exp, four_leg_relations(1, CASE_NAMES["cyclic2"]))
    return rem.is_zero(), str(v), str(exp)


@scenario("cyclic2-autt-gamma2", "Aut_t on Gamma2: alpha*Gamma1 + 2*Gamma2 = r*(H1 + H3 - 2*H4)")
def _c2_t(ctx):
    E = ctx.engine(None)
    v = apply_aut(E, "Gamma2", AutT(1), "cyclic2").vector
    return _same(normalize_sign(v), "alpha*Gamma1 + 2*Gamma2 - r*H1 - r*H3 + 2*r*H4", "cyclic2")


@scenario("cyclic2-lambda-identity-params", "lambda with (a,b,c,d) = (0,1,0,0) fixes Gamma1")
def _c2_lam_triv(ctx):
    E = ctx.engine(1)
    v = apply_aut(E, "Gamma1", AutLambda(0, 1, 0, 0), "cyclic2").vector
    return v.is_zero(), str(v), "0"


def chi_points(n):
    """Rational (a, b) with a^2 - a*b + b^2 = 1, from lines through (1, 0)."""
    out = []
    lam = Fraction(3)
    while len(out) < n:
        s = (lam - 2) / (1 - lam + lam * lam)
        a, b = 1 + s, s * lam
        if a * a - a * b + b * b == 1 and (a, b) not in out and b != 0:
            out.append((a, b))
        lam = lam + Fraction(1, 2) if lam > 0 else lam - 1
        if lam == 2:
            lam += Fraction(1, 3)
    return out


@scenario("cyclic2-chi-no-new-relation", "chi_P on Gamma1 and Gamma2 adds nothing to the known relations")
def _c2_chi(ctx):
    E = ctx.engine(1)
    known = echelon(_rels2(ctx, 1))
    res = []
    for a, b in chi_points(3):
        for name in ("Gamma1", "Gamma2"):
            v = apply_aut(E, name, AutChi(a, b), "cyclic2").vector
            rem = reduce_against(v, known)
            res.append((rem.is_zero(), "P=%s*t+%s on %s: %s" % (a, b, name, rem), "0"))
    return _combine(res)


# ---------------------------------------------------------------- lambda

_K = "(Gamma1 + 2*Gamma2 - 3*r*H3)"
LAMBDA_EXPECTED = {
    "Gamma1": "(a*b + c*d)*" + _K,
    "Gamma2": "(a^2 + c^2)*" + _K,
    "Gamma3": "(b^2 + d^2 - 1)*" + _K,
}


def _lambda_expected(name):
    """Expected relation vector, expanded from the scalar times K."""
    coeff = parse_param(LAMBDA_EXPECTED[name].split(")*")[0].lstrip("("), constrained=True)
    r = parse_param("r", constrained=True)
    vec = BasisVector(CASE_NAMES["cyclic2"], {"Gamma1": coeff, "Gamma2": coeff * 2, "H3": coeff * r * -3})
    return normalize_sign(vec)


def _lambda_scenario(name):
    def run(ctx):
        E = ctx.engine(1)
        rel = ctx.memo(("lambda", name), lambda: lambda_relation(name, engine=E))
        exp = _lambda_expected(name)
        ok = (rel.vector - exp).is_zero()
        rem = reduce_against(rel.vector, [known_k()])
        return ok and rem.is_zero(), str(rel.vector), "%s = %s" % (LAMBDA_EXPECTED[name], exp)
    return run


for _i, _name in enumerate(("Gamma1", "Gamma2", "Gamma3"), 1):
    scenario("appendix-lambda-gamma%d" % _i, "lambda_{a,b,c,d} on %s at alpha = 1" % _name)(_lambda_scenario(_name))


@scenario("lambda-specialization-30", "numeric lambda runs at 30 constraint points match the symbolic relations")
def _lambda_points(ctx):
    E = ctx.engine(1)
    bad = []
    pts = constraint_points(30, seed=ctx.seed)
    for name in ("Gamma1", "Gamma2", "Gamma3"):
        sym = ctx.memo(("lambda", name), lambda: lambda_relation(name, engine=E)).vector
        for p in pts:
            num = lambda_relation(name, params=tuple(p[k] for k in "abcd"), engine=E).vector
            ev = sym.map_coeffs(lambda c: c.substitute(p).normalized(False))
            if not ((num - ev).is_zero() or (num + ev).is_zero()):
                bad.append((name, p))
    return not bad, "%d mismatches over %d runs" % (len(bad), 3 * len(pts)), "0 mismatches over 90 runs"


# ---------------------------------------------------------------- psi

@scenario("psi2-pairing-counts", "pairings of 2, 4, 6 legs number 1, 3, 15")
def _psi(ctx):
    got = [len(psi2_expand(d)) for d in (
        Diagram("TwoLeg", (Leg(0, 1), Leg(1, 1))),
        ESSENTIAL_CYCLIC2["H1"],
        ESSENTIAL_CYCLIC2["Gamma1"],
    )]
    return got == [1, 3, 15], str(got), "[1, 3, 15]"


# ---------------------------------------------------------------- negative controls

MUTATIONS = {
    "mutation-flipped-as-sign": {"as_sign": 1},
    "mutation-wrong-push-side": {"push_sign": -1},
    "mutation-dropped-ld": {"ld": False},
}
_MUTATION_CHECKS = ("cyclic3-six-relations", "cyclic3-four-leg-full", "cyclic2-holbar-gamma1",
                    "noncyclic-nu-y1", "noncyclic-x1-plus-x2", "mutation-lambda-point")


def _lambda_point(ctx):
    E = ctx.engine(1)
    p = constraint_points(1, seed=ctx.seed)[0]
    res = []
    for name in ("Gamma1", "Gamma2"):
        num = lambda_relation(name, params=tuple(p[k] for k in "abcd"), engine=E).vector
        exp = _lambda_expected(name).map_coeffs(lambda c: c.substitute(p).normalized(False))
        res.append(((num - exp).is_zero() or (num + exp).is_zero(), str(num), str(exp)))
    return _combine(res)


def _mutation(sid, flags):
    def run(ctx):
        broken = Context(ctx.seed, **flags)
        outcomes = []
        for check in _MUTATION_CHECKS:
            fn = _lambda_point if check == "mutation-lambda-point" else REGISTRY[check][1]
            try:
                ok = fn(broken)[0]
            except Exception as exc:  # a broken pipeline may also crash
                ok = False
                check += " (%s)" % type(exc).__name__
            outcomes.append("%s:%s" % (check, "ok" if ok else "broken"))
        all_ok = all(o.endswith(":ok") for o in outcomes)
        return all_ok, ", ".join(outcomes), "all checks ok"
    scenario(sid, "negative control: checks rerun with %s" % flags, negative=True)(run)


for _sid, _flags in MUTATIONS.items():
    _mutation(_sid, _flags)


# ---------------------------------------------------------------- running

def select(filter_prefix=None):
    ids = sorted(REGISTRY)
    if filter_prefix:
        return [i for i in ids if i.startswith(filter_prefix)]
    return [i for i in ids if not REGISTRY[i][2]]


def run_scenario(sid, ctx=None):
    if sid not in REGISTRY:
        raise UnknownScenario(sid)
    ctx = ctx or Context()
    t0 = time.perf_counter()
    try:
        ok, computed, expected = REGISTRY[sid][1](ctx)
        status = "pass" if ok else "fail"
    except Exception as exc:
        status, computed, expected = "error", "%s: %s" % (type(exc).__name__, exc), ""
    ms = int((time.perf_counter() - t0) * 1000)
    return ScenarioReport(sid, status, computed, expected, ms)


def run_suite(filter_prefix=None, seed=0, **flags):
    """Run the selected scenarios; returns (reports sorted by id, exit code)."""
    ids = select(filter_prefix)
    if not ids:
        raise UnknownScenario(filter_prefix)
    ctx = Context(seed, **flags)
    reports = sorted((run_scenario(i, ctx) for i in ids), key=lambda r: r.id)
    if any(r.status == "error" for r in reports):
        code = 2
    elif any(r.status == "fail" for r in reports):
        code = 1
    else:
        code = 0
    return reports, code


def reports_json(reports, with_time=True):
    rows = []
    for r in reports:
        row = asdict(r)
        if not with_time:
            row.pop("ms")
        rows.append(row)
    summary = {"pass": sum(r.status == "pass" for r in reports),
               "fail": sum(r.status != "pass" for r in reports)}
    return json.dumps({"scenarios": rows, "summary": summary}, indent=2, sort_keys=True)
