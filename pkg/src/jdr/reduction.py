"""Rewriting diagrams into coordinates over a fixed list of generators.

The engine works with one annihilator and a mode: ``quotient`` drops every
diagram with two legs or fewer at creation, ``full`` keeps them as tokens.

Contraction convention: pairing legs v and w with an edge labelled t^m
oriented from v to w, the power t^m is pushed onto the legs on w's side.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

from .algebra import (
    AnnihilatorSpec,
    LaurentPoly,
    ParamPoly,
    divide_by_delta,
    format_param,
)
from .diagrams import (
    ESSENTIAL_CYCLIC2,
    ESSENTIAL_CYCLIC3,
    ESSENTIAL_NONCYCLIC,
    ETA,
    GAMMA,
    BlanchfieldSpec,
    Diagram,
    Leg,
    LinCombo,
    canonicalize,
    expand_multilinear,
    format_combo,
    label_linking,
    label_shift,
    linking,
    parse_combo,
)


class NonCyclicMode(ValueError):
    pass


class UnmatchedTerm(ValueError):
    """A diagram could not be identified with a named generator."""


CASE_NAMES = {
    "cyclic2": ("Gamma1", "Gamma2", "H1", "H2", "H3", "H4"),
    "cyclic3": ("D1", "D2", "G1", "G2", "G3", "G4", "H1", "H2", "H3", "H4"),
    "noncyclic3": ("Y1", "Y2", "X1", "X2"),
}
_CASE_SETS = {
    "cyclic2": ESSENTIAL_CYCLIC2,
    "cyclic3": dict(ESSENTIAL_CYCLIC3, **{k: ESSENTIAL_CYCLIC2[k] for k in ("H1", "H2", "H3", "H4")}),
    "noncyclic3": ESSENTIAL_NONCYCLIC,
}


class BasisVector:
    """Coordinates over named generators plus a bucket of lower-order tokens."""

    def __init__(self, names, coords=None, lower=None):
        self.names = tuple(names)
        coords = coords or {}
        unknown = set(coords) - set(self.names)
        if unknown:
            raise KeyError(unknown)
        self.coords = {n: ParamPoly.coerce(coords.get(n, 0)) for n in self.names}
        self.lower = lower if lower is not None else LinCombo()

    @classmethod
    def from_combo(cls, combo, case):
        names = CASE_NAMES[case]
        lookup = {d: n for n, d in _CASE_SETS[case].items()}
        coords = {}
        lower = LinCombo()
        for d, c in combo.items():
            if d in lookup:
                coords[lookup[d]] = coords.get(lookup[d], 0) + c
            elif d.is_token:
                lower.add(d, c)
            else:
                raise UnmatchedTerm(str(d))
        return cls(names, coords, lower)

    @classmethod
    def parse(cls, text, case, constrained=False):
        """Parse ``Gamma1 + 2*Gamma2 - 3*r*H3`` (bracket diagrams allowed too)."""
        combo = parse_combo(text)
        if constrained:
            combo = combo.map_coeffs(lambda c: c.normalized(True))
        return cls.from_combo(combo, case)

    @classmethod
    def unit(cls, case, name):
        return cls(CASE_NAMES[case], {name: 1})

    def __getitem__(self, name):
        return self.coords[name]

    def _combine(self, other, s):
        assert self.names == other.names
        coords = {n: self.coords[n] + other.coords[n] * s for n in self.names}
        return BasisVector(self.names, coords, self.lower + other.lower.scale(s))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = ParamPoly.coerce(c)
        return BasisVector(self.names, {n: v * c for n, v in self.coords.items()}, self.lower.scale(c))

    def map_coeffs(self, fn):
        return BasisVector(self.names, {n: fn(v) for n, v in self.coords.items()}, self.lower.map_coeffs(fn))

    def without_lower(self):
        return BasisVector(self.names, self.coords)

    def is_zero(self):
        return all(not v for v in self.coords.values()) and self.lower.is_zero()

    def main_is_zero(self):
        return all(not v for v in self.coords.values())

    def __eq__(self, other):
        if not isinstance(other, BasisVector):
            return NotImplemented
        return self.names == other.names and (self - other).is_zero()

    def __hash__(self):
        return hash((self.names, frozenset(self.coords.items())))

    def as_tuple(self):
        return tuple(self.coords[n] for n in self.names)

    def __str__(self):
        parts = []
        for n in self.names:
            c = self.coords[n]
            if not c:
                continue
            if c == 1:
                parts.append(n)
            elif c == -1:
                parts.append("-" + n)
            elif len(c.terms) == 1:
                parts.append("%s*%s" % (format_param(c), n))
            else:
                parts.append("(%s)*%s" % (format_param(c), n))
        if self.lower:
            low = format_combo(self.lower)
            parts.append(low)
        if not parts:
            return "0"
        s = parts[0]
        for p in parts[1:]:
            s += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return s

    __repr__ = __str__


# ---------------------------------------------------------------- contraction plans

# H, v on the left vertex, w on the right one: (sign, kept leg on v's vertex, kept leg on w's vertex)
_H_CROSS = {(1, 3): (-1, 0, 2), (0, 2): (-1, 1, 3), (0, 3): (1, 1, 2), (1, 2): (1, 0, 3)}


def contraction_plan(shape, i, j, m, token_m=0):
    """Describe the diagram obtained by pairing legs i and j.

    Returns (sign, new_shape, [(old index, shift)], new_m) where ``shift`` is
    either 0 or "push" (the leg sits on w's side and receives t^m).
    """
    if i == j:
        raise ValueError("cannot pair a leg with itself")
    if shape == "YY":
        ti, pi = divmod(i, 3)
        tj, pj = divmod(j, 3)
        X = [3 * ti + (pi + 1) % 3, 3 * ti + (pi + 2) % 3]
        if ti != tj:
            Y = [3 * tj + (pj + 1) % 3, 3 * tj + (pj + 2) % 3]
            return 1, "H", [(X[0], 0), (X[1], 0), (Y[0], "push"), (Y[1], "push")], 0
        u = 3 * ti + (3 - pi - pj)
        other = [3 * (1 - ti) + q for q in range(3)]
        mm = m if pj == (pi + 1) % 3 else -m
        return 1, "Lollipop", [(u, 0)] + [(q, 0) for q in other], mm
    if shape == "H":
        rot = [0, 1, 2, 3]
        if i >= 2:
            rot = [2, 3, 0, 1]
            i, j = i - 2, (j + 2) % 4
        if j < 2:
            mm = m if (i, j) == (0, 1) else -m
            return 1, "HLoop", [(rot[2], 0), (rot[3], 0)], mm
        s, a, b = _H_CROSS[(i, j)]
        return s, "TwoLeg", [(rot[a], 0), (rot[b], 0)], m
    if shape == "Lollipop":
        if i == 0:
            pj = j - 1
            return 1, "HLoop", [(1 + (pj + 1) % 3, "push"), (1 + (pj + 2) % 3, "push")], token_m
        if j == 0:
            pi = i - 1
            return 1, "HLoop", [(1 + (pi + 1) % 3, "pull"), (1 + (pi + 2) % 3, "pull")], token_m
        raise NotImplementedError("pairing inside the tripod of a lollipop")
    if shape == "TwoLeg":
        return 1, "ZeroLeg", [], (0, token_m, m if i == 0 else -m)
    if shape == "HLoop":
        return 1, "ZeroLeg", [], (1, token_m, m if i == 0 else -m)
    raise NotImplementedError("pairing legs of %s" % shape)


def _shift_of(tag, m):
    if tag == "push":
        return m
    if tag == "pull":
        return -m
    return 0


# ---------------------------------------------------------------- engine

class Engine:
    """Reduction pipeline for one annihilator.

    ``as_sign``, ``push_sign`` and ``ld`` exist so that the regression
    harness can run deliberately broken variants of the pipeline.
    """

    def __init__(self, annihilator=None, mode="quotient", as_sign=-1, push_sign=1, ld=True,
                 canonical_first=True):
        if mode not in ("quotient", "full"):
            raise ValueError(mode)
        self.ann = annihilator or AnnihilatorSpec.cyclic()
        self.spec = BlanchfieldSpec(self.ann, copies=3)
        self.mode = mode
        self.as_sign = as_sign
        self.push_sign = push_sign
        self.ld = ld
        self.canonical_first = canonical_first
        self._r4 = {}
        self._r6 = {}
        self._c3 = {}
        self._nc = {}

    # basic helpers
    @property
    def cyclic(self):
        return self.ann.is_cyclic

    @property
    def alpha(self):
        return self.ann.alpha

    def in_range(self, k):
        return 0 <= k <= 1 if self.cyclic else k == 0

    def keeps(self, shape):
        return self.mode == "full" or shape in ("YY", "H")

    def canon(self, d):
        return canonicalize(d, self.as_sign)

    def add(self, out, d, c):
        """Add c*d to ``out`` after canonicalization, honouring the mode."""
        if not self.keeps(d.shape):
            return
        out.add_canonical(d, c, self.as_sign)

    # pairing
    def contract(self, d, i, j, m):
        """Pair legs i and j of d along an edge t^m; returns (sign, diagram)."""
        s, shape, plan, mm = contraction_plan(d.shape, i, j, m, d.m)
        push = m * self.push_sign
        legs = [d.legs[q].shift(_shift_of(tag, push)) for q, tag in plan]
        return s, Diagram(shape, legs, mm)

    def pair_legs(self, d, i, j, excess):
        """Sum over the monomials c*t^m of ``excess`` of c times the contraction."""
        out = LinCombo()
        for m, c in sorted(LaurentPoly.coerce(excess).terms.items()):
            s, nd = self.contract(d, i, j, m)
            self.add(out, nd, c * s)
        return out

    def _pair_all(self, d, idx, base_leg):
        out = LinCombo()
        for w in range(len(d.legs)):
            if w == idx:
                continue
            L = linking(base_leg, d.legs[w], self.spec)
            if L:
                out.iadd(self.pair_legs(d, idx, w, L))
        return out

    def eliminate_zero_leg(self, d, idx):
        """Expand d whose leg ``idx`` carries delta times its displayed label.

        That label is zero in the module, so the diagram equals the sum of
        its pairings of this leg with every other leg.
        """
        return self._pair_all(d, idx, d.legs[idx])

    def delta_expansion(self, d, idx):
        """The same zero-labelled diagram, expanded by vertex linearity instead."""
        out = LinCombo()
        for j, c in self.ann.delta().terms.items():
            legs = list(d.legs)
            legs[idx] = legs[idx].shift(j)
            self.add(out, Diagram(d.shape, legs, d.m), c)
        return out

    def exponent_step(self, d, idx):
        """One application of the label recursion on leg ``idx``.

        Returns a combination equal to d in which the leg exponent moved one
        step towards the admissible range, plus pairing terms.
        """
        leg = d.legs[idx]
        K = leg.k

        def with_k(k):
            legs = list(d.legs)
            legs[idx] = Leg(k, leg.copy, leg.basis)
            return Diagram(d.shape, legs, d.m)

        out = LinCombo()
        if self.cyclic:
            if K > 1:
                base, other = K - 1, K - 2
            elif K < 0:
                base, other = K + 1, K + 2
            else:
                self.add(out, d, 1)
                return out
            self.add(out, with_k(base), -self.alpha)
            self.add(out, with_k(other), -1)
        else:
            if K > 0:
                base, other = K - 1, K - 1
            elif K < 0:
                base, other = K, K + 1
            else:
                self.add(out, d, 1)
                return out
            self.add(out, with_k(other), -1)
        out.iadd(self._pair_all(d, idx, Leg(base, leg.copy, leg.basis)))
        return out

    def reduce_exponent(self, d, idx=None):
        """Apply the label recursion until no YY or H term has an exponent out of range.

        Starts with leg ``idx`` (default: the first offending leg); cyclic only.
        """
        if not self.cyclic:
            raise NonCyclicMode("use normalize_exponents for the t+1 module")
        return self.normalize_exponents(d, idx)

    def normalize_exponents(self, d, idx=None):
        out = LinCombo()
        p = self.first_offending(d) if idx is None else idx
        if p is None or self.in_range(d.legs[p].k):
            self.add(out, d, 1)
            return out
        todo = self.exponent_step(d, p)
        while todo:
            nxt = LinCombo()
            for dd, c in todo.items():
                q = self.first_offending(dd) if dd.shape in ("YY", "H") else None
                if q is None:
                    out.add(dd, c)
                else:
                    nxt.iadd(self.exponent_step(dd, q), c)
            todo = nxt
        return out

    def first_offending(self, d):
        for p, l in enumerate(d.legs):
            if not self.in_range(l.k):
                return p
        return None

    def eliminate_lollipop(self, d):
        """Rewrite a lollipop token as 1/delta(1) times pairings of its stem leg."""
        if d.shape != "Lollipop":
            raise ValueError("not a lollipop")
        d1 = self.ann.delta_at_one()
        if not d1.is_constant():
            raise ValueError("delta(1) must be a number to divide by it")
        inv = Fraction(1) / d1.constant_value()
        return self.eliminate_zero_leg(d, 0).scale(inv)

    # omega reduction
    def omega_reduce(self, shape, labels, actual=None, coeff=1, m=0):
        """Expand general labels and restore the canonical linkings.

        ``actual`` maps index pairs (i, j), i < j, to the numerator of the
        linking the diagram really carries; missing pairs are canonical.
        """
        out = expand_multilinear(shape, labels, coeff, m, self.as_sign)
        if not self.keeps(shape):
            out = LinCombo()
        if not actual or not self.ld:
            return out
        n = len(labels)
        for i, j in itertools.combinations(range(n), 2):
            act = actual.get((i, j))
            if act is None:
                continue
            conv = label_linking(labels[i], labels[j], self.spec)
            diff = act - conv
            if not diff:
                continue
            excess = divide_by_delta(diff, self.ann)
            for mexp, c in sorted(excess.terms.items()):
                s, nshape, plan, mm = contraction_plan(shape, i, j, mexp, m)
                if not self.keeps(nshape):
                    continue
                push = mexp * self.push_sign
                shifts = [_shift_of(tag, push) for _, tag in plan]
                nlabels = [label_shift(labels[q], sh) for (q, _), sh in zip(plan, shifts)]
                nactual = {}
                for (a, (qa, _)), (b, (qb, _)) in itertools.combinations(enumerate(plan), 2):
                    lo, hi = (qa, qb) if qa < qb else (qb, qa)
                    f = actual.get((lo, hi))
                    if f is None:
                        f = label_linking(labels[lo], labels[hi], self.spec)
                    if qa > qb:
                        f = _bar(f)
                    nactual[(a, b)] = f.shift(shifts[a] - shifts[b])
                out.iadd(self.omega_reduce(nshape, nlabels, nactual, ParamPoly.coerce(coeff) * c * s, mm))
        return out

    # ------------------------------------------------------------ cyclic, two copies
    def reduc4(self, legs):
        """Coordinates of an H diagram over Gamma1, Gamma2, H1..H4 (two copies)."""
        legs = tuple(l if isinstance(l, Leg) else Leg(*l) for l in legs)
        if legs in self._r4:
            return self._r4[legs]
        res = self._reduc4(legs)
        self._r4[legs] = res
        return res

    def _reduc4(self, legs):
        out = LinCombo()
        copies = [l.copy for l in legs]
        if any(copies.count(c) % 2 for c in set(copies)):
            return out
        if legs[0] == legs[1] or legs[2] == legs[3]:
            return out
        d = Diagram("H", legs)
        p = self.first_offending(d)
        if p is not None:
            return self.reduce_combo4(self.exponent_step(d, p))
        k = [l.k for l in legs]
        e = copies
        if e[0] == e[1] == e[2] == e[3]:
            sign = (-1) ** (k[0] + k[2]) if self.as_sign == -1 else 1
            for tup in (((0, 1), (1, 1), (0, 2), (1, 2)),
                        ((0, 1), (1, 2), (0, 1), (1, 2)),
                        ((0, 1), (1, 2), (0, 2), (1, 1))):
                out.iadd(self.reduc4(tuple(Leg(*x) for x in tup)), sign)
            return out
        l1, l2, l3, l4 = legs
        if e[0] == e[1]:
            out.iadd(self.reduc4((l1, l3, l2, l4)))
            out.iadd(self.reduc4((l1, l4, l2, l3)), -1)
            return out
        if e[0] == e[3]:
            out.iadd(self.reduc4((l1, l2, l4, l3)), self.as_sign)
            return out
        S = sum(k)
        if S in (0, 4):
            name = "H1"
        elif S in (1, 3):
            name = "H2"
        elif k[0] == k[2]:
            name = "H1"
        elif k[0] == k[1]:
            name = "H3"
        else:
            name = "H4"
        out.add(ESSENTIAL_CYCLIC2[name], 1)
        return out

    def reduc6(self, legs):
        """Coordinates of a YY diagram over Gamma1, Gamma2, H1..H4 (two copies)."""
        legs = tuple(l if isinstance(l, Leg) else Leg(*l) for l in legs)
        if legs in self._r6:
            return self._r6[legs]
        res = self._reduc6(legs)
        self._r6[legs] = res
        return res

    def _reduc6(self, legs):
        out = LinCombo()
        copies = [l.copy for l in legs]
        if any(copies.count(c) % 2 for c in set(copies)):
            return out
        A, B = legs[:3], legs[3:]
        if len(set(A)) < 3 or len(set(B)) < 3:
            return out
        d = Diagram("YY", legs)
        p = self.first_offending(d)
        if p is not None:
            if self.canonical_first:
                # the recursion order depends on the presentation; fix one per class
                s, cd = self.canon(d)
                if not s:
                    return out
                if cd.legs != legs:
                    return self.reduc6(cd.legs).scale(s)
            return self.reduce_combo2(self.exponent_step(d, p))
        if copies.count(1) == 4:
            swap = {1: 2, 2: 1}
            return self.reduc6(tuple(l.recopy(swap) for l in legs))
        if copies.count(1) != 2:
            raise UnmatchedTerm("unexpected copy pattern %s" % (copies,))

        def rot(t):
            for r in range(3):
                tt = t[r:] + t[:r]
                if tt[0].copy == 1:
                    return tt
            raise UnmatchedTerm("copy 1 missing on a tripod")

        A, B = rot(A), rot(B)
        k = [l.k for l in A + B]
        s = k[2] + k[4] - k[1] - k[5]
        sign = 1 if s == 0 else (-1 if self.as_sign == -1 else 1)
        name = "Gamma1" if (k[0] + k[3]) % 2 == 0 else "Gamma2"
        out.add(ESSENTIAL_CYCLIC2[name], sign)
        return out

    def reduce_combo2(self, combo):
        """Reduce a combination over two copies to named generators and tokens."""
        out = LinCombo()
        for d, c in combo.items():
            if d.shape == "YY":
                out.iadd(self.reduc6(d.legs), c)
            elif d.shape == "H":
                out.iadd(self.reduc4(d.legs), c)
            elif self.keeps(d.shape):
                out.add(d, c)
        return out

    reduce_combo4 = reduce_combo2

    # ------------------------------------------------------------ cyclic, three copies
    def _orbit_moves(self, d):
        """Exact in-range moves: multiplication by t on a copy or on a tripod."""
        copies = sorted({l.copy for l in d.legs})
        for c in copies:
            for s in (1, -1):
                legs = [l.shift(s) if l.copy == c else l for l in d.legs]
                if all(0 <= l.k <= 1 for l in legs):
                    yield Diagram(d.shape, legs)
        if d.shape == "YY":
            for side in (0, 1):
                for s in (1, -1):
                    legs = [l.shift(s) if (p // 3) == side else l for p, l in enumerate(d.legs)]
                    if all(0 <= l.k <= 1 for l in legs):
                        yield Diagram("YY", legs)

    def match_cyclic3(self, d):
        """Identify an admissible YY diagram over three copies with a named one."""
        if d in self._c3:
            return self._c3[d]
        targets = {v: n for n, v in ESSENTIAL_CYCLIC3.items()}
        s0, c0 = self.canon(d)
        if s0 == 0:
            self._c3[d] = (0, None)
            return 0, None
        seen = {c0: s0}
        queue = deque([c0])
        found = None
        while queue:
            cur = queue.popleft()
            if cur in targets:
                found = (seen[cur], targets[cur])
                break
            for nd in self._orbit_moves(cur):
                s, cd = self.canon(nd)
                if s == 0:
                    # a diagram equal to minus itself
                    found = (0, None)
                    queue.clear()
                    break
                s *= seen[cur]
                if cd in seen:
                    if seen[cd] != s:
                        found = (0, None)
                        queue.clear()
                        break
                    continue
                seen[cd] = s
                queue.append(cd)
        if found is None:
            raise UnmatchedTerm(str(d))
        self._c3[d] = found
        return found

    def reduce_combo3(self, combo):
        """Reduce a combination over three copies (quotient or full mode)."""
        out = LinCombo()
        todo = combo
        while todo:
            nxt = LinCombo()
            for d, c in todo.items():
                if d.shape == "YY":
                    p = self.first_offending(d)
                    if p is not None:
                        nxt.iadd(self.exponent_step(d, p), c)
                        continue
                    s, name = self.match_cyclic3(d)
                    if s:
                        out.add(ESSENTIAL_CYCLIC3[name], c * s)
                elif d.shape == "H":
                    order = []
                    for l in d.legs:
                        if l.copy not in order:
                            order.append(l.copy)
                    relabel = {cp: i + 1 for i, cp in enumerate(order)}
                    legs = tuple(l.recopy(relabel) for l in d.legs)
                    out.iadd(self.reduc4(legs), c)
                elif self.keeps(d.shape):
                    out.add(d, c)
            todo = nxt
        return out

    # ------------------------------------------------------------ non-cyclic
    @staticmethod
    def mu_trivial(d):
        """True when some mu_x scales the diagram by x^n with n != 0."""
        for c in {l.copy for l in d.legs}:
            ng = sum(1 for l in d.legs if l.copy == c and l.basis == GAMMA)
            ne = sum(1 for l in d.legs if l.copy == c and l.basis == ETA)
            if ng != ne:
                return True
        return False

    def reduce_noncyclic(self, combo):
        out = LinCombo()
        targets = {v: n for n, v in ESSENTIAL_NONCYCLIC.items()}
        todo = combo
        while todo:
            nxt = LinCombo()
            for d, c in todo.items():
                if not d.shape in ("YY", "H"):
                    if self.keeps(d.shape):
                        out.add(d, c)
                    continue
                p = self.first_offending(d)
                if p is not None:
                    nxt.iadd(self.exponent_step(d, p), c)
                    continue
                if self.mu_trivial(d):
                    continue
                if d.shape == "H":
                    e = [l.copy for l in d.legs]
                    l1, l2, l3, l4 = d.legs
                    if e[0] == e[1]:
                        self.add(nxt, Diagram("H", (l1, l3, l2, l4)), c)
                        self.add(nxt, Diagram("H", (l1, l4, l2, l3)), -c)
                        continue
                    if e[0] == e[3]:
                        self.add(nxt, Diagram("H", (l1, l2, l4, l3)), c * self.as_sign)
                        continue
                s, cd = self.canon(_relabel_copies(d))
                if not s:
                    continue
                if cd in targets:
                    out.add(cd, c * s)
                    continue
                moved = self._nu_move(cd, targets) if cd.shape == "YY" else None
                if moved is None:
                    raise UnmatchedTerm(str(cd))
                nxt.iadd(moved, c * s)
            todo = nxt
        return out

    def _nu_move(self, d, targets):
        """Rewrite d through nu on a set of copies so that it lands on a named diagram.

        nu sends gamma to eta and eta to -gamma; the relation keeps the old
        linkings, so the omega reduction adds the correcting pairings.
        """
        copies = sorted({l.copy for l in d.legs})
        for size in range(1, len(copies) + 1):
            for subset in itertools.combinations(copies, size):
                labels = []
                legs = []
                for l in d.legs:
                    if l.copy in subset:
                        nb = ETA if l.basis == GAMMA else GAMMA
                        sign = 1 if l.basis == GAMMA else -1
                        leg = Leg(l.k, l.copy, nb)
                        labels.append({(l.copy, nb): LaurentPoly({l.k: sign})})
                    else:
                        leg = l
                        labels.append({(l.copy, l.basis): LaurentPoly({l.k: 1})})
                    legs.append(leg)
                s, cd = self.canon(Diagram(d.shape, legs))
                if s and cd in targets:
                    actual = {(i, j): linking(d.legs[i], d.legs[j], self.spec)
                              for i, j in itertools.combinations(range(len(d.legs)), 2)}
                    return self.omega_reduce(d.shape, labels, actual)
        return None

    # ------------------------------------------------------------ iota expansion
    def iota_expand(self, d):
        """Half the sum over the ways to spread a one-copy H diagram on two copies."""
        if d.shape != "H" or len({l.copy for l in d.legs}) != 1:
            raise ValueError("expects an H diagram labelled in one copy")
        raw = LinCombo()
        for first in itertools.combinations(range(4), 2):
            legs = [Leg(l.k, 1 if p in first else 2, l.basis) for p, l in enumerate(d.legs)]
            self.add(raw, Diagram("H", legs), Fraction(1, 2))
        return self.reduce_combo2(raw)


def _relabel_copies(d):
    """Renumber the copies used by d as 1, 2, ... in increasing order."""
    used = sorted({l.copy for l in d.legs})
    mapping = {c: i + 1 for i, c in enumerate(used)}
    return Diagram(d.shape, [l.recopy(mapping) for l in d.legs], d.m)


def _bar(q):
    return LaurentPoly({-k: c for k, c in q.terms.items()})


# ---------------------------------------------------------------- psi_n

class Contracted:
    """One fully contracted diagram: the leg pairing and the edge colours f_vw."""

    __slots__ = ("pairs", "colours")

    def __init__(self, pairs, colours):
        self.pairs = tuple(pairs)
        self.colours = tuple(colours)

    def __repr__(self):
        return "Contracted(%s)" % ", ".join("%d-%d: (%s)/delta" % (a + 1, b + 1, c)
                                            for (a, b), c in zip(self.pairs, self.colours))


def perfect_matchings(items):
    items = list(items)
    if not items:
        yield ()
        return
    if len(items) % 2:
        return
    a = items[0]
    for idx in range(1, len(items)):
        b = items[idx]
        rest = items[1:idx] + items[idx + 1:]
        for m in perfect_matchings(rest):
            yield ((a, b),) + m


def psi2_expand(d, spec=None):
    """All leg pairings of d, each with the linking colours on the new edges."""
    spec = spec or BlanchfieldSpec()
    n = len(d.legs)
    if n % 2:
        return []
    out = []
    for pm in perfect_matchings(range(n)):
        out.append(Contracted(pm, [linking(d.legs[a], d.legs[b], spec) for a, b in pm]))
    return out
