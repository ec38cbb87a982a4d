"""Exact coefficient rings.

ParamPoly is a polynomial over Q in the parameters alpha, a, b, c, d, r.
Optionally it lives in the quotient by a^2+b^2+c^2+d^2 = 1+ab+cd, where the
normal form keeps the exponent of ``a`` at most 1.

LaurentPoly is a Laurent polynomial in t with ParamPoly coefficients.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache

VARS = ("alpha", "a", "b", "c", "d", "r")
NVARS = len(VARS)
_ZERO_EXP = (0,) * NVARS
_IDX = {name: i for i, name in enumerate(VARS)}


class NotPolynomialExcess(ValueError):
    pass


class ConstraintViolated(ValueError):
    pass


def _exp(**powers):
    e = [0] * NVARS
    for name, k in powers.items():
        e[_IDX[name]] = k
    return tuple(e)


def _add_exp(e1, e2):
    return tuple(x + y for x, y in zip(e1, e2))


# a^2 -> 1 + ab + cd - b^2 - c^2 - d^2
_A2_RULE = (
    (_exp(), Fraction(1)),
    (_exp(a=1, b=1), Fraction(1)),
    (_exp(c=1, d=1), Fraction(1)),
    (_exp(b=2), Fraction(-1)),
    (_exp(c=2), Fraction(-1)),
    (_exp(d=2), Fraction(-1)),
)


@lru_cache(maxsize=None)
def _a_power_normal(k):
    """Normal form of a^k as a tuple of (exponent, coeff) with k_a <= 1."""
    if k <= 1:
        return ((_exp(a=k), Fraction(1)),)
    acc = {}
    for e, c in _a_power_normal(k - 1):
        # multiply by a
        if e[1] == 0:
            e2 = (e[0], 1) + e[2:]
            acc[e2] = acc.get(e2, 0) + c
        else:
            base = (e[0], 0) + e[2:]
            for re_, rc in _A2_RULE:
                e2 = _add_exp(base, re_)
                acc[e2] = acc.get(e2, 0) + c * rc
    return tuple((e, c) for e, c in sorted(acc.items()) if c != 0)


def _normalize_terms(terms):
    out = {}
    for e, c in terms.items():
        if c == 0:
            continue
        if e[1] < 2:
            out[e] = out.get(e, 0) + c
            continue
        rest = (e[0], 0) + e[2:]
        for ae, ac in _a_power_normal(e[1]):
            e2 = _add_exp(rest, ae)
            out[e2] = out.get(e2, 0) + c * ac
    return {e: c for e, c in out.items() if c != 0}


class ParamPoly:
    """Immutable polynomial in (alpha, a, b, c, d, r) over Q."""

    __slots__ = ("terms", "constrained", "_hash")

    def __init__(self, terms=None, constrained=False, _clean=False):
        if terms is None:
            terms = {}
        if not _clean:
            t = {}
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    e = tuple(e)
                    t[e] = t.get(e, 0) + c
            terms = {e: c for e, c in t.items() if c}
            if constrained:
                terms = _normalize_terms(terms)
        self.terms = terms
        self.constrained = constrained
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, value, constrained=False):
        value = Fraction(value)
        return cls({_ZERO_EXP: value} if value else {}, constrained, _clean=True)

    @classmethod
    def var(cls, name, constrained=False):
        return cls({_exp(**{name: 1}): Fraction(1)}, constrained)

    @classmethod
    def coerce(cls, x, constrained=False):
        if isinstance(x, ParamPoly):
            if constrained and not x.constrained:
                return x.normalized(True)
            return x
        return cls.const(x, constrained)

    def normalized(self, constrained=True):
        return param_normalize(self, constrained)

    # predicates
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(e == _ZERO_EXP for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant: %s" % self)
        return self.terms.get(_ZERO_EXP, Fraction(0))

    def variables(self):
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(VARS[i])
        return used

    # arithmetic
    def _mode(self, other):
        return self.constrained or other.constrained

    def __add__(self, other):
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other)
        cons = self._mode(other)
        a, b = self, other
        if cons:
            a, b = a.coerce(a, True), b.coerce(b, True)
        t = dict(a.terms)
        for e, c in b.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return ParamPoly(t, cons, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({e: -c for e, c in self.terms.items()}, self.constrained, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ParamPoly):
            other = Fraction(other)
            if not other:
                return ParamPoly({}, self.constrained, _clean=True)
            return ParamPoly({e: c * other for e, c in self.terms.items()},
                             self.constrained, _clean=True)
        cons = self._mode(other)
        if len(self.terms) == 1 and len(other.terms) == 1:
            (e1, c1), = self.terms.items()
            (e2, c2), = other.terms.items()
            if e1 == _ZERO_EXP or e2 == _ZERO_EXP:
                return ParamPoly({_add_exp(e1, e2): c1 * c2}, cons, _clean=True)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                t[e] = t.get(e, 0) + c1 * c2
        if cons:
            return ParamPoly(_normalize_terms(t), True, _clean=True)
        return ParamPoly({e: c for e, c in t.items() if c}, False, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = ParamPoly.const(1, self.constrained)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exact_div(self, scalar):
        scalar = Fraction(scalar)
        return ParamPoly({e: c / scalar for e, c in self.terms.items()}, self.constrained, _clean=True)

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            try:
                other = ParamPoly.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.constrained != other.constrained:
            return (self - other).is_zero()
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # evaluation and substitution
    def evaluate(self, values, check_constraint=True):
        """Evaluate at rational values; missing variables must not occur."""
        if self.constrained and check_constraint and all(k in values for k in "abcd"):
            if not satisfies_constraint(values):
                raise ConstraintViolated(values)
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term *= Fraction(values[VARS[i]]) ** k
            total += term
        return total

    def substitute(self, values):
        """Partial substitution of some variables by rationals."""
        t = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for name, v in values.items():
                i = _IDX[name]
                if e2[i]:
                    c = c * Fraction(v) ** e2[i]
                    e2[i] = 0
            e2 = tuple(e2)
            t[e2] = t.get(e2, 0) + c
        return ParamPoly(t, self.constrained)

    def leading(self):
        """Largest monomial in lex order on (alpha, a, b, c, d, r) and its coefficient."""
        if not self.terms:
            return None, Fraction(0)
        e = max(self.terms)
        return e, self.terms[e]

    def leading_coeff(self):
        return self.leading()[1]

    def __repr__(self):
        return "ParamPoly(%s)" % format_param(self)

    def __str__(self):
        return format_param(self)


def param_normalize(p, constraint_enabled=True):
    if not constraint_enabled:
        return ParamPoly(dict(p.terms), False, _clean=True)
    return ParamPoly(_normalize_terms(p.terms), True, _clean=True)


def satisfies_constraint(values):
    a, b, c, d = (Fraction(values[k]) for k in "abcd")
    return a * a + b * b + c * c + d * d == 1 + a * b + c * d


def constraint_points(n, seed=0):
    """Rational points on a^2+b^2+c^2+d^2 = 1+ab+cd.

    Each point is the second intersection of a random rational line through
    (1, 0, 0, 0) with the quadric.
    """
    rng = random.Random(seed)
    pts = []
    seen = set()
    while len(pts) < n:
        v = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(4)]
        va, vb, vc, vd = v
        q = va * va + vb * vb + vc * vc + vd * vd - va * vb - vc * vd
        lin = 2 * va - vb
        if q == 0 or lin == 0:
            continue
        s = -lin / q
        p = (1 + s * va, s * vb, s * vc, s * vd)
        if p in seen:
            continue
        seen.add(p)
        pt = dict(zip("abcd", p))
        assert satisfies_constraint(pt)
        pts.append(pt)
    return pts


# ---------------------------------------------------------------- printing

def _format_coeff_monomial(c, factors):
    """Render coefficient c times the list of variable factors."""
    if not factors:
        return str(c)
    body = "*".join(factors)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return "%s*%s" % (c, body)


def _factors(e, tpow=None):
    out = []
    for i, k in enumerate(e):
        if k == 1:
            out.append(VARS[i])
        elif k:
            out.append("%s^%d" % (VARS[i], k))
    if tpow:
        out.append("t" if tpow == 1 else "t^%d" % tpow)
    return out


def _join(parts):
    if not parts:
        return "0"
    s = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            s += " - " + p[1:]
        else:
            s += " + " + p
    return s


def format_param(p):
    parts = [_format_coeff_monomial(p.terms[e], _factors(e)) for e in sorted(p.terms, reverse=True)]
    return _join(parts)


# ---------------------------------------------------------------- Laurent polynomials

class LaurentPoly:
    """Immutable Laurent polynomial in t with ParamPoly coefficients."""

    __slots__ = ("terms", "constrained")

    def __init__(self, terms=None, constrained=False):
        t = {}
        for k, c in (terms or {}).items():
            c = ParamPoly.coerce(c, constrained)
            if c.constrained:
                constrained = True
            if c:
                t[int(k)] = c
        if constrained:
            t = {k: ParamPoly.coerce(c, True) for k, c in t.items()}
            t = {k: c for k, c in t.items() if c}
        self.terms = t
        self.constrained = constrained

    @classmethod
    def monomial(cls, k, coeff=1):
        return cls({k: coeff})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, LaurentPoly):
            return x
        return cls({0: x})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def support(self):
        return sorted(self.terms)

    def coeff(self, k):
        return self.terms.get(k, ParamPoly.const(0, self.constrained))

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t[k] + c if k in t else c
        return LaurentPoly(t, self.constrained or other.constrained)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.terms.items()}, self.constrained)

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, ParamPoly):
                return LaurentPoly({k: c * other for k, c in self.terms.items()},
                                   self.constrained or other.constrained)
            return LaurentPoly({k: c * other for k, c in self.terms.items()}, self.constrained)
        t = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                t[k] = t[k] + c1 * c2 if k in t else c1 * c2
        return LaurentPoly(t, self.constrained or other.constrained)

    __rmul__ = __mul__

    def shift(self, n):
        return LaurentPoly({k + n: c for k, c in self.terms.items()}, self.constrained)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate_t(self, value):
        """Substitute a rational for t; the result is a ParamPoly."""
        value = Fraction(value)
        out = ParamPoly.const(0, self.constrained)
        for k, c in self.terms.items():
            out = out + c * (value ** k)
        return out

    def map_coeffs(self, fn):
        return LaurentPoly({k: fn(c) for k, c in self.terms.items()})

    def __repr__(self):
        return "LaurentPoly(%s)" % format_laurent(self)

    def __str__(self):
        return format_laurent(self)


def format_laurent(q):
    parts = []
    for k in sorted(q.terms, reverse=True):
        c = q.terms[k]
        for e in sorted(c.terms, reverse=True):
            parts.append(_format_coeff_monomial(c.terms[e], _factors(e, k)))
    return _join(parts)


def laurent_bar(q):
    return LaurentPoly({-k: c for k, c in q.terms.items()}, q.constrained)


# ---------------------------------------------------------------- annihilators

class AnnihilatorSpec:
    """Either delta = t + alpha + t^-1 (cyclic) or delta = t + 1 (non-cyclic).

    ``alpha`` may be a rational or a ParamPoly (typically the free variable).
    """

    def __init__(self, kind="cyclic", alpha=None):
        if kind not in ("cyclic", "noncyclic"):
            raise ValueError(kind)
        self.kind = kind
        if kind == "cyclic":
            if alpha is None or alpha == "sym":
                alpha = ParamPoly.var("alpha")
            alpha = ParamPoly.coerce(alpha)
            if alpha.is_constant() and alpha.constant_value() == -2:
                raise ValueError("alpha = -2 is not allowed")
        else:
            alpha = None
        self.alpha = alpha

    @classmethod
    def cyclic(cls, alpha=None):
        return cls("cyclic", alpha)

    @classmethod
    def noncyclic(cls):
        return cls("noncyclic")

    @property
    def is_cyclic(self):
        return self.kind == "cyclic"

    @property
    def symbolic(self):
        return self.is_cyclic and not self.alpha.is_constant()

    def delta(self):
        if self.is_cyclic:
            return LaurentPoly({1: 1, 0: self.alpha, -1: 1})
        return LaurentPoly({1: 1, 0: 1})

    def delta_at_one(self):
        if self.is_cyclic:
            return self.alpha + 2
        return ParamPoly.const(2)

    def support(self):
        return (0, 1) if self.is_cyclic else (0,)

    def key(self):
        if self.is_cyclic:
            return ("cyclic", self.alpha)
        return ("noncyclic",)

    def __eq__(self, other):
        return isinstance(other, AnnihilatorSpec) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_cyclic:
            return "AnnihilatorSpec(t + %s + t^-1)" % format_param(self.alpha)
        return "AnnihilatorSpec(t + 1)"


def laurent_mod_delta(q, spec):
    """Reduce q modulo the annihilator; support ends up in {0,1} or {0}."""
    terms = {k: c for k, c in q.terms.items()}
    cons = q.constrained
    if not spec.is_cyclic:
        out = ParamPoly.const(0, cons)
        for k, c in terms.items():
            out = out + (c if k % 2 == 0 else -c)
        return LaurentPoly({0: out}, cons)
    alpha = spec.alpha
    zero = ParamPoly.const(0, cons)
    while True:
        high = [k for k in terms if k > 1]
        low = [k for k in terms if k < 0]
        if not high and not low:
            break
        if high:
            k = max(high)
            c = terms.pop(k)
            # t^k = t^(k-2) * (-alpha t - 1)
            terms[k - 1] = terms.get(k - 1, zero) - c * alpha
            terms[k - 2] = terms.get(k - 2, zero) - c
        else:
            k = min(low)
            c = terms.pop(k)
            # t^k = t^(k+1) * (-t - alpha)
            terms[k + 2] = terms.get(k + 2, zero) - c
            terms[k + 1] = terms.get(k + 1, zero) - c * alpha
        terms = {j: v for j, v in terms.items() if v}
    return LaurentPoly(terms, cons)


def _divmod_monic(num, den):
    """Long division of polynomials in t (non-negative exponents), den monic.

    Both arguments are dicts exponent -> ParamPoly.  Returns (quotient, remainder).
    """
    num = {k: c for k, c in num.items() if c}
    dd = max(den)
    assert den[dd] == 1
    quot = {}
    while num and max(num) >= dd:
        k = max(num)
        c = num.pop(k)
        shift = k - dd
        quot[shift] = c
        for j, dc in den.items():
            if j == dd:
                continue
            v = num.get(j + shift, ParamPoly.const(0, c.constrained)) - c * dc
            if v:
                num[j + shift] = v
            else:
                num.pop(j + shift, None)
    return quot, num


def divide_by_delta(q, spec):
    """Exact division by delta; raises NotPolynomialExcess if it is not exact."""
    if q.is_zero():
        return LaurentPoly({}, q.constrained)
    lo = min(q.terms)
    num = {k - lo: c for k, c in q.terms.items()}
    if spec.is_cyclic:
        den = {2: ParamPoly.const(1), 1: spec.alpha, 0: ParamPoly.const(1)}  # t * delta
        off = lo + 1
    else:
        den = {1: ParamPoly.const(1), 0: ParamPoly.const(1)}
        off = lo
    quot, rem = _divmod_monic(num, den)
    if rem:
        raise NotPolynomialExcess("remainder %s" % format_laurent(LaurentPoly(rem)))
    return LaurentPoly({k + off: c for k, c in quot.items()}, q.constrained)


def split_fraction(numerator, prescribed, spec):
    """Return E with numerator = prescribed + E * delta."""
    return divide_by_delta(LaurentPoly.coerce(numerator) - LaurentPoly.coerce(prescribed), spec)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]+)|(\^)|([-+*()]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot parse %r at %d" % (text, pos))
        num, name, caret, op = m.groups()
        if num is not None:
            out.append(("num", Fraction(num)))
        elif name is not None:
            out.append(("name", name))
        elif caret:
            out.append(("op", "^"))
        else:
            out.append(("op", op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text, constrained=False):
        self.toks = _tokenize(text)
        self.i = 0
        self.constrained = constrained

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError("unexpected token %r" % (tok,))
        self.i += 1
        return tok

    def parse(self):
        out = self.expr()
        if self.i != len(self.toks):
            raise ValueError("trailing input %r" % (self.toks[self.i:],))
        return out

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        out = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            out = out * self.factor()
        return out

    def _int(self):
        neg = False
        if self.peek() == ("op", "-"):
            self.take()
            neg = True
        v = self.take("num")[1]
        if v.denominator != 1:
            raise ValueError("exponent must be an integer")
        return -int(v) if neg else int(v)

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        kind, val = self.peek()
        if kind == "num":
            self.take()
            base = LaurentPoly({0: ParamPoly.const(val, self.constrained)}, self.constrained)
            power_ok = True
        elif kind == "name":
            self.take()
            if val == "t":
                if self.peek() == ("op", "^"):
                    self.take()
                    return LaurentPoly({self._int(): ParamPoly.const(1, self.constrained)}, self.constrained)
                return LaurentPoly({1: ParamPoly.const(1, self.constrained)}, self.constrained)
            if val not in _IDX:
                raise ValueError("unknown variable %r" % val)
            base = LaurentPoly({0: ParamPoly.var(val, self.constrained)}, self.constrained)
            power_ok = True
        elif (kind, val) == ("op", "("):
            self.take()
            base = self.expr()
            self.take("op", ")")
            power_ok = True
        else:
            raise ValueError("unexpected token %r" % ((kind, val),))
        if self.peek() == ("op", "^"):
            self.take()
            n = self._int()
            if n < 0 or not power_ok:
                raise ValueError("negative powers are only allowed on t")
            out = LaurentPoly({0: ParamPoly.const(1, self.constrained)}, self.constrained)
            for _ in range(n):
                out = out * base
            return out
        return base


def parse_laurent(text, constrained=False):
    return _Parser(text, constrained).parse()


def parse_param(text, constrained=False):
    q = parse_laurent(text, constrained)
    if any(k != 0 for k in q.terms):
        raise ValueError("unexpected t in %r" % text)
    return q.coeff(0) if q.terms else ParamPoly.const(0, constrained)


ALPHA = ParamPoly.var("alpha")
R = ParamPoly.var("r")
A = ParamPoly.var("a", True)
B = ParamPoly.var("b", True)
C = ParamPoly.var("c", True)
D = ParamPoly.var("d", True)
ONE = ParamPoly.const(1)
ZERO = ParamPoly.const(0)
