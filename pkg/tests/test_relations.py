from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from jdr.algebra import AnnihilatorSpec, NotPolynomialExcess, ParamPoly
from jdr.reduction import CASE_NAMES, BasisVector, Engine
from jdr.relations import (
    AutLambda,
    AutT,
    HolBar,
    Nu,
    apply_aut,
    echelon,
    four_leg_relations,
    known_k,
    lambda_relation,
    normalize_sign,
    rank_at_specialization,
    reduce_against,
    substitute_h,
)

NAMES = CASE_NAMES["cyclic2"]
small = st.fractions(min_value=-4, max_value=4, max_denominator=3)
vectors = st.lists(small, min_size=len(NAMES), max_size=len(NAMES)).map(
    lambda xs: BasisVector(NAMES, dict(zip(NAMES, xs))))


@settings(max_examples=60, deadline=None)
@given(st.lists(vectors, min_size=1, max_size=7))
def test_rank_matches_sympy(vecs):
    ours = rank_at_specialization(vecs, NAMES, [{}])[0]
    m = sympy.Matrix([[sympy.Rational(v.coords[n].constant_value()) if v.coords[n] else 0 for n in NAMES]
                      for v in vecs])
    assert ours == m.rank()


@settings(max_examples=60, deadline=None)
@given(st.lists(vectors, min_size=1, max_size=5), st.lists(small, min_size=5, max_size=5))
def test_combinations_reduce_to_zero(vecs, coeffs):
    combo = BasisVector(NAMES)
    for v, c in zip(vecs, coeffs):
        combo = combo + v.scale(c)
    assert reduce_against(combo, echelon(vecs)).is_zero()


def test_symbolic_reduction_with_polynomial_pivots():
    alpha = ParamPoly.var("alpha")
    r1, r2 = four_leg_relations(alpha, NAMES)
    target = r1.scale(alpha + 1) - r2.scale(alpha * alpha)
    assert reduce_against(target, [r1, r2]).is_zero()
    assert not reduce_against(BasisVector.unit("cyclic2", "H1"), [r1, r2]).is_zero()


def test_normalize_sign():
    v = BasisVector.parse("-Gamma2 + H1", "cyclic2")
    assert str(normalize_sign(v)) == "Gamma2 - H1"
    assert normalize_sign(normalize_sign(v)) == normalize_sign(v)


def test_substitute_h_uses_the_four_leg_relations():
    v = BasisVector.parse("H1 + H4", "cyclic2")
    assert substitute_h(v) == BasisVector.parse("-3*H2 - H3", "cyclic2")


def test_lambda_at_identity_gives_nothing():
    # P = a*t + b = 1 and Q = c*t + d = 0
    for name in ("Gamma1", "Gamma2", "Gamma3"):
        assert lambda_relation(name, params=(0, 1, 0, 0)).vector.is_zero()


def test_lambda_off_the_quadric_breaks_linkings():
    with pytest.raises(NotPolynomialExcess):
        lambda_relation("Gamma1", params=(1, 0, 0, 1))


def test_lambda_relation_is_a_multiple_of_k():
    rel = lambda_relation("Gamma3")
    assert reduce_against(rel.vector, [known_k()]).is_zero()


def test_automorphism_labels():
    assert str(AutT(1)) == "t(1,1)"
    assert str(Nu((1, 2, 3))) == "nu(123)"
    assert str(HolBar(0)) == "holbar(0,1)"
    assert AutLambda(1, 0, 0, 1).kind == "lambda"


def test_holonomy_and_t_relations_at_alpha_one():
    E = Engine(AnnihilatorSpec.cyclic(1))
    v = apply_aut(E, "Gamma2", AutT(1), "cyclic2").vector
    assert normalize_sign(v) == BasisVector.parse("Gamma1 + 2*Gamma2 - r*H1 - r*H3 + 2*r*H4", "cyclic2")


def test_rank_uses_exact_arithmetic():
    v1 = BasisVector(NAMES, {"H1": Fraction(1, 3), "H2": Fraction(1, 7)})
    v2 = BasisVector(NAMES, {"H1": Fraction(7, 1), "H2": Fraction(3, 1)})
    assert rank_at_specialization([v1, v2], NAMES, [{}]) == [1]
