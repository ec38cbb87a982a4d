import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jdr.algebra import LaurentPoly
from jdr.diagrams import (
    ESSENTIAL_CYCLIC2,
    ESSENTIAL_CYCLIC3,
    ESSENTIAL_NONCYCLIC,
    NAMED,
    Diagram,
    Leg,
    LinCombo,
    canonicalize,
    expand_multilinear,
    format_combo,
    format_diagram,
    is_as_degenerate,
    naive_expansion_count,
    parse_combo,
    parse_diagram,
)
from jdr.reduction import perfect_matchings, psi2_expand

legs_st = st.builds(Leg, st.integers(-2, 3), st.integers(1, 3), st.sampled_from("ge"))


def parity(p):
    inv = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    return -1 if inv % 2 else 1


@given(st.lists(legs_st, min_size=6, max_size=6), st.permutations(range(3)), st.permutations(range(3)),
       st.booleans())
def test_yy_canonical_form_respects_antisymmetry(legs, pa, pb, swap):
    d = Diagram("YY", legs)
    a = [legs[i] for i in pa]
    b = [legs[3 + i] for i in pb]
    new = Diagram("YY", b + a if swap else a + b)
    s1, c1 = canonicalize(d)
    s2, c2 = canonicalize(new)
    expected = parity(pa) * parity(pb)
    assert c1 == c2
    assert s2 == s1 * expected


@given(st.lists(legs_st, min_size=4, max_size=4))
def test_h_canonical_form_respects_antisymmetry(legs):
    d = Diagram("H", legs)
    s, c = canonicalize(d)
    moves = [((1, 0, 2, 3), -1), ((0, 1, 3, 2), -1), ((2, 3, 0, 1), 1), ((3, 2, 1, 0), 1)]
    for perm, sign in moves:
        s2, c2 = canonicalize(Diagram("H", [legs[i] for i in perm]))
        assert c2 == c
        assert s2 == s * sign


@given(st.lists(legs_st, min_size=6, max_size=6), st.permutations((1, 2, 3)))
def test_copy_permutations_are_exact(legs, image):
    cmap = dict(zip((1, 2, 3), image))
    d = Diagram("YY", legs)
    assert canonicalize(d) == canonicalize(Diagram("YY", [l.recopy(cmap) for l in legs]))


@given(st.lists(legs_st, min_size=6, max_size=6))
def test_degenerate_diagrams_vanish(legs):
    d = Diagram("YY", legs)
    if is_as_degenerate(d):
        assert canonicalize(d)[0] == 0


def test_named_generators_are_their_own_representatives():
    for name, d in NAMED.items():
        s, c = canonicalize(d)
        assert (s, c) == (1, d), name


def test_two_leg_orientation():
    a, b = Leg(0, 1), Leg(1, 1)
    assert canonicalize(Diagram("TwoLeg", (a, b), 2)) == canonicalize(Diagram("TwoLeg", (b, a), -2))


def test_loops_without_twist_vanish():
    assert canonicalize(Diagram("HLoop", (Leg(0, 1), Leg(0, 2)), 0))[0] == 0
    assert canonicalize(Diagram("Lollipop", (Leg(0, 1), Leg(0, 1), Leg(0, 2), Leg(0, 3)), 0))[0] == 0


@pytest.mark.parametrize("d", list(ESSENTIAL_CYCLIC2.values()) + list(ESSENTIAL_CYCLIC3.values())
                         + list(ESSENTIAL_NONCYCLIC.values()))
def test_diagram_text_roundtrip(d):
    assert parse_diagram(format_diagram(d)) == d


def test_combo_parsing():
    c = parse_combo("(1-alpha)*(alpha+2)^2*G1 - 4*H3 + r*TwoLeg[(0,1),(1,1);0]")
    again = parse_combo(format_combo(c))
    assert c == again
    assert len(c) == 3
    assert parse_combo("Gamma1 - Γ1").is_zero()


def test_multilinear_expansion_term_count():
    lab = {(1, "g"): LaurentPoly({0: 1, 1: 2}), (2, "g"): LaurentPoly({0: 1})}
    labels = [lab, {(2, "g"): LaurentPoly({1: 1})}, {(1, "g"): LaurentPoly({0: 1})}, {(2, "g"): LaurentPoly({0: 3})}]
    assert naive_expansion_count(labels) == 3
    out = expand_multilinear("H", labels)
    manual = LinCombo()
    for c, leg in ((1, Leg(0, 1)), (2, Leg(1, 1)), (1, Leg(0, 2))):
        manual.add_canonical(Diagram("H", (leg, Leg(1, 2), Leg(0, 1), Leg(0, 2))), 3 * c)
    assert out == manual


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_perfect_matching_counts(m):
    # (2m-1)!! = (2m)! / (2^m m!)
    expected = math.factorial(2 * m) // (2 ** m * math.factorial(m))
    pms = list(perfect_matchings(range(2 * m)))
    assert len(pms) == expected
    assert len({frozenset(map(frozenset, pm)) for pm in pms}) == expected


def test_psi_pairings_on_generators():
    counts = [len(psi2_expand(d)) for d in (
        Diagram("TwoLeg", (Leg(0, 1), Leg(1, 1))), NAMED["H1"], NAMED["Gamma1"])]
    assert counts == [1, 3, 15]
