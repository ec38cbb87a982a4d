import itertools
import random

import pytest

from jdr.algebra import AnnihilatorSpec
from jdr.diagrams import ESSENTIAL_CYCLIC2, Diagram, Leg, LinCombo, parse_combo
from jdr.reduction import CASE_NAMES, BasisVector, Engine, NonCyclicMode, UnmatchedTerm
from jdr.relations import cyclic_relations, echelon, reduce_against

EXPONENTS = range(-1, 3)
SWAP = {1: 2, 2: 1}


@pytest.fixture(scope="module")
def engine():
    return Engine(AnnihilatorSpec.cyclic())


def _vec(combo):
    return BasisVector.from_combo(combo, "cyclic2")


def test_unit_vectors(engine):
    for name, d in ESSENTIAL_CYCLIC2.items():
        red = engine.reduc6(d.legs) if d.shape == "YY" else engine.reduc4(d.legs)
        assert _vec(red) == BasisVector.unit("cyclic2", name), name


def test_degenerate_tuples_reduce_to_zero(engine):
    assert engine.reduc6((Leg(0, 1), Leg(0, 1), Leg(1, 2), Leg(0, 1), Leg(0, 2), Leg(1, 2))).is_zero()
    assert engine.reduc4((Leg(1, 1), Leg(1, 1), Leg(0, 2), Leg(0, 2))).is_zero()
    assert engine.reduc4((Leg(0, 1), Leg(0, 2), Leg(2, 1), Leg(2, 1))).is_zero()


def _yy_moves(legs):
    a, b = legs[:3], legs[3:]
    return [
        ((a[1], a[0], a[2]) + b, -1),
        (a[1:] + a[:1] + b, 1),
        (b + a, 1),
        (tuple(l.recopy(SWAP) for l in legs), 1),
    ]


# every copy pattern of a two-copy YY diagram is equivalent to one of these under
# tripod permutations, swapping the tripods and swapping the copies
YY_PATTERNS = [(1, 1, 2, 2, 2, 2), (1, 2, 2, 1, 2, 2)]


def test_raw_recursion_is_coherent_modulo_relations():
    # without canonicalizing first, different presentations may differ, but only by relations
    raw = Engine(AnnihilatorSpec.cyclic(3), canonical_first=False)
    rows = echelon(cyclic_relations(Engine(AnnihilatorSpec.cyclic(3)), "cyclic2"))
    rng = random.Random(7)
    differ = 0
    for _ in range(300):
        cp = rng.choice(YY_PATTERNS)
        legs = tuple(Leg(rng.choice(EXPONENTS), c) for c in cp)
        base = _vec(raw.reduc6(legs))
        for new, s in _yy_moves(legs):
            diff = _vec(raw.reduc6(new)) - base.scale(s)
            if not diff.is_zero():
                differ += 1
                assert reduce_against(diff, rows).is_zero(), (legs, new)
    assert differ > 0


def test_reduce_combo_matches_parts(engine):
    c = parse_combo("2*YY[(2,1),(0,2),(1,2);(0,1),(-1,2),(1,2)] - alpha*H[(3,1),(0,2)|(0,1),(1,2)]")
    total = engine.reduce_combo2(c)
    parts = LinCombo()
    for d, coeff in c.items():
        red = engine.reduc6(d.legs) if d.shape == "YY" else engine.reduc4(d.legs)
        parts.iadd(red.scale(coeff))
    assert total == parts


def test_noncyclic_exponents_need_their_own_rule():
    E = Engine(AnnihilatorSpec.noncyclic())
    with pytest.raises(NonCyclicMode):
        E.reduce_exponent(Diagram("H", (Leg(1, 1), Leg(0, 2), Leg(0, 1), Leg(0, 2))), 0)


def test_unknown_terms_are_reported():
    with pytest.raises(UnmatchedTerm):
        BasisVector.from_combo(parse_combo("YY[(0,1),(0,2),(0,4);(0,1),(0,2),(0,4)]"), "cyclic2")


def test_noncyclic_reduction_of_named_generators():
    E = Engine(AnnihilatorSpec.noncyclic())
    for name in CASE_NAMES["noncyclic3"]:
        v = BasisVector.from_combo(E.reduce_noncyclic(parse_combo(name)), "noncyclic3")
        assert v == BasisVector.unit("noncyclic3", name)
