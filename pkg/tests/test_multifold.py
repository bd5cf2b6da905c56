import random
from fractions import Fraction

import pytest

from superdvb.algebra import EVEN, ODD, KernelError
from superdvb.algebroid import AlgebroidData, odd_algebroid_chart
from superdvb.doubles import check_commutativity, enumerate_neighbors
from superdvb.fields import Derivation, is_homological, reverse_field
from superdvb.instances import perturb_double, random_passing_double, tangent_double
from superdvb.multifold import (
    MultiStructure,
    MultiTransition,
    check_nfold,
    face_structure,
    multi_chart,
    order_exchange_flip,
    partial_reverse_multifold,
    product_structure,
    standard_multi_chart,
    validate_transition,
)


def test_multi_chart_weights():
    ch = standard_multi_chart(3, {(1,): 1, (2,): 1, (3,): 1, (1, 2): 1,
                                  (1, 3): 1, (2, 3): 1, (1, 2, 3): 1})
    assert ch.weight(ch.index("v12_1")) == (1, 1, 0)
    assert ch.weight(ch.index("v123_1")) == (1, 1, 1)
    assert sum(ch.weight(ch.index("v123_1"))) == 3


def test_identity_transition_passes():
    ch = standard_multi_chart(2, {(1,): 1, (2,): 1, (1, 2): 1})
    t = MultiTransition(ch, {
        (1,): {((1,),): {(0, 0): 1}},
        (2,): {((2,),): {(0, 0): 1}},
        (1, 2): {((1, 2),): {(0, 0): 1}},
    })
    assert validate_transition(t).passed


def test_core_shift_transition():
    # the standard double-bundle law with a bilinear shift
    ch = standard_multi_chart(2, {(1,): 1, (2,): 1, (1, 2): 1})
    x = ch.gen_poly("x")
    t = MultiTransition(ch, {
        (1,): {((1,),): {(0, 0): 2}},
        (2,): {((2,),): {(0, 0): Fraction(1, 3)}},
        (1, 2): {((1, 2),): {(0, 0): 1},
                 ((1,), (2,)): {(0, 0, 0): x + 1}},
    })
    v = validate_transition(t)
    assert v.passed
    sub = t.substitution()
    primed = sub.source
    img = sub.mapping["v12_1"]
    assert img == primed.gen_poly("v12_1_p") + (
        primed.gen_poly("v1_1_p") * primed.gen_poly("v2_1_p")) * (
        primed.gen_poly("x_p") + 1)


def test_threefold_transition():
    # trilinear shift on the top block of a 3-fold chart
    ch = standard_multi_chart(3, {(1,): 1, (2,): 1, (3,): 1, (1, 2): 1,
                                  (1, 3): 1, (2, 3): 1, (1, 2, 3): 1})
    lin = {((s,),): {(0, 0): 1} for s in (1, 2, 3)}
    t = MultiTransition(ch, {
        (1,): {((1,),): {(0, 0): 1}},
        (2,): {((2,),): {(0, 0): 1}},
        (3,): {((3,),): {(0, 0): 1}},
        (1, 2): {((1, 2),): {(0, 0): 1}, ((1,), (2,)): {(0, 0, 0): 2}},
        (1, 3): {((1, 3),): {(0, 0): 1}},
        (2, 3): {((2, 3),): {(0, 0): 1}},
        (1, 2, 3): {
            ((1, 2, 3),): {(0, 0): 1},
            ((1,), (2, 3)): {(0, 0, 0): 1},
            ((2,), (1, 3)): {(0, 0, 0): 3},
            ((3,), (1, 2)): {(0, 0, 0): -1},
            ((1,), (2,), (3,)): {(0, 0, 0, 0): ch.gen_poly("x")},
        },
    })
    v = validate_transition(t)
    assert v.passed
    del lin


def test_singular_transition_fails():
    ch = standard_multi_chart(2, {(1,): 1, (2,): 1, (1, 2): 1})
    t = MultiTransition(ch, {
        (1,): {((1,),): {(0, 0): 0}},
        (2,): {((2,),): {(0, 0): 1}},
        (1, 2): {((1, 2),): {(0, 0): 1}},
    })
    assert not validate_transition(t).passed


def heisenberg_structure():
    ch = multi_chart(1, {(1,): [("xi%d" % i, ODD) for i in (1, 2, 3)]}, ("x",))
    Q = Derivation(ch, {"xi3": ch.gen_poly("xi1") * ch.gen_poly("xi2")})
    return MultiStructure(ch, [Q])


def test_nfold_one_direction_is_homologicity():
    s = heisenberg_structure()
    assert check_nfold(s).passed
    bad = Derivation(s.chart, {"xi3": s.chart.gen_poly("xi1") * s.chart.gen_poly("xi2"),
                               "xi2": s.chart.gen_poly("xi1") * s.chart.gen_poly("xi3")})
    v = check_nfold(MultiStructure(s.chart, [bad]))
    assert v.passed == is_homological(bad)


def test_nfold_two_agrees_with_double_pipeline(rng):
    for _ in range(10):
        data = random_passing_double(rng)
        q1, q2 = data.pair()
        s = MultiStructure(q1.chart, [q1, q2])
        ok = check_nfold(s).passed
        both = (is_homological(q1) and is_homological(q2)
                and check_commutativity(q1, q2).passed)
        assert ok == both
        pert = perturb_double(rng, data)
        p1, p2 = pert.pair()
        sp = MultiStructure(p1.chart, [p1, p2])
        both = (is_homological(p1) and is_homological(p2)
                and check_commutativity(p1, p2).passed)
        assert check_nfold(sp).passed == both


def three_disjoint_structure():
    chs = []
    for k in (1, 2, 3):
        ch = multi_chart(1, {(1,): [("a%d_%d" % (k, i), ODD) for i in (1, 2, 3)]},
                         ("y%d" % k,))
        Q = Derivation(ch, {"a%d_3" % k: ch.gen_poly("a%d_1" % k) * ch.gen_poly("a%d_2" % k)})
        chs.append(MultiStructure(ch, [Q]))
    return product_structure(chs)


def test_threefold_product_passes():
    s = three_disjoint_structure()
    assert s.chart.ndirs == 3
    v = check_nfold(s)
    assert v.passed
    # disjoint-support oracle: fields touch disjoint generator blocks
    supports = []
    for Q in s.fields:
        touched = set()
        for name, c in Q.items():
            touched.add(name)
            for key in c.terms:
                touched.update(s.chart.gens[i].name for i, _e in key)
        supports.append(touched)
    for a in range(3):
        for b in range(a + 1, 3):
            assert not (supports[a] & supports[b])


def test_partial_reverse_involution_and_commutation():
    s = three_disjoint_structure()
    ch = s.chart
    assert partial_reverse_multifold(partial_reverse_multifold(ch, 2), 2) == ch
    # a field of weight zero in the reversed direction transports, twice = id
    q2 = s.fields[1]
    assert reverse_field(reverse_field(q2, 1), 1) == q2
    # two reversals commute up to the core-sign exchange on shared blocks
    ch2 = standard_multi_chart(3, {(1,): 1, (2,): 1, (3,): 1, (1, 2): 2, (1, 2, 3): 1},
                               parity=EVEN)
    x = ch2.gen_poly("x")
    Q = Derivation(ch2, {
        "v12_1": ch2.gen_poly("v1_1") * ch2.gen_poly("v2_1") * x,
        "v1_1": ch2.zero(),
    }, parity=0)
    a = reverse_field(reverse_field(Q, 1), 2)
    b = reverse_field(reverse_field(Q, 2), 1)
    flip = order_exchange_flip(a.chart, 1, 2)
    assert flip.conjugate_field(b) == a


def test_faces():
    s = three_disjoint_structure()
    f = face_structure(s, (1, 3))
    assert f.chart.ndirs == 2
    assert check_nfold(f).passed
    # a single-direction face reduces to the original structure block
    f1 = face_structure(s, (2,))
    assert f1.chart.ndirs == 1
    assert check_nfold(f1).passed
    assert any(not Q.is_zero() for Q in f1.fields)


def test_total_weight_additivity():
    ch = standard_multi_chart(3, {(1,): 1, (1, 2): 1, (1, 2, 3): 1})
    for g in ch.gens:
        if g.role != "base":
            assert sum(ch.weight(ch.index(g.name))) == len(g.dirs)


def test_neighbor_valence_matches_2n():
    g = enumerate_neighbors()
    assert set(g.valence().values()) == {4}
