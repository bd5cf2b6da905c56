import pytest

from superdvb.algebra import BASE, CORE, EVEN, FIBER, ODD, Chart, Generator, KernelError
from superdvb.brackets import BracketTable
from superdvb.fields import Derivation

from conftest import random_poly, simple_chart


def darboux_chart():
    gens = [
        Generator("x", EVEN, BASE),
        Generator("xi1", ODD, FIBER, (1,)),
        Generator("xi2", ODD, FIBER, (1,)),
        Generator("p1", ODD, FIBER, (2,)),
        Generator("p2", ODD, FIBER, (2,)),
        Generator("px", EVEN, CORE, (1, 2)),
    ]
    return Chart.build(2, gens)


def canonical_table(ch):
    return BracketTable(ch, 0, {
        ("px", "x"): ch.one(),
        ("p1", "xi1"): ch.one(),
        ("p2", "xi2"): ch.one(),
    })


def test_symmetry_fill():
    ch = darboux_chart()
    t = canonical_table(ch)
    ix, ipx = ch.index("x"), ch.index("px")
    assert t.gen_bracket(ix, ipx) == -ch.one()
    i1, ip1 = ch.index("xi1"), ch.index("p1")
    # two odd entries: symmetric sign +1 for an even bracket
    assert t.gen_bracket(i1, ip1) == ch.one()
    assert t.check_symmetry().passed


def test_symmetry_violation_caught():
    ch = darboux_chart()
    with pytest.raises(KernelError):
        BracketTable(ch, 0, {
            ("px", "x"): ch.one(),
            ("x", "px"): ch.one(),
        })


def test_canonical_jacobi_exhaustive():
    ch = darboux_chart()
    t = canonical_table(ch)
    assert t.check_jacobi().passed


def test_leibniz_consistency(rng):
    ch = darboux_chart()
    t = canonical_table(ch)
    for _ in range(40):
        p = random_poly(rng, ch, max_terms=2, max_deg=1)
        q = random_poly(rng, ch, max_terms=2, max_deg=1)
        r = random_poly(rng, ch, max_terms=2, max_deg=1)
        for pp in p.parity_components().values():
            for qq in q.parity_components().values():
                ppar, qpar = pp.parity(), qq.parity()
                if pp.is_zero() or qq.is_zero():
                    continue
                # graded symmetry
                sign = -1 if not (ppar and qpar) else 1
                assert t.bracket(pp, qq) == sign * t.bracket(qq, pp)
                # Leibniz in the right slot
                lhs = t.bracket(pp, qq * r)
                s2 = -1 if (ppar and qpar) else 1
                rhs = t.bracket(pp, qq) * r + s2 * qq * t.bracket(pp, r)
                assert lhs == rhs


def test_hamiltonian_fields_preserve_bracket(rng):
    ch = darboux_chart()
    t = canonical_table(ch)
    for _ in range(25):
        h = random_poly(rng, ch, max_terms=2, max_deg=1)
        for hh in h.parity_components().values():
            if hh.is_zero():
                continue
            X = t.hamiltonian_field(hh)
            assert t.derivation_residuals(X).passed


def test_odd_bracket_jacobi_and_derivation():
    # a Schouten-type table: odd momenta for even positions
    gens = [
        Generator("x", EVEN, BASE),
        Generator("th", ODD, FIBER, (1,)),
    ]
    ch = Chart.build(1, gens)
    t = BracketTable(ch, 1, {("th", "x"): ch.one()})
    assert t.check_jacobi().passed
    # {th,x}=1: symmetric partner {x,th} = -(-1)^((0+1)(1+1)) {th,x} = -1
    assert t.gen_bracket(ch.index("x"), ch.index("th")) == -ch.one()
    # hamiltonian field of x: {x, .}
    X = t.hamiltonian_field(ch.gen_poly("x"))
    assert X.parity == 1
    assert t.derivation_residuals(X).passed
