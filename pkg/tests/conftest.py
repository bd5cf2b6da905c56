import random
from fractions import Fraction

import pytest

from superdvb.algebra import BASE, CORE, EVEN, FIBER, ODD, Chart, Generator


def simple_chart():
    """One even base coordinate and three odd fiber coordinates."""
    gens = [Generator("x", EVEN, BASE)] + [
        Generator("xi%d" % i, ODD, FIBER, (1,)) for i in (1, 2, 3)
    ]
    return Chart.build(1, gens, label="simple")


def double_chart_even():
    """Fully reversed double chart of a purely even bundle: xi, eta odd, t even."""
    gens = (
        [Generator("x", EVEN, BASE)]
        + [Generator("xi%d" % i, ODD, FIBER, (1,)) for i in (1, 2)]
        + [Generator("eta%d" % i, ODD, FIBER, (2,)) for i in (1, 2)]
        + [Generator("t%d" % i, EVEN, CORE, (1, 2)) for i in (1,)]
    )
    return Chart.build(2, gens, label="pi2")


def mixed_weight_chart():
    gens = [
        Generator("x", EVEN, BASE),
        Generator("u", EVEN, FIBER, (1,)),
        Generator("w", ODD, FIBER, (2,)),
        Generator("z", EVEN, CORE, (1, 2)),
    ]
    return Chart.build(2, gens, label="mixed")


def random_poly(rng, chart, max_terms=3, max_deg=2, coeff_range=4):
    """Small random polynomial; even generators capped at max_deg."""
    out = chart.zero()
    for _ in range(rng.randint(0, max_terms)):
        mono = chart.const(Fraction(rng.randint(-coeff_range, coeff_range)))
        for g in chart.gens:
            if g.parity:
                if rng.random() < 0.4:
                    mono = mono * chart.gen_poly(g.name)
            else:
                e = rng.randint(0, max_deg)
                if e:
                    mono = mono * chart.gen_poly(g.name) ** e
        out = out + mono
    return out


def random_homogeneous_poly(rng, chart, parity, **kw):
    p = random_poly(rng, chart, **kw)
    return p.parity_components()[parity]


@pytest.fixture
def rng():
    return random.Random(20240817)


# --- double-structure test helpers -----------------------------------------


def symbolic_double(nu=2, nw=2, nz=1, with_x=True):
    """Instance with an independent symbol for every tensor entry.

    Symbols are extra even base generators; derivative-bearing entries
    get a (1+x) factor so base derivatives are exercised.
    """
    import itertools

    from superdvb.doubles import TENSOR_ALT, TENSOR_SHAPES, DoubleData, base_chart

    base = ["x"] if with_x else []
    syms = []
    entries = {}
    dims = {"u": nu, "w": nw, "z": nz, "x": len(base)}
    for fam, shape in TENSOR_SHAPES.items():
        fam_entries = {}
        sizes = [dims[b] for b in shape]
        if 0 in sizes:
            continue
        for key in itertools.product(*[range(d) for d in sizes]):
            if fam in TENSOR_ALT:
                p, q = TENSOR_ALT[fam]
                if key[p] >= key[q]:
                    continue
            name = "s%d" % (len(syms) + 1)
            syms.append(name)
            fam_entries[key] = name
        entries[fam] = fam_entries
    bch = base_chart(tuple(base) + tuple(syms))
    tensors = {}
    for fam, fam_entries in entries.items():
        t = {}
        for key, sym in fam_entries.items():
            val = bch.gen_poly(sym)
            if with_x:
                val = val * (bch.one() + bch.gen_poly("x"))
            t[key] = val
            if fam in TENSOR_ALT:
                p, q = TENSOR_ALT[fam]
                skey = list(key)
                skey[p], skey[q] = skey[q], skey[p]
                t[tuple(skey)] = -val
        tensors[fam] = t
    return DoubleData(tuple(base) + tuple(syms), nu, nw, nz, tensors)


def displayed_pair(data):
    """The two reversed-chart fields exactly as displayed (even case)."""
    from fractions import Fraction

    from superdvb.fields import Derivation

    ch = data.chart_pi2()
    half = Fraction(1, 2)
    u = lambda i: ch.gen_poly("u%d" % (i + 1))
    w = lambda a: ch.gen_poly("w%d" % (a + 1))
    z = lambda m: ch.gen_poly("z%d" % (m + 1))
    ld = lambda fam, *k: data.tensor(fam, *k).rename(ch)
    c1 = {}
    for a, an in enumerate(data.base_names):
        acc = ch.zero()
        for i in range(data.nu):
            acc = acc + u(i) * ld("h_anchor", i, a)
        c1[an] = acc
    for k in range(data.nu):
        acc = ch.zero()
        for i in range(data.nu):
            for j in range(data.nu):
                acc = acc + half * (u(i) * u(j)) * ld("h_bracket", j, i, k)
        c1["u%d" % (k + 1)] = acc
    for b in range(data.nw):
        acc = ch.zero()
        for i in range(data.nu):
            for al in range(data.nw):
                acc = acc + (u(i) * w(al)) * ld("h_side", al, i, b)
        for mu in range(data.nz):
            acc = acc + z(mu) * ld("h_core_side", mu, b)
        c1["w%d" % (b + 1)] = acc
    for lam in range(data.nz):
        acc = ch.zero()
        for al in range(data.nw):
            for i in range(data.nu):
                for j in range(data.nu):
                    acc = acc + half * (u(i) * u(j) * w(al)) * ld(
                        "h_side_core", al, j, i, lam)
        for i in range(data.nu):
            for mu in range(data.nz):
                acc = acc + (u(i) * z(mu)) * ld("h_core_core", mu, i, lam)
        c1["z%d" % (lam + 1)] = acc
    q1 = Derivation(ch, c1, parity=1)
    c2 = {}
    for a, an in enumerate(data.base_names):
        acc = ch.zero()
        for al in range(data.nw):
            acc = acc + w(al) * ld("v_anchor", al, a)
        c2[an] = acc
    for j in range(data.nu):
        acc = ch.zero()
        for al in range(data.nw):
            for i in range(data.nu):
                acc = acc + (w(al) * u(i)) * ld("v_side", i, al, j)
        for mu in range(data.nz):
            acc = acc - z(mu) * ld("v_core_side", mu, j)
        c2["u%d" % (j + 1)] = acc
    for g in range(data.nw):
        acc = ch.zero()
        for al in range(data.nw):
            for be in range(data.nw):
                acc = acc + half * (w(al) * w(be)) * ld("v_bracket", be, al, g)
        c2["w%d" % (g + 1)] = acc
    for lam in range(data.nz):
        acc = ch.zero()
        for al in range(data.nw):
            for be in range(data.nw):
                for i in range(data.nu):
                    acc = acc - half * (w(al) * w(be) * u(i)) * ld(
                        "v_side_core", i, be, al, lam)
        for al in range(data.nw):
            for mu in range(data.nz):
                acc = acc + (w(al) * z(mu)) * ld("v_core_core", mu, al, lam)
        c2["z%d" % (lam + 1)] = acc
    q2 = Derivation(ch, c2, parity=1)
    return q1, q2
