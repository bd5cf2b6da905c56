"""The cotangent double of a dual pair of algebroid structures.

The cotangent chart of a reversed bundle is a fully reversed double
chart: fiber coordinates of weight (1,0), their momenta of weight (0,1)
and base momenta on the core.  Structure fields of the pair lift to
fiberwise-linear hamiltonians; compatibility of the pair is the
vanishing of their canonical bracket, and the two hamiltonian fields
then form a commuting pair of the standard weights.
"""

from __future__ import annotations

from .algebra import (
    BASE,
    CORE,
    EVEN,
    FIBER,
    Chart,
    Generator,
    KernelError,
    ParityError,
)
from .brackets import BracketTable
from .fields import Derivation, Verdict, is_homological


MOMENTUM = "_c"


def cotangent_chart(base_names, fiber_specs, label="T*"):
    """Darboux chart over a reversed bundle: positions x, xi and momenta.

    ``fiber_specs`` lists (name, section_parity); the fiber coordinate
    has flipped parity, its momentum the same parity as the coordinate,
    base momenta are even and sit on the core.
    """
    gens = [Generator(n, EVEN, BASE) for n in base_names]
    for name, sp in fiber_specs:
        par = (sp + 1) % 2
        gens.append(Generator(name, par, FIBER, (1,)))
        gens.append(Generator(name + MOMENTUM, par, FIBER, (2,)))
    for n in base_names:
        gens.append(Generator(n + MOMENTUM, EVEN, CORE, (1, 2)))
    return Chart.build(2, gens, label=label)


def momentum_map(chart):
    """Position name -> momentum name, both orientations of the pairing."""
    out = {}
    for g in chart.gens:
        if g.name.endswith(MOMENTUM):
            out[g.name[: -len(MOMENTUM)]] = g.name
    return out


def canonical_poisson(chart):
    """The even Darboux bracket: {momentum, position} = 1 per pair."""
    entries = {}
    for pos, mom in momentum_map(chart).items():
        entries[(mom, pos)] = chart.one()
    return BracketTable(chart, 0, entries)


def hamiltonian_lift(Q, chart, conj=None):
    """Momentum-linear hamiltonian whose field reproduces Q on positions.

    For Q = sum c_g d/dg on a position subchart, H = sum c_g pi_g with
    pi_g the conjugate momentum; {H, g} = c_g holds because positions
    commute.  The reproduction property is asserted, not assumed.
    """
    conj = conj or momentum_map(chart)
    table = canonical_poisson(chart)
    H = chart.zero()
    for name, c in Q.items():
        if name not in conj:
            raise KernelError("no conjugate momentum for %s" % name)
        H = H + c.rename(chart) * chart.gen_poly(conj[name])
    X = table.hamiltonian_field(H)
    for name, c in Q.items():
        if X.coeff(name) != c.rename(chart):
            raise KernelError("hamiltonian field fails to reproduce d/d%s row" % name)
    return H


class Bialgebroid:
    """A dual pair of structure fields over a common base.

    ``q_e`` lives on the reversed bundle chart (x, fibers), ``q_dual``
    on the reversed dual chart (x, dual fibers); both must be odd,
    homological, and of weight one in their fibers.
    """

    def __init__(self, base_names, fiber_specs, q_e, q_dual):
        self.base_names = tuple(base_names)
        self.fiber_specs = list(fiber_specs)
        self.q_e = q_e
        self.q_dual = q_dual
        for Q, tag in ((q_e, "primal"), (q_dual, "dual")):
            if Q.coeffs and Q.parity != 1:
                raise ParityError("%s structure field must be odd" % tag)
            if not is_homological(Q):
                raise KernelError("%s structure field is not homological" % tag)

    def cotangent_chart(self):
        return cotangent_chart(self.base_names, self.fiber_specs)


def build_cotangent_double(b):
    """Lift the pair onto the cotangent chart; verdict is bracket vanishing.

    Returns (chart, Q1, Q2, verdict).  When the verdict passes, the two
    hamiltonian fields commute and have weights (1,0) and (0,1).
    """
    chart = b.cotangent_chart()
    table = canonical_poisson(chart)
    # primal field: positions are (x, xi)
    H_e = hamiltonian_lift(b.q_e, chart)
    # dual field: positions are (x, xi_c) whose momenta are (x_c, xi)
    conj = {n: n + MOMENTUM for n in b.base_names}
    for name, _sp in b.fiber_specs:
        conj[name + MOMENTUM] = name
    momentum_names = {name + MOMENTUM for name, _sp in b.fiber_specs}
    rows = {n for n, _c in b.q_dual.items()}
    if rows <= momentum_names | set(b.base_names):
        # already written in the momentum coordinates of the big chart
        q_dual_moved = Derivation(
            chart, {n: c.rename(chart) for n, c in b.q_dual.items()}, parity=1)
    else:
        renamed = {}
        for dn, (name, _sp) in zip(b.q_dual.chart.by_role(FIBER, (1,)), b.fiber_specs):
            renamed[dn] = name + MOMENTUM
        q_dual_moved = Derivation(
            chart,
            {renamed.get(n, n): c.rename(chart, renamed) for n, c in b.q_dual.items()},
            parity=1,
        )
    H_dual = hamiltonian_lift(q_dual_moved, chart, conj)
    q1 = table.hamiltonian_field(H_e)
    q2 = table.hamiltonian_field(H_dual)
    if q1.is_zero():
        q1 = Derivation.zero(chart, parity=1)
    if q2.is_zero():
        q2 = Derivation.zero(chart, parity=1)
    v = Verdict()
    v.add("hamiltonian_bracket", table.bracket(H_e, H_dual))
    if q1.coeffs and q1.weight() != (1, 0):
        v.add("weight_1", chart.one())
    if q2.coeffs and q2.weight() != (0, 1):
        v.add("weight_2", chart.one())
    return chart, q1, q2, v


# --- small Lie bialgebra machinery ---------------------------------------------


def lie_algebra_field(chart, consts):
    """Structure field of a Lie algebra from {(i,j): {k: c}} brackets.

    Indices are 0-based over the fiber generators of the chart;
    [e_i, e_j] = sum_k c e_k with c rational, antisymmetry implied.
    """
    fibers = chart.by_role(FIBER, (1,))
    coeffs = {}
    for k, fk in enumerate(fibers):
        acc = chart.zero()
        for (i, j), row in consts.items():
            c = row.get(k, 0)
            if c:
                # bracket component feeds -xi^i xi^j for [e_i,e_j] = +e_k
                acc = acc - (chart.gen_poly(fibers[i]) * chart.gen_poly(fibers[j])) * c
        if acc:
            coeffs[fk] = acc
    return Derivation(chart, coeffs, parity=1)


def cobracket_to_dual_constants(delta, dim):
    """Turn a cobracket table delta[i] = {(a,b): c} into dual brackets.

    delta(e_i) = sum c e_a ^ e_b (a < b) gives [eps^a, eps^b] = sum_i c eps^i.
    """
    consts = {}
    for i, rows in delta.items():
        for (a, b), c in rows.items():
            if c:
                consts.setdefault((a, b), {})[i] = consts.get((a, b), {}).get(i, 0) + c
    return consts


def _bracket_apply(consts, dim, i, j):
    if i == j:
        return {}
    if (i, j) in consts:
        return dict(consts[(i, j)])
    if (j, i) in consts:
        return {k: -c for k, c in consts[(j, i)].items()}
    return {}


def _ad_on_wedge(consts, dim, i, pair, c):
    """ad_{e_i} (c e_a ^ e_b) as a wedge table."""
    a, b = pair
    out = {}
    for k, f in _bracket_apply(consts, dim, i, a).items():
        key, s = _wedge(k, b)
        if key:
            out[key] = out.get(key, 0) + s * f * c
    for k, f in _bracket_apply(consts, dim, i, b).items():
        key, s = _wedge(a, k)
        if key:
            out[key] = out.get(key, 0) + s * f * c
    return out


def _wedge(a, b):
    if a == b:
        return None, 0
    if a < b:
        return (a, b), 1
    return (b, a), -1


def cocycle_residual(consts, delta, dim):
    """delta([e_i,e_j]) - ad_i delta(e_j) + ad_j delta(e_i), per pair."""
    bad = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            acc = {}
            for k, f in _bracket_apply(consts, dim, i, j).items():
                for pair, c in delta.get(k, {}).items():
                    acc[pair] = acc.get(pair, 0) + f * c
            for pair, c in delta.get(j, {}).items():
                for key, v in _ad_on_wedge(consts, dim, i, pair, c).items():
                    acc[key] = acc.get(key, 0) - v
            for pair, c in delta.get(i, {}).items():
                for key, v in _ad_on_wedge(consts, dim, j, pair, c).items():
                    acc[key] = acc.get(key, 0) + v
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                bad[(i, j)] = acc
    return bad


def co_jacobi_passes(delta, dim):
    """Jacobi for the dual bracket derived from the cobracket."""
    consts = cobracket_to_dual_constants(delta, dim)

    def br(i, j):
        return _bracket_apply(consts, dim, i, j)

    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                tot = {}
                for m, f in br(i, j).items():
                    for n, g in br(m, k).items():
                        tot[n] = tot.get(n, 0) + f * g
                for m, f in br(j, k).items():
                    for n, g in br(m, i).items():
                        tot[n] = tot.get(n, 0) + f * g
                for m, f in br(k, i).items():
                    for n, g in br(m, j).items():
                        tot[n] = tot.get(n, 0) + f * g
                if any(tot.values()):
                    return False
    return True


def search_cobracket(consts, dim, span=1, limit=None, rng=None):
    """Brute-force small integer cobrackets satisfying the cocycle
    condition and co-Jacobi; yields nontrivial ones first if possible."""
    import itertools

    pairs = [(a, b) for a in range(dim) for b in range(a + 1, dim)]
    slots = [(i, p) for i in range(dim) for p in pairs]
    values = range(-span, span + 1)
    found = []
    for combo in itertools.product(values, repeat=len(slots)):
        delta = {}
        for (i, p), c in zip(slots, combo):
            if c:
                delta.setdefault(i, {})[p] = c
        if cocycle_residual(consts, delta, dim):
            continue
        if not co_jacobi_passes(delta, dim):
            continue
        if delta:
            return delta
        found.append(delta)
        if limit and len(found) >= limit:
            break
    return found[0] if found else None


def bialgebra(consts, delta, dim, prefix="xi"):
    """Assemble a point-base dual pair from brackets and a cobracket."""
    fiber_specs = [("%s%d" % (prefix, i + 1), EVEN) for i in range(dim)]
    ch_e = Chart.build(1, [Generator(n, 1, FIBER, (1,)) for n, _p in fiber_specs],
                       label="PiE")
    q_e = lie_algebra_field(ch_e, consts)
    dual_specs = [("%sd%d" % (prefix, i + 1), EVEN) for i in range(dim)]
    ch_d = Chart.build(1, [Generator(n, 1, FIBER, (1,)) for n, _p in dual_specs],
                       label="PiE*")
    q_d = lie_algebra_field(ch_d, cobracket_to_dual_constants(delta, dim))
    return Bialgebroid((), fiber_specs, q_e, q_d)
