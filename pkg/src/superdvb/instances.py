"""Constructive instance families for the compatibility checkers.

Passing instances are built, not sampled: from side algebroids, tangent
lifts of an algebroid, mutual-action cores, Lie bialgebras through the
cotangent construction, and gauge conjugations of all of these.  Failing
instances are single-tensor perturbations of passing ones.  The solution
variety has measure zero, so rejection sampling would never find it.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import EVEN
from .algebroid import AlgebroidData, odd_algebroid_chart
from .doubles import DoubleData, TENSOR_ALT, TENSOR_SHAPES, names
from .fields import Derivation, Substitution


def rational(rng, span=2):
    return Fraction(rng.randint(-span, span))


# --- valid algebroids --------------------------------------------------------


def random_lie_algebra(rng, dim):
    """Structure constants of a small Lie algebra, by family."""
    b = {}
    kind = rng.choice(["abelian", "nilpotent", "solvable", "scaled"])
    if kind == "abelian" or dim == 1:
        return b
    if kind == "nilpotent" and dim >= 3:
        b[(0, 1)] = {2: rational(rng) or Fraction(1)}
        return b
    # e1 acting on the abelian ideal spanned by the rest
    for j in range(1, dim):
        row = {}
        for k in range(1, dim):
            c = rational(rng)
            if c:
                row[k] = c
        if row:
            b[(0, j)] = row
    return b


def random_algebroid(rng, dim=2, with_base=True):
    """A valid algebroid instance on a small odd chart."""
    base = ("x",) if with_base else ()
    ch = odd_algebroid_chart(base, [("xi%d" % (i + 1), EVEN) for i in range(dim)])
    consts = random_lie_algebra(rng, dim)
    bracket = {}
    for (i, j), row in consts.items():
        bracket[("xi%d" % (i + 1), "xi%d" % (j + 1))] = {
            "xi%d" % (k + 1): c for k, c in row.items()}
    anchor = {}
    if with_base and rng.random() < 0.7:
        # anchor along e1 only: compatible with the families above because
        # the ideal directions act trivially on the base
        f = ch.one() if rng.random() < 0.5 else ch.one() + ch.gen_poly("x")
        anchor["xi1"] = {"x": f}
        # bracket coefficients must be constant along the flow for Jacobi;
        # the families above use constants, so nothing to adjust
    data = AlgebroidData(ch, anchor, bracket)
    return data


# --- double instance families ------------------------------------------------


def zero_double(base=("x",), nu=1, nw=1, nz=1):
    return DoubleData(base, nu, nw, nz)


def core_action_double(rng, base=("x",), nu=2, nw=2, nz=1):
    """Only the core-to-side maps are nonzero; always compatible."""
    t = {"h_core_side": {}, "v_core_side": {}}
    for mu in range(nz):
        for b in range(nw):
            t["h_core_side"][(mu, b)] = rational(rng)
        for j in range(nu):
            t["v_core_side"][(mu, j)] = rational(rng)
    return DoubleData(base, nu, nw, nz, t)


def side_algebroid_double(rng, nu=2, nw=2, nz=1):
    """A valid algebroid on the first side, nothing else."""
    alg = random_algebroid(rng, dim=nu, with_base=True)
    data = DoubleData(("x",), nu, nw, nz)
    for i in range(nu):
        data.set_tensor("h_anchor", (i, 0),
                        alg.anchor_comp("xi%d" % (i + 1), "x").rename(data.bchart))
    for i in range(nu):
        for j in range(nu):
            for k in range(nu):
                # stored bracket components B_ij^k = Q_ij^k for even frames;
                # the field table wants Q_ji^k keyed (j,i)
                c = alg.bracket_comp("xi%d" % (i + 1), "xi%d" % (j + 1), "xi%d" % (k + 1))
                if c:
                    data.set_tensor("h_bracket", (i, j, k), c.rename(data.bchart))
    return data


def tangent_double(rng, dim=2, with_base=True):
    """The tangent lift of a valid algebroid as a double instance.

    Sides are the algebroid and the tangent of the base, the core is the
    algebroid again; all twelve tensor families appear.
    """
    alg = random_algebroid(rng, dim=dim, with_base=with_base)
    Q = alg.to_field()
    base = alg.base
    nu, nw, nz = dim, len(base), dim
    data = DoubleData(tuple(base), nu, nw, nz)
    bch = data.bchart

    def move(p):
        return p.rename(bch)

    for i in range(nu):
        fi = "xi%d" % (i + 1)
        for a, an in enumerate(base):
            c = alg.anchor_comp(fi, an)
            data.set_tensor("h_anchor", (i, a), move(c))
            # velocity rows of the prolonged field
            for b in range(nw):
                data.set_tensor("h_side", (b, i, a), move(c.partial(base[b])))
            data.set_tensor("h_core_side", (i, a), move(c))
        for j in range(nu):
            fj = "xi%d" % (j + 1)
            for k in range(nu):
                fk = "xi%d" % (k + 1)
                # field-table entry Q_ji^k for the pair (j,i)
                sb = alg.bracket_comp(fj, fi, fk)
                if sb:
                    data.set_tensor("h_bracket", (j, i, k), move(sb))
                    data.set_tensor("h_core_core", (j, i, k), move(sb))
                    for b in range(nw):
                        data.set_tensor("h_side_core", (b, j, i, k),
                                        move(sb.partial(base[b])))
    # vertical structure: velocities of the base and of the fibers
    for a in range(nw):
        data.set_tensor("v_anchor", (a, a), bch.one())
    for i in range(nu):
        data.set_tensor("v_core_side", (i, i), bch.one())
    return data


def conjugate_double(rng, data):
    """Gauge the instance by a random weight-preserving chart automorphism."""
    ch = data.chart_h()
    nu, nw, nz = data.nu, data.nw, data.nz

    def invertible(n):
        # unipotent upper triangular times diagonal +-1: exactly invertible
        m = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = Fraction(rng.choice([1, -1]))
            for j in range(i + 1, n):
                m[i][j] = rational(rng, 1)
        return m

    def inverse(m):
        n = len(m)
        inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        a = [row[:] for row in m]
        for col in range(n):
            piv = a[col][col]
            for j in range(n):
                a[col][j] /= piv
                inv[col][j] /= piv
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    for j in range(n):
                        a[r][j] -= f * a[col][j]
                        inv[r][j] -= f * inv[col][j]
        return inv

    tu, tw, tz = invertible(nu), invertible(nw), invertible(nz)
    tue, twe, tze = inverse(tu), inverse(tw), inverse(tz)
    shift = [[[rational(rng, 1) for _ in range(nz)] for _ in range(nw)] for _ in range(nu)]

    un, wn, zn = names("u", nu), names("w", nw), names("z", nz)

    def lin(chart, nms, m, col):
        acc = chart.zero()
        for r, n_ in enumerate(nms):
            acc = acc + chart.gen_poly(n_) * m[r][col]
        return acc

    def fwd_map(chart):
        mapping = {}
        for c in range(nu):
            mapping[un[c]] = lin(chart, un, tu, c)
        for c in range(nw):
            mapping[wn[c]] = lin(chart, wn, tw, c)
        for c in range(nz):
            acc = lin(chart, zn, tz, c)
            for i in range(nu):
                for a in range(nw):
                    acc = acc + (chart.gen_poly(un[i]) * chart.gen_poly(wn[a])) * shift[i][a][c]
            mapping[zn[c]] = acc
        return Substitution(chart, chart, mapping)

    def bwd_map(chart):
        # u' = u Tu^-1 etc.; core shift subtracted after the linear inverse
        mapping = {}
        for c in range(nu):
            mapping[un[c]] = lin(chart, un, tue, c)
        for c in range(nw):
            mapping[wn[c]] = lin(chart, wn, twe, c)
        for c in range(nz):
            acc = lin(chart, zn, tze, c)
            for i in range(nu):
                for a in range(nw):
                    corr = chart.zero()
                    for cc in range(nz):
                        corr = corr + shift[i][a][cc] * tze[cc][c]
                    acc = acc - (mapping[un[i]] * mapping[wn[a]]) * corr
            mapping[zn[c]] = acc
        return Substitution(chart, chart, mapping)

    def transport(X):
        chart = X.chart
        F, B = fwd_map(chart), bwd_map(chart)
        coeffs = {}
        for g in chart.gens:
            r = X(F.pull(chart.gen_poly(g.name)))
            coeffs[g.name] = B.pull(r)
        return Derivation(chart, coeffs, parity=X.parity)

    qh = transport(data.q_h())
    qv = transport(data.q_v(data.chart_v()))
    return DoubleData.from_fields(qh, qv, data.base_names, nu, nw, nz,
                                  u_pars=data.u_pars, w_pars=data.w_pars,
                                  z_pars=data.z_pars)


def random_passing_double(rng):
    kind = rng.choice(["zero", "core", "side", "tangent", "tangent_pt"])
    if kind == "zero":
        data = zero_double(nu=rng.randint(1, 2), nw=rng.randint(1, 2), nz=rng.randint(1, 2))
    elif kind == "core":
        data = core_action_double(rng, nu=rng.randint(1, 2), nw=rng.randint(1, 2))
    elif kind == "side":
        data = side_algebroid_double(rng, nu=2, nw=rng.randint(1, 2))
    elif kind == "tangent":
        data = tangent_double(rng, dim=rng.randint(1, 2), with_base=True)
    else:
        data = tangent_double(rng, dim=2, with_base=False)
    if rng.random() < 0.6 and data.nu and data.nw and data.nz:
        data = conjugate_double(rng, data)
    return data


def perturb_double(rng, data, max_tries=40):
    """Flip one tensor entry; returns a perturbed copy (not guaranteed failing)."""
    out = DoubleData(data.base_names, data.nu, data.nw, data.nz,
                     {k: dict(v) for k, v in data.t.items()},
                     u_pars=data.u_pars, w_pars=data.w_pars, z_pars=data.z_pars)
    families = [f for f, shape in TENSOR_SHAPES.items()
                if all(out._dim(b) for b in shape)]
    for _ in range(max_tries):
        fam = rng.choice(families)
        shape = TENSOR_SHAPES[fam]
        key = tuple(rng.randrange(out._dim(b)) for b in shape)
        delta = Fraction(rng.choice([1, -1, 2]))
        if fam in TENSOR_ALT:
            p, q = TENSOR_ALT[fam]
            if key[p] == key[q]:
                continue
            skey = list(key)
            skey[p], skey[q] = skey[q], skey[p]
            out.set_tensor(fam, key, out.tensor(fam, *key) + delta)
            out.set_tensor(fam, tuple(skey), out.tensor(fam, *tuple(skey)) - delta)
        else:
            out.set_tensor(fam, key, out.tensor(fam, *key) + delta)
        return out
    return out
