"""The dictionary between weight-1 homological fields and algebroid data.

A vector bundle with anchor and bracket is encoded on the parity-reversed
total space: base coordinates plus fiber coordinates of flipped parity.
The injection i sends a section u with components u^i to the weight -1
field (-1)^(u~) u^i d/dxi^i; anchor and bracket are recovered as derived
brackets with the structure field Q, and the same data induces the
Lie-Poisson and Lie-Schouten tables on the two duals.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import (
    BASE,
    CORE,
    EVEN,
    FIBER,
    Chart,
    Generator,
    GradedPoly,
    KernelError,
    ParityError,
    WeightError,
)
from .brackets import BracketTable
from .fields import Derivation, commutator


def odd_algebroid_chart(base_names, fiber_specs, label=""):
    """Chart of the parity-reversed bundle: fiber parity is flipped.

    ``fiber_specs`` lists (name, section_parity); a fiber direction of
    even sections becomes an odd coordinate.
    """
    gens = [Generator(n, EVEN, BASE) for n in base_names]
    for name, sp in fiber_specs:
        gens.append(Generator(name, (sp + 1) % 2, FIBER, (1,)))
    return Chart.build(1, gens, label=label)


def section_parity(chart, fiber_name):
    """Parity of the underlying frame section for an odd-model fiber."""
    return (chart.generator(fiber_name).parity + 1) % 2


def fiber_names(chart, direction=1):
    """Generators of nonzero weight in the given direction."""
    return [g.name for g in chart.gens if direction in g.dirs]


def base_like_names(chart, direction=1):
    """Generators of weight zero in the given direction (the local base)."""
    return [g.name for g in chart.gens if direction not in g.dirs]


class Section:
    """A section given by polynomial components over the local base.

    ``direction`` selects which weight grading plays the fibration role;
    components may depend on every generator of weight zero there.
    """

    __slots__ = ("chart", "parity", "comps", "direction")

    def __init__(self, chart, parity, comps, direction=1):
        fibers = set(fiber_names(chart, direction))
        clean = {}
        for name, c in comps.items():
            if name not in fibers:
                raise KernelError("section components are indexed by fiber generators")
            if not isinstance(c, GradedPoly):
                c = chart.const(c)
            if not c:
                continue
            for key in c.terms:
                for i, _e in key:
                    if chart.gens[i].name in fibers:
                        raise KernelError("section component depends on fiber coordinates")
            want = (parity + section_parity(chart, name)) % 2
            if not c.is_parity_homogeneous(want):
                raise ParityError(
                    "component of %s incompatible with section parity" % name)
            clean[name] = c
        self.chart = chart
        self.parity = parity
        self.comps = clean
        self.direction = direction

    def comp(self, name):
        return self.comps.get(name, self.chart.zero())

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        return (
            isinstance(other, Section)
            and self.chart == other.chart
            and self.parity == other.parity
            and self.comps == other.comps
        )

    def __repr__(self):
        return "Section(%s)" % ", ".join("%s: %s" % kv for kv in sorted(self.comps.items()))


def frame_section(chart, name, direction=1):
    return Section(chart, section_parity(chart, name), {name: chart.one()}, direction)


def section_to_field(u):
    """The odd injection: i(u) = (-1)^(u~) u^i d/dxi^i, a weight -1 field."""
    sign = -1 if u.parity else 1
    coeffs = {name: sign * c for name, c in u.comps.items()}
    return Derivation(u.chart, coeffs, parity=(u.parity + 1) % 2)


def field_to_section(X, direction=1):
    """Inverse of the injection on fields of weight -1 in the direction."""
    if X.coeffs and X.weight_in(direction) != -1:
        raise WeightError("field does not have weight -1 in direction %d" % direction)
    parity = (X.parity + 1) % 2
    sign = -1 if parity else 1
    comps = {name: sign * c for name, c in X.items()}
    return Section(X.chart, parity, comps, direction)


def _require_structure_field(Q, direction=1):
    if Q.parity != 1:
        raise ParityError("structure field must be odd")
    if Q.coeffs and Q.weight_in(direction) != 1:
        raise WeightError("structure field must have weight 1 in direction %d" % direction)


def derived_anchor(Q, u, f):
    """a(u) f as the double commutator of Q, i(u) and f."""
    _require_structure_field(Q, u.direction)
    return commutator(Q, section_to_field(u))(f)


def derived_bracket(Q, u, v):
    """[u,v] through nested commutators with the structure field."""
    _require_structure_field(Q, u.direction)
    Z = commutator(commutator(Q, section_to_field(u)), section_to_field(v))
    if u.parity:
        Z = -Z
    return field_to_section(Z, u.direction)


class AlgebroidData:
    """Anchor and frame-bracket tables of an algebroid over a polynomial base.

    ``anchor[i][a]`` are the anchor components of the i-th frame section,
    ``bracket[(i,j)][k]`` the components of the bracket of frame sections;
    graded antisymmetry  [e_i,e_j] = -(-1)^(i~ j~) [e_j,e_i]  is enforced
    at construction.
    """

    def __init__(self, chart, anchor=None, bracket=None, direction=1):
        self.chart = chart
        self.direction = direction
        self.fibers = fiber_names(chart, direction)
        self.base = base_like_names(chart, direction)
        anchor = anchor or {}
        bracket = bracket or {}
        self.anchor = {}
        for i in self.fibers:
            row = {}
            for a in self.base:
                c = anchor.get(i, {}).get(a, chart.zero())
                if not isinstance(c, GradedPoly):
                    c = chart.const(c)
                if c:
                    row[a] = c
            self.anchor[i] = row
        table = {}
        for (i, j), row in bracket.items():
            comp = {}
            for k, c in row.items():
                if not isinstance(c, GradedPoly):
                    c = chart.const(c)
                if c:
                    comp[k] = c
            if comp:
                table[(i, j)] = comp
        for (i, j), row in list(table.items()):
            si = section_parity(chart, i)
            sj = section_parity(chart, j)
            sign = -1 if not (si and sj) else 1
            other = {k: sign * c for k, c in row.items()}
            if (j, i) in table:
                if table[(j, i)] != other:
                    raise KernelError("bracket table breaks graded antisymmetry")
            else:
                table[(j, i)] = other
        self.bracket = table

    def bracket_comp(self, i, j, k):
        return self.bracket.get((i, j), {}).get(k, self.chart.zero())

    def anchor_comp(self, i, a):
        return self.anchor.get(i, {}).get(a, self.chart.zero())

    # --- the dictionary ---------------------------------------------------

    def to_field(self):
        """The weight-1 structure field reproducing this anchor and bracket."""
        ch = self.chart
        coeffs = {}
        for a in self.base:
            acc = ch.zero()
            for i in self.fibers:
                acc = acc + ch.gen_poly(i) * self.anchor_comp(i, a)
            if acc:
                coeffs[a] = acc
        for k in self.fibers:
            acc = ch.zero()
            for i in self.fibers:
                si = section_parity(ch, i)
                for j in self.fibers:
                    # Q_ji^k = (-1)^(i~) B_ji^k from [e_j,e_i] = (-1)^(i~) Q_ji^k e_k
                    q = self.bracket_comp(j, i, k)
                    if si:
                        q = -q
                    acc = acc + Fraction(1, 2) * (ch.gen_poly(i) * ch.gen_poly(j)) * q
            if acc:
                coeffs[k] = acc
        return Derivation(ch, coeffs, parity=1)

    @staticmethod
    def from_field(Q, direction=1):
        """Extract anchor and bracket via the derived operations."""
        _require_structure_field(Q, direction)
        ch = Q.chart
        fibers = fiber_names(ch, direction)
        base = base_like_names(ch, direction)
        anchor = {}
        bracket = {}
        for i in fibers:
            ei = frame_section(ch, i, direction)
            anchor[i] = {a: derived_anchor(Q, ei, ch.gen_poly(a)) for a in base}
            for j in fibers:
                w = derived_bracket(Q, ei, frame_section(ch, j, direction))
                bracket[(i, j)] = dict(w.comps)
        return AlgebroidData(ch, anchor, bracket, direction)

    # --- section bracket by the coordinate formula (independent of Q) ------

    def anchor_apply(self, u, f):
        """a(u) f from the anchor table alone."""
        out = self.chart.zero()
        for i in self.fibers:
            ui = u.comp(i)
            if not ui:
                continue
            for a in self.base:
                out = out + ui * self.anchor_comp(i, a) * f.partial(a)
        return out

    def section_bracket(self, u, v):
        """Coordinate formula for [u,v]; independent of the derived route."""
        ch = self.chart
        comps = {}
        for k in self.fibers:
            acc = ch.zero()
            acc = acc + self.anchor_apply(u, v.comp(k))
            s = -1 if (u.parity and ((v.parity + 1) % 2)) else 1
            acc = acc - s * self.anchor_apply(v, u.comp(k))
            for i in self.fibers:
                si = section_parity(ch, i)
                for j in self.fibers:
                    q = self.bracket_comp(j, i, k)  # Q_ji^k up to (-1)^(i~)
                    if si:
                        q = -q
                    sgn = -1 if (si and ((v.parity + 1) % 2)) else 1
                    acc = acc - sgn * u.comp(i) * v.comp(j) * q
            if acc:
                comps[k] = acc
        return Section(ch, (u.parity + v.parity) % 2, comps, self.direction)

    def jacobiator(self, u, v, w):
        """Graded Jacobiator of the coordinate-formula bracket."""
        sb = self.section_bracket
        s = -1 if (u.parity and v.parity) else 1
        j1 = sb(u, sb(v, w))
        j2 = sb(sb(u, v), w)
        j3 = sb(v, sb(u, w))
        comps = {}
        for k in self.fibers:
            c = j1.comp(k) - j2.comp(k) - s * j3.comp(k)
            if c:
                comps[k] = c
        return Section(self.chart, (u.parity + v.parity + w.parity) % 2, comps,
                       self.direction)

    def frame_jacobi_passes(self):
        d = self.direction
        for i in self.fibers:
            for j in self.fibers:
                for k in self.fibers:
                    J = self.jacobiator(
                        frame_section(self.chart, i, d),
                        frame_section(self.chart, j, d),
                        frame_section(self.chart, k, d))
                    if not J.is_zero():
                        return False
        return True

    def anchor_morphism_passes(self):
        """a([u,v]) = [a(u), a(v)] on frame pairs."""
        for i in self.fibers:
            for j in self.fibers:
                u = frame_section(self.chart, i, self.direction)
                v = frame_section(self.chart, j, self.direction)
                uv = self.section_bracket(u, v)
                for f in (self.chart.gen_poly(a) for a in self.base):
                    lhs = self.anchor_apply(uv, f)
                    s = -1 if (u.parity and v.parity) else 1
                    rhs = self.anchor_apply(u, self.anchor_apply(v, f)) - s * self.anchor_apply(
                        v, self.anchor_apply(u, f))
                    if lhs != rhs:
                        return False
        return True

    # --- induced structures on the duals ------------------------------------

    def dual_chart(self, odd, label=""):
        if self.chart.ndirs != 1:
            raise KernelError("dual charts are built for single-direction charts")
        gens = [Generator(n, EVEN, BASE) for n in self.base]
        for n in self.fibers:
            sp = section_parity(self.chart, n)
            par = (sp + 1) % 2 if odd else sp
            gens.append(Generator(n + "_d", par, FIBER, (1,)))
        return Chart.build(1, gens, label=label)

    def _dual_table(self, chart, sigma):
        entries = {}
        for i in self.fibers:
            for a in self.base:
                c = self.anchor_comp(i, a)
                if c:
                    entries[(i + "_d", a)] = c.rename(chart)
            for j in self.fibers:
                acc = chart.zero()
                for k in self.fibers:
                    c = self.bracket_comp(i, j, k)
                    if c:
                        acc = acc + c.rename(chart) * chart.gen_poly(k + "_d")
                if acc:
                    entries[(i + "_d", j + "_d")] = acc
        return BracketTable(chart, sigma, entries)

    def lie_poisson(self):
        """Even linear bracket on the dual: {u_i,x^a}=a_i^a, {u_i,u_j}=[e_i,e_j]^k u_k."""
        ch = self.dual_chart(odd=False, label=self.chart.label + "*")
        return ch, self._dual_table(ch, 0)

    def lie_schouten(self):
        """Odd linear bracket on the antidual; the same table, odd carrier."""
        ch = self.dual_chart(odd=True, label=self.chart.label + "|P*")
        return ch, self._dual_table(ch, 1)


# --- tangent prolongation ----------------------------------------------------


DOT = "_dot"


def tangent_chart(chart):
    """Double the chart with velocity coordinates carrying a new direction."""
    nd = chart.ndirs + 1
    gens = []
    for g in chart.gens:
        gens.append(Generator(g.name, g.parity, g.role, g.dirs))
    for g in chart.gens:
        dirs = tuple(sorted(g.dirs + (nd,)))
        role = FIBER if g.role == BASE else CORE
        gens.append(Generator(g.name + DOT, g.parity, role, dirs))
    return Chart.build(nd, gens, label=(chart.label + "|T") if chart.label else "T")


def dotting_derivation(tchart, names):
    """The even derivation sending each undotted generator to its velocity."""
    return Derivation(
        tchart, {n: tchart.gen_poly(n + DOT) for n in names}, parity=0)


def tangent_prolongation(Q, tchart=None):
    """Prolong a field to the tangent chart: same action on positions,
    and the dotted rows are the total derivatives of the position rows."""
    ch = Q.chart
    if tchart is None:
        tchart = tangent_chart(ch)
    delta = dotting_derivation(tchart, ch.names())
    coeffs = {}
    for g in ch.gens:
        c = Q.coeff(g.name)
        if not c:
            continue
        lifted = c.rename(tchart)
        coeffs[g.name] = lifted
        coeffs[g.name + DOT] = delta(lifted)
    return Derivation(tchart, coeffs, parity=Q.parity)
