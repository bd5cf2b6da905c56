"""Super vector fields as derivations of a graded polynomial algebra.

A derivation is stored by its action on generators.  Commutators are
graded, homological means odd with vanishing self-commutator, and
relatedness of fields under a chart map is the intertwining condition
on pullbacks.  This module also hosts the partial parity reversal of
charts, functions and fields (the mechanical rule is documented in
SIGNS.md) since every higher module builds on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    Chart,
    ChartMismatchError,
    Generator,
    GradedPoly,
    KernelError,
    ParityError,
    WeightError,
)


@dataclass
class Verdict:
    """Outcome of a checker: pass iff no residual equations survive."""

    residuals: list = field(default_factory=list)  # (label, GradedPoly)

    @property
    def passed(self):
        return not self.residuals

    def add(self, label, poly):
        if poly:
            self.residuals.append((label, poly))

    def labels(self):
        return [lab for lab, _p in self.residuals]

    def merged(self, *others):
        out = Verdict(list(self.residuals))
        for o in others:
            out.residuals.extend(o.residuals)
        return out

    def __bool__(self):
        return self.passed

    def __repr__(self):
        if self.passed:
            return "Verdict(pass)"
        return "Verdict(fail: %s)" % ", ".join(self.labels())


class Derivation:
    """A parity-homogeneous super vector field X = sum c_g d/dg.

    Coefficients act from the left, so X satisfies the graded Leibniz
    rule X(pq) = X(p)q + (-1)^(X~ p~) p X(q) with the left-derivative
    convention of the algebra module.
    """

    __slots__ = ("chart", "coeffs", "parity")

    def __init__(self, chart, coeffs, parity=None):
        clean = {}
        for name, c in coeffs.items():
            i = chart.index(name)
            if not isinstance(c, GradedPoly):
                c = chart.const(c)
            if c.chart != chart:
                raise ChartMismatchError("coefficient of %s on a different chart" % name)
            if not c:
                continue
            p = c.parity()
            if p is None:
                raise ParityError("coefficient of %s not parity-homogeneous" % name)
            fp = (p + chart.parity(i)) % 2
            if parity is None:
                parity = fp
            elif parity != fp:
                raise ParityError("field is not parity-homogeneous")
            clean[i] = c
        self.chart = chart
        self.coeffs = clean
        self.parity = parity if parity is not None else 0

    @staticmethod
    def zero(chart, parity=0):
        return Derivation(chart, {}, parity=parity)

    def coeff(self, name):
        return self.coeffs.get(self.chart.index(name), self.chart.zero())

    def items(self):
        for i, c in sorted(self.coeffs.items()):
            yield self.chart.gens[i].name, c

    def is_zero(self):
        return not self.coeffs

    def __call__(self, p):
        if p.chart != self.chart:
            raise ChartMismatchError("field and polynomial on different charts")
        out = self.chart.zero()
        for i, c in self.coeffs.items():
            out = out + c * p.partial(self.chart.gens[i].name)
        return out

    apply = __call__

    # --- linear structure ------------------------------------------------

    def __add__(self, other):
        if self.chart != other.chart:
            raise ChartMismatchError("fields on different charts")
        names = {self.chart.gens[i].name for i in self.coeffs}
        names |= {other.chart.gens[i].name for i in other.coeffs}
        coeffs = {n: self.coeff(n) + other.coeff(n) for n in names}
        parity = self.parity if self.coeffs else other.parity
        return Derivation(self.chart, coeffs, parity=parity)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return Derivation(
            self.chart,
            {self.chart.gens[i].name: c * scalar for i, c in self.coeffs.items()},
            parity=self.parity,
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, Derivation)
            and self.chart == other.chart
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "Derivation(0)"
        parts = ["(%s) d/d%s" % (c, n) for n, c in self.items()]
        return "Derivation(%s)" % " + ".join(parts)

    # --- grading ----------------------------------------------------------

    def weight(self):
        """Common weight of the field, or None if inhomogeneous."""
        ws = set()
        for i, c in self.coeffs.items():
            w = c.weight()
            if w is None:
                return None
            gw = self.chart.weight(i)
            ws.add(tuple(a - b for a, b in zip(w, gw)))
        if not ws:
            return self.chart.zero_weight()
        if len(ws) == 1:
            return ws.pop()
        return None

    def weight_in(self, r):
        """Weight in one direction only, or None if inhomogeneous there."""
        ws = set()
        for i, c in self.coeffs.items():
            gw = self.chart.weight(i)[r - 1]
            for key in c.terms:
                ws.add(c._key_weight(key)[r - 1] - gw)
        if not ws:
            return 0
        if len(ws) == 1:
            return ws.pop()
        return None


def commutator(X, Y):
    """Graded commutator [X,Y] = X Y - (-1)^(X~ Y~) Y X as a derivation."""
    if X.chart != Y.chart:
        raise ChartMismatchError("fields on different charts")
    sign = -1 if (X.parity and Y.parity) else 1
    chart = X.chart
    coeffs = {}
    for g in chart.gens:
        r = X(Y.coeff(g.name)) - sign * Y(X.coeff(g.name))
        if r:
            coeffs[g.name] = r
    return Derivation(chart, coeffs, parity=(X.parity + Y.parity) % 2)


def homological_residuals(Q):
    """Per-generator residuals of Q^2 = 0 (for odd Q, [Q,Q] = 2 Q o Q)."""
    v = Verdict()
    if Q.is_zero():
        return v
    if Q.parity != 1:
        v.add("parity", Q.chart.one())
        return v
    for g in Q.chart.gens:
        r = Q(Q(Q.chart.gen_poly(g.name)))
        v.add(g.name, r)
    return v


def is_homological(Q):
    """True iff Q is odd and commutes with itself; zero passes."""
    return homological_residuals(Q).passed


def check_weight(X, expected):
    """Verdict: every coefficient is weight-homogeneous of the right weight."""
    expected = tuple(expected)
    v = Verdict()
    for name, c in X.items():
        i = X.chart.index(name)
        gw = X.chart.weight(i)
        want = tuple(e + w for e, w in zip(expected, gw))
        bad = X.chart.zero()
        for w, part in c.weight_components().items():
            if w != want:
                bad = bad + part
        v.add("d/d" + name, bad)
    return v


class Substitution:
    """Pullback data of a chart map F: source -> target.

    Stores F*(g) for every target generator g as a polynomial on the
    source chart; composition and application follow pullback rules.
    """

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source, target, mapping):
        self.source = source
        self.target = target
        m = {}
        for g in target.gens:
            if g.name in mapping:
                img = mapping[g.name]
                if not isinstance(img, GradedPoly):
                    img = source.const(img)
                m[g.name] = img
            else:
                m[g.name] = source.gen_poly(g.name)
        self.mapping = m

    @staticmethod
    def identity(chart):
        return Substitution(chart, chart, {})

    def pull(self, p):
        """F*(p) for p on the target chart."""
        if p.chart != self.target:
            raise ChartMismatchError("pullback of polynomial on the wrong chart")
        return p.substitute(self.mapping, target=self.source)

    def after(self, inner):
        """Pullback of the composite map: (self o inner in map order).

        If self: M -> T and inner: S -> M, the composite S -> T pulls
        back as inner* o self*.
        """
        if inner.target != self.source:
            raise ChartMismatchError("substitutions do not compose")
        return Substitution(
            inner.source,
            self.target,
            {n: inner.pull(img) for n, img in self.mapping.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, Substitution)
            and self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def conjugate_field(self, X):
        """Transport a field along an invertible relabeling substitution.

        Valid for involutions and sign flips where self equals its own
        inverse composed with a relabeling; used for core sign twists.
        """
        # X on source; transported field Y on target with Y(g) = (F*)^-1 X(F*(g)).
        inv = self.inverse()
        coeffs = {}
        for g in self.target.gens:
            r = X(self.pull(self.target.gen_poly(g.name)))
            coeffs[g.name] = inv.pull(r)
        return Derivation(self.target, coeffs, parity=X.parity)

    def inverse(self):
        """Inverse substitution for diagonal +/- relabelings only."""
        inv = {}
        for name, img in self.mapping.items():
            if len(img.terms) != 1:
                raise KernelError("inverse only available for monomial relabelings")
            (key, c), = img.terms.items()
            if len(key) != 1 or key[0][1] != 1 or c * c != 1:
                raise KernelError("inverse only available for signed relabelings")
            src_name = self.source.gens[key[0][0]].name
            inv[src_name] = self.target.gen_poly(name) * c
        return Substitution(self.target, self.source, inv)


def related(F, X, Y):
    """Verdict for F-relatedness: F* o Y = X o F* on target generators.

    X lives on F's source chart, Y on its target chart; residuals are
    keyed by target generator name.
    """
    if X.chart != F.source or Y.chart != F.target:
        raise ChartMismatchError("fields do not match the substitution charts")
    v = Verdict()
    for g in F.target.gens:
        r = F.pull(Y(F.target.gen_poly(g.name))) - X(F.pull(F.target.gen_poly(g.name)))
        v.add(g.name, r)
    return v


# --- partial parity reversal ------------------------------------------------


def reverse_chart(chart, r, label=None):
    """Flip the parity of every generator of nonzero weight in direction r."""
    gens = []
    for g in chart.gens:
        if r in g.dirs:
            gens.append(Generator(g.name, (g.parity + 1) % 2, g.role, g.dirs))
        else:
            gens.append(g)
    lab = label if label is not None else (chart.label + "|P%d" % r if chart.label else "")
    return Chart(chart.ndirs, gens, label=lab)


def reverse_function(p, r, target):
    """Move a weight <= 1 (in direction r) function to the reversed chart.

    Each monomial carries at most one direction-r generator; it is moved
    to the front (Koszul sign), relabeled with flipped parity, and the
    monomial is re-normalized.  Weight-0 monomials are untouched.  This
    is the transformation-law rule for linear coordinates.
    """
    chart = p.chart
    par = chart._parities
    out = target.zero()
    for key, c in p.terms.items():
        pos = None
        for q, (i, e) in enumerate(key):
            if r in chart.gens[i].dirs:
                if e != 1 or pos is not None:
                    raise WeightError("function has weight > 1 in direction %d" % r)
                pos = q
        if pos is None:
            out = out + GradedPoly(target, {key: c})
            continue
        i, _e = key[pos]
        prefix = 0
        for j, e in key[:pos]:
            prefix ^= par[j] & (e & 1)
        sign = -1 if (par[i] and prefix) else 1
        # front position, with flipped parity on the new chart
        mono = GradedPoly(target, {((i, 1),): c * sign})
        rest = GradedPoly(target, {key[:pos] + key[pos + 1:]: 1})
        out = out + mono * rest
    return out


def reverse_field(X, r, target=None):
    """Partial parity reversal of a field of weight 0 in direction r.

    Coefficient rows of reversed generators are moved by the
    transformation-law rule and the whole row picks up (-1)^(X~); rows
    of untouched generators carry over verbatim.  Applying the same
    reversal twice returns the original field.
    """
    chart = X.chart
    if X.weight_in(r) != 0:
        raise WeightError("field does not have weight 0 in direction %d" % r)
    if target is None:
        target = reverse_chart(chart, r)
    sign = -1 if X.parity else 1
    coeffs = {}
    for name, c in X.items():
        i = chart.index(name)
        if r in chart.gens[i].dirs:
            coeffs[name] = reverse_function(c, r, target) * sign
        else:
            coeffs[name] = GradedPoly(target, dict(c.terms))
    return Derivation(target, coeffs, parity=X.parity)
