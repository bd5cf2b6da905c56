"""Exact arithmetic in free graded-commutative polynomial algebras.

Generators carry a Z2 parity and a weight vector indexed by bundle
directions; odd generators anticommute and square to zero.  Coefficients
are exact rationals, so testing a polynomial for zero is decidable.
Normal form: monomials are kept in a fixed chart order, with Koszul signs
absorbed into the coefficient whenever factors are reordered.  Values are
never mutated after construction, so charts, polynomials and everything
built on them can be shared freely across threads.

See SIGNS.md at the repository root for the sign conventions used
throughout (left derivatives, parity reversal, duals).
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction


class KernelError(Exception):
    """Base class for kernel errors."""


class UnknownGeneratorError(KernelError):
    pass


class ChartMismatchError(KernelError):
    pass


class ParityError(KernelError):
    pass


class WeightError(KernelError):
    pass


BASE = "base"
FIBER = "fiber"
CORE = "core"

EVEN = 0
ODD = 1


@dataclass(frozen=True)
class Generator:
    """A graded coordinate: name, Z2 parity, role and direction set.

    The weight vector is the indicator vector of ``dirs``: a fiber
    generator of direction r weighs e_r, a core generator weighs the sum
    of e_r over its directions, base generators weigh zero.
    """

    name: str
    parity: int
    role: str
    dirs: tuple = ()

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise KernelError("parity must be 0 or 1, got %r" % (self.parity,))
        if self.role == BASE:
            if self.dirs:
                raise KernelError("base generator %s cannot carry directions" % self.name)
            if self.parity != EVEN:
                raise ParityError("base generator %s must be even" % self.name)
        elif self.role == FIBER:
            if len(self.dirs) != 1:
                raise KernelError("fiber generator %s needs exactly one direction" % self.name)
        elif self.role == CORE:
            if len(self.dirs) < 2:
                raise KernelError("core generator %s needs at least two directions" % self.name)
            if tuple(sorted(self.dirs)) != tuple(self.dirs):
                raise KernelError("core directions must be sorted")
        else:
            raise KernelError("unknown role %r" % (self.role,))

    def block_key(self):
        if self.role == BASE:
            return (0, 0, ())
        return (1, len(self.dirs), self.dirs)


class Chart:
    """An ordered family of generators spanning one polynomial algebra.

    Generator order is canonical: base block first, then fiber blocks by
    direction, then core blocks by (size, directions); declaration order
    is kept inside each block.  All polynomials and vector fields refer
    to a chart and may only be combined within the same chart.
    """

    __slots__ = ("ndirs", "gens", "label", "_index", "_parities", "_weights", "_hash")

    def __init__(self, ndirs, gens, label=""):
        gens = tuple(gens)
        keys = [g.block_key() for g in gens]
        if keys != sorted(keys, key=lambda k: (k[0], k[1], k[2])):
            raise KernelError("generators not in canonical block order; use Chart.build")
        index = {}
        for i, g in enumerate(gens):
            if g.name in index:
                raise KernelError("duplicate generator name %r" % g.name)
            for r in g.dirs:
                if not (1 <= r <= ndirs):
                    raise KernelError("generator %s uses direction %d outside 1..%d" % (g.name, r, ndirs))
            index[g.name] = i
        self.ndirs = ndirs
        self.gens = gens
        self.label = label
        self._index = index
        self._parities = tuple(g.parity for g in gens)
        self._weights = tuple(self._weight_of(g) for g in gens)
        self._hash = hash((ndirs, gens))

    def _weight_of(self, g):
        w = [0] * self.ndirs
        for r in g.dirs:
            w[r - 1] = 1
        return tuple(w)

    @staticmethod
    def build(ndirs, gens, label=""):
        """Sort declarations into canonical block order and build the chart."""
        ordered = sorted(gens, key=lambda g: g.block_key())
        # keep declaration order within a block (sorted is stable)
        return Chart(ndirs, ordered, label=label)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.ndirs == other.ndirs and self.gens == other.gens

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Chart(%s: %s)" % (self.label or self.ndirs, ",".join(g.name for g in self.gens))

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGeneratorError("unknown generator %r" % name) from None

    def generator(self, name):
        return self.gens[self.index(name)]

    def has(self, name):
        return name in self._index

    def parity(self, i):
        return self._parities[i]

    def weight(self, i):
        return self._weights[i]

    def names(self):
        return tuple(g.name for g in self.gens)

    def by_role(self, role, dirs=None):
        out = []
        for g in self.gens:
            if g.role == role and (dirs is None or g.dirs == tuple(dirs)):
                out.append(g.name)
        return out

    def base_names(self):
        return self.by_role(BASE)

    def zero_weight(self):
        return (0,) * self.ndirs

    # --- polynomial constructors -------------------------------------

    def zero(self):
        return GradedPoly(self, {})

    def const(self, c):
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return GradedPoly(self, {(): c})

    def one(self):
        return self.const(1)

    def gen_poly(self, name):
        i = self.index(name)
        return GradedPoly(self, {((i, 1),): Fraction(1)})

    def poly(self, terms):
        """Build a polynomial from {(name, exp) tuples: coefficient}."""
        out = self.zero()
        for key, c in terms.items():
            mono = self.const(c)
            for name, e in key:
                mono = mono * self.gen_poly(name) ** e
            out = out + mono
        return out


def _merge_keys(parities, k1, k2):
    """Multiply two canonical monomial keys; return (key, sign) or (None, 0)."""
    sign = 1
    odd1 = [i for i, _e in k1 if parities[i]]
    if odd1:
        for j, _e in k2:
            if parities[j]:
                pos = bisect_left(odd1, j)
                if pos < len(odd1) and odd1[pos] == j:
                    return None, 0  # odd square
                if (len(odd1) - pos) & 1:
                    sign = -sign
    merged = []
    a, b = 0, 0
    while a < len(k1) and b < len(k2):
        i1, e1 = k1[a]
        i2, e2 = k2[b]
        if i1 < i2:
            merged.append((i1, e1))
            a += 1
        elif i2 < i1:
            merged.append((i2, e2))
            b += 1
        else:
            merged.append((i1, e1 + e2))
            a += 1
            b += 1
    merged.extend(k1[a:])
    merged.extend(k2[b:])
    return tuple(merged), sign


class GradedPoly:
    """A graded-commutative polynomial in canonical normal form."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart, terms):
        self.chart = chart
        self.terms = terms  # dict: key -> nonzero Fraction

    # --- ring structure ----------------------------------------------

    def _check(self, other):
        if self.chart != other.chart:
            raise ChartMismatchError(
                "polynomials live on different charts (%r vs %r)" % (self.chart, other.chart)
            )

    def __add__(self, other):
        if not isinstance(other, GradedPoly):
            other = self.chart.const(other)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k, 0) + c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return GradedPoly(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(self.chart, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GradedPoly):
            other = self.chart.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.chart.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            c = Fraction(other)
            if c == 0:
                return self.chart.zero()
            return GradedPoly(self.chart, {k: v * c for k, v in self.terms.items()})
        self._check(other)
        par = self.chart._parities
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key, sign = _merge_keys(par, k1, k2)
                if key is None:
                    continue
                s = terms.get(key, 0) + c1 * c2 * sign
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return GradedPoly(self.chart, terms)

    def __rmul__(self, other):
        # scalars are even and central
        return self.__mul__(other)

    def __pow__(self, n):
        if n < 0:
            raise KernelError("negative powers are not defined")
        out = self.chart.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.chart == other.chart and self.terms == other.terms
        return self.terms == self.chart.const(other).terms

    def __hash__(self):
        return hash((self.chart, tuple(sorted(self.terms.items()))))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    # --- grading ------------------------------------------------------

    def _key_parity(self, key):
        par = self.chart._parities
        p = 0
        for i, e in key:
            p ^= par[i] & (e & 1)
        return p

    def _key_weight(self, key):
        w = [0] * self.chart.ndirs
        for i, e in key:
            gw = self.chart._weights[i]
            for r in range(self.chart.ndirs):
                w[r] += gw[r] * e
        return tuple(w)

    def parity(self):
        """Parity if homogeneous, else None; zero counts as any parity."""
        ps = {self._key_parity(k) for k in self.terms}
        if not ps:
            return None
        if len(ps) == 1:
            return ps.pop()
        return None

    def is_parity_homogeneous(self, parity=None):
        p = self.parity()
        if not self.terms:
            return True
        if p is None:
            return False
        return parity is None or p == parity

    def parity_components(self):
        comps = {0: self.chart.zero(), 1: self.chart.zero()}
        for k, c in self.terms.items():
            comps[self._key_parity(k)] += GradedPoly(self.chart, {k: c})
        return comps

    def weight(self):
        """Weight vector if homogeneous, else None.  Zero has any weight."""
        ws = {self._key_weight(k) for k in self.terms}
        if len(ws) == 1:
            return ws.pop()
        return None

    def weight_components(self):
        """Decompose into weight-homogeneous parts, keyed by weight vector."""
        out = {}
        for k, c in self.terms.items():
            w = self._key_weight(k)
            out[w] = out.get(w, self.chart.zero()) + GradedPoly(self.chart, {k: c})
        return out

    def weight_part(self, w):
        return self.weight_components().get(tuple(w), self.chart.zero())

    def max_degree(self):
        return max((sum(e for _i, e in k) for k in self.terms), default=0)

    # --- calculus -----------------------------------------------------

    def partial(self, name):
        """Left derivative with respect to a generator.

        Moving the derivative through a monomial prefix of parity p
        contributes (-1)^(g~ * p); this fixes the graded Leibniz rule
        d(pq) = d(p) q + (-1)^(g~ p~) p d(q).
        """
        i = self.chart.index(name)
        par = self.chart._parities
        terms = {}
        for key, c in self.terms.items():
            prefix = 0
            for pos, (j, e) in enumerate(key):
                if j == i:
                    coeff = c * e
                    if par[i] and prefix:
                        coeff = -coeff
                    if e == 1:
                        nk = key[:pos] + key[pos + 1:]
                    else:
                        nk = key[:pos] + ((j, e - 1),) + key[pos + 1:]
                    s = terms.get(nk, 0) + coeff
                    if s:
                        terms[nk] = s
                    else:
                        terms.pop(nk, None)
                    break
                if j > i:
                    break
                prefix ^= par[j] & (e & 1)
        return GradedPoly(self.chart, terms)

    def substitute(self, mapping, target=None):
        """Apply an algebra homomorphism given on generators.

        ``mapping`` sends generator names to polynomials (all on one
        target chart).  Unmapped generators must exist on the target
        chart under the same name and parity.  Nonzero images must be
        parity-homogeneous of the generator's parity.
        """
        images = {}
        for name, img in mapping.items():
            i = self.chart.index(name)
            if target is None:
                target = img.chart
            elif img.chart != target:
                raise ChartMismatchError("substitution images on mixed charts")
            if img and not img.is_parity_homogeneous(self.chart._parities[i]):
                raise ParityError("image of %s has wrong parity" % name)
            images[i] = img
        if target is None:
            target = self.chart
        out = target.zero()
        for key, c in self.terms.items():
            acc = target.const(c)
            for i, e in key:
                if i in images:
                    img = images[i]
                else:
                    g = self.chart.gens[i]
                    if not target.has(g.name):
                        raise UnknownGeneratorError(
                            "generator %s absent from target chart" % g.name)
                    if target.generator(g.name).parity != g.parity:
                        raise ParityError("generator %s changes parity across charts" % g.name)
                    img = target.gen_poly(g.name)
                acc = acc * img ** e
                if not acc:
                    break
            out = out + acc
        return out

    def zero_out(self, names, target=None):
        """Substitute zero for the named generators."""
        t = target if target is not None else self.chart
        z = t.zero()
        return self.substitute({n: z for n in names}, target=t)

    def rename(self, target, name_map=None):
        """Move to another chart, renaming the generators that occur."""
        name_map = name_map or {}
        used = {i for key in self.terms for i, _e in key}
        mapping = {}
        for i in used:
            n = self.chart.gens[i].name
            mapping[n] = target.gen_poly(name_map.get(n, n))
        return self.substitute(mapping, target=target)

    def coefficient_of(self, names, base_names=None):
        """Left-derive by each name in order, then drop all fiber terms.

        Extracts the coefficient tensor entry of a monomial slot such as
        u^i w^a from a structure field component.
        """
        p = self
        for n in names:
            p = p.partial(n)
        kill = [g.name for g in self.chart.gens
                if g.role != BASE and (base_names is None or g.name not in base_names)]
        return p.zero_out(kill)

    # --- printing -------------------------------------------------------

    def _mono_str(self, key):
        parts = []
        for i, e in key:
            n = self.chart.gens[i].name
            parts.append(n if e == 1 else "%s^%d" % (n, e))
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items())
        out = []
        for key, c in items:
            mono = self._mono_str(key)
            if not mono:
                piece = str(c)
            elif c == 1:
                piece = mono
            elif c == -1:
                piece = "-" + mono
            else:
                piece = "%s*%s" % (c, mono)
            if out and not piece.startswith("-"):
                out.append("+ " + piece)
            elif out:
                out.append("- " + piece[1:])
            else:
                out.append(piece)
        return " ".join(out)

    def __repr__(self):
        return "GradedPoly(%s)" % self


def normalize_product(chart, names, coeff=1):
    """Order a raw product of generators, accumulating the Koszul sign.

    Returns (poly, reordered) where ``reordered`` records that the
    normal form differs from the literal input by a sign or collapses
    to zero through an odd square.
    """
    out = chart.const(coeff)
    reordered = False
    par = chart._parities
    seen_odd = []
    for n in names:
        i = chart.index(n)
        if par[i]:
            if i in seen_odd or any(j > i for j in seen_odd):
                reordered = True
            seen_odd.append(i)
        out = out * GradedPoly(chart, {((i, 1),): Fraction(1)})
    return out, reordered
