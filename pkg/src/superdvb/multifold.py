"""Multiple vector bundle charts, multilinear transitions and the n-fold
commuting-structure checker.

A chart of multiplicity n carries one generator block per nonempty subset
of directions; the block of a subset S weighs the indicator vector of S.
Transitions are linear on singleton blocks and acquire one multilinear
shift term per finer partition on higher blocks.
"""

from __future__ import annotations

from .algebra import (
    BASE,
    CORE,
    EVEN,
    FIBER,
    Chart,
    Generator,
    GradedPoly,
    KernelError,
)
from .fields import (
    Derivation,
    Substitution,
    Verdict,
    commutator,
    reverse_chart,
    reverse_field,
)


def block_role(subset):
    return FIBER if len(subset) == 1 else CORE


def multi_chart(n, blocks, base_names=(), label=""):
    """Build an n-fold chart from {subset: [(name, parity), ...]}.

    Subsets may be given as tuples or frozensets of direction indices.
    """
    gens = [Generator(nm, EVEN, BASE) for nm in base_names]
    for subset, specs in blocks.items():
        dirs = tuple(sorted(subset))
        if not dirs or any(r < 1 or r > n for r in dirs):
            raise KernelError("invalid block %r for multiplicity %d" % (subset, n))
        for nm, par in specs:
            gens.append(Generator(nm, par, block_role(dirs), dirs))
    return Chart.build(n, gens, label=label)


def blocks_of(chart):
    """Map 'directions subset' -> generator names, in chart order."""
    out = {}
    for g in chart.gens:
        if g.role == BASE:
            continue
        out.setdefault(g.dirs, []).append(g.name)
    return out


def standard_multi_chart(n, dims, parity=EVEN, base_names=("x",), label=""):
    """One block per nonempty subset with ``dims[S]`` generators named by
    the subset, e.g. v12_1 for the first generator of block {1,2}."""
    blocks = {}
    for subset, d in dims.items():
        dirs = tuple(sorted(subset))
        tag = "".join(str(r) for r in dirs)
        blocks[dirs] = [("v%s_%d" % (tag, i + 1), parity) for i in range(d)]
    return multi_chart(n, blocks, base_names, label=label)


def _partitions(dirs):
    """Unordered partitions of a direction set into nonempty blocks."""
    dirs = tuple(sorted(dirs))
    if not dirs:
        yield ()
        return
    first = dirs[0]
    rest = dirs[1:]
    for sub in _subsets(rest):
        head = (first,) + sub
        remaining = tuple(r for r in rest if r not in sub)
        for tail in _partitions(remaining):
            yield (head,) + tuple(tail)


def _subsets(items):
    if not items:
        yield ()
        return
    for sub in _subsets(items[1:]):
        yield sub
        yield (items[0],) + sub


class MultiTransition:
    """A multilinear transition between a chart and its primed copy.

    ``tensors[S][partition]`` maps an ordered index tuple (one index per
    partition block, in sorted-block order, plus the target index last)
    to a polynomial in the base.  The trivial partition (S,) is the
    linear block and must be invertible over the rationals; shift blocks
    may be polynomial.
    """

    def __init__(self, chart, tensors):
        self.chart = chart
        self.blocks = blocks_of(chart)
        self.tensors = {}
        for subset, parts in tensors.items():
            dirs = tuple(sorted(subset))
            if dirs not in self.blocks:
                raise KernelError("transition names unknown block %r" % (subset,))
            store = {}
            for part, table in parts.items():
                part = tuple(sorted(tuple(sorted(p)) for p in part))
                if tuple(sorted(sum(part, ()))) != dirs or any(
                        p not in self.blocks for p in part):
                    raise KernelError("partition %r does not refine block %r" % (part, dirs))
                store[part] = dict(table)
            self.tensors[dirs] = store

    def primed_chart(self):
        gens = []
        for g in self.chart.gens:
            gens.append(Generator(g.name + "_p", g.parity, g.role, g.dirs))
        return Chart.build(self.chart.ndirs, gens, label=self.chart.label + "'")

    def substitution(self):
        """Pullback sending each unprimed generator to its primed expression."""
        primed = self.primed_chart()
        mapping = {}
        for nm in self.chart.base_names():
            mapping[nm] = primed.gen_poly(nm + "_p")
        for dirs, names in self.blocks.items():
            parts_all = self.tensors.get(dirs, {})
            for t, nm in enumerate(names):
                acc = primed.zero()
                for part in _partitions(dirs):
                    part = tuple(sorted(part))
                    table = parts_all.get(part)
                    if table is None:
                        if len(part) == 1:
                            raise KernelError(
                                "transition misses the linear block on %r" % (dirs,))
                        continue
                    part_names = [self.blocks[p] for p in part]
                    idx = [0] * len(part)
                    while True:
                        key = tuple(idx) + (t,)
                        c = table.get(key)
                        if c is not None:
                            if not isinstance(c, GradedPoly):
                                c = self.chart.const(c)
                            mono = c.rename(primed, {numf: numf + "_p"
                                                     for numf in self.chart.names()})
                            for b, p in enumerate(part):
                                mono = mono * primed.gen_poly(part_names[b][idx[b]] + "_p")
                            acc = acc + mono
                        for b in range(len(part) - 1, -1, -1):
                            idx[b] += 1
                            if idx[b] < len(part_names[b]):
                                break
                            idx[b] = 0
                        else:
                            break
                mapping[nm] = acc
        return Substitution(primed, self.chart, mapping)

    def linear_matrix(self, dirs):
        names = self.blocks[dirs]
        table = self.tensors.get(dirs, {}).get((dirs,), {})
        m = []
        for s in range(len(names)):
            row = []
            for t in range(len(names)):
                c = table.get((s, t), 0)
                if isinstance(c, GradedPoly):
                    if c.max_degree() > 0:
                        raise KernelError("linear transition blocks must be constant")
                    c = c.terms.get((), 0)
                row.append(c)
            m.append(row)
        return m

    def inverse_substitution(self):
        """Solve the triangular system for the primed coordinates."""
        from fractions import Fraction

        sub = self.substitution()
        primed = sub.source
        mapping = {}
        for nm in self.chart.base_names():
            mapping[nm + "_p"] = self.chart.gen_poly(nm)
        for dirs in sorted(self.blocks, key=lambda d: (len(d), d)):
            names = self.blocks[dirs]
            m = self.linear_matrix(dirs)
            inv = _invert(m)
            if inv is None:
                raise KernelError("linear block on %r is singular" % (dirs,))
            # v'_s = sum_t (v_t - shift_t(lower primed)) inv[t][s]
            shifted = []
            for t, nm in enumerate(names):
                expr = sub.mapping[nm]  # in primed coordinates
                lin = primed.zero()
                table = self.tensors.get(dirs, {}).get((dirs,), {})
                for s2 in range(len(names)):
                    c = table.get((s2, t), 0)
                    if isinstance(c, GradedPoly):
                        c = c.terms.get((), Fraction(0))
                    lin = lin + primed.gen_poly(names[s2] + "_p") * c
                shift_primed = expr - lin
                # rewrite the shift in unprimed coordinates via known inverses
                shift = shift_primed.substitute(mapping, target=self.chart)
                shifted.append(self.chart.gen_poly(nm) - shift)
            for s2 in range(len(names)):
                acc = self.chart.zero()
                for t in range(len(names)):
                    acc = acc + shifted[t] * Fraction(inv[t][s2])
                mapping[names[s2] + "_p"] = acc
        return Substitution(self.chart, primed, mapping)


def _invert(m):
    from fractions import Fraction

    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        f = a[col][col]
        a[col] = [v / f for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                g = a[r][col]
                a[r] = [v - g * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _unprime(name):
    if name.endswith("'"):
        return name[:-1]
    if name.endswith("_p"):
        return name[:-2]
    return name


def transition_from_substitution(chart, sub):
    """Recover tensor data from a transition given as a substitution.

    Each monomial of an image must be multilinear over distinct blocks
    refining the target block; the base dependence becomes the tensor
    entry.
    """
    primed = sub.source
    blocks = blocks_of(chart)
    index_in_block = {}
    for dirs, names_ in blocks.items():
        for i, nm in enumerate(names_):
            index_in_block[nm + "_p"] = (dirs, i)
            index_in_block[nm + "'"] = (dirs, i)
    tensors = {dirs: {} for dirs in blocks}
    for dirs, names_ in blocks.items():
        for t, nm in enumerate(names_):
            img = sub.mapping[nm]
            for key, coeff in img.terms.items():
                factors = []
                base_key = []
                for i, e in key:
                    g = primed.gens[i]
                    if g.role == BASE:
                        base_key.append((i, e))
                        continue
                    if e != 1 or g.name not in index_in_block:
                        raise KernelError(
                            "image of %s is not multilinear in the blocks" % nm)
                    factors.append(index_in_block[g.name])
                part = tuple(sorted(f[0] for f in factors))
                if len(set(part)) != len(part) or tuple(
                        sorted(sum(part, ()))) != dirs:
                    raise KernelError(
                        "image of %s mixes blocks outside a partition" % nm)
                idx = tuple(f[1] for f in sorted(factors)) + (t,)
                basep = GradedPoly(primed, {tuple(base_key): coeff}).rename(
                    chart, {g.name: _unprime(g.name)
                            for g in primed.gens if g.role == BASE})
                store = tensors[dirs].setdefault(part, {})
                store[idx] = store.get(idx, chart.zero()) + basep
    return MultiTransition(chart, tensors)


def validate_transition(t):
    """Weight preservation plus exact composition with the inverse."""
    v = Verdict()
    sub = t.substitution()
    primed = sub.source
    for g in t.chart.gens:
        img = sub.mapping[g.name]
        if not img:
            v.add("degenerate:%s" % g.name, t.chart.one().rename(primed))
            continue
        w = img.weight()
        if w != t.chart.weight(t.chart.index(g.name)):
            v.add("weight:%s" % g.name, img)
    if not v.passed:
        return v
    try:
        inv = t.inverse_substitution()
    except KernelError:
        v.add("singular", t.chart.one())
        return v
    for g in t.chart.gens:
        r = inv.pull(sub.mapping[g.name]) - t.chart.gen_poly(g.name)
        v.add("compose:%s" % g.name, r)
    for g in primed.gens:
        r = sub.pull(inv.mapping[g.name]) - primed.gen_poly(g.name)
        v.add("compose':%s" % g.name, r)
    return v


class MultiStructure:
    """n odd fields of unit weights on a multi chart."""

    def __init__(self, chart, fields):
        if len(fields) != chart.ndirs:
            raise KernelError("expected %d fields" % chart.ndirs)
        for r, Q in enumerate(fields, start=1):
            if Q.chart != chart:
                raise KernelError("field %d on the wrong chart" % r)
            if Q.parity != 1:
                raise KernelError("field %d must be odd" % r)
            if Q.coeffs:
                w = Q.weight()
                want = tuple(1 if s == r else 0 for s in range(1, chart.ndirs + 1))
                if w != want:
                    raise KernelError("field %d must have weight %s" % (r, want))
        self.chart = chart
        self.fields = list(fields)


def check_nfold(structure):
    """All pairwise commutators vanish, the diagonal included."""
    v = Verdict()
    fs = structure.fields
    for r in range(len(fs)):
        for s in range(r, len(fs)):
            c = commutator(fs[r], fs[s])
            for name, poly in c.items():
                v.add("(%d,%d,%s)" % (r + 1, s + 1, name), poly)
    return v


def partial_reverse_multifold(chart, r):
    """Flip the parity of every block containing direction r.

    Fields of weight 0 in the direction transport along this operation
    through ``reverse_field``; the direction's own structure field has
    weight 1 there and does not admit the reversal.
    """
    return reverse_chart(chart, r)


def order_exchange_flip(chart, r, s):
    """The natural sign identifying the two orders of two reversals:
    -1 on blocks containing both directions, identity elsewhere."""
    mapping = {}
    for g in chart.gens:
        if r in g.dirs and s in g.dirs:
            mapping[g.name] = -chart.gen_poly(g.name)
    return Substitution(chart, chart, mapping)


def face(chart, keep_dirs):
    """Restrict to the face spanned by a subset of directions.

    Blocks outside the subset are zeroed; surviving directions are
    renumbered in increasing order.
    """
    keep = tuple(sorted(keep_dirs))
    renum = {r: i + 1 for i, r in enumerate(keep)}
    gens = []
    killed = []
    for g in chart.gens:
        if g.role == BASE:
            gens.append(g)
        elif set(g.dirs) <= set(keep):
            dirs = tuple(renum[r] for r in g.dirs)
            gens.append(Generator(g.name, g.parity, block_role(dirs), dirs))
        else:
            killed.append(g.name)
    sub = Chart.build(len(keep), gens, label=chart.label + "|face")
    restriction = Substitution(sub, chart, {nm: sub.zero() for nm in killed})
    return sub, restriction


def face_structure(structure, keep_dirs):
    """Restrict a passing structure to a face; fields are tangent to it."""
    keep = tuple(sorted(keep_dirs))
    sub, restriction = face(structure.chart, keep)
    fields = []
    for r in keep:
        Q = structure.fields[r - 1]
        coeffs = {}
        for name, c in Q.items():
            if sub.has(name):
                coeffs[name] = restriction.pull(c)
        fields.append(Derivation(sub, coeffs, parity=1))
    return MultiStructure(sub, fields)


def product_structure(structures):
    """Disjoint union of one-direction structures on a joint chart."""
    base_names = []
    blocks = {}
    for k, s in enumerate(structures, start=1):
        for nm in s.chart.base_names():
            if nm not in base_names:
                base_names.append(nm)
        for g in s.chart.gens:
            if g.role != BASE:
                blocks.setdefault((k,), []).append((g.name, g.parity))
    chart = multi_chart(len(structures), blocks, base_names, label="product")
    fields = []
    for k, s in enumerate(structures, start=1):
        Q = s.fields[0]
        coeffs = {name: c.rename(chart) for name, c in Q.items()}
        fields.append(Derivation(chart, coeffs, parity=1))
    return MultiStructure(chart, fields)
