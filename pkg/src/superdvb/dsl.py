"""Input language for charts, transitions, fields and tasks.

A structure file declares exactly one chart, then any number of fields
(rows ``d/dgen <- expression``), optional transitions (rows
``gen <- expression in primed generators``) and task lines binding
checker names to declared fields.  Expressions use explicit ``*`` and
``^``, rational literals like ``3`` or ``-5/2``, and parentheses; the
written order of odd factors is taken literally and normalized with the
Koszul sign.

    chart 2
      base x
      fiber 1 odd xi1 xi2
      fiber 2 odd eta1
      core 1,2 even t1

    field Q1
      d/dx <- xi1 * (1 + x)

    task check-q2 field=Q1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    BASE,
    CORE,
    EVEN,
    FIBER,
    ODD,
    Chart,
    Generator,
    KernelError,
)
from .fields import Derivation, Substitution


class ParseError(KernelError):
    def __init__(self, message, line, col):
        super().__init__("%s (line %d, column %d)" % (message, line, col))
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str
    value: str
    line: int
    col: int


SYMBOLS = ("<-", "+", "-", "*", "^", "(", ")", "=", ",", "/")


def tokenize_expr(text, line, col0):
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        col = col0 + i
        if text.startswith("<-", i):
            toks.append(Token("arrow", "<-", line, col))
            i += 2
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], line, col))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            toks.append(Token("name", text[i:j], line, col))
            i = j
        elif c in "+-*^()/,=":
            toks.append(Token(c, c, line, col))
            i += 1
        else:
            raise ParseError("unexpected character %r" % c, line, col)
    toks.append(Token("end", "", line, col0 + len(text)))
    return toks


class ExprParser:
    """Recursive-descent parser for polynomial expressions."""

    def __init__(self, toks, chart, warn=None):
        self.toks = toks
        self.pos = 0
        self.chart = chart
        self.warn = warn

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        t = self.toks[self.pos]
        if kind and t.kind != kind:
            raise ParseError("expected %s, found %r" % (kind, t.value or "end of line"),
                             t.line, t.col)
        self.pos += 1
        return t

    def parse(self):
        p = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError("trailing input %r" % t.value, t.line, t.col)
        return p

    def expr(self):
        t = self.peek()
        neg = False
        if t.kind in ("+", "-"):
            self.take()
            neg = t.kind == "-"
        p = self.term()
        if neg:
            p = -p
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        factors = [self.factor()]
        while self.peek().kind == "*":
            self.take()
            factors.append(self.factor())
        out = self.chart.one()
        names_in_order = []
        for kind, val in factors:
            if kind == "gen":
                names_in_order.append(val)
        # surface sign-bearing reorderings of odd generators
        if self.warn is not None and len(names_in_order) > 1:
            par = [self.chart.generator(n).parity for n in names_in_order]
            idx = [self.chart.index(n) for n in names_in_order]
            odd_idx = [i for i, p in zip(idx, par) if p]
            if any(a >= b for a, b in zip(odd_idx, odd_idx[1:])):
                self.warn(names_in_order)
        for kind, val in factors:
            out = out * val if kind == "poly" else out * self.chart.gen_poly(val)
        return out

    def factor(self):
        base_kind, base = self.atom()
        if self.peek().kind == "^":
            t = self.take()
            e = self.take("int")
            n = int(e.value)
            p = base if base_kind == "poly" else self.chart.gen_poly(base)
            if n < 0:
                raise ParseError("negative exponent", t.line, t.col)
            return ("poly", p ** n)
        return (base_kind, base)

    def atom(self):
        t = self.take()
        if t.kind == "int":
            num = Fraction(int(t.value))
            if self.peek().kind == "/":
                self.take()
                den = self.take("int")
                if int(den.value) == 0:
                    raise ParseError("zero denominator", den.line, den.col)
                num = num / int(den.value)
            return ("poly", self.chart.const(num))
        if t.kind == "name":
            if not self.chart.has(t.value):
                raise ParseError("undeclared generator %r" % t.value, t.line, t.col)
            return ("gen", t.value)
        if t.kind == "(":
            p = self.expr()
            self.take(")")
            return ("poly", p)
        if t.kind == "-":
            kind, val = self.factor()
            p = val if kind == "poly" else self.chart.gen_poly(val)
            return ("poly", -p)
        raise ParseError("expected a term, found %r" % (t.value or "end of line"),
                         t.line, t.col)


def parse_expression(text, chart, line=1, col0=1, warn=None):
    return ExprParser(tokenize_expr(text, line, col0), chart, warn=warn).parse()


@dataclass
class TaskDecl:
    checker: str
    bindings: dict
    line: int


@dataclass
class StructureFile:
    chart: Chart
    fields: dict            # name -> Derivation
    transitions: dict       # name -> Substitution (primed -> unprimed pullback)
    tasks: list = field(default_factory=list)
    reorder_warnings: list = field(default_factory=list)


ROLES = {"base": BASE, "fiber": FIBER, "core": CORE}
PARITIES = {"even": EVEN, "odd": ODD}


def _strip_comment(line):
    out = []
    for ch in line:
        if ch == "#":
            break
        out.append(ch)
    return "".join(out).rstrip()


def parse(text):
    """Parse a structure file; raises ParseError with positions."""
    lines = text.splitlines()
    chart = None
    decls = []
    ndirs = None
    fields = {}
    transitions = {}
    tasks = []
    warnings = []
    mode = None
    current = None
    pending_field_rows = []

    def build_chart(lineno):
        nonlocal chart
        gens = []
        for role, dirs, parity, names, ln in decls:
            for nm in names:
                try:
                    gens.append(Generator(nm, parity, role, dirs))
                except KernelError as e:
                    raise ParseError(str(e), ln, 1) from None
        try:
            chart = Chart.build(ndirs, gens, label="input")
        except KernelError as e:
            raise ParseError(str(e), lineno, 1) from None

    def finish_field():
        nonlocal current, pending_field_rows
        if current is None:
            return
        name, ln = current
        coeffs = {}
        for gen, expr, lno, col in pending_field_rows:
            p = parse_expression(expr, chart, lno, col,
                                 warn=lambda ns, lno=lno: warnings.append((lno, ns)))
            if gen in coeffs:
                raise ParseError("duplicate row for d/d%s" % gen, lno, 1)
            coeffs[gen] = p
        try:
            fields[name] = Derivation(chart, coeffs)
        except KernelError as e:
            raise ParseError("field %s: %s" % (name, e), ln, 1) from None
        current = None
        pending_field_rows = []

    def finish_transition():
        nonlocal current, pending_field_rows
        if current is None:
            return
        name, ln = current
        primed = primed_chart(chart)
        mapping = {}
        for gen, expr, lno, col in pending_field_rows:
            p = parse_expression(expr, primed, lno, col)
            mapping[gen] = p
        try:
            transitions[name] = Substitution(primed, chart, mapping)
        except KernelError as e:
            raise ParseError("transition %s: %s" % (name, e), ln, 1) from None
        current = None
        pending_field_rows = []

    for lineno, raw in enumerate(lines, start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        words = line.split()
        head = words[0]
        if head == "chart":
            if chart is not None or decls:
                raise ParseError("only one chart per file", lineno, 1)
            if len(words) != 2 or not words[1].isdigit():
                raise ParseError("chart takes the number of directions", lineno, 1)
            ndirs = int(words[1])
            mode = "chart"
        elif head in ROLES and mode == "chart":
            role = ROLES[head]
            rest = words[1:]
            dirs = ()
            if role != BASE:
                if not rest:
                    raise ParseError("missing directions", lineno, 1)
                try:
                    dirs = tuple(sorted(int(d) for d in rest[0].split(",")))
                except ValueError:
                    raise ParseError("bad direction list %r" % rest[0], lineno, 1) from None
                rest = rest[1:]
            parity = EVEN
            if role != BASE:
                if not rest or rest[0] not in PARITIES:
                    raise ParseError("expected parity 'even' or 'odd'", lineno, 1)
                parity = PARITIES[rest[0]]
                rest = rest[1:]
            elif rest and rest[0] in PARITIES:
                if rest[0] == "odd":
                    raise ParseError("base generators are even", lineno, 1)
                rest = rest[1:]
            if not rest:
                raise ParseError("missing generator names", lineno, 1)
            decls.append((role, dirs, parity, rest, lineno))
        elif head == "field":
            if chart is None:
                build_chart(lineno)
            finish_field() if mode == "field" else finish_transition() if mode == "transition" else None
            if len(words) != 2:
                raise ParseError("field takes one name", lineno, 1)
            current = (words[1], lineno)
            mode = "field"
        elif head == "transition":
            if chart is None:
                build_chart(lineno)
            finish_field() if mode == "field" else finish_transition() if mode == "transition" else None
            if len(words) != 2:
                raise ParseError("transition takes one name", lineno, 1)
            current = (words[1], lineno)
            mode = "transition"
        elif head == "task":
            if chart is None:
                build_chart(lineno)
            finish_field() if mode == "field" else finish_transition() if mode == "transition" else None
            mode = "task"
            if len(words) < 2:
                raise ParseError("task takes a checker name", lineno, 1)
            bindings = {}
            for w in words[2:]:
                if "=" not in w:
                    raise ParseError("task bindings look like key=value", lineno, 1)
                k, v = w.split("=", 1)
                bindings[k] = v
            tasks.append(TaskDecl(words[1], bindings, lineno))
        elif "<-" in line and mode in ("field", "transition"):
            lhs, rhs = line.split("<-", 1)
            lhs = lhs.strip()
            if mode == "field":
                if not lhs.startswith("d/d"):
                    raise ParseError("field rows look like d/dgen <- expr", lineno, 1)
                gen = lhs[3:]
            else:
                gen = lhs
            if chart is None:
                build_chart(lineno)
            if not chart.has(gen):
                raise ParseError("undeclared generator %r" % gen, lineno, 1)
            col = raw.index("<-") + 3
            pending_field_rows.append((gen, rhs, lineno, col))
        else:
            raise ParseError("unrecognized line", lineno, 1)
    if chart is None:
        if ndirs is None:
            raise ParseError("missing chart declaration", len(lines) or 1, 1)
        build_chart(len(lines) or 1)
    if mode == "field":
        finish_field()
    elif mode == "transition":
        finish_transition()
    return StructureFile(chart, fields, transitions, tasks, warnings)


def primed_chart(chart):
    gens = [Generator(g.name + "'", g.parity, g.role, g.dirs) for g in chart.gens]
    return Chart.build(chart.ndirs, gens, label=chart.label + "'")


# --- canonical emission --------------------------------------------------------


def _decl_lines(chart):
    groups = {}
    order = []
    for g in chart.gens:
        key = (g.role, g.dirs, g.parity)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(g.name)
    out = []
    for role, dirs, parity in order:
        names = " ".join(groups[(role, dirs, parity)])
        if role == BASE:
            out.append("  base %s" % names)
        else:
            d = ",".join(str(r) for r in dirs)
            p = "odd" if parity else "even"
            out.append("  %s %s %s %s" % (role, d, p, names))
    return out


def emit(sf):
    """Canonical text for a structure file; parse(emit(sf)) == sf."""
    lines = ["chart %d" % sf.chart.ndirs]
    lines += _decl_lines(sf.chart)
    for name in sorted(sf.fields):
        lines.append("")
        lines.append("field %s" % name)
        for gen, c in sf.fields[name].items():
            lines.append("  d/d%s <- %s" % (gen, c))
    for name in sorted(sf.transitions):
        lines.append("")
        lines.append("transition %s" % name)
        sub = sf.transitions[name]
        for g in sf.chart.gens:
            img = sub.mapping[g.name]
            lines.append("  %s <- %s" % (g.name, img))
    for t in sf.tasks:
        lines.append("")
        binds = " ".join("%s=%s" % kv for kv in sorted(t.bindings.items()))
        lines.append(("task %s %s" % (t.checker, binds)).rstrip())
    return "\n".join(lines) + "\n"
