"""Command implementations shared by the service endpoints and the CLI.

Every command takes parsed structure-file content plus bindings and
returns a ReportDocument; timing is measured only on request to keep
reports byte-identical across runs.
"""

from __future__ import annotations

import time

from .algebra import KernelError
from .algebroid import AlgebroidData
from .doubles import (
    DoubleData,
    check_commutativity,
    dualize,
    enumerate_neighbors,
    full_check,
    node_name,
)
from .drinfeld import Bialgebroid, build_cotangent_double
from .dsl import StructureFile, TaskDecl, emit, parse
from .fields import Verdict, homological_residuals, reverse_field
from .multifold import (
    MultiStructure,
    check_nfold,
    transition_from_substitution,
    validate_transition,
)
from .reports import ReportDocument, TaskReport


class InputError(KernelError):
    """Bad file content or bindings; maps to exit code 2."""


def _field(sf, bindings, key, default=None):
    name = bindings.get(key, default)
    if name is None:
        if len(sf.fields) == 1:
            return next(iter(sf.fields.values()))
        raise InputError("binding %r required (fields: %s)" % (
            key, ", ".join(sorted(sf.fields)) or "none"))
    if name not in sf.fields:
        raise InputError("unknown field %r" % name)
    return sf.fields[name]


def _timer(enabled):
    start = time.perf_counter()

    def done():
        return (time.perf_counter() - start) * 1000.0 if enabled else None

    return done


def parse_source(source):
    try:
        return parse(source)
    except KernelError as e:
        raise InputError(str(e)) from None


def run_parse_check(sf, bindings=None, timing=False):
    done = _timer(timing)
    doc = ReportDocument()
    notes = ["chart with %d generators" % len(sf.chart.gens),
             "fields: %s" % (", ".join(sorted(sf.fields)) or "none")]
    for lineno, names in sf.reorder_warnings:
        notes.append("line %d: odd factors reordered with a Koszul sign (%s)"
                     % (lineno, "*".join(names)))
    doc.reports.append(TaskReport("parse-check", True, [], notes, done()))
    doc.payload = emit(sf)
    return doc


def run_check_q2(sf, bindings=None, timing=False):
    done = _timer(timing)
    Q = _field(sf, bindings or {}, "field")
    v = homological_residuals(Q)
    doc = ReportDocument()
    doc.reports.append(TaskReport.from_verdict("check-q2", v, done()))
    return doc


def run_derive_brackets(sf, bindings=None, timing=False):
    done = _timer(timing)
    Q = _field(sf, bindings or {}, "field")
    try:
        data = AlgebroidData.from_field(Q)
    except KernelError as e:
        raise InputError(str(e)) from None
    res = []
    for i in data.fibers:
        for a in data.base:
            c = data.anchor_comp(i, a)
            if c:
                res.append(("anchor[%s,%s]" % (i, a), str(c)))
        for j in data.fibers:
            for k, c in sorted(data.bracket.get((i, j), {}).items()):
                res.append(("bracket[%s,%s->%s]" % (i, j, k), str(c)))
    doc = ReportDocument()
    doc.reports.append(TaskReport("derive-brackets", True, sorted(res), [], done()))
    return doc


def run_reverse_parity(sf, bindings=None, timing=False, direction=1):
    done = _timer(timing)
    Q = _field(sf, bindings or {}, "field")
    try:
        out = reverse_field(Q, direction)
    except KernelError as e:
        raise InputError(str(e)) from None
    new_sf = StructureFile(out.chart, {"Q_reversed": out}, {}, [])
    doc = ReportDocument()
    doc.reports.append(TaskReport("reverse-parity", True, [],
                                  ["direction %d" % direction], done()))
    doc.payload = emit(new_sf)
    return doc


def run_dualize(sf, bindings=None, timing=False, over="A"):
    done = _timer(timing)
    Q = _field(sf, bindings or {}, "field")
    direction = 1 if over.upper() == "A" else 2
    try:
        out = dualize(Q, direction)
    except KernelError as e:
        raise InputError(str(e)) from None
    new_sf = StructureFile(out.chart, {"Q_dual": out}, {}, [])
    doc = ReportDocument()
    doc.reports.append(TaskReport("dualize", True, [], ["over %s" % over.upper()], done()))
    doc.payload = emit(new_sf)
    return doc


def run_check_commutativity(sf, bindings=None, timing=False):
    done = _timer(timing)
    b = bindings or {}
    q1 = _field(sf, b, "q1")
    q2 = _field(sf, b, "q2")
    doc = ReportDocument()
    try:
        v = check_commutativity(q1, q2)
    except KernelError as e:
        raise InputError(str(e)) from None
    doc.reports.append(TaskReport.from_verdict("check-commutativity", v, done()))
    return doc


def run_check_double(sf, bindings=None, timing=False, run_all=False):
    """Check a reversed-chart pair; with run_all, every checker plus the
    cross-checker consistency comparison."""
    done = _timer(timing)
    b = bindings or {}
    q1 = _field(sf, b, "q1")
    q2 = _field(sf, b, "q2")
    doc = ReportDocument()
    try:
        data = DoubleData.from_pair(q1, q2)
    except KernelError as e:
        raise InputError(str(e)) from None
    if not run_all:
        v = Verdict().merged(homological_residuals(q1), homological_residuals(q2),
                             check_commutativity(q1, q2))
        doc.reports.append(TaskReport.from_verdict("check-double", v, done()))
        return doc
    out = full_check(data)
    for key in ("homological_h", "homological_v", "condition_I", "condition_II",
                "condition_III", "homological_1", "homological_2", "commutativity"):
        doc.reports.append(TaskReport.from_verdict(key.replace("_", "-"), out[key]))
    doc.reports.append(TaskReport(
        "equivalence", out["consistent"], [],
        ["conditions=%s antialgebroid=%s" % (out["conditions"], out["antialgebroid"])],
        done()))
    doc.inconsistent = not out["consistent"]
    return doc


def run_check_nfold(sf, bindings=None, timing=False):
    done = _timer(timing)
    b = bindings or {}
    names = b.get("fields")
    if names:
        try:
            fields = [sf.fields[n] for n in names.split(",")]
        except KeyError as e:
            raise InputError("unknown field %s" % e) from None
    else:
        fields = [sf.fields[n] for n in sorted(sf.fields)]
    try:
        s = MultiStructure(sf.chart, fields)
        v = check_nfold(s)
    except KernelError as e:
        raise InputError(str(e)) from None
    doc = ReportDocument()
    doc.reports.append(TaskReport.from_verdict("check-nfold", v, done()))
    return doc


def run_check_transition(sf, bindings=None, timing=False):
    done = _timer(timing)
    b = bindings or {}
    name = b.get("transition")
    if name is None:
        if len(sf.transitions) != 1:
            raise InputError("binding 'transition' required")
        name = next(iter(sf.transitions))
    if name not in sf.transitions:
        raise InputError("unknown transition %r" % name)
    sub = sf.transitions[name]
    try:
        t = transition_from_substitution(sf.chart, sub)
        v = validate_transition(t)
    except KernelError as e:
        raise InputError(str(e)) from None
    doc = ReportDocument()
    doc.reports.append(TaskReport.from_verdict("check-transition", v, done()))
    return doc


def run_build_double(sf, bindings=None, timing=False):
    done = _timer(timing)
    b = bindings or {}
    q_e = _field(sf, b, "e")
    q_dual = _field(sf, b, "estar")
    base_names = sf.chart.base_names()
    fiber_specs = [(g.name, (g.parity + 1) % 2)
                   for g in q_e.chart.gens if g.role == "fiber" and g.dirs == (1,)]
    try:
        bi = Bialgebroid(base_names, fiber_specs, q_e, q_dual)
        chart, q1, q2, v = build_cotangent_double(bi)
    except KernelError as e:
        raise InputError(str(e)) from None
    new_sf = StructureFile(chart, {"Q1": q1, "Q2": q2}, {},
                           [TaskDecl("check-double", {"q1": "Q1", "q2": "Q2"}, 0)])
    doc = ReportDocument()
    doc.reports.append(TaskReport.from_verdict("build-double", v, done()))
    doc.payload = emit(new_sf)
    return doc


def run_neighbors(sf=None, bindings=None, timing=False):
    done = _timer(timing)
    g = enumerate_neighbors(sf.chart if sf is not None else None)
    res = []
    for a, b, op in sorted(g.edges, key=lambda e: (node_name(e[0]), node_name(e[1]), e[2])):
        res.append(("edge", "%s --%s-- %s" % (node_name(a), op, node_name(b))))
    notes = ["nodes: %d, valence: %s" % (len(g.nodes), sorted(set(g.valence().values())))]
    for n in sorted(g.node_names()):
        ann = g.annotations.get(n)
        notes.append("%s: %s" % (n, ann or "structure on sections"))
    doc = ReportDocument()
    doc.reports.append(TaskReport("neighbors", True, res, notes, done()))
    return doc


COMMANDS = {
    "parse-check": run_parse_check,
    "check-q2": run_check_q2,
    "derive-brackets": run_derive_brackets,
    "reverse-parity": run_reverse_parity,
    "dualize": run_dualize,
    "check-commutativity": run_check_commutativity,
    "check-double": run_check_double,
    "check-nfold": run_check_nfold,
    "check-transition": run_check_transition,
    "build-double": run_build_double,
    "neighbors": run_neighbors,
}


def run_tasks(sf, timing=False):
    """Execute the task lines of a structure file, in order."""
    doc = ReportDocument()
    for t in sf.tasks:
        cmd = COMMANDS.get(t.checker)
        if cmd is None:
            raise InputError("unknown task %r" % t.checker)
        kwargs = {}
        if t.checker == "check-double" and t.bindings.get("all") in ("1", "true", "yes"):
            kwargs["run_all"] = True
        if t.checker == "dualize" and "over" in t.bindings:
            kwargs["over"] = t.bindings["over"]
        if t.checker == "reverse-parity" and "direction" in t.bindings:
            kwargs["direction"] = int(t.bindings["direction"])
        sub = cmd(sf, t.bindings, timing=timing, **kwargs)
        doc.reports.extend(sub.reports)
        doc.inconsistent = doc.inconsistent or sub.inconsistent
        if sub.payload:
            doc.payload = sub.payload
    return doc
