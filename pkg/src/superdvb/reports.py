"""Report documents for checker runs: line-oriented text and JSON forms.

Reports are deterministic: residuals are sorted by label and timing is
null unless explicitly requested, so identical inputs produce identical
bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class TaskReport:
    task: str
    passed: bool
    residuals: list = field(default_factory=list)  # (label, polynomial string)
    notes: list = field(default_factory=list)
    timing_ms: float = None

    @staticmethod
    def from_verdict(task, verdict, timing_ms=None, notes=None):
        res = sorted((lab, str(poly)) for lab, poly in verdict.residuals)
        return TaskReport(task, verdict.passed, res, notes or [], timing_ms)


@dataclass
class ReportDocument:
    reports: list = field(default_factory=list)
    inconsistent: bool = False
    payload: str = None     # emitted structure file, for building commands

    def passed(self):
        return all(r.passed for r in self.reports)

    def exit_code(self):
        if self.inconsistent:
            return 3
        return 0 if self.passed() else 1

    def to_json(self):
        doc = {
            "reports": [
                {
                    "task": r.task,
                    "pass": r.passed,
                    "residuals": [
                        {"label": lab, "polynomial": poly} for lab, poly in r.residuals
                    ],
                    "notes": list(r.notes),
                    "timing_ms": r.timing_ms,
                }
                for r in self.reports
            ],
            "inconsistent": self.inconsistent,
        }
        if self.payload is not None:
            doc["payload"] = self.payload
        return doc

    def to_text(self):
        lines = []
        for r in self.reports:
            lines.append("task %s: %s" % (r.task, "PASS" if r.passed else "FAIL"))
            for lab, poly in r.residuals:
                lines.append("  residual %s: %s" % (lab, poly))
            for n in r.notes:
                lines.append("  note: %s" % n)
            if r.timing_ms is not None:
                lines.append("  timing_ms: %.3f" % r.timing_ms)
        if self.inconsistent:
            lines.append("INTERNAL INCONSISTENCY between equivalent checkers")
        if self.payload is not None:
            lines.append("")
            lines.append(self.payload)
        return "\n".join(lines) + "\n"

    def render(self, fmt):
        if fmt == "structured":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        return self.to_text()
