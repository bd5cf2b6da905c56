"""HTTP service exposing the checkers over structure-file sources.

Every endpoint is stateless: it takes the file text plus bindings and
returns the report document.  The CLI is a thin client of this layer and
calls the same handlers in process when no server is configured.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import runner
from .algebra import KernelError


class CheckRequest(BaseModel):
    source: str
    bindings: dict[str, str] = Field(default_factory=dict)
    timing: bool = False
    run_all: bool = False
    over: str = "A"
    direction: int = 1


class ResidualModel(BaseModel):
    label: str
    polynomial: str


class TaskReportModel(BaseModel):
    task: str
    passed: bool
    residuals: list[ResidualModel]
    notes: list[str]
    timing_ms: float | None = None


class ReportResponse(BaseModel):
    reports: list[TaskReportModel]
    inconsistent: bool = False
    exit_code: int
    payload: str | None = None


def _response(doc):
    return ReportResponse(
        reports=[
            TaskReportModel(
                task=r.task,
                passed=r.passed,
                residuals=[ResidualModel(label=lab, polynomial=poly)
                           for lab, poly in r.residuals],
                notes=list(r.notes),
                timing_ms=r.timing_ms,
            )
            for r in doc.reports
        ],
        inconsistent=doc.inconsistent,
        exit_code=doc.exit_code(),
        payload=doc.payload,
    )


def execute(command, req):
    """Run one command on a request model; shared by HTTP and the CLI."""
    handler = runner.COMMANDS.get(command)
    if handler is None:
        raise runner.InputError("unknown command %r" % command)
    sf = runner.parse_source(req.source)
    kwargs = {"timing": req.timing}
    if command == "check-double":
        kwargs["run_all"] = req.run_all
    elif command == "dualize":
        kwargs["over"] = req.over
    elif command == "reverse-parity":
        kwargs["direction"] = req.direction
    doc = handler(sf, req.bindings, **kwargs)
    return _response(doc)


def run_file_tasks(req):
    sf = runner.parse_source(req.source)
    return _response(runner.run_tasks(sf, timing=req.timing))


app = FastAPI(title="superdvb", description="graded symbolic verification service")


def _endpoint(command):
    def handle(req: CheckRequest) -> ReportResponse:
        try:
            return execute(command, req)
        except runner.InputError as e:
            raise HTTPException(status_code=422, detail=str(e)) from None
        except KernelError as e:
            raise HTTPException(status_code=422, detail=str(e)) from None

    handle.__name__ = "cmd_" + command.replace("-", "_")
    return handle


for _cmd in runner.COMMANDS:
    app.post("/" + _cmd, response_model=ReportResponse)(_endpoint(_cmd))


@app.post("/run", response_model=ReportResponse)
def run_tasks_endpoint(req: CheckRequest) -> ReportResponse:
    try:
        return run_file_tasks(req)
    except runner.InputError as e:
        raise HTTPException(status_code=422, detail=str(e)) from None
    except KernelError as e:
        raise HTTPException(status_code=422, detail=str(e)) from None


@app.get("/health")
def health():
    return {"status": "ok"}
