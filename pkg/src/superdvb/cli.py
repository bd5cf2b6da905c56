"""Command-line client for the verification service.

Runs in process by default; with --server it posts the same request to a
running instance.  Exit codes: 0 pass, 1 fail, 2 input error, 3 internal
inconsistency between equivalent checkers.
"""

from __future__ import annotations

import sys

import click

from . import runner, service
from .algebra import KernelError


def _read_source(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(2)


def _deliver(resp, out, fmt):
    from .reports import ReportDocument, TaskReport

    doc = ReportDocument(
        reports=[TaskReport(r.task, r.passed,
                            [(x.label, x.polynomial) for x in r.residuals],
                            list(r.notes), r.timing_ms)
                 for r in resp.reports],
        inconsistent=resp.inconsistent,
        payload=resp.payload,
    )
    text = doc.render(fmt)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)
    sys.exit(resp.exit_code)


def _post_remote(server, command, req):
    import httpx

    r = httpx.post(server.rstrip("/") + "/" + command, json=req.model_dump(),
                   timeout=120.0)
    if r.status_code == 422:
        detail = r.json().get("detail", "input error")
        click.echo("error: %s" % detail, err=True)
        sys.exit(2)
    r.raise_for_status()
    return service.ReportResponse(**r.json())


def _run(command, source, bindings, out, fmt, server, timing,
         warn_reorder=False, **extra):
    if warn_reorder:
        _emit_reorder_warnings(source)
    req = service.CheckRequest(source=source, bindings=dict(bindings),
                               timing=timing, **extra)
    if server:
        resp = _post_remote(server, command, req)
    else:
        try:
            resp = (service.run_file_tasks(req) if command == "run"
                    else service.execute(command, req))
        except runner.InputError as e:
            click.echo("error: %s" % e, err=True)
            sys.exit(2)
        except KernelError as e:
            click.echo("error: %s" % e, err=True)
            sys.exit(2)
    _deliver(resp, out, fmt)


def _parse_binds(binds):
    out = {}
    for b in binds:
        if "=" not in b:
            raise click.UsageError("bindings look like key=FieldName")
        k, v = b.split("=", 1)
        out[k] = v
    return out


def common_options(f):
    f = click.option("--out", default=None, help="write the report to a file")(f)
    f = click.option("--format", "fmt", type=click.Choice(["text", "structured"]),
                     default="text", show_default=True)(f)
    f = click.option("--server", default=None,
                     help="URL of a running service; default runs in process")(f)
    f = click.option("--timing", is_flag=True,
                     help="include timings (reports stop being byte-stable)")(f)
    f = click.option("--warn-reorder", is_flag=True,
                     help="warn on odd factors normalized with a Koszul sign")(f)
    f = click.option("--bind", "binds", multiple=True,
                     help="field binding key=FieldName (repeatable)")(f)
    f = click.argument("file")(f)
    return f


def _emit_reorder_warnings(source):
    try:
        sf = runner.parse_source(source)
    except KernelError:
        return
    for lineno, names in sf.reorder_warnings:
        click.echo("warning: line %d: odd factors %s reordered with a Koszul sign"
                   % (lineno, "*".join(names)), err=True)


@click.group()
def main():
    """Exact verification of double and multiple bracket structures."""


def _simple_command(name, help_text, **extra_opts):
    @main.command(name=name, help=help_text)
    @common_options
    def cmd(file, binds, out, fmt, server, timing, warn_reorder, **kw):
        _run(name, _read_source(file), _parse_binds(binds), out, fmt, server,
             timing, warn_reorder=warn_reorder, **kw)

    for deco in extra_opts.values():
        cmd = deco(cmd)
    return cmd


_simple_command("parse-check", "Validate a structure file and echo its canonical form.")
_simple_command("check-q2", "Check that a field is odd with vanishing square.")
_simple_command("derive-brackets", "Report the anchor and bracket tables of a field.")
_simple_command("check-commutativity", "Check that a bound pair of fields commutes.")
_simple_command("check-nfold", "Check pairwise commutativity of all bound fields.")
_simple_command("check-transition", "Validate a transition block exactly.")
_simple_command("neighbors", "Emit the twelve-node neighbor graph of a double chart.")
_simple_command("build-double", "Lift a dual pair to its cotangent double file.")


@main.command(name="reverse-parity", help="Reverse a field in one direction.")
@common_options
@click.option("--direction", type=int, default=1, show_default=True)
def reverse_parity_cmd(file, binds, out, fmt, server, timing, warn_reorder, direction):
    _run("reverse-parity", _read_source(file), _parse_binds(binds), out, fmt,
         server, timing, warn_reorder=warn_reorder, direction=direction)


@main.command(name="dualize", help="Transpose a structure field onto the antidual.")
@common_options
@click.option("--over", type=click.Choice(["A", "B", "a", "b"]), default="A",
              show_default=True)
def dualize_cmd(file, binds, out, fmt, server, timing, warn_reorder, over):
    _run("dualize", _read_source(file), _parse_binds(binds), out, fmt, server,
         timing, warn_reorder=warn_reorder, over=over)


@main.command(name="check-double", help="Run the compatibility checkers on a pair.")
@common_options
@click.option("--all", "run_all", is_flag=True,
              help="run every condition and compare the equivalent checkers")
def check_double_cmd(file, binds, out, fmt, server, timing, warn_reorder, run_all):
    _run("check-double", _read_source(file), _parse_binds(binds), out, fmt,
         server, timing, warn_reorder=warn_reorder, run_all=run_all)


@main.command(name="run", help="Execute the task lines of a structure file.")
@common_options
def run_cmd(file, binds, out, fmt, server, timing, warn_reorder):
    _run("run", _read_source(file), _parse_binds(binds), out, fmt, server, timing,
         warn_reorder=warn_reorder)


@main.command(name="serve", help="Start the HTTP service.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8722, show_default=True)
def serve_cmd(host, port):
    import uvicorn

    uvicorn.run("superdvb.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
