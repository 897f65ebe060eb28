"""Command-line client for the service.

Every subcommand reads JSON files (or - for stdin), posts one request to
the service, prints the response envelope, and exits 0 on success, 1 on
usage errors, 2 on domain rejections, 3 on numeric failures.  By default
the service app runs in process; --server (or WTRANS_SERVER) points the
client at an external instance instead.
"""

from __future__ import annotations

import asyncio
import json
import sys
from pathlib import Path

import click
import httpx

from .service import create_app

_EXIT_BY_STATUS = {400: 1, 422: 1, 409: 2, 500: 3}


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        _emit({"status": "error", "code": "usage",
               "message": f"{path}: {exc}"}, pretty=False, exit_code=1)


def _emit(body: dict, pretty: bool, exit_code: int):
    click.echo(json.dumps(body, indent=2 if pretty else None))
    sys.exit(exit_code)


def _post(server: str | None, path: str, body: dict) -> httpx.Response:
    if server:
        try:
            with httpx.Client(base_url=server, timeout=600.0) as client:
                return client.post(path, json=body)
        except httpx.HTTPError as exc:
            _emit({"status": "error", "code": "connection",
                   "message": f"cannot reach {server}: {exc}"},
                  pretty=False, exit_code=1)

    async def _go():
        transport = httpx.ASGITransport(app=create_app(),
                                        raise_app_exceptions=False)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://wtrans.internal",
                                     timeout=None) as client:
            return await client.post(path, json=body)

    return asyncio.run(_go())


def _finish(resp: httpx.Response, pretty: bool):
    try:
        body = resp.json()
    except ValueError:
        body = {"status": "error", "code": "internal",
                "message": resp.text.strip() or "internal server error"}
    if resp.status_code == 422 and body.get("status") != "error":
        body = {"status": "error", "code": "usage",
                "message": json.dumps(body.get("detail"))}
    _emit(body, pretty, _EXIT_BY_STATUS.get(resp.status_code,
                                            0 if resp.status_code < 400 else 3))


def _common(fn):
    fn = click.option("--server", default=None, envvar="WTRANS_SERVER",
                      help="Base URL of an external service instance; "
                           "default runs the app in process.")(fn)
    fn = click.option("--json", "json_", is_flag=True, default=True,
                      help="Compact machine-readable output (default).")(fn)
    fn = click.option("--pretty", is_flag=True,
                      help="Indent the output envelope.")(fn)
    return fn


@click.group()
def main():
    """Transformation calculus for W-type multipartite entangled states."""


@main.command()
@click.argument("state_file")
@click.option("--tol", type=float, default=None,
              help="Fidelity tolerance for extraction (default 1e-8).")
@_common
def param(state_file, tol, server, json_, pretty):
    """Extract the weight vector and aligning local bases of a state."""
    body = {"state": _load_json(state_file), "tol": tol}
    _finish(_post(server, "/param", body), pretty)


@main.command()
@click.argument("x_file")
@click.argument("y_file")
@click.option("--tol", type=float, default=None,
              help="Equivalence tolerance (default 1e-10).")
@_common
def equiv(x_file, y_file, tol, server, json_, pretty):
    """Decide local-unitary equivalence of two weight vectors."""
    body = {"x": _load_json(x_file), "y": _load_json(y_file), "tol": tol}
    _finish(_post(server, "/equiv", body), pretty)


@main.command()
@click.argument("x_file")
@click.argument("y_file")
@click.option("--emit-protocol", is_flag=True,
              help="Also compile the deterministic protocol (domain "
                   "rejection when the target is unreachable).")
@_common
def convert(x_file, y_file, emit_protocol, server, json_, pretty):
    """Decide deterministic convertibility between weight vectors."""
    body = {"x": _load_json(x_file), "y": _load_json(y_file),
            "emit_protocol": emit_protocol}
    _finish(_post(server, "/convert", body), pretty)


@main.command()
@click.argument("x_file")
@click.argument("ensemble_file")
@click.option("--tol", type=float, default=None,
              help="Validation tolerance (default 1e-10).")
@_common
def synth(x_file, ensemble_file, tol, server, json_, pretty):
    """Validate an outcome ensemble and synthesize its operators."""
    body = {"x": _load_json(x_file), "ensemble": _load_json(ensemble_file),
            "tol": tol}
    _finish(_post(server, "/synth", body), pretty)


@main.command()
@click.argument("x_file")
@click.argument("y_file")
@click.option("--emit-protocol", is_flag=True,
              help="Require the distillation protocol (domain rejection "
                   "off the zero-weight face); default emits it exactly "
                   "when the source is on the face.")
@_common
def distill(x_file, y_file, emit_protocol, server, json_, pretty):
    """Distillation probability bound, plus the protocol when achievable."""
    body = {"x": _load_json(x_file), "y": _load_json(y_file),
            "emit_protocol": True if emit_protocol else None}
    _finish(_post(server, "/distill", body), pretty)


@main.command()
@click.argument("state_file")
@click.argument("protocol_file")
@click.option("--mode", type=click.Choice(["exhaustive", "sampled"]),
              default="exhaustive", show_default=True)
@click.option("--trials", type=int, default=10000, show_default=True,
              help="Trajectories drawn in sampled mode.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Base seed; trial i uses the stream (seed, i).")
@_common
def simulate(state_file, protocol_file, mode, trials, seed, server, json_, pretty):
    """Run a protocol against the exact state-vector oracle."""
    body = {"state": _load_json(state_file),
            "protocol": _load_json(protocol_file),
            "mode": mode, "trials": trials, "seed": seed}
    _finish(_post(server, "/simulate", body), pretty)


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@_common
def selftest(seed, server, json_, pretty):
    """Run the condensed verification pass across every layer."""
    resp = _post(server, "/selftest", {"seed": seed})
    try:
        ok = bool(resp.json().get("payload", {}).get("ok"))
    except ValueError:
        ok = False
    if resp.status_code < 400 and not ok:
        try:
            body = resp.json()
        except ValueError:
            body = {"status": "error", "code": "internal", "message": resp.text}
        _emit(body, pretty, 3)
    _finish(resp, pretty)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
