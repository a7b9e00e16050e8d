"""Stateless JSON-over-HTTP service and static UI hosting.

Endpoints mirror the CLI one-to-one through the shared dispatch layer:

    GET  /api/health
    POST /api/dist /api/exact /api/compare /api/bounds
         /api/capacity /api/samplesize /api/figdata

Request bodies are envelopes {mode, params, plan, options}; responses carry
the input echo and the library version.  Handlers call only pure functions,
so the server is stateless and thread-per-request is safe; a global
semaphore bounds concurrent heavy computations.  Long-running work (the
sweep) is CLI-only, and per-request caps (n <= LABELBUDGET_MAX_N, figure
grids <= 10^4 rows) turn oversized requests into 413s instead of stalls.
"""

from __future__ import annotations

import json
import mimetypes
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .api import ComputeLimits, EnvelopeError, dispatch, parse_envelope
from .errors import ResourceLimitError, ValidationError
from .serialize import to_json

__all__ = ["make_server", "serve", "DEFAULT_MAX_N", "DEFAULT_MAX_GRID"]

DEFAULT_MAX_N = 100_000
DEFAULT_MAX_GRID = 10_000
MAX_BODY_BYTES = 1_000_000

_SERVICE_ENDPOINTS = ("dist", "exact", "compare", "bounds", "capacity",
                      "samplesize", "figdata")


def _limits_from_env() -> ComputeLimits:
    raw = os.environ.get("LABELBUDGET_MAX_N")
    max_n = int(raw) if raw else DEFAULT_MAX_N
    return ComputeLimits(max_n=max_n, max_grid=DEFAULT_MAX_GRID)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    # Injected by make_server:
    limits: ComputeLimits
    static_dir: Path | None
    compute_gate: threading.BoundedSemaphore
    quiet: bool

    def log_message(self, fmt, *args):  # noqa: D102 - silence default stderr spam
        if not self.quiet:
            super().log_message(fmt, *args)

    def _send(self, status: int, body: str,
              content_type: str = "application/json") -> None:
        payload = body.encode()
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _send_error_json(self, status: int, error) -> None:
        self._send(status, to_json({"error": error}) + "\n")

    def do_GET(self):  # noqa: N802 - http.server API
        path = self.path.split("?", 1)[0]
        if path == "/api/health":
            self._send(200, to_json({"status": "ok"}) + "\n")
            return
        if path.startswith("/api/"):
            self._send_error_json(404, f"unknown endpoint {path}")
            return
        self._serve_static(path)

    def do_POST(self):  # noqa: N802 - http.server API
        path = self.path.split("?", 1)[0]
        if not path.startswith("/api/"):
            self._send_error_json(404, f"unknown endpoint {path}")
            return
        endpoint = path[len("/api/"):]
        if endpoint not in _SERVICE_ENDPOINTS:
            self._send_error_json(404, f"unknown endpoint {path}")
            return
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY_BYTES:
            self._send_error_json(413, "request body too large")
            return
        raw = self.rfile.read(length) if length else b""
        try:
            body = json.loads(raw.decode() or "{}")
        except ValueError:
            self._send_error_json(400, {"body": "invalid JSON"})
            return
        try:
            envelope = parse_envelope(body)
        except EnvelopeError as exc:
            self._send_error_json(400, exc.fields)
            return
        try:
            with self.compute_gate:
                result = dispatch(endpoint, envelope, self.limits)
        except ResourceLimitError as exc:
            self._send_error_json(413, str(exc))
            return
        except ValidationError as exc:
            self._send_error_json(422, str(exc))
            return
        self._send(200, to_json(result) + "\n")

    def _serve_static(self, path: str) -> None:
        if self.static_dir is None:
            self._send(404, "no static bundle configured\n", "text/plain")
            return
        rel = path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        root = self.static_dir.resolve()
        if root not in target.parents and target != root:
            self._send(404, "not found\n", "text/plain")
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send(404, "not found\n", "text/plain")
            return
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def make_server(host: str = "127.0.0.1", port: int = 0, *,
                static_dir: str | None = None,
                limits: ComputeLimits | None = None,
                heavy_slots: int = 4,
                quiet: bool = False) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server; port 0 picks a free port."""
    handler = type("BoundHandler", (_Handler,), {
        "limits": limits if limits is not None else _limits_from_env(),
        "static_dir": Path(static_dir).resolve() if static_dir else None,
        "compute_gate": threading.BoundedSemaphore(heavy_slots),
        "quiet": quiet,
    })
    return ThreadingHTTPServer((host, port), handler)


def serve(host: str = "127.0.0.1", port: int = 8100,
          static_dir: str | None = None) -> None:
    """Run the service until interrupted; prints the bound address."""
    server = make_server(host, port, static_dir=static_dir)
    bound_host, bound_port = server.server_address[:2]
    print(f"labelbudget service listening on http://{bound_host}:{bound_port}",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
