"""Command-line front end.

Every subcommand is a thin client over the HTTP service: by default the app
runs in-process behind a synchronous ASGI bridge, and --server points the same
client at a remote instance instead.  No knot arithmetic happens here; this
module only shapes requests and renders responses.

Output formats:
  text     human-readable; single-expression mode may span several lines
  records  one line per result, tab-separated key=value fields in a fixed
           order, booleans as true/false, absent values as "-"

Exit codes: 0 success, 1 domain error (bad expression, no such genus, ...),
2 usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import re
import sys
from typing import List, Optional

import httpx

from . import __version__

EXPR_COMMANDS = ("parse", "canon", "det", "components", "alex", "genus", "classify")


class _DomainError(Exception):
    """Service answered 400; carries the detail message."""


class _AsgiBridge(httpx.BaseTransport):
    """Synchronous transport running the ASGI app on a private event loop."""

    def __init__(self, app):
        self._transport = httpx.ASGITransport(app=app)

    def handle_request(self, request):
        body = request.read()
        headers = [(k, v) for k, v in request.headers.raw if k.lower() != b"content-length"]
        inner = httpx.Request(request.method, request.url, headers=headers, content=body)

        async def _go():
            response = await self._transport.handle_async_request(inner)
            payload = await response.aread()
            await response.aclose()
            return response, payload

        response, payload = asyncio.run(_go())
        return httpx.Response(response.status_code, headers=response.headers,
                              content=payload, request=request)


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    from .service import create_app

    return httpx.Client(transport=_AsgiBridge(create_app()), base_url="http://montyknot.local",
                        timeout=None)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code == 400:
        try:
            raise _DomainError(response.json()["detail"])
        except (KeyError, ValueError):
            raise _DomainError(response.text)
    response.raise_for_status()
    return response.json()


def _b(value) -> str:
    if value is None:
        return "-"
    return "true" if value else "false"


def _opt(value) -> str:
    return "-" if value is None else str(value)


def _params(seq) -> str:
    seq = tuple(seq or ())
    return ",".join(str(x) for x in seq) if seq else "-"


def _records(pairs) -> str:
    return "\t".join("%s=%s" % (k, v) for k, v in pairs)


def _family_fields(fam: dict):
    params = fam.get("d") or fam.get("m") or ([fam["n"]] if fam.get("n") is not None else None)
    return fam["variant"], _params(params), fam["mirrored"]


def _family_text(fam: dict) -> str:
    variant, params, mirrored = _family_fields(fam)
    if variant == "NotInFamily":
        reason = fam.get("reason") or ""
        return "NotInFamily" + (" (%s)" % reason if reason else "")
    label = variant if params == "-" else "%s(%s)" % (variant, params)
    return label + (" mirrored" if mirrored else "")


# ---------------------------------------------------------------------------
# per-subcommand rendering: (json, expr) -> records line / text lines


def _render_parse(data, expr, fmt):
    if fmt == "records":
        return [_records([("expr", expr), ("kind", data["kind"]), ("printed", data["printed"])])]
    return ["%s %s" % (data["kind"], data["printed"])]


def _render_canon(data, expr, fmt):
    if fmt == "records":
        return [_records([("expr", expr), ("montesinos", data["montesinos"]),
                          ("type", data["type"]), ("r", data["r"])])]
    return ["%s (%s, r=%d)" % (data["montesinos"], data["type"], data["r"])]


def _render_det(data, expr, fmt):
    if fmt == "records":
        return [_records([("expr", expr), ("det", data["det"])])]
    return [str(data["det"])]


def _render_components(data, expr, fmt):
    if fmt == "records":
        return [_records([("expr", expr), ("components", data["components"]),
                          ("crossings", data["crossings"]), ("arcs", data["arcs"]),
                          ("free_circles", data["free_circles"])])]
    return [str(data["components"])]


def _render_alex(data, expr, fmt):
    if fmt == "records":
        return [_records([("expr", expr), ("alexander", data["alexander"]),
                          ("span", data["span"]),
                          ("det_at_minus_one", data["det_at_minus_one"]),
                          ("lspace_form", _b(data["lspace_form"]))])]
    return [data["alexander"],
            "span: %d" % data["span"],
            "lspace_form: %s" % _b(data["lspace_form"])]


def _render_genus(data, expr, fmt):
    variant, params, mirrored = _family_fields(data["family"])
    if fmt == "records":
        return [_records([("expr", expr), ("genus", data["genus"]), ("family", variant),
                          ("params", params), ("mirrored", _b(mirrored))])]
    return [str(data["genus"]), "family: %s" % _family_text(data["family"])]


def _render_classify(data, expr, fmt, show_stages=False):
    variant, params, mirrored = _family_fields(data["family"])
    stages = " -> ".join(data["verdict_basis"])
    if fmt == "records":
        return [_records([
            ("expr", expr), ("canonical", data["canonical"]), ("is_knot", _b(data["is_knot"])),
            ("family", variant), ("params", params), ("mirrored", _b(mirrored)),
            ("det", data["det"]), ("genus", _opt(data["genus"])),
            ("det_genus_pass", _b(data["det_genus_pass"])),
            ("alexander", _opt(data["alexander"])),
            ("alex_form_pass", _b(data["alex_form_pass"])),
            ("verdict", data["verdict"]),
            ("verdict_basis", ",".join(data["verdict_basis"])),
        ])]
    lines = [
        "input:      %s" % data["input"],
        "canonical:  %s" % data["canonical"],
        "knot:       %s" % ("yes" if data["is_knot"] else "no"),
        "family:     %s" % _family_text(data["family"]),
        "det:        %d" % data["det"],
        "genus:      %s" % _opt(data["genus"]),
        "det<=2g+1:  %s" % _stage_flag(data["det_genus_pass"]),
        "alexander:  %s" % _opt(data["alexander"]),
        "alex form:  %s" % _stage_flag(data["alex_form_pass"]),
    ]
    if show_stages:
        lines.append("stages:")
        lines.extend("  - %s" % line for line in _stage_notes(data))
    else:
        lines.append("stages:     %s" % stages)
    lines.append("verdict:    %s" % data["verdict"])
    return lines


def _stage_flag(value) -> str:
    if value is None:
        return "-"
    return "pass" if value else "FAIL"


def _stage_notes(data) -> List[str]:
    notes = []
    for tag in data["verdict_basis"]:
        if tag == "components":
            notes.append("components: %s" % ("knot" if data["is_knot"] else
                                             "link, not a knot"))
        elif tag in ("two_bridge", "family"):
            notes.append("%s: %s" % (tag, _family_text(data["family"])))
        elif tag == "det_genus":
            notes.append("det_genus: det %d vs 2g+1 = %s: %s"
                         % (data["det"],
                            "-" if data["genus"] is None else str(2 * data["genus"] + 1),
                            _stage_flag(data["det_genus_pass"])))
        elif tag == "alexander":
            notes.append("alexander: %s: %s" % (data["alexander"],
                                                _stage_flag(data["alex_form_pass"])))
        elif tag == "identification":
            hit = data["verdict"] == "LSPACE"
            notes.append("identification: %s" % (
                "matched the (1,2,2c) pretzel form" if hit
                else "no identified L-space form"))
        else:
            notes.append(tag)
    return notes


def _corpus_summary(cmd, data) -> str:
    """One-line text rendering for corpus mode."""
    if cmd == "parse":
        return "%s %s" % (data["kind"], data["printed"])
    if cmd == "canon":
        return data["montesinos"]
    if cmd == "det":
        return str(data["det"])
    if cmd == "components":
        return str(data["components"])
    if cmd == "alex":
        return "%s [form=%s]" % (data["alexander"], _b(data["lspace_form"]))
    if cmd == "genus":
        return str(data["genus"])
    if cmd == "classify":
        return "%s (stages: %s)" % (data["verdict"], " -> ".join(data["verdict_basis"]))
    raise AssertionError(cmd)


_EXPR_ROUTES = {
    "parse": "/parse", "canon": "/canon", "det": "/det", "components": "/components",
    "alex": "/alex", "genus": "/genus", "classify": "/classify",
}

_EXPR_RENDERERS = {
    "parse": _render_parse, "canon": _render_canon, "det": _render_det,
    "components": _render_components, "alex": _render_alex, "genus": _render_genus,
}


def _emit_diagram(client, expr, out):
    data = _post(client, "/diagram", {"expr": expr})
    out.write("diagram:\n")
    for line in data["text"].splitlines():
        out.write("  %s\n" % line)


def _run_expr_command(cmd, args, client, out, err) -> int:
    def render(data, expr):
        if cmd == "classify":
            return _render_classify(data, expr, args.format, show_stages=args.show_stages)
        return _EXPR_RENDERERS[cmd](data, expr, args.format)

    emit_diagram = getattr(args, "emit_diagram", False)

    if args.file is None:
        expr = args.expr.strip()
        data = _post(client, _EXPR_ROUTES[cmd], {"expr": expr})
        for line in render(data, expr):
            out.write(line + "\n")
        if emit_diagram:
            _emit_diagram(client, expr, out)
        return 0

    processed = errors = 0
    with open(args.file, "r", encoding="utf-8") as handle:
        for raw in handle:
            expr = raw.split("#", 1)[0].strip()
            if not expr:
                continue
            processed += 1
            try:
                data = _post(client, _EXPR_ROUTES[cmd], {"expr": expr})
            except _DomainError as exc:
                errors += 1
                if args.format == "records":
                    out.write(_records([("expr", expr), ("error", exc)]) + "\n")
                else:
                    out.write("%s: error: %s\n" % (expr, exc))
                continue
            if args.format == "records":
                for line in render(data, expr):
                    out.write(line + "\n")
            else:
                out.write("%s: %s\n" % (expr, _corpus_summary(cmd, data)))
            if emit_diagram:
                _emit_diagram(client, expr, out)
    err.write("corpus: %d processed, %d errors\n" % (processed, errors))
    return 1 if errors else 0


def _run_enumerate(cmd, args, client, out) -> int:
    path = "/enumerate/odd" if cmd == "enumerate-odd" else "/enumerate/even"
    data = _post(client, path, {"bound": args.bound})
    rows = data["rows"]
    if args.format == "records":
        for row in rows:
            out.write(_records([
                ("parameters", _params(row["parameters"])), ("det", row["det"]),
                ("two_g_plus_one", row["two_g_plus_one"]),
                ("survived_cull", _b(row["survived_cull"])),
                ("alex_form_pass", _b(row["alex_form_pass"])),
            ]) + "\n")
        return 0
    out.write("%-16s %6s %6s  %-5s %s\n" % ("parameters", "det", "2g+1", "cull", "alex_form"))
    survivors = 0
    for row in rows:
        survivors += 1 if row["survived_cull"] else 0
        out.write("%-16s %6d %6d  %-5s %s\n" % (
            "(%s)" % _params(row["parameters"]), row["det"], row["two_g_plus_one"],
            "pass" if row["survived_cull"] else "cull",
            _b(row["alex_form_pass"]) if row["alex_form_pass"] is not None else "-"))
    out.write("rows: %d, cull survivors: %d\n" % (len(rows), survivors))
    return 0


def _run_cf(args, client, out) -> int:
    if args.mode == "eval":
        try:
            coeffs = [int(part) for part in args.argument.replace(",", " ").split()]
        except ValueError:
            raise _DomainError("cf eval expects a comma-separated integer list, got %r"
                               % args.argument)
        if not coeffs:
            raise _DomainError("cf eval expects a nonempty coefficient list")
        data = _post(client, "/cf/eval", {"coeffs": coeffs})
    else:
        data = _post(client, "/cf/%s" % args.mode, {"slope": args.argument})
    if args.format == "records":
        out.write(_records([("mode", args.mode), ("coeffs", _params(data["coeffs"])),
                            ("flavor", data["flavor"]), ("value", data["value"])]) + "\n")
        return 0
    if args.mode == "eval":
        out.write(data["value"] + "\n")
    else:
        out.write(_params(data["coeffs"]) + "\n")
    return 0


def _run_selftest(args, client, out) -> int:
    response = client.get("/selftest")
    response.raise_for_status()
    data = response.json()
    if args.format == "records":
        for check in data["checks"]:
            out.write(_records([("check", check["name"]), ("ok", _b(check["ok"])),
                                ("detail", check["detail"])]) + "\n")
        out.write(_records([("checks", len(data["checks"])),
                            ("failures", data["failures"]),
                            ("ok", _b(data["ok"]))]) + "\n")
    else:
        for check in data["checks"]:
            status = "ok  " if check["ok"] else "FAIL"
            detail = " (%s)" % check["detail"] if check["detail"] else ""
            out.write("%s %s%s\n" % (status, check["name"], detail))
        out.write("selftest: %d checks, %d failures\n"
                  % (len(data["checks"]), data["failures"]))
    return 0 if data["ok"] else 1


def _run_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def _positive_bound(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("bound must be an integer")
    if value < 4:
        raise argparse.ArgumentTypeError("bound must be at least 4")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records"), default="text",
                        help="output format (default: text)")
    common.add_argument("--server", metavar="URL", default=None,
                        help="base URL of a running service; default runs in-process")

    parser = argparse.ArgumentParser(
        prog="montyknot",
        description="Exact-arithmetic L-space classification for Montesinos knots.")
    parser.add_argument("--version", action="version", version="montyknot %s" % __version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    expr_help = {
        "parse": "parse an expression and echo its canonical spelling",
        "canon": "rotate a Montesinos presentation into canonical form",
        "det": "determinant via the slope-product formula",
        "components": "link component count from the synthesized diagram",
        "alex": "Alexander polynomial from the diagram oracle",
        "genus": "Seifert genus for recognized family members",
        "classify": "full staged L-space classification",
    }
    for cmd, desc in expr_help.items():
        p = sub.add_parser(cmd, parents=[common], help=desc, description=desc)
        p.add_argument("expr", nargs="?", default=None, metavar="EXPR",
                       help="knot expression, e.g. \"M(-1/3,-1/3,-2/5|1)\"")
        p.add_argument("--file", metavar="PATH", default=None,
                       help="corpus mode: one expression per line, # comments")
        if cmd in ("components", "classify"):
            p.add_argument("--emit-diagram", action="store_true",
                           help="also print the synthesized planar diagram")
        if cmd == "classify":
            p.add_argument("--show-stages", action="store_true",
                           help="expand the stage trace with per-stage outcomes")

    for cmd, desc in (("enumerate-odd", "odd-family census with determinant cull"),
                      ("enumerate-even", "even-family census with determinant cull")):
        p = sub.add_parser(cmd, parents=[common], help=desc, description=desc)
        p.add_argument("--bound", type=_positive_bound, required=True,
                       help="parameter-sum bound (at least 4)")

    p = sub.add_parser("cf", parents=[common],
                       help="continued fraction calculus",
                       description="evaluate a coefficient list or expand a slope")
    p.add_argument("mode", choices=("eval", "even", "strict"))
    p.add_argument("argument", metavar="ARG",
                   help="eval: comma-separated integers; even/strict: a slope like -2/5")
    # let "-2/5" and "-2,1,-3" through as positionals instead of unknown options
    p._negative_number_matcher = re.compile(r"^-\d[\d,/ -]*$")

    sub.add_parser("selftest", parents=[common],
                   help="run the cross-oracle agreement suite")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.command == "serve":
        return _run_serve(args)

    try:
        if args.command in EXPR_COMMANDS:
            if (args.expr is None) == (args.file is None):
                err.write("usage: provide exactly one of EXPR or --file PATH\n")
                return 2
        with _client(args.server) as client:
            if args.command in EXPR_COMMANDS:
                return _run_expr_command(args.command, args, client, out, err)
            if args.command in ("enumerate-odd", "enumerate-even"):
                return _run_enumerate(args.command, args, client, out)
            if args.command == "cf":
                return _run_cf(args, client, out)
            if args.command == "selftest":
                return _run_selftest(args, client, out)
            raise AssertionError(args.command)
    except _DomainError as exc:
        err.write("error: %s\n" % exc)
        return 1
    except httpx.HTTPError as exc:
        err.write("service error: %s\n" % exc)
        return 1


def main() -> None:
    sys.exit(run())
