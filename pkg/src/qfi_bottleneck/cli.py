"""Command line client for the estimation service.

Every subcommand posts one JSON document to the matching endpoint. By
default the service runs in process; --server targets a running instance
instead. Flags override fields of the --config document.

Exit codes: 0 success, 1 a checked property was violated, 2 malformed
configuration (the message names the offending field), 3 numeric failure.
"""

import argparse
import asyncio
import json
import sys

from .output import report_to_csv, report_to_json
from .service.models import MAX_SEED

COMMANDS = ("qfi", "contour", "optimize", "two-copy", "continuity",
            "conjecture", "appendix-b")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qfi-bottleneck",
        description="Bottleneck QFI estimation reports")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name, help="POST /%s" % name)
        p.add_argument("--config", metavar="PATH",
                       help="JSON request document; '-' reads stdin")
        p.add_argument("--seed", type=int, default=None,
                       help="unsigned 64-bit RNG seed")
        p.add_argument("--out", metavar="PATH", help="write the report here")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--alpha-points", type=int, default=None)
        p.add_argument("--grid", metavar="NTHETAxNPHI",
                       help="probe grid resolution, e.g. 12x24")
        p.add_argument("--server", metavar="URL",
                       help="use a running service instead of in-process")
    return parser


class ConfigError(Exception):
    pass


def load_config(path):
    try:
        if path is None:
            return {}
        if path == "-":
            return _as_object(json.load(sys.stdin))
        with open(path, "r", encoding="utf-8") as fh:
            return _as_object(json.load(fh))
    except OSError as exc:
        raise ConfigError("config: %s" % exc)
    except json.JSONDecodeError as exc:
        raise ConfigError("config: invalid JSON: %s" % exc)


def _as_object(doc):
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    return doc


def parse_grid(text):
    parts = text.lower().split("x")
    try:
        n_theta, n_phi = (int(p) for p in parts)
    except ValueError:
        raise ConfigError("grid: expected NTHETAxNPHI, got %r" % text)
    if n_theta < 1 or n_phi < 1:
        raise ConfigError("grid: resolutions must be positive")
    return [n_theta, n_phi]


def merge_flags(payload, args):
    if args.seed is not None:
        if not 0 <= args.seed <= MAX_SEED:
            raise ConfigError("seed: must fit in an unsigned 64-bit integer")
        payload["seed"] = args.seed
    if args.alpha_points is not None:
        payload["alpha_points"] = args.alpha_points
    if args.grid is not None:
        payload["grid"] = parse_grid(args.grid)
    return payload


def post(server, endpoint, payload):
    """(status_code, body) from the service, remote or in process."""
    import httpx

    if server:
        resp = httpx.post(server.rstrip("/") + endpoint, json=payload, timeout=None)
        return resp.status_code, resp.json()

    from .service.app import app

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://service",
                                     timeout=None) as client:
            return await client.post(endpoint, json=payload)

    resp = asyncio.run(go())
    return resp.status_code, resp.json()


def _validation_message(body):
    detail = body.get("detail")
    if isinstance(detail, list) and detail:
        first = detail[0]
        loc = ".".join(str(p) for p in first.get("loc", []) if p != "body")
        return "%s: %s" % (loc or "request", first.get("msg", "invalid value"))
    return str(detail)


def main(argv=None):
    args = build_parser().parse_args(argv)
    endpoint = "/" + args.command
    try:
        payload = merge_flags(load_config(args.config), args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2

    try:
        status, body = post(args.server, endpoint, payload)
    except Exception as exc:  # connection/transport problems
        print("numeric error: %s" % exc, file=sys.stderr)
        return 3

    if status == 422:
        print("config error: %s" % _validation_message(body), file=sys.stderr)
        return 2
    if status != 200:
        detail = body.get("detail", body)
        message = detail.get("message", str(detail)) if isinstance(detail, dict) else str(detail)
        print("numeric error: %s" % message, file=sys.stderr)
        return 3

    if args.format == "csv":
        text = report_to_csv(body["columns"], body["rows"])
    else:
        text = report_to_json(body["columns"], body["rows"], body["meta"])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    violations = int(body.get("meta", {}).get("violations", 0) or 0)
    if violations:
        print("violations: %d" % violations, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
