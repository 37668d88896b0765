"""Command-line front door; a thin client over the HTTP service.

Every command builds a request, sends it through an in-process test
client to the FastAPI app, and serializes the response. Artifacts go to
--out (or stdout); human-readable pass/fail lines go to stderr so they
never mix with machine-readable output. Exit status: 0 all requested
checks passed, 1 a check failed, 2 the configuration was invalid.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_CONFIG = 2

# Keys a config file may carry besides the inline spectral parameters.
_WRAPPER_KEYS = {"config", "preset", "soliton", "grid", "h", "system",
                 "parameter", "values", "x0", "t0", "t1", "samples"}


def _client():
    from fastapi.testclient import TestClient

    from .service.app import create_app
    return TestClient(create_app())


def _load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    if not _WRAPPER_KEYS & set(data):
        # Bare spectral config: wrap it.
        data = {"config": data}
    return data


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _table_csv(table: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table["columns"])
    for row in table["rows"]:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _checks_csv(checks: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "value", "tolerance", "comparison", "passed", "detail"])
    for c in checks:
        writer.writerow([c["name"], _fmt(float(c["value"])), _fmt(float(c["tolerance"])),
                         c["comparison"], _fmt(c["passed"]), c.get("detail", "")])
    return buf.getvalue()


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _say(quiet: bool, message: str):
    if not quiet:
        print(message, file=sys.stderr)


def _print_checks(quiet: bool, checks: list[dict]):
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        _say(quiet, f"{status} {c['name']}: {c['value']:.6e} "
                    f"{c['comparison']} {c['tolerance']:.0e}")


def _grid_payload(args, file_data: dict) -> dict:
    if args.grid:
        from .verification import GridSpec
        return GridSpec.parse(args.grid).to_dict()
    return file_data.get("grid", {})


def _post(client, route: str, payload: dict):
    resp = client.post(route, json=payload)
    if resp.status_code == 422:
        detail = resp.json().get("detail", "invalid request")
        raise SystemExit2(f"{detail}")
    resp.raise_for_status()
    return resp.json()


class SystemExit2(Exception):
    """Invalid configuration; mapped to exit status 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlsoliton",
        description="Generate and verify nonlocal multi-soliton solutions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("generate", "evaluate the fields of a configuration over a grid"),
            ("verify", "run invariant and residual checks for a configuration"),
            ("trajectory", "sample and classify a spin trajectory in time"),
            ("sweep", "verify a family of configurations along one parameter"),
            ("selftest", "run the built-in end-to-end checks")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", metavar="PATH",
                       help="JSON configuration file")
        p.add_argument("--out", metavar="PATH",
                       help="artifact output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="artifact format (default depends on the command)")
        p.add_argument("--grid", metavar="SPEC",
                       help='evaluation grid as "x0:x1:nx,t0:t1:nt"')
        p.add_argument("--h", type=float, default=None, metavar="STEP",
                       help="finite-difference step (default 1e-3)")
        p.add_argument("--system", default=None,
                       help="target system: ech|hirota|elle|nelle|zerocurv|all")
        p.add_argument("--quiet", action="store_true",
                       help="suppress progress and pass/fail lines on stderr")
    return parser


def _config_payload(file_data: dict) -> dict:
    payload = {}
    if "config" in file_data:
        payload["config"] = file_data["config"]
    if "preset" in file_data:
        payload["preset"] = file_data["preset"]
    return payload


def _run(args) -> int:
    file_data = _load_config_file(args.config) if args.config else {}
    client = _client()
    fmt = args.format

    if args.command == "generate":
        payload = _config_payload(file_data) or {"preset": "nonlocal-one"}
        payload["grid"] = _grid_payload(args, file_data)
        table = _post(client, "/generate", payload)
        _emit(_table_csv(table) if (fmt or "csv") == "csv"
              else json.dumps(table, indent=2), args.out)
        _say(args.quiet, f"generate: {len(table['rows'])} grid points")
        return EXIT_OK

    if args.command == "verify":
        payload = _config_payload(file_data) or {"preset": "nonlocal-one"}
        payload["grid"] = _grid_payload(args, file_data)
        payload["system"] = args.system or file_data.get("system", "all")
        payload["h"] = args.h if args.h is not None else file_data.get("h", 1e-3)
        report = _post(client, "/verify", payload)
        _print_checks(args.quiet, report["checks"])
        _emit(_checks_csv(report["checks"]) if fmt == "csv"
              else json.dumps(report, indent=2), args.out)
        return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED

    if args.command == "trajectory":
        payload = {k: file_data[k] for k in
                   ("soliton", "x0", "t0", "t1", "samples") if k in file_data}
        payload.update(_config_payload(file_data))
        if not payload:
            payload = {"soliton": "local-periodic"}
        result = _post(client, "/trajectory", payload)
        _emit(_table_csv(result["table"]) if (fmt or "csv") == "csv"
              else json.dumps(result, indent=2), args.out)
        _say(args.quiet, f"trajectory: classified as {result['classification']}")
        return EXIT_OK

    if args.command == "sweep":
        if "parameter" not in file_data or "values" not in file_data:
            raise SystemExit2(
                "sweep needs a config file with 'parameter' and 'values' keys")
        payload = _config_payload(file_data) or {"preset": "nonlocal-one"}
        payload["parameter"] = file_data["parameter"]
        payload["values"] = [str(v) for v in file_data["values"]]
        payload["grid"] = _grid_payload(args, file_data)
        payload["system"] = args.system or file_data.get("system", "all")
        payload["h"] = args.h if args.h is not None else file_data.get("h", 1e-3)
        report = _post(client, "/sweep", payload)
        for entry in report["entries"]:
            tag = "PASS" if entry["passed"] else "FAIL"
            extra = f" ({entry['error']})" if entry.get("error") else ""
            _say(args.quiet,
                 f"{tag} {payload['parameter']}={entry['value']}{extra}")
        _emit(json.dumps(report, indent=2), args.out)
        return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED

    # selftest
    report = _post(client, "/selftest", {})
    _print_checks(args.quiet, report["checks"])
    _say(args.quiet, f"selftest: {report['n_checks']} checks in "
                     f"{report['elapsed_seconds']:.1f}s")
    _emit(_checks_csv(report["checks"]) if fmt == "csv"
          else json.dumps(report, indent=2), args.out)
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG


if __name__ == "__main__":
    sys.exit(main())
