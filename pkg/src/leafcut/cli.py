"""leafcut command line: one problem spec per invocation, JSON out."""

from __future__ import annotations

import argparse
import json
import sys
import traceback

from .algebra import GuardExceeded
from .algebra.ideal import DEFAULT_MINOR_LIMIT
from .io import KINDS, Options, SpecError, run, validate

EXIT_SCHEMA = 2
EXIT_GUARD = 3
EXIT_INTERNAL = 4


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leafcut", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument("--spec", help="problem spec JSON (full spec or bare payload)")
        p.add_argument("--out", help="write the result envelope here instead of stdout")
        p.add_argument("--guard-minors", type=int, default=DEFAULT_MINOR_LIMIT,
                       help="refuse minor expansions larger than this")
        if kind in ("locus", "family-locus", "zpdrive"):
            p.add_argument("--e", type=int, help="override the excess dimension e")
            p.add_argument("--fast-closure", action="store_true",
                           help="report the Zariski closure of the image instead of the exact image")
        if kind == "gaussmanin":
            p.add_argument("--verify-periods", action="store_true",
                           help="check the connection against numerically integrated periods")
        if kind == "atypical":
            p.add_argument("--dims", help="U,V,P,L,H as comma separated integers")
    p = sub.add_parser("validate")
    p.add_argument("--spec", required=True)
    p.add_argument("--kind", choices=KINDS, help="kind of a bare payload")
    p.add_argument("--out")
    return ap


def _load(path: str | None):
    if path is None or path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, path: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(code: int, message: str, diagnostics=None, dump: str | None = None) -> int:
    err = {"error": message, "exit_code": code}
    if diagnostics:
        err["diagnostics"] = diagnostics
    if dump:
        err["dump"] = dump
    sys.stderr.write(json.dumps(err, sort_keys=True, indent=2) + "\n")
    return code


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "atypical" and args.dims:
            try:
                U, V, P, L, H = (int(x) for x in args.dims.split(","))
            except ValueError:
                return _fail(EXIT_SCHEMA, "--dims needs five comma separated integers")
            data = {"dim_U": U, "dim_V": V, "dim_P": P, "dim_L": L, "dim_H": H}
        else:
            data = _load(args.spec)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(EXIT_SCHEMA, f"cannot read spec: {exc}")

    if args.command == "validate":
        diags = validate(data, args.kind)
        _emit({"diagnostics": diags}, args.out)
        return 0 if not diags else EXIT_SCHEMA

    opts = Options(e=getattr(args, "e", None), fast_closure=getattr(args, "fast_closure", False),
                   verify_periods=getattr(args, "verify_periods", False), guard_minors=args.guard_minors)
    try:
        envelope = run(data, args.command, opts)
    except SpecError as exc:
        return _fail(EXIT_SCHEMA, "invalid spec", exc.diagnostics)
    except GuardExceeded as exc:
        return _fail(EXIT_GUARD, f"computation guard exceeded: {exc}")
    except ValueError as exc:
        return _fail(EXIT_SCHEMA, f"input rejected: {exc}")
    except Exception as exc:  # noqa: BLE001 - internal failure gets a diagnostic dump
        return _fail(EXIT_INTERNAL, f"internal error: {type(exc).__name__}: {exc}", dump=traceback.format_exc())
    _emit(envelope, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
