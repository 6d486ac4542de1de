"""Command-line interface.

Commands: classify, gallery, witness, replay, symbol, fmt.

Exit codes: 0 success (verdicts resolved, expectations matched), 1 expectation
mismatch or lattice inconsistency, 2 usage or parse error, 3 an Undecided
verdict under ``--strict``.  Output is deterministic for fixed flags and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import dsl
from .classifier import InternalInconsistencyError, Report, ScanBounds, SpaceSpec, classify
from .gallery import ALIASES, GALLERY, build
from .symbols import BUILTIN_SYMBOLS, verify_symbol
from .vectors import TruncatedVector
from .witnesses import (
    WitnessError,
    hypercyclic_candidate,
    periodic_approximant,
    record_from_json,
    replay,
    return_set,
    transitivity_witness,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_UNDECIDED = 3


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _sanitize(obj):
    """Replace non-finite floats so json stays strict and deterministic."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, float):
        if obj != obj:
            return "nan"
        if obj == float("inf"):
            return "inf"
        if obj == float("-inf"):
            return "-inf"
        return obj
    return obj


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_bounds_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--window", type=int, default=None, help="scan window upper index")
    p.add_argument("--levels", type=int, default=None, help="number of weight levels scanned")
    p.add_argument("--grades", type=int, default=None, help="number of grades scanned")
    p.add_argument(
        "--eps-floor", type=int, default=None, help="deepest threshold exponent t (eps = 2^-t)"
    )
    p.add_argument("--truncation", type=int, default=None, help="vector truncation length")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_const", const="json", dest="output")
    fmt.add_argument("--md", action="store_const", const="md", dest="output")
    p.add_argument("--output", choices=("json", "md"), dest="output", default=None)
    p.add_argument("--out", default=None, help="write to a file instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed recorded for derived artifacts")
    p.add_argument("--strict", action="store_true", help="exit 3 on any Undecided verdict")


def _bounds_overrides(args) -> dict:
    kw = {}
    if args.window is not None:
        kw["window"] = args.window
    if args.levels is not None:
        kw["levels"] = args.levels
    if args.grades is not None:
        kw["grades"] = args.grades
    if args.eps_floor is not None:
        kw["eps_ts"] = tuple(range(1, args.eps_floor + 1))
    if args.truncation is not None:
        kw["truncation"] = args.truncation
    return kw


def _load_spec(args) -> SpaceSpec:
    kw = _bounds_overrides(args)
    if getattr(args, "builtin", None):
        return build(args.builtin, **kw)
    bounds = ScanBounds(**kw) if kw else None
    return dsl.load(args.target, bounds)


def _report_exit(report: Report, strict: bool) -> int:
    if not report.consistent:
        return EXIT_MISMATCH
    if report.expectation_diff:
        return EXIT_MISMATCH
    if strict and report.has_undecided:
        return EXIT_UNDECIDED
    return EXIT_OK


def _render_report(report: Report, output: Optional[str]) -> str:
    if output == "md":
        return report.to_markdown() + "\n"
    return _dump_json(_sanitize(report.to_json()))


def _cmd_classify(args) -> int:
    try:
        spec = _load_spec(args)
    except (dsl.DslError, dsl.HintRejectedError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = classify(spec)
    except InternalInconsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    _emit(_render_report(report, args.output), args.out)
    return _report_exit(report, args.strict)


def _cmd_gallery(args) -> int:
    if args.action == "list":
        rows = {name: sorted(a for a, t in ALIASES.items() if t == name) for name in GALLERY}
        if args.output == "md":
            lines = ["| entry | aliases |", "| --- | --- |"]
            for name, aliases in rows.items():
                lines.append(f"| {name} | {', '.join(aliases)} |")
            _emit("\n".join(lines) + "\n", args.out)
        else:
            _emit(_dump_json({"schema": 1, "entries": rows}), args.out)
        return EXIT_OK
    # run
    names = [args.name] if args.name else list(GALLERY)
    kw = _bounds_overrides(args)
    reports = []
    code = EXIT_OK
    for name in names:
        try:
            spec = build(name, **kw)
        except KeyError:
            print(f"error: unknown gallery entry {name!r}", file=sys.stderr)
            return EXIT_USAGE
        try:
            report = classify(spec)
        except InternalInconsistencyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_MISMATCH
        reports.append(report)
        code = max(code, _report_exit(report, args.strict))
    if args.output == "md":
        _emit("\n\n".join(r.to_markdown() for r in reports) + "\n", args.out)
    else:
        _emit(
            _dump_json(
                {"schema": 1, "reports": [_sanitize(r.to_json()) for r in reports]}
            ),
            args.out,
        )
    return code


def _root_basis(spec: SpaceSpec) -> TruncatedVector:
    return TruncatedVector.basis(spec.psi.root)


def _second_basis(spec: SpaceSpec) -> TruncatedVector:
    return TruncatedVector.basis(spec.psi.orbit(2)[1])


def _cmd_witness(args) -> int:
    try:
        spec = _load_spec(args)
    except (dsl.DslError, dsl.HintRejectedError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.kind == "transitivity":
            rec = transitivity_witness(spec, _root_basis(spec), _second_basis(spec), level=args.level)
        elif args.kind == "periodic":
            rec = periodic_approximant(spec, _root_basis(spec), level=args.level)
        elif args.kind == "hypercyclic":
            rec = hypercyclic_candidate(spec, [_root_basis(spec), _second_basis(spec)], level=args.level)
        else:
            rec = return_set(spec, level=args.level)
    except WitnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    _emit(_dump_json(_sanitize(rec.to_json())), args.out)
    return EXIT_OK


def _cmd_replay(args) -> int:
    try:
        spec = _load_spec(args)
        with open(args.record, "r", encoding="utf-8") as fh:
            rec = record_from_json(json.load(fh))
    except (dsl.DslError, dsl.HintRejectedError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ok = replay(spec, rec)
    except WitnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    _emit(_dump_json({"schema": 1, "kind": rec.kind, "replayed": bool(ok)}), args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


def _cmd_symbol(args) -> int:
    if args.name not in BUILTIN_SYMBOLS:
        print(f"error: unknown symbol {args.name!r}", file=sys.stderr)
        return EXIT_USAGE
    psi = BUILTIN_SYMBOLS[args.name]()
    verdict = verify_symbol(psi, args.verify)
    payload = {
        "schema": 1,
        "symbol": args.name,
        "checked": args.verify,
        "status": verdict.status.value,
        "orbit_prefix": [list(i) if isinstance(i, tuple) else i for i in psi.orbit(args.prefix)],
    }
    _emit(_dump_json(_sanitize(payload)), args.out)
    return EXIT_OK if verdict.positive else EXIT_MISMATCH


def _cmd_fmt(args) -> int:
    try:
        with open(args.target, "r", encoding="utf-8") as fh:
            text = fh.read()
        formatted = dsl.format_ast(dsl.parse(text))
    except (dsl.DslError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.write:
        with open(args.target, "w", encoding="utf-8") as fh:
            fh.write(formatted)
    else:
        _emit(formatted, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftdyn",
        description="Decide and certify dynamics of weighted generalized backward shifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a builtin entry or a .kws file")
    p.add_argument("target", nargs="?", help="path to a .kws file")
    p.add_argument("--builtin", help="builtin gallery entry name")
    _add_bounds_flags(p)
    _add_output_flags(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("gallery", help="list or run the builtin gallery")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("name", nargs="?", help="entry to run (default: all)")
    _add_bounds_flags(p)
    _add_output_flags(p)
    p.set_defaults(fn=_cmd_gallery)

    p = sub.add_parser("witness", help="emit a replayable dynamical witness")
    p.add_argument("kind", choices=("transitivity", "periodic", "hypercyclic", "return-set"))
    p.add_argument("target", nargs="?", help="path to a .kws file")
    p.add_argument("--builtin", help="builtin gallery entry name")
    p.add_argument("--level", type=int, default=1)
    _add_bounds_flags(p)
    _add_output_flags(p)
    p.set_defaults(fn=_cmd_witness)

    p = sub.add_parser("replay", help="replay a stored witness record")
    p.add_argument("record", help="witness record JSON file")
    p.add_argument("target", nargs="?", help="path to a .kws file")
    p.add_argument("--builtin", help="builtin gallery entry name")
    _add_bounds_flags(p)
    _add_output_flags(p)
    p.set_defaults(fn=_cmd_replay)

    p = sub.add_parser("symbol", help="inspect and spot-verify a builtin symbol")
    p.add_argument("name")
    p.add_argument("--verify", type=int, default=10_000)
    p.add_argument("--prefix", type=int, default=12)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_symbol)

    p = sub.add_parser("fmt", help="canonically format a .kws file")
    p.add_argument("target")
    p.add_argument("--write", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_fmt)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "classify" and not (args.target or args.builtin):
        parser.error("classify needs a .kws path or --builtin")
    if getattr(args, "command", None) in ("witness", "replay") and not (
        getattr(args, "target", None) or getattr(args, "builtin", None)
    ):
        parser.error(f"{args.command} needs a .kws path or --builtin")
    return args.fn(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
