"""Command-line interface.

Exit codes separate mathematical results from operational failures: a "not
embeddable" verdict exits 0 (it is an answer), bad flags exit 2, unreadable
or invalid input files exit 3, and ``verify-paper`` exits 1 when any
criterion fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, verify
from .embed import (
    PartitionInvalid,
    embed_diagonal_partition,
    find_embedding,
    count_embeddings,
)
from .groups import (
    ClosureTooLarge,
    NoIdentity,
    NotAssociative,
    NotLatin,
    OrderUnsupported,
    format_group_file,
    groups_of_order,
    parse_group_spec,
)
from .pls import (
    ParameterOutOfRange,
    canonical_form,
    enumerate_species,
    format_species_file,
    parse_pls,
)
from .screening import IncompleteClass, psi, screen_size

RUN_REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["command", "inputs", "results", "timing_ms", "version"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "results": {"type": "object"},
        "timing_ms": {"type": "number"},
        "version": {"type": "string"},
    },
    "additionalProperties": False,
}

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3


class _ParseFailure(Exception):
    pass


def _report(command: str, inputs: dict, results: dict, started: float) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "timing_ms": round((time.time() - started) * 1000.0, 3),
        "version": __version__,
    }


def _emit(report: dict, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def _load_pls(path: str, fmt: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _ParseFailure(f"cannot read {path}: {exc}") from exc
    try:
        return parse_pls(text, fmt)
    except ValueError as exc:
        raise _ParseFailure(f"cannot parse square from {path}: {exc}") from exc


def _load_group(spec: str):
    try:
        return parse_group_spec(spec)
    except (ParameterOutOfRange, NotLatin, NoIdentity, NotAssociative, ClosureTooLarge, OSError) as exc:
        raise _ParseFailure(f"cannot build group from {spec!r}: {exc}") from exc


def _threads(flag_value: Optional[int]) -> int:
    env = os.environ.get("CAYLEY_EMBED_THREADS")
    if env:
        return max(1, int(env))
    if flag_value is not None:
        return max(1, flag_value)
    return os.cpu_count() or 1


def cmd_species(args) -> int:
    started = time.time()
    if args.max_size < 1:
        print("--max-size must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.max_size > 8:
        print("--max-size is capped at 8", file=sys.stderr)
        return EXIT_USAGE
    levels = enumerate_species(args.max_size)
    counts = {m: len(reps) for m, reps in levels.items()}
    lines = [f"size {m}: {counts[m]} species" for m in sorted(counts)]
    written = {}
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for m, reps in levels.items():
            path = outdir / f"species_{m}.pls"
            path.write_text(format_species_file(reps), encoding="utf-8")
            written[str(m)] = str(path)
        lines.append(f"wrote {len(written)} files to {outdir}")
    report = _report(
        "species",
        {"max_size": args.max_size, "out": args.out},
        {"counts": {str(m): c for m, c in counts.items()}, "files": written},
        started,
    )
    _emit(report, args.json, lines)
    return EXIT_OK


def cmd_embed(args) -> int:
    started = time.time()
    p = _load_pls(args.pls, args.format)
    g = _load_group(args.group)
    results: dict = {"group": g.name, "pls_size": p.size, "species_key": canonical_form(p).hex()}
    lines = []
    if args.count:
        n = count_embeddings(p, g)
        results["count"] = n
        lines.append(f"{n} embeddings of the square in {g.name}")
    else:
        verdict = find_embedding(p, g, paranoid=args.paranoid)
        results["embeddable"] = verdict.embeddable
        results["method"] = verdict.method
        if verdict.embeddable:
            lines.append(f"embeddable in {g.name} (method: {verdict.method})")
            if verdict.witness is not None:
                results["witness"] = verdict.witness.to_json()
                lines.append(verdict.witness.to_text())
        else:
            results["obstruction"] = verdict.obstruction
            lines.append(f"not embeddable in {g.name} (obstruction: {verdict.obstruction})")
    _emit(_report("embed", {"pls": args.pls, "group": args.group, "count": args.count, "paranoid": args.paranoid}, results, started), args.json, lines)
    return EXIT_OK


def cmd_screen(args) -> int:
    started = time.time()
    if not 1 <= args.size <= 7:
        print("--size must be in 1..7", file=sys.stderr)
        return EXIT_USAGE
    if args.n < 1:
        print("--n must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    survivors = screen_size(args.size, args.n)
    lines = [f"{len(survivors)} survivors at size {args.size} for order {args.n}"]
    if args.verbose:
        for key in survivors:
            lines.append(key.hex())
    report = _report(
        "screen",
        {"size": args.size, "n": args.n},
        {"count": len(survivors), "species_keys": [k.hex() for k in survivors]},
        started,
    )
    _emit(report, args.json, lines)
    return EXIT_OK


def cmd_psi(args) -> int:
    started = time.time()
    groups = None
    if args.groups:
        groups = [
            _load_group(f"file:{path}") if Path(path).exists() else _load_group(path)
            for path in args.groups
        ]
    try:
        result = psi(
            args.n,
            args.variant,
            groups,
            assume_complete=args.assume_complete,
            workers=_threads(args.threads),
        )
    except IncompleteClass as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    lines = [f"psi({args.n}, {args.variant}) = {result.psi}"]
    lines.append(f"{len(result.obstacles)} obstacle species of size {result.psi + 1}:")
    for o in result.obstacles:
        lines.append(f"  key {o.species_key.hex()} certificate {o.certificate.get('kind')}")
    _emit(
        _report(
            "psi",
            {
                "n": args.n,
                "variant": args.variant,
                "groups": args.groups or [],
                "assume_complete": args.assume_complete,
            },
            result.to_json(),
            started,
        ),
        args.json,
        lines,
    )
    return EXIT_OK


def cmd_groups(args) -> int:
    started = time.time()
    lines = []
    results: dict = {}
    if args.spec:
        g = _load_group(args.spec)
        info = {
            "name": g.name,
            "order": g.order,
            "abelian": g.abelian,
            "element_orders": sorted(g.element_orders),
        }
        results["group"] = info
        lines.append(f"{g.name}: order {g.order}, {'abelian' if g.abelian else 'non-abelian'}")
        if args.out:
            Path(args.out).write_text(format_group_file(g), encoding="utf-8")
            results["file"] = args.out
            lines.append(f"wrote table to {args.out}")
    else:
        try:
            cat = groups_of_order(args.order)
        except OrderUnsupported as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        results["groups"] = [
            {"name": g.name, "order": g.order, "abelian": g.abelian} for g in cat
        ]
        lines.append(f"{len(cat)} groups of order {args.order}:")
        for g in cat:
            lines.append(f"  {g.name} ({'abelian' if g.abelian else 'non-abelian'})")
    _emit(_report("groups", {"order": args.order, "spec": args.spec}, results, started), args.json, lines)
    return EXIT_OK


def cmd_diag_partition(args) -> int:
    started = time.time()
    g = _load_group(args.group)
    try:
        parts = [int(x) for x in args.partition.split(",") if x]
    except ValueError as exc:
        raise _ParseFailure(f"bad partition {args.partition!r}: {exc}") from exc
    try:
        ok, perm = embed_diagonal_partition(g, parts)
    except PartitionInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    lines = [f"partition {sorted(parts, reverse=True)} realisable in {g.name}: {ok}"]
    if ok:
        lines.append("permutation: " + " ".join(str(x) for x in perm))
    _emit(
        _report(
            "diag-partition",
            {"group": args.group, "partition": parts},
            {"realisable": ok, "permutation": perm},
            started,
        ),
        args.json,
        lines,
    )
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    started = time.time()
    results = verify.run_all(quick=args.quick, seed=args.seed)
    lines = []
    for res in results:
        lines.append(res.line())
        if res.detail:
            lines.append(f"  note: {res.detail}")
        if not res.passed:
            for c in res.failures():
                lines.append(f"  FAIL {c.case}" + (f": {c.note}" if c.note else ""))
    all_ok = all(r.passed for r in results)
    lines.append("all criteria passed" if all_ok else "some criteria FAILED")
    payload = {
        "criteria": [
            {
                "ident": r.ident,
                "title": r.title,
                "passed": r.passed,
                "cases": len(r.cases),
                "failures": [{"case": c.case, "note": c.note} for c in r.failures()],
                "detail": r.detail,
            }
            for r in results
        ],
        "passed": all_ok,
    }
    _emit(
        _report("verify-paper", {"quick": args.quick, "seed": args.seed}, payload, started),
        args.json,
        lines,
    )
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayley-embed",
        description="Embeddings of partial latin squares into finite group Cayley tables.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("species", help="enumerate species representatives by size")
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--out", help="directory for one triple-list file per size")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_species)

    em = sub.add_parser("embed", help="decide embeddability of a square in a group")
    em.add_argument("--pls", required=True, help="square file (triple list or grid)")
    em.add_argument("--group", required=True, help="group spec, e.g. cyclic:12, dihedral:6, abelian:2,6, file:PATH")
    em.add_argument("--format", choices=("auto", "triples", "grid"), default="auto")
    em.add_argument("--count", action="store_true", help="count all embeddings instead")
    em.add_argument("--paranoid", action="store_true", help="always search for a witness")
    em.add_argument("--json", action="store_true")
    em.set_defaults(fn=cmd_embed)

    sc = sub.add_parser("screen", help="survivors of the reduction screen at one size")
    sc.add_argument("--size", type=int, required=True)
    sc.add_argument("--n", type=int, required=True)
    sc.add_argument("--verbose", action="store_true")
    sc.add_argument("--json", action="store_true")
    sc.set_defaults(fn=cmd_screen)

    ps = sub.add_parser("psi", help="compute the embeddability threshold and obstacles")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--variant", choices=("group", "abelian", "cyclic"), default="group")
    ps.add_argument("--groups", nargs="*", help="table files forming the complete class")
    ps.add_argument("--assume-complete", action="store_true")
    ps.add_argument("--threads", type=int, default=None)
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(fn=cmd_psi)

    gr = sub.add_parser("groups", help="list the catalogue or build one group")
    gr.add_argument("--order", type=int, default=None)
    gr.add_argument("--spec", default=None)
    gr.add_argument("--out", help="write the Cayley table to this file")
    gr.add_argument("--json", action="store_true")
    gr.set_defaults(fn=cmd_groups)

    dp = sub.add_parser("diag-partition", help="realise a partition as diagonal products")
    dp.add_argument("--group", required=True)
    dp.add_argument("--partition", required=True, help="comma-separated parts, e.g. 3,9")
    dp.add_argument("--json", action="store_true")
    dp.set_defaults(fn=cmd_diag_partition)

    vp = sub.add_parser("verify-paper", help="run the acceptance suite")
    vp.add_argument("--quick", action="store_true", help="restrict to orders <= 8 and sizes <= 6")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--json", action="store_true")
    vp.set_defaults(fn=cmd_verify_paper)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "groups" and not args.spec and args.order is None:
        parser.error("groups needs --order or --spec")
    try:
        return args.fn(args)
    except _ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
