"""Command-line entry point: ``mers <command> [flags]``.

Exit status is 0 when every requested check passed, 1 when a verification
failed and 2 for usage errors (unknown type, inadmissible rank, bad files).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .axioms import check_axioms_symbolic, check_axioms_windowed, verdicts_agree
from .catalog import MarkedERS, build, catalog, is_reduced, load_descriptors, roots_in_window, tier_numbers
from .isomorphy import IsoGroupSpec, dedup, find_isomorphism, key_str, verify_listed_isomorphisms
from .quotient import identify_affine_type, is_quotient_non_reduced, quotient
from .search import FILTERS, SearchConfig, SearchLimitError, _catalog_entries, match_report, search, summary_rows

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- output helpers ------------------------------------------------------

def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1)
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for r in rows:
        lines.append("| " + " | ".join(str(r[c]) for c in cols) + " |")
    return "\n".join(lines)


def _tiers(R: MarkedERS) -> str:
    try:
        return "%d,%d" % tier_numbers(R)
    except ValueError:
        return "-"


def _systems(args) -> list[MarkedERS]:
    """Resolve --type / --all / --file into a list of systems."""
    try:
        if getattr(args, "file", None):
            try:
                text = Path(args.file).read_text()
            except OSError as exc:
                raise UsageError(f"cannot read {args.file}: {exc}") from exc
            return load_descriptors(text)
        if getattr(args, "all", False):
            return catalog(args.rank)
        if args.rank is None:
            raise UsageError("--rank is required")
        return [build(args.type, args.rank)]
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _need_rank(args) -> int:
    if args.rank is None or args.rank < 1:
        raise UsageError("--rank must be a positive integer")
    return args.rank


# -- commands --------------------------------------------------------------

def cmd_list(args, out) -> int:
    rows = []
    for R in catalog(_need_rank(args), args.which):
        rows.append({
            "name": R.name,
            "quotient": identify_affine_type(quotient(R)),
            "reduced": is_reduced(R),
            "tiers": _tiers(R),
            "short": repr(R.short),
            "middle": repr(R.middle) if R.rank > 1 else "-",
            "long": repr(R.long),
        })
    print(render(rows, args.format), file=out)
    return EXIT_OK


def cmd_build(args, out) -> int:
    (R,) = _systems(args)
    desc = R.to_descriptor()
    if args.window is not None:
        desc["window"] = {"bound": args.window, "roots": [list(v) for v in roots_in_window(R, args.window)]}
    text = json.dumps(desc, indent=1)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text, file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    systems = _systems(args)
    reports = []
    failed = 0
    for R in systems:
        sym = check_axioms_symbolic(R)
        entry = {"name": R.name, "rank": R.rank, "symbolic": sym.to_json()}
        ok = sym.ok
        if args.oracle is not None:
            win = check_axioms_windowed(R, args.oracle)
            entry["windowed"] = win.to_json()
            entry["agree"] = verdicts_agree(sym, win)
            ok = ok and win.ok and entry["agree"]
        entry["ok"] = ok
        failed += not ok
        reports.append(entry)
    if args.format == "json":
        print(json.dumps(reports, indent=1), file=out)
    else:
        rows = [
            {
                "name": e["name"],
                "rank": e["rank"],
                "symbolic": "pass" if e["symbolic"]["ok"] else "FAIL " + ",".join(
                    k for k, v in e["symbolic"]["passed"].items() if not v),
                **({"windowed": "pass" if e["windowed"]["ok"] else "FAIL"} if "windowed" in e else {}),
            }
            for e in reports
        ]
        print(render(rows, args.format), file=out)
        print(f"{len(systems) - failed}/{len(systems)} entries verified", file=out)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_quotient(args, out) -> int:
    systems = _systems(args)
    rows = []
    for R in systems:
        A = quotient(R)
        rows.append({
            "name": R.name,
            "profile": str(A),
            "type": identify_affine_type(A),
            "non_reduced": is_quotient_non_reduced(A),
        })
    if args.format == "json":
        payload = [dict(r, profile=quotient(R).to_json()) for r, R in zip(rows, systems)]
        print(json.dumps(payload, indent=1), file=out)
    else:
        print(render(rows, args.format), file=out)
    return EXIT_OK


def cmd_iso(args, out) -> int:
    rank = _need_rank(args)
    if args.verify_paper:
        checks = verify_listed_isomorphisms(rank)
        good = sum(c.verified for c in checks)
        if args.format == "json":
            print(json.dumps([c.to_json() for c in checks], indent=1), file=out)
        else:
            rows = [{"item": c.item, "lhs": c.lhs, "rhs": c.rhs, "map": c.iso.describe(), "verified": c.verified} for c in checks]
            print(render(rows, args.format), file=out)
            print(f"{good}/{len(checks)} verified", file=out)
        return EXIT_OK if good == len(checks) else EXIT_FAIL
    if not (args.lhs and args.rhs):
        raise UsageError("iso needs --verify-paper or both --lhs and --rhs")
    try:
        R1, R2 = build(args.lhs, rank), build(args.rhs, rank)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    iso = find_isomorphism(R1, R2, IsoGroupSpec(args.group))
    record = {"lhs": R1.name, "rhs": R2.name, "matrix": iso.to_json() if iso else None, "verified": iso is not None}
    if args.format == "json":
        print(json.dumps(record, indent=1), file=out)
    else:
        print(f"{R1.name} -> {R2.name}: " + (iso.describe() if iso else f"not isomorphic ({args.group})"), file=out)
    return EXIT_OK if iso else EXIT_FAIL


def cmd_dedup(args, out) -> int:
    rank = _need_rank(args)
    classes = dedup(catalog(rank, args.which), IsoGroupSpec(args.group))
    if args.format == "json":
        print(json.dumps([{"key": key_str(c.key[1:]), "members": c.names} for c in classes], indent=1), file=out)
    else:
        rows = [{"key": key_str(c.key[1:]), "members": " = ".join(c.names)} for c in classes]
        print(render(rows, args.format), file=out)
        print(f"{len(classes)} classes", file=out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    cfg = SearchConfig(
        rank=_need_rank(args),
        modulus=args.modulus,
        filter=args.filter,
        guided=args.guided,
        group=args.group,
        workers=args.workers,
    )
    try:
        found = search(cfg)
    except SearchLimitError as exc:
        raise UsageError(str(exc)) from exc
    report = match_report(found, _catalog_entries(cfg), cfg.iso_group)
    descriptors = [dict(fc.system.to_descriptor(), key=key_str(fc.key, cfg.modulus)) for fc in found]
    if args.output:
        Path(args.output).write_text(json.dumps(descriptors, indent=1) + "\n")
    if args.format == "json":
        print(json.dumps(descriptors, indent=1), file=out)
    else:
        print(render(summary_rows(found), args.format), file=out)
        print(f"{len(found)} classes; bijection with catalog: {report.bijection}", file=out)
        for k in report.extra:
            print(f"  not in catalog: {k}", file=out)
        for n in report.missing:
            print(f"  catalog entry not found: {n}", file=out)
    return EXIT_OK if report.bijection else EXIT_FAIL


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("md", "json", "csv"), default="md")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="mers", description="Marked elliptic root systems with non-reduced quotient.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list", parents=[common], help="catalog table")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--which", choices=("all", "reduced", "non-reduced"), default="all")
    s.set_defaults(func=cmd_list)

    s = sub.add_parser("build", parents=[common], help="emit a descriptor")
    s.add_argument("--type", required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--window", type=int, metavar="B", help="also list roots with |m|,|n| <= B")
    s.add_argument("-o", "--output", help="write the descriptor here")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", parents=[common], help="check the axioms")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--type")
    src.add_argument("--all", action="store_true")
    src.add_argument("--file", help="descriptor JSON (one object or a list)")
    s.add_argument("--rank", type=int)
    s.add_argument("--oracle", type=int, metavar="B", help="also run the windowed oracle")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("quotient", parents=[common], help="affine quotient and its type")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--type")
    src.add_argument("--all", action="store_true")
    src.add_argument("--file")
    s.add_argument("--rank", type=int)
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("iso", parents=[common], help="isomorphisms between catalog types")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--verify-paper", action="store_true", help="check the 14 listed isomorphisms")
    s.add_argument("--lhs")
    s.add_argument("--rhs")
    s.add_argument("--group", choices=("marked", "unmarked"), default="marked")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("dedup", parents=[common], help="isomorphism classes of the catalog")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--group", choices=("marked", "unmarked"), default="marked")
    s.add_argument("--which", choices=("all", "reduced", "non-reduced"), default="non-reduced")
    s.set_defaults(func=cmd_dedup)

    s = sub.add_parser("classify", parents=[common], help="exhaustive search and catalog match")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--guided", action="store_true", help="restrict the middle class to known forms")
    s.add_argument("--filter", choices=FILTERS, default="non-reduced-R")
    s.add_argument("--modulus", type=int, choices=(2, 4, 8), default=4)
    s.add_argument("--group", choices=("marked", "unmarked"), default="marked")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("-o", "--output", help="write found descriptors as a JSON array")
    s.set_defaults(func=cmd_classify)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"mers: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
