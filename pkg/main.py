"""
Command-line front end.

    python main.py type1 --a 359 --root-number -1
    python main.py type2 --a 79 --b 131 --json
    python main.py cubesum --D 62
    python main.py table --which 1 --rows stores/table1_rows.csv --workers 4
    python main.py cache verify --cache groups.tsv
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys

from classgroup import EnumerationLimitError, class_group_of, resolve_limit
from classgroup_cache import configure_cache
from constants import ExitCode
from report import TABLE1_COLUMNS, TABLE2_COLUMNS, AnalysisReport, analyze_cubesum, analyze_type1, analyze_type2, run_table
from selmer import ConsistencyError
from serialize import report_to_csv, report_to_json, rows_to_csv


def _sign(text: str) -> int:
    value = int(text)
    if value not in (-1, 1):
        raise argparse.ArgumentTypeError(f"root number must be +1 or -1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description="Selmer group bounds for curves with a rational 3-isogeny.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for detail.")
    p.add_argument("--cache", help="Class group cache file (overrides the environment).")
    p.add_argument("--limit", type=int, help="Largest |D| to enumerate forms for.")
    sub = p.add_subparsers(dest="command", required=True)

    def output_flags(q: argparse.ArgumentParser) -> None:
        fmt = q.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="Print the report as JSON.")
        fmt.add_argument("--csv", action="store_true", help="Print the report as key,value CSV.")

    t1 = sub.add_parser("type1", help="y² = x³ + a")
    t1.add_argument("--a", type=int, required=True)
    t1.add_argument("--root-number", type=_sign, help="Root number of E_a over Q.")
    t1.add_argument("--rank", type=int, help="rk E_a(K), known from elsewhere.")
    t1.add_argument("--sha-phi", type=int, help="dim Ш(E_a/K)[φ], known from elsewhere.")
    output_flags(t1)

    t2 = sub.add_parser("type2", help="y² = x³ + a(x - b)²")
    t2.add_argument("--a", type=int, required=True)
    t2.add_argument("--b", type=int, required=True)
    t2.add_argument("--rank", type=int, help="rk E_{a,b}(K), known from elsewhere.")
    output_flags(t2)

    cs = sub.add_parser("cubesum", help="Is D a sum of two rational cubes?")
    cs.add_argument("--D", type=int, required=True)
    cs.add_argument("--assume-sha-even", action="store_true", help="Take dim Ш(E/Q)[3] to be even.")
    cs.add_argument("--assume-rank-positive", action="store_true", help="Take the rank to be positive.")
    cs.add_argument("--search-height", type=int, help="Naive height bound for the point search.")
    output_flags(cs)

    tb = sub.add_parser("table", help="Compute table rows from a rows file.")
    tb.add_argument("--which", type=int, choices=(1, 2), required=True)
    tb.add_argument("--rows", required=True, help="CSV with columns a[,b][,r].")
    tb.add_argument("--workers", type=int, default=1)

    ca = sub.add_parser("cache", help="Inspect the class group cache.")
    ca.add_argument("action", choices=("show", "verify", "clear"))
    return p


def read_rows(path: str, which: int) -> list[tuple[tuple[int, ...], int | None]]:
    """
    :raises ValueError: for a row without the required columns.
    """
    keys = ("a",) if which == 1 else ("a", "b")
    rows = []
    with open(path, newline="") as f:
        for line in csv.DictReader(f):
            try:
                values = tuple(int(line[k]) for k in keys)
            except (KeyError, TypeError) as e:
                raise ValueError(f"{path}: row {line} lacks {keys}") from e
            r = line.get("r") or None
            rows.append((values, None if r is None else int(r)))
    return rows


def print_report(report: AnalysisReport, args: argparse.Namespace) -> None:
    if args.json:
        print(report_to_json(report))
        return
    if args.csv:
        print(report_to_csv(report), end="")
        return
    print(", ".join(f"{k} = {v}" for k, v in report.inputs.items()))
    for name, primes in report.local_sets.items():
        print(f"  {name}: {'{' + ', '.join(primes) + '}' if primes else '∅'}")
    for name, value in {**report.class_ranks, **report.exact}.items():
        print(f"  {name}: {'≥ 0 (floored)' if value is None else value}")
    for name, bounds in report.bounds.items():
        print(f"  {name}: {bounds}")
    if report.verdict is not None:
        v = report.verdict
        print(f"  verdict: {v.status.value}" + ("" if v.rank is None else f", rank {v.rank}"))
        if v.certificate is not None:
            print(f"  certificate: {v.certificate} on {v.certificate_curve}")
    if report.assumptions:
        print(f"  assuming: {'; '.join(a.value for a in report.assumptions)}")


def run(args: argparse.Namespace) -> int:
    cache = configure_cache(args.cache)
    if args.command == "type1":
        print_report(analyze_type1(args.a, args.root_number, args.rank, args.sha_phi, args.limit), args)
    elif args.command == "type2":
        print_report(analyze_type2(args.a, args.b, args.rank, args.limit), args)
    elif args.command == "cubesum":
        print_report(analyze_cubesum(args.D, args.assume_sha_even, args.assume_rank_positive,
                                     args.search_height), args)
    elif args.command == "table":
        rows = run_table(args.which, read_rows(args.rows, args.which), args.workers, args.limit, args.cache)
        print(rows_to_csv(rows, TABLE1_COLUMNS if args.which == 1 else TABLE2_COLUMNS), end="")
        if any("error" in row for row in rows):
            return ExitCode.INPUT_ERROR.value
    elif cache is None:
        raise ValueError("no cache configured, pass --cache or set the environment variable")
    elif args.action == "show":
        for D, factors in cache.entries():
            print(f"{D}\t{','.join(map(str, factors)) or '1'}")
    elif args.action == "verify":
        limit = resolve_limit(args.limit)
        mismatches = cache.verify(lambda D: class_group_of(D, limit).structure().invariant_factors)
        print(f"{len(cache)} records, {len(mismatches)} mismatches")
        if mismatches:
            return ExitCode.INCONSISTENT.value
    else:
        cache.clear()
    return ExitCode.OK.value


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return run(args)
    except EnumerationLimitError as e:
        logging.error(str(e))
        return ExitCode.LIMIT_EXCEEDED.value
    except ConsistencyError as e:
        logging.error(f"Inconsistent bounds: {e}")
        return ExitCode.INCONSISTENT.value
    except (ValueError, OSError) as e:
        logging.error(str(e))
        return ExitCode.INPUT_ERROR.value


if __name__ == "__main__":
    sys.exit(main())
