"""Command-line front end.

Exit codes: 0 success, 1 identity-check failure, 2 usage error,
3 data or depth error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cumulants import (
    cumulants_dot,
    cumulants_from_moments,
    load_cumulants,
    moments_from_cumulants,
)
from .exactalg import format_rational
from .independence import FLAVORS, mixed_moment
from .moments import MomentDataError, MomentFileError, load_moments, word_key, words
from .partitions import enumerate_monotone_partitions, enumerate_partitions
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3

KIND_ALIASES = {"all": "all", "nc": "noncrossing", "noncrossing": "noncrossing", "interval": "interval", "monotone": "monotone"}

WARN_ORDER = 7


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _table(rows: dict, header: tuple[str, str]) -> str:
    width = max([len(header[0])] + [len(k) for k in rows])
    lines = [f"{header[0].ljust(width)}  {header[1]}"]
    lines += [f"{k.ljust(width)}  {v}" for k, v in rows.items()]
    return "\n".join(lines)


def _warn_order(order: int) -> None:
    if order > WARN_ORDER:
        print(f"warning: order {order} > {WARN_ORDER}; the dot expansion grows like n^n", file=sys.stderr)


# ---------------------------------------------------------------------------


def cmd_partitions(args) -> int:
    kind = KIND_ALIASES[args.kind]
    try:
        items = enumerate_monotone_partitions(args.n) if kind == "monotone" else enumerate_partitions(args.n, kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.count_only:
        print(len(items))
    else:
        for p in items:
            print(json.dumps(p.to_json()))
    return EXIT_OK


def cmd_cumulants(args) -> int:
    phi = load_moments(args.moments)
    order = phi.max_len if args.max_order is None else args.max_order
    _warn_order(order)
    if order > phi.max_len:
        raise MomentDataError((1,) * order)
    if args.method == "both":
        a = cumulants_dot(args.flavor, phi, order)
        b = cumulants_from_moments(args.flavor, phi, order)
        diffs = [w for w in words(phi.r, order) if a.table[w] != b.table[w]]
        if args.json:
            print(json.dumps({
                "flavor": args.flavor, "max_order": order, "status": "fail" if diffs else "pass",
                "mismatches": [
                    {"word": word_key(w), "dot": format_rational(a.table[w]), "partition": format_rational(b.table[w])}
                    for w in diffs
                ],
            }, indent=1))
        else:
            for w in diffs:
                print(f"mismatch {word_key(w)}: dot {format_rational(a.table[w])} partition {format_rational(b.table[w])}")
            print("fail" if diffs else "pass")
        if args.out:
            Path(args.out).write_text(json.dumps(b.to_json(), indent=1) + "\n", encoding="utf-8")
        return EXIT_FAIL if diffs else EXIT_OK
    fn = cumulants_dot if args.method == "dot" else cumulants_from_moments
    K = fn(args.flavor, phi, order)
    _write_functional(K.to_json(), "cumulants", args)
    return EXIT_OK


def _write_functional(obj: dict, key: str, args) -> None:
    text = json.dumps(obj, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    if args.json:
        print(text)
    elif not args.out:
        print(_table(obj[key], ("word", key[:-1])))


def cmd_moments(args) -> int:
    K = load_cumulants(args.cumulants)
    flavor = args.flavor or K.flavor
    order = K.max_order if args.max_order is None else args.max_order
    if order > K.max_order:
        raise MomentDataError((1,) * order, "insufficient cumulant data")
    phi = moments_from_cumulants(flavor, K, order)
    _write_functional(phi.to_json(), "moments", args)
    return EXIT_OK


def parse_labeled_word(text: str) -> tuple:
    """``"1:1,2:1,1:1"`` (label:var pairs) or the JSON form ``{"word": [...]}``."""
    text = text.strip()
    if text.startswith("{"):
        obj = json.loads(text)
        return tuple((int(d["label"]), int(d["var"])) for d in obj["word"])
    out = []
    for item in text.split(","):
        lab, _, var = item.partition(":")
        if not var:
            raise UsageError(f"malformed letter {item!r}; expected label:var")
        out.append((int(lab), int(var)))
    if not out:
        raise UsageError("empty labeled word")
    return tuple(out)


def cmd_mixed_moment(args) -> int:
    fam = {}
    for spec in args.family:
        lab, _, path = spec.partition("=")
        if not path or not lab.strip().lstrip("-").isdigit():
            raise UsageError(f"--family expects LABEL=FILE with an integer label, got {spec!r}")
        fam[int(lab)] = load_moments(path)
    word_text = Path(args.word_file).read_text(encoding="utf-8") if args.word_file else args.word
    if word_text is None:
        raise UsageError("give --word or --word-file")
    try:
        lw = parse_labeled_word(word_text)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"malformed labeled word: {exc}") from None
    missing = sorted({lab for lab, _ in lw} - set(fam))
    if missing:
        raise UsageError(f"labels without a --family file: {missing}")
    print(format_rational(mixed_moment(args.flavor, fam, lw)))
    return EXIT_OK


def cmd_verify(args) -> int:
    _warn_order(args.degree or 0)
    report = run_suite(
        args.suite, r=args.r, degree=args.degree, seed=args.seed, trials=args.trials,
        flavor=args.flavor, n=args.n, threads=args.threads,
    )
    if args.json:
        print(json.dumps(report.to_json(), indent=1))
    else:
        print(report.table())
    print(f"wall time: {report.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cumulantkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("partitions", help="enumerate or count partitions")
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--kind", choices=sorted(KIND_ALIASES), default="all")
    q.add_argument("--count-only", action="store_true")
    q.set_defaults(func=cmd_partitions)

    q = sub.add_parser("cumulants", help="cumulants from a moment file")
    q.add_argument("--flavor", choices=FLAVORS, required=True)
    q.add_argument("--method", choices=("dot", "partition", "both"), default="partition")
    q.add_argument("--moments", required=True, help="moment JSON file")
    q.add_argument("--max-order", type=_positive)
    q.add_argument("--out")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_cumulants)

    q = sub.add_parser("moments", help="moments from a cumulant file")
    q.add_argument("--flavor", choices=FLAVORS, help="defaults to the file's flavor")
    q.add_argument("--cumulants", required=True, help="cumulant JSON file")
    q.add_argument("--max-order", type=_positive)
    q.add_argument("--out")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_moments)

    q = sub.add_parser("mixed-moment", help="mixed moment of a labeled word")
    q.add_argument("--flavor", choices=FLAVORS, required=True)
    q.add_argument("--family", action="append", default=[], metavar="LABEL=FILE")
    q.add_argument("--word", help='labeled word, e.g. "1:1,2:1,1:1"')
    q.add_argument("--word-file", help='JSON file {"word": [{"label":1,"var":1}, ...]}')
    q.set_defaults(func=cmd_mixed_moment)

    q = sub.add_parser("verify", help="run an identity-verification suite")
    q.add_argument("--suite", choices=SUITES, required=True)
    q.add_argument("--r", type=_positive, default=2)
    q.add_argument("--degree", "--order", dest="degree", type=_positive)
    q.add_argument("--seed", type=int, default=42)
    q.add_argument("--trials", type=_positive, default=3)
    q.add_argument("--flavor", choices=FLAVORS)
    q.add_argument("--n", type=_positive, default=8)
    q.add_argument("--threads", type=_positive, default=1)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cumulantkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MomentDataError, MomentFileError, FileNotFoundError) as exc:
        print(f"cumulantkit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
