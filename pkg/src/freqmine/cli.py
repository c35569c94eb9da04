"""Command-line front end.

Subcommands: mine (frequent itemsets from a transaction CSV), rules
(association rules from transactions or a precomputed support table), recode
(survey export to transactions), check (randomized cross-validation of the
miners against the brute-force reference), and bench (synthetic sweeps).

Exit codes: 0 success, 1 data or validation error, 2 usage error, 3 check
found a mismatch.
"""

from __future__ import annotations

import argparse
import random
import string
import sys
from fractions import Fraction
from math import ceil

from . import __version__
from .apriori import MiningParams, apriori_mine, read_support_csv, write_frequent_csv
from .bench import SynthParams, emit_report, sweep
from .dataset import (
    ItemCatalog,
    SurveySchema,
    TransactionDb,
    parse_alias_csv,
    parse_survey,
    parse_transactions,
    serialize_transactions,
)
from .errors import MiningError, ValidationError
from .fpgrowth import fpgrowth_mine
from .oracle import brute_force_frequent, brute_force_rules
from .rules import generate_rules, write_rules_csv

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2
EXIT_CHECK_MISMATCH = 3


def _read_text(path: str) -> str:
    with open(path, "rb") as handle:
        data = handle.read()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ValidationError(f"{path}: not valid UTF-8 ({exc})") from None


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _positive_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError("must be in (0, 1]")
    return value


def _confidence_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError("must be in [0, 1]")
    return value


def _single_noncomma_char(text: str) -> str:
    if len(text) != 1 or text == ",":
        raise argparse.ArgumentTypeError("must be one character other than ','")
    return text


def _axis_values(text: str) -> list[float | int]:
    values: list[float | int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(float(part) if "." in part else int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {part!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated list of numbers")
    return values


def _add_support_options(parser: argparse.ArgumentParser, required: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument(
        "--min-support", type=int, metavar="N",
        help="absolute support threshold (transaction count)",
    )
    group.add_argument(
        "--min-support-frac", type=_positive_fraction, metavar="F",
        help="support threshold as a fraction of the database size, rounded up",
    )


def _resolve_support(args: argparse.Namespace, n: int) -> int:
    if args.min_support is not None:
        return args.min_support
    return max(1, ceil(args.min_support_frac * n))


def _load_aliases(args: argparse.Namespace):
    if getattr(args, "alias_file", None) is None:
        return None
    return parse_alias_csv(_read_text(args.alias_file))


def _mine_db(db: TransactionDb, threshold: int, algorithm: str):
    if algorithm == "apriori":
        return apriori_mine(db, threshold)
    if algorithm == "fpgrowth":
        return fpgrowth_mine(db, threshold)
    return brute_force_frequent(db, threshold)


def _cmd_mine(args: argparse.Namespace) -> int:
    db = parse_transactions(_read_text(args.input), _load_aliases(args))
    threshold = _resolve_support(args, db.n)
    freq = _mine_db(db, threshold, args.algorithm)
    _write_output(write_frequent_csv(freq, db.catalog), args.output)
    return EXIT_OK


def _cmd_rules(args: argparse.Namespace) -> int:
    sources = [s for s in (args.input, args.support_csv) if s is not None]
    if len(sources) != 1:
        print(
            "error: give either a transaction CSV or --support-csv, not both",
            file=sys.stderr,
        )
        return EXIT_USAGE
    if args.input is not None:
        if args.min_support is None and args.min_support_frac is None:
            print(
                "error: mining from transactions needs --min-support or "
                "--min-support-frac",
                file=sys.stderr,
            )
            return EXIT_USAGE
        db = parse_transactions(_read_text(args.input), _load_aliases(args))
        threshold = _resolve_support(args, db.n)
        freq = _mine_db(db, threshold, args.algorithm)
        catalog = db.catalog
    else:
        freq, catalog = read_support_csv(_read_text(args.support_csv))
    ruleset = generate_rules(freq, catalog, args.min_confidence, args.include_rejected)
    _write_output(write_rules_csv(ruleset, catalog), args.output)
    return EXIT_OK


def _cmd_recode(args: argparse.Namespace) -> int:
    schema = SurveySchema(
        age_column=args.age_column,
        impact_column=args.impact_column,
        multiselect_delimiter=args.delimiter,
        missing_age_label=args.missing_age_label,
    )
    db = parse_survey(_read_text(args.input), schema, _load_aliases(args))
    _write_output(serialize_transactions(db), args.output)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    failure = run_check(args.seed, args.cases)
    if failure is None:
        _write_output(f"ok: {args.cases} cases agree across all miners\n", args.output)
        return EXIT_OK
    print(failure, file=sys.stderr)
    return EXIT_CHECK_MISMATCH


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.axis == "min_support":
        if args.min_support is not None or args.min_support_frac is not None:
            print(
                "error: --axis min_support sweeps the threshold; do not also fix one",
                file=sys.stderr,
            )
            return EXIT_USAGE
    elif args.min_support is None and args.min_support_frac is None:
        print(
            "error: this axis needs --min-support or --min-support-frac",
            file=sys.stderr,
        )
        return EXIT_USAGE
    base = SynthParams(
        n_transactions=args.transactions,
        n_items=args.items,
        mean_len=args.mean_len,
        skew=args.skew,
        seed=args.seed,
    )
    report = sweep(
        base,
        args.axis,
        args.values,
        repetitions=args.reps,
        min_support=args.min_support,
        min_support_frac=args.min_support_frac,
    )
    _write_output(emit_report(report, args.format), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Randomized cross-check of the miners against the brute-force reference.

_CHECK_LABELS = string.ascii_lowercase


def _random_case(rng: random.Random) -> tuple[TransactionDb, int, Fraction]:
    n_items = rng.randint(1, 10)
    # Cubing biases toward small databases so 1000 cases stay fast while
    # occasionally exercising a couple hundred transactions.
    n_transactions = int((rng.random() ** 3) * 120)
    dense = rng.random() < 0.08
    catalog = ItemCatalog()
    for index in range(n_items):
        catalog.intern(_CHECK_LABELS[index])
    transactions = []
    for _ in range(n_transactions):
        if dense:
            length = rng.randint(max(1, n_items - 2), n_items)
        else:
            length = min(rng.randint(0, n_items), rng.randint(0, n_items))
        transactions.append(tuple(sorted(rng.sample(range(n_items), length))))
    db = TransactionDb(catalog, tuple(transactions))
    threshold = rng.randint(1, max(2, n_transactions // 2 + 1))
    confidence = Fraction(rng.randint(0, 20), 20)
    return db, threshold, confidence


def _find_mismatch(db: TransactionDb, threshold: int, confidence: Fraction) -> str | None:
    reference = brute_force_frequent(db, threshold)
    levelwise = apriori_mine(db, threshold)
    if levelwise.support != reference.support:
        return "apriori disagrees with brute force on frequent itemsets"
    treewise = fpgrowth_mine(db, threshold)
    if treewise.support != reference.support:
        return "fpgrowth disagrees with brute force on frequent itemsets"
    generated = generate_rules(levelwise, db.catalog, confidence, include_rejected=True)
    recounted = brute_force_rules(
        db, MiningParams(threshold, confidence), include_rejected=True
    )
    if generated != recounted:
        return "generate_rules disagrees with brute-force rule recounting"
    return None


def _shrink(
    db: TransactionDb, threshold: int, confidence: Fraction
) -> TransactionDb:
    """Greedy minimization: drop any transaction whose removal keeps the mismatch."""
    transactions = list(db.transactions)
    changed = True
    while changed:
        changed = False
        for index in range(len(transactions) - 1, -1, -1):
            candidate = TransactionDb(
                db.catalog, tuple(transactions[:index] + transactions[index + 1 :])
            )
            if _find_mismatch(candidate, threshold, confidence) is not None:
                del transactions[index]
                changed = True
    return TransactionDb(db.catalog, tuple(transactions))


def run_check(seed: int, cases: int) -> str | None:
    """Cross-validate the miners on random databases; None means all agreed.

    On a mismatch, returns a report containing the minimized database and the
    parameters that reproduce it.
    """
    rng = random.Random(seed)
    for case_index in range(cases):
        db, threshold, confidence = _random_case(rng)
        reason = _find_mismatch(db, threshold, confidence)
        if reason is None:
            continue
        small = _shrink(db, threshold, confidence)
        reason = _find_mismatch(small, threshold, confidence) or reason
        return (
            f"mismatch in case {case_index}: {reason}\n"
            f"min_support={threshold} min_confidence={confidence}\n"
            f"transactions ({small.n} rows):\n{serialize_transactions(small)}"
        )
    return None


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freqmine",
        description="Frequent-itemset and association-rule mining toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    mine = commands.add_parser("mine", help="mine frequent itemsets from a transaction CSV")
    mine.add_argument("input", help="transaction CSV, one transaction per row")
    mine.add_argument(
        "--algorithm", choices=("apriori", "fpgrowth", "bruteforce"), default="apriori"
    )
    _add_support_options(mine, required=True)
    mine.add_argument("--alias-file", help="raw_label,canonical_label CSV", default=None)
    mine.add_argument("--output", default=None, help="write here instead of stdout")
    mine.set_defaults(func=_cmd_mine)

    rules = commands.add_parser(
        "rules", help="generate association rules from transactions or support counts"
    )
    rules.add_argument(
        "input", nargs="?", default=None, help="transaction CSV (omit with --support-csv)"
    )
    rules.add_argument(
        "--support-csv",
        default=None,
        help="precomputed itemset,count CSV with '|'-joined labels",
    )
    rules.add_argument(
        "--min-confidence", type=_confidence_fraction, required=True, metavar="C",
        help="acceptance threshold; parsed exactly, so 0.40 means 2/5",
    )
    rules.add_argument(
        "--include-rejected", action="store_true",
        help="also emit rules below the confidence threshold",
    )
    rules.add_argument(
        "--algorithm", choices=("apriori", "fpgrowth", "bruteforce"), default="apriori"
    )
    _add_support_options(rules, required=False)
    rules.add_argument("--alias-file", default=None)
    rules.add_argument("--output", default=None)
    rules.set_defaults(func=_cmd_rules)

    recode = commands.add_parser(
        "recode", help="recode a survey export into a transaction CSV"
    )
    recode.add_argument("input", help="survey CSV with a header row")
    recode.add_argument("--age-column", default="age")
    recode.add_argument("--impact-column", default="impacts")
    recode.add_argument(
        "--delimiter", type=_single_noncomma_char, default=";",
        help="separator inside the multiselect cell",
    )
    recode.add_argument("--missing-age-label", default="Don't remember")
    recode.add_argument("--alias-file", default=None)
    recode.add_argument("--output", default=None)
    recode.set_defaults(func=_cmd_recode)

    check = commands.add_parser(
        "check", help="cross-validate the miners against the brute-force reference"
    )
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--cases", type=int, default=100)
    check.add_argument("--output", default=None)
    check.set_defaults(func=_cmd_check)

    bench = commands.add_parser("bench", help="benchmark the miners on synthetic data")
    bench.add_argument("--transactions", type=int, default=1000)
    bench.add_argument("--items", type=int, default=50)
    bench.add_argument("--mean-len", type=float, default=5.0)
    bench.add_argument("--skew", type=float, default=1.0)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--axis", choices=("min_support", "n_transactions", "mean_len", "n_items"), required=True)
    bench.add_argument(
        "--values", type=_axis_values, required=True,
        help="comma-separated axis values, e.g. 200,400,800",
    )
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_support_options(bench, required=False)
    bench.add_argument("--output", default=None)
    bench.set_defaults(func=_cmd_bench)

    return parser


def run_cli(argv: list[str]) -> int:
    """Parse arguments and dispatch; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help/--version.
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except MiningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
