"""Synthetic transaction generation and the miner comparison harness.

Workloads are reproducible: given the same parameters, the generated database
is byte-identical across runs and platforms. Trials measure wall time plus
deterministic work and memory proxies, so the timing columns are the only
ones that vary between repeated runs.
"""

from __future__ import annotations

import csv
import gc
import io
import json
import math
import random
import statistics
import sys
import time
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import accumulate
from typing import Sequence

from .apriori import AprioriStats, apriori_mine
from .dataset import ItemCatalog, TransactionDb
from .errors import ValidationError
from .fpgrowth import TreeStats, fpgrowth_mine

APRIORI = "apriori"
FPGROWTH = "fpgrowth"
ALGORITHMS = (APRIORI, FPGROWTH)

AXES = ("min_support", "n_transactions", "mean_len", "n_items")

# Fixed memory model so reports compare across platforms: a k-itemset costs a
# tuple of k machine words, a tree node one fixed object footprint. These are
# accounting constants, not a claim about the interpreter's real allocations.
ITEMSET_BASE_BYTES = 56
ITEMSET_WORD_BYTES = 8
TREE_NODE_BYTES = 160

CSV_COLUMNS = (
    "axis",
    "axis_value",
    "algorithm",
    "rep_count",
    "wall_ns_median",
    "mem_proxy_bytes",
    "rss_peak_bytes_or_-1",
    "n_frequent",
    "work_counter",
)


@dataclass(frozen=True)
class SynthParams:
    """Synthetic workload shape.

    mean_len is the Poisson mean of transaction lengths before clamping to
    [1, n_items]. skew shapes the item popularity law: rank r is drawn with
    weight (r + 1) ** -skew, so 0 means uniform.
    """

    n_transactions: int
    n_items: int
    mean_len: float
    skew: float
    seed: int

    def __post_init__(self) -> None:
        if self.n_transactions < 0:
            raise ValidationError(f"n_transactions must be >= 0, got {self.n_transactions}")
        if self.n_items < 1:
            raise ValidationError(f"n_items must be >= 1, got {self.n_items}")
        if not self.mean_len > 0:
            raise ValidationError(f"mean_len must be > 0, got {self.mean_len}")
        if self.mean_len > self.n_items:
            raise ValidationError(
                f"mean_len must be <= n_items, got {self.mean_len} > {self.n_items}"
            )
        if self.skew < 0:
            raise ValidationError(f"skew must be >= 0, got {self.skew}")


def _poisson(rng: random.Random, lam: float) -> int:
    """Poisson sample via the product-of-uniforms method.

    For large means the product underflows, so a normal approximation built
    from twelve uniforms takes over; both consume only rng.random().
    """
    if lam > 500:
        z = sum(rng.random() for _ in range(12)) - 6.0
        return max(0, round(lam + math.sqrt(lam) * z))
    limit = math.exp(-lam)
    k = 0
    product = 1.0
    while True:
        product *= rng.random()
        if product <= limit:
            return k
        k += 1


def _sample_distinct(
    rng: random.Random, weights: Sequence[float], cumulative: Sequence[float], count: int
) -> list[int]:
    """Draw `count` distinct indices by weight.

    Rejection sampling against the cumulative weights, with a bounded number
    of attempts; if collisions exhaust the budget (tiny pools, heavy skew),
    the remainder is drawn by renormalizing over the unchosen indices so the
    draw always terminates.
    """
    n = len(weights)
    if count >= n:
        return list(range(n))
    total = cumulative[-1]
    chosen: set[int] = set()
    attempts = 0
    budget = 32 * count + 100
    while len(chosen) < count and attempts < budget:
        index = bisect_right(cumulative, rng.random() * total)
        chosen.add(min(index, n - 1))
        attempts += 1
    if len(chosen) < count:
        remaining = [i for i in range(n) if i not in chosen]
        while len(chosen) < count:
            rest_total = sum(weights[i] for i in remaining)
            target = rng.random() * rest_total
            acc = 0.0
            pick = remaining[-1]
            for i in remaining:
                acc += weights[i]
                if target < acc:
                    pick = i
                    break
            chosen.add(pick)
            remaining.remove(pick)
    return sorted(chosen)


def generate_synthetic(params: SynthParams) -> TransactionDb:
    """Deterministic synthetic database for the given parameters.

    Only random.Random.random() is consumed, the one generator method whose
    stream is guaranteed stable across Python versions, so equal params give
    an identical database anywhere. Labels are zero-padded so label order
    equals handle order.
    """
    rng = random.Random(params.seed)
    catalog = ItemCatalog()
    width = len(str(params.n_items - 1)) if params.n_items > 1 else 1
    for k in range(params.n_items):
        catalog.intern(f"i{k:0{width}d}")
    weights = [(rank + 1) ** -params.skew for rank in range(params.n_items)]
    cumulative = list(accumulate(weights))
    transactions = []
    for _ in range(params.n_transactions):
        length = min(max(_poisson(rng, params.mean_len), 1), params.n_items)
        transactions.append(tuple(_sample_distinct(rng, weights, cumulative, length)))
    return TransactionDb(catalog, tuple(transactions))


@dataclass
class TrialMeasurement:
    """One mining run: wall time plus deterministic work and memory proxies.

    rss_peak_bytes is the process-lifetime peak from the OS, or -1 where
    unavailable; mem_proxy_bytes is the platform-independent model figure.
    """

    algorithm: str
    wall_ns: int
    mem_proxy_bytes: int
    rss_peak_bytes: int
    n_frequent: int
    work_counter: int


def _peak_rss_bytes() -> int:
    try:
        import resource
    except ImportError:
        return -1
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    # ru_maxrss is kilobytes on Linux, bytes on macOS.
    return peak if sys.platform == "darwin" else peak * 1024


def run_trial(db: TransactionDb, min_support: int, algorithm: str) -> TrialMeasurement:
    """Mine once and measure.

    The work counter is candidates tested for the levelwise miner and tree
    nodes created (conditional trees included) for FP-Growth; the memory
    proxy is the peak candidate-level footprint or the peak count of live
    tree nodes, under the fixed byte model. The cyclic collector is paused
    while the clock runs (as timeit does) so collector pauses don't land in
    one trial's wall time; everything the trial allocated is collected after
    the clock stops.
    """
    if algorithm not in (APRIORI, FPGROWTH):
        raise ValidationError(f"unknown algorithm: {algorithm!r}")
    collector_was_on = gc.isenabled()
    gc.disable()
    try:
        if algorithm == APRIORI:
            apriori_stats = AprioriStats()
            started = time.perf_counter_ns()
            freq = apriori_mine(db, min_support, stats=apriori_stats)
            wall = time.perf_counter_ns() - started
            work = apriori_stats.candidates_tested
            mem = max(
                (
                    count * (ITEMSET_BASE_BYTES + ITEMSET_WORD_BYTES * size)
                    for size, count in apriori_stats.level_candidates
                ),
                default=0,
            )
        else:
            tree_stats = TreeStats()
            started = time.perf_counter_ns()
            freq = fpgrowth_mine(db, min_support, stats=tree_stats)
            wall = time.perf_counter_ns() - started
            work = tree_stats.nodes_created
            mem = tree_stats.peak_alive_nodes * TREE_NODE_BYTES
    finally:
        if collector_was_on:
            gc.enable()
    n_frequent = len(freq.support)
    del freq
    gc.collect()
    return TrialMeasurement(algorithm, wall, mem, _peak_rss_bytes(), n_frequent, work)


@dataclass
class ReportRow:
    """One (axis value, algorithm) aggregate: median wall time over reps."""

    axis: str
    axis_value: float | int
    algorithm: str
    rep_count: int
    wall_ns_median: float | int
    mem_proxy_bytes: int
    rss_peak_bytes: int
    n_frequent: int
    work_counter: int


@dataclass
class BenchReport:
    """Sweep output: the configuration echo plus one row per (value, algorithm)."""

    config: dict
    rows: list[ReportRow] = field(default_factory=list)


def summarize(
    axis: str, axis_value: float | int, trials: list[TrialMeasurement]
) -> ReportRow:
    """Collapse repeated trials of one algorithm into a report row.

    Wall time takes the median; the deterministic fields are identical across
    repetitions by construction, so the first trial supplies them.
    """
    if not trials:
        raise ValidationError("summarize requires at least one trial")
    first = trials[0]
    wall = statistics.median(trial.wall_ns for trial in trials)
    return ReportRow(
        axis,
        axis_value,
        first.algorithm,
        len(trials),
        wall,
        first.mem_proxy_bytes,
        first.rss_peak_bytes,
        first.n_frequent,
        first.work_counter,
    )


def _axis_params(base: SynthParams, axis: str, value: float | int) -> SynthParams:
    if axis in ("n_transactions", "n_items"):
        as_int = int(value)
        if as_int != value:
            raise ValidationError(f"axis value {value!r}: {axis} must be an integer")
        value = as_int
    try:
        return replace(base, **{axis: value})
    except ValidationError as exc:
        raise ValidationError(f"axis value {value!r}: {exc}") from exc


def sweep(
    base: SynthParams,
    axis: str,
    values: Sequence[float | int],
    repetitions: int = 5,
    min_support: int | None = None,
    min_support_frac: Fraction | None = None,
) -> BenchReport:
    """Run both miners at every axis value; rows are ordered by axis value.

    Sweeping min_support reuses one generated database and treats the values
    as thresholds; sweeping a shape parameter regenerates the database per
    value and fixes the threshold, given either absolutely or as a fraction
    of the database size (rounded up).
    """
    if axis not in AXES:
        raise ValidationError(f"unknown sweep axis: {axis!r}")
    if not values:
        raise ValidationError("sweep requires at least one axis value")
    if repetitions < 1:
        raise ValidationError(f"repetitions must be >= 1, got {repetitions}")
    if axis == "min_support":
        if min_support is not None or min_support_frac is not None:
            raise ValidationError(
                "min_support is the swept axis; do not also fix a threshold"
            )
    elif (min_support is None) == (min_support_frac is None):
        raise ValidationError(
            "exactly one of min_support or min_support_frac is required"
        )

    config = {
        "axis": axis,
        "values": [v for v in sorted(values)],
        "repetitions": repetitions,
        "n_transactions": base.n_transactions,
        "n_items": base.n_items,
        "mean_len": base.mean_len,
        "skew": base.skew,
        "seed": base.seed,
        "min_support": min_support,
        "min_support_frac": str(min_support_frac) if min_support_frac is not None else None,
    }
    shared_db = generate_synthetic(base) if axis == "min_support" else None
    rows: list[ReportRow] = []
    for value in sorted(values):
        if axis == "min_support":
            threshold = int(value)
            if threshold != value or threshold < 1:
                raise ValidationError(
                    f"axis value {value!r}: min_support must be an integer >= 1"
                )
            db = shared_db
        else:
            db = generate_synthetic(_axis_params(base, axis, value))
            if min_support is not None:
                threshold = min_support
            else:
                threshold = max(1, math.ceil(min_support_frac * db.n))
        for algorithm in ALGORITHMS:
            trials = [run_trial(db, threshold, algorithm) for _ in range(repetitions)]
            rows.append(summarize(axis, value, trials))
    return BenchReport(config, rows)


def _number_to_text(value: float | int) -> str:
    return str(value)


def _number_from_text(text: str) -> float | int:
    if "." in text or "e" in text or "E" in text:
        return float(text)
    return int(text)


def _row_record(row: ReportRow) -> dict:
    return {
        "axis": row.axis,
        "axis_value": row.axis_value,
        "algorithm": row.algorithm,
        "rep_count": row.rep_count,
        "wall_ns_median": row.wall_ns_median,
        "mem_proxy_bytes": row.mem_proxy_bytes,
        "rss_peak_bytes_or_-1": row.rss_peak_bytes,
        "n_frequent": row.n_frequent,
        "work_counter": row.work_counter,
    }


def emit_report(report: BenchReport, fmt: str = "csv") -> str:
    """Render a report as CSV (rows only) or JSON (config echo plus rows)."""
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(
                [
                    row.axis,
                    _number_to_text(row.axis_value),
                    row.algorithm,
                    row.rep_count,
                    _number_to_text(row.wall_ns_median),
                    row.mem_proxy_bytes,
                    row.rss_peak_bytes,
                    row.n_frequent,
                    row.work_counter,
                ]
            )
        return buffer.getvalue()
    if fmt == "json":
        payload = {
            "config": report.config,
            "rows": [_row_record(row) for row in report.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    raise ValidationError(f"unknown report format: {fmt!r}")


def _row_from_fields(fields: dict) -> ReportRow:
    return ReportRow(
        axis=fields["axis"],
        axis_value=fields["axis_value"],
        algorithm=fields["algorithm"],
        rep_count=int(fields["rep_count"]),
        wall_ns_median=fields["wall_ns_median"],
        mem_proxy_bytes=int(fields["mem_proxy_bytes"]),
        rss_peak_bytes=int(fields["rss_peak_bytes_or_-1"]),
        n_frequent=int(fields["n_frequent"]),
        work_counter=int(fields["work_counter"]),
    )


def parse_report(content: str, fmt: str = "csv") -> BenchReport:
    """Parse emit_report output back; CSV reports carry an empty config."""
    if fmt == "csv":
        reader = csv.reader(io.StringIO(content))
        rows = list(reader)
        if not rows or tuple(rows[0]) != CSV_COLUMNS:
            raise ValidationError("report CSV is missing its header row")
        parsed = []
        for row in rows[1:]:
            if len(row) != len(CSV_COLUMNS):
                raise ValidationError(f"report row has {len(row)} columns")
            fields = dict(zip(CSV_COLUMNS, row))
            fields["axis_value"] = _number_from_text(fields["axis_value"])
            fields["wall_ns_median"] = _number_from_text(fields["wall_ns_median"])
            parsed.append(_row_from_fields(fields))
        return BenchReport({}, parsed)
    if fmt == "json":
        payload = json.loads(content)
        parsed = [_row_from_fields(fields) for fields in payload["rows"]]
        return BenchReport(payload.get("config", {}), parsed)
    raise ValidationError(f"unknown report format: {fmt!r}")
