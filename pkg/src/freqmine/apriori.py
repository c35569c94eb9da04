"""Levelwise frequent-itemset mining.

Candidates of size k+1 are joined from frequent k-itemsets sharing a prefix,
pruned by downward closure, then counted against the database. Level sets are
materialized per level; there is no transaction reduction and no candidate
hashing, so the work done is exactly the candidates tested.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .dataset import ItemCatalog, ItemId, Itemset, TransactionDb, item_frequencies
from .errors import ContractViolationError, CsvParseError, ValidationError

CandidateSet = set[Itemset]

FREQUENT_CSV_HEADER = ("itemset", "support")
LABEL_JOINER = "|"

# count_support switches to a per-candidate bitmask scan when per-transaction
# subset enumeration would do more work; both paths produce identical tallies.
_SUBSET_ENUMERATION_CAP = 200_000_000


@dataclass(frozen=True)
class MiningParams:
    """Thresholds shared by mining and rule generation.

    min_support is an absolute transaction count. min_confidence may be a
    float or an exact Fraction; a Fraction makes boundary comparisons exact.
    """

    min_support: int
    min_confidence: float | Fraction = 0.0

    def __post_init__(self) -> None:
        if self.min_support < 1:
            raise ValidationError(f"min_support must be >= 1, got {self.min_support}")
        if not 0 <= self.min_confidence <= 1:
            raise ValidationError(
                f"min_confidence must be in [0, 1], got {self.min_confidence}"
            )


@dataclass
class FrequentItemsets:
    """Mining result: itemset -> absolute support count, plus the database size."""

    support: dict[Itemset, int]
    n: int


@dataclass
class AprioriStats:
    """Work counters from one mining run.

    level_candidates records (itemset size, candidates counted) per level,
    starting with the distinct singletons. The counters depend only on the
    database and threshold, never on timing.
    """

    level_candidates: list[tuple[int, int]] = field(default_factory=list)

    @property
    def candidates_tested(self) -> int:
        return sum(count for _, count in self.level_candidates)


def threshold_singletons(
    counts: Mapping[ItemId, int], min_support: int
) -> dict[Itemset, int]:
    """Frequent 1-itemsets from an item-frequency map; threshold is inclusive."""
    return {
        (item,): count
        for item, count in sorted(counts.items())
        if count >= min_support
    }


def join_candidates(level: Iterable[Itemset]) -> CandidateSet:
    """Join k-itemsets sharing their first k-1 items into k+1 candidates.

    Input itemsets must all have the same size k >= 1; mixed sizes raise
    ContractViolationError. An empty level yields an empty candidate set.
    """
    itemsets = list(level)
    if not itemsets:
        return set()
    k = len(itemsets[0])
    if k < 1 or any(len(s) != k for s in itemsets):
        raise ContractViolationError("join requires itemsets of one uniform size >= 1")
    by_prefix: dict[Itemset, list[ItemId]] = {}
    for itemset in itemsets:
        by_prefix.setdefault(itemset[:-1], []).append(itemset[-1])
    candidates: CandidateSet = set()
    for prefix, lasts in by_prefix.items():
        lasts.sort()
        for i, first in enumerate(lasts):
            for second in lasts[i + 1 :]:
                candidates.add(prefix + (first, second))
    return candidates


def prune_candidates(candidates: CandidateSet, level: Iterable[Itemset]) -> CandidateSet:
    """Keep only candidates whose every one-smaller subset is in the level set."""
    level_set = set(level)
    kept: CandidateSet = set()
    for candidate in candidates:
        subsets = combinations(candidate, len(candidate) - 1)
        if all(subset in level_set for subset in subsets):
            kept.add(candidate)
    return kept


def _transaction_mask(itemset: Itemset) -> int:
    mask = 0
    for item in itemset:
        mask |= 1 << item
    return mask


def count_support(db: TransactionDb, candidates: Iterable[Itemset]) -> dict[Itemset, int]:
    """Support count of every candidate, including zeros.

    Strategy is picked deterministically from the input shape: either each
    transaction's k-subsets over candidate items are enumerated and probed
    against the candidate set, or each candidate is scanned over transaction
    bitmasks. Tallies are identical either way.
    """
    counts: Counter[Itemset] = Counter(dict.fromkeys(sorted(candidates), 0))
    if not counts or not db.transactions:
        return counts
    catalog_size = len(db.catalog)
    for candidate in counts:
        for item in candidate:
            if not 0 <= item < catalog_size:
                raise ContractViolationError(
                    f"item handle {item} outside catalog of size {catalog_size}"
                )

    sizes = {len(candidate) for candidate in counts}
    if len(sizes) == 1:
        k = sizes.pop()
        if k >= 1:
            relevant: set[ItemId] = set()
            for candidate in counts:
                relevant.update(candidate)
            scan_cost = len(counts) * db.n
            filtered: Sequence[Sequence[ItemId]]
            if len(relevant) == catalog_size:
                # Projection would copy every transaction unchanged.
                filtered = db.transactions
                enumeration_cost = sum(
                    math.comb(len(t), k) for t in db.transactions
                )
            else:
                projected = []
                enumeration_cost = 0
                for transaction in db.transactions:
                    items = [item for item in transaction if item in relevant]
                    projected.append(items)
                    enumeration_cost += math.comb(len(items), k)
                filtered = projected
            if enumeration_cost <= min(scan_cost, _SUBSET_ENUMERATION_CAP):
                # Counter.update() keeps the whole tally loop in C. On dense
                # levels, where at least 3/5 of the possible k-subsets over
                # the relevant items are candidates, probing costs more than
                # it saves: count every subset, then read back exactly the
                # candidate tallies (stray keys are at most 2/3 the number
                # of candidates, by the same density bound).
                if 5 * len(counts) >= 3 * math.comb(len(relevant), k):
                    bulk: Counter[Itemset] = Counter()
                    tally = bulk.update
                    for items in filtered:
                        if len(items) >= k:
                            tally(combinations(items, k))
                    for candidate in counts:
                        counts[candidate] = bulk[candidate]
                    return counts
                # Sparse level: the membership probe keeps stray subsets out.
                is_candidate = counts.__contains__
                tally = counts.update
                for items in filtered:
                    if len(items) >= k:
                        tally(filter(is_candidate, combinations(items, k)))
                return counts

    masks = [_transaction_mask(t) for t in db.transactions]
    for candidate in counts:
        candidate_mask = _transaction_mask(candidate)
        counts[candidate] = sum(
            1 for mask in masks if candidate_mask & mask == candidate_mask
        )
    return counts


def apriori_mine(
    db: TransactionDb, min_support: int, stats: AprioriStats | None = None
) -> FrequentItemsets:
    """Mine all itemsets with support >= min_support, levelwise.

    Level 1 thresholds the item frequencies; each later level joins, prunes,
    counts, and thresholds until no candidates survive. The result maps every
    frequent itemset to its exact support count.
    """
    if min_support < 1:
        raise ValidationError(f"min_support must be >= 1, got {min_support}")
    counts = item_frequencies(db)
    if stats is not None:
        stats.level_candidates.append((1, len(counts)))
    level_support = threshold_singletons(counts, min_support)
    support: dict[Itemset, int] = dict(level_support)
    level: set[Itemset] = set(level_support)
    while level:
        candidates = prune_candidates(join_candidates(level), level)
        if not candidates:
            break
        if stats is not None:
            size = len(next(iter(candidates)))
            stats.level_candidates.append((size, len(candidates)))
        tallies = count_support(db, candidates)
        level = set()
        for candidate in sorted(tallies):
            count = tallies[candidate]
            if count >= min_support:
                support[candidate] = count
                level.add(candidate)
    return FrequentItemsets(support, db.n)


def sorted_itemsets(freq: FrequentItemsets, catalog: ItemCatalog) -> list[Itemset]:
    """Itemsets ordered by size, then lexicographically by display labels."""
    return sorted(freq.support, key=lambda s: (len(s), catalog.labels_of(s)))


def write_frequent_csv(freq: FrequentItemsets, catalog: ItemCatalog) -> str:
    """Render itemset,support rows with '|'-joined labels, sized-then-label order."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(FREQUENT_CSV_HEADER)
    for itemset in sorted_itemsets(freq, catalog):
        labels = LABEL_JOINER.join(catalog.labels_of(itemset))
        writer.writerow([labels, freq.support[itemset]])
    return buffer.getvalue()


def read_support_csv(content: str) -> tuple[FrequentItemsets, ItemCatalog]:
    """Parse an itemset,count CSV into a support table and its catalog.

    The header row is optional ("itemset,support" or "itemset,count"). Labels
    within a row are '|'-separated. When no database size accompanies the
    counts, n is taken as the largest count seen. Conflicting duplicate rows
    raise ValidationError; identical duplicates collapse.
    """
    catalog = ItemCatalog()
    support: dict[Itemset, int] = {}
    reader = csv.reader(io.StringIO(content), strict=True)
    try:
        rows = list(reader)
    except csv.Error as exc:
        raise CsvParseError(f"line {reader.line_num}: {exc}") from exc
    if rows and tuple(cell.strip().casefold() for cell in rows[0][:2]) in {
        ("itemset", "support"),
        ("itemset", "count"),
    }:
        rows = rows[1:]
    for line_index, row in enumerate(rows, start=1):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise ValidationError(f"support row {line_index}: expected itemset,count")
        labels = [part for part in row[0].split(LABEL_JOINER) if part.strip()]
        if not labels:
            raise ValidationError(f"support row {line_index}: empty itemset")
        try:
            count = int(row[1])
        except ValueError:
            raise ValidationError(
                f"support row {line_index}: count is not an integer: {row[1]!r}"
            ) from None
        if count < 1:
            raise ValidationError(f"support row {line_index}: count must be >= 1")
        itemset = tuple(sorted({catalog.intern(label) for label in labels}))
        previous = support.get(itemset)
        if previous is not None and previous != count:
            raise ValidationError(
                f"support row {line_index}: conflicting counts for {row[0]!r}"
            )
        support[itemset] = count
    n = max(support.values(), default=0)
    return FrequentItemsets(support, n), catalog
