"""Transaction databases: CSV ingestion, label interning, and survey recoding.

A transaction is a set of items. Items are interned strings: every distinct
label (after whitespace normalization and case folding) gets a dense integer
handle, and itemsets are sorted tuples of those handles. All mining code
downstream works on handles only; labels come back into play when rendering
output.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass

from .errors import CsvParseError, SchemaError, ValidationError

ItemId = int
Itemset = tuple[ItemId, ...]

_WS_RUN = re.compile(r"\s+")

AGE_BUCKETS = ("Under 18", "18-24", "25-34", "Above 35")
DEFAULT_MISSING_AGE_LABEL = "Don't remember"


def normalize_label(raw: str) -> str:
    """Identity key for a label: trimmed, inner whitespace collapsed, case folded."""
    return _WS_RUN.sub(" ", raw.strip()).casefold()


class ItemCatalog:
    """Interned item labels with dense integer handles.

    The display label keeps the first-seen trimmed spelling; lookups go
    through normalize_label, so later spellings differing only in case or
    whitespace map to the same handle.
    """

    def __init__(self) -> None:
        self._labels: list[str] = []
        self._handles: dict[str, ItemId] = {}

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ItemCatalog):
            return NotImplemented
        return self._labels == other._labels

    def __repr__(self) -> str:
        return f"ItemCatalog({len(self._labels)} items)"

    def intern(self, raw: str) -> ItemId:
        """Return the handle for raw, adding it to the catalog if new."""
        key = normalize_label(raw)
        if not key:
            raise ValidationError("cannot intern an empty label")
        handle = self._handles.get(key)
        if handle is None:
            handle = len(self._labels)
            self._labels.append(raw.strip())
            self._handles[key] = handle
        return handle

    def lookup(self, label: str) -> ItemId | None:
        """Handle for a label if it is known, else None. Normalizes first."""
        return self._handles.get(normalize_label(label))

    def label(self, item: ItemId) -> str:
        return self._labels[item]

    def labels_of(self, itemset: Itemset) -> tuple[str, ...]:
        return tuple(self._labels[i] for i in itemset)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self._labels)


@dataclass(frozen=True)
class TransactionDb:
    """An immutable transaction database over one catalog.

    Transactions are sorted tuples of handles with no duplicates; empty
    transactions are legal and count toward n.
    """

    catalog: ItemCatalog
    transactions: tuple[Itemset, ...]

    @property
    def n(self) -> int:
        """Number of transactions, empty ones included."""
        return len(self.transactions)


AliasMap = dict[str, str]


def parse_alias_csv(content: str) -> AliasMap:
    """Read a raw_label,canonical_label CSV into a map keyed by normalized raw label.

    Blank lines are skipped. Extra columns are ignored. A row with fewer than
    two fields raises ValidationError.
    """
    aliases: AliasMap = {}
    reader = csv.reader(io.StringIO(content), strict=True)
    try:
        for row in reader:
            if not any(field.strip() for field in row):
                continue
            if len(row) < 2:
                raise ValidationError(
                    f"alias line {reader.line_num}: expected raw_label,canonical_label"
                )
            aliases[normalize_label(row[0])] = row[1].strip()
    except csv.Error as exc:
        raise CsvParseError(f"line {reader.line_num}: {exc}") from exc
    return aliases


def _resolve_alias(raw: str, aliases: AliasMap | None) -> str:
    if aliases is None:
        return raw
    return aliases.get(normalize_label(raw), raw)


def _intern_labels(
    catalog: ItemCatalog, raw_labels: list[str], aliases: AliasMap | None
) -> Itemset:
    """Alias, intern, dedupe, and sort one row's worth of labels; blanks dropped."""
    seen: set[ItemId] = set()
    for raw in raw_labels:
        if not raw.strip():
            continue
        resolved = _resolve_alias(raw, aliases)
        if not resolved.strip():
            continue
        seen.add(catalog.intern(resolved))
    return tuple(sorted(seen))


def parse_transactions(content: str, aliases: AliasMap | None = None) -> TransactionDb:
    """Parse one-transaction-per-row CSV into an interned database.

    Every field is an item label. Blank fields are skipped, duplicates within
    a row collapse to one item, and rows may have differing field counts. An
    empty row becomes an empty transaction and still counts toward n. Quoting
    errors raise CsvParseError with the offending line number.
    """
    catalog = ItemCatalog()
    transactions: list[Itemset] = []
    reader = csv.reader(io.StringIO(content), strict=True)
    try:
        for row in reader:
            transactions.append(_intern_labels(catalog, row, aliases))
    except csv.Error as exc:
        raise CsvParseError(f"line {reader.line_num}: {exc}") from exc
    return TransactionDb(catalog, tuple(transactions))


def serialize_transactions(db: TransactionDb) -> str:
    """Render the database back to CSV, one row per transaction, labels in handle order."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for transaction in db.transactions:
        writer.writerow(db.catalog.labels_of(transaction))
    return buffer.getvalue()


def item_frequencies(db: TransactionDb) -> dict[ItemId, int]:
    """Count, per item, the number of transactions containing it.

    Presence counts, not multiplicity; transactions are already duplicate-free.
    Items never seen are absent from the result.
    """
    counts: dict[ItemId, int] = {}
    for transaction in db.transactions:
        for item in transaction:
            counts[item] = counts.get(item, 0) + 1
    return counts


def bucket_age(age: int | None, missing_label: str = DEFAULT_MISSING_AGE_LABEL) -> str:
    """Map an age in years onto its bucket label.

    None means the age was not given and maps to missing_label. Buckets:
    under 18, 18-24, 25-34, and 35 or older. Negative ages are rejected.
    """
    if age is None:
        return missing_label
    if age < 0:
        raise ValidationError(f"negative age: {age}")
    if age < 18:
        return AGE_BUCKETS[0]
    if age <= 24:
        return AGE_BUCKETS[1]
    if age <= 34:
        return AGE_BUCKETS[2]
    return AGE_BUCKETS[3]


@dataclass(frozen=True)
class SurveySchema:
    """Column layout of a survey export.

    multiselect_delimiter separates the impact answers inside one cell; it
    must be a single character other than the comma so it cannot collide
    with the CSV field separator.
    """

    age_column: str = "age"
    impact_column: str = "impacts"
    multiselect_delimiter: str = ";"
    missing_age_label: str = DEFAULT_MISSING_AGE_LABEL

    def __post_init__(self) -> None:
        if len(self.multiselect_delimiter) != 1 or self.multiselect_delimiter == ",":
            raise ValidationError(
                "multiselect delimiter must be a single character other than ','"
            )


def _parse_age(cell: str, schema: SurveySchema) -> int | None:
    text = cell.strip()
    if not text:
        return None
    if normalize_label(text) == normalize_label(schema.missing_age_label):
        return None
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"survey age is not an integer: {cell!r}") from None


def parse_survey(
    content: str, schema: SurveySchema, aliases: AliasMap | None = None
) -> TransactionDb:
    """Recode a survey export into transactions.

    Each response row becomes one transaction holding its age-bucket item plus
    every impact selected in the multiselect cell. The first row must be a
    header naming both schema columns; a missing column raises SchemaError.
    Missing or marker-valued ages recode to the missing-age bucket; a
    non-integer age raises ValidationError, as does a negative one.
    """
    reader = csv.reader(io.StringIO(content), strict=True)
    try:
        header = next(reader, None)
    except csv.Error as exc:
        raise CsvParseError(f"line {reader.line_num}: {exc}") from exc
    if header is None:
        raise SchemaError("survey file has no header row")
    positions = {name.strip(): index for index, name in enumerate(header)}
    for column in (schema.age_column, schema.impact_column):
        if column not in positions:
            raise SchemaError(f"missing survey column: {column!r}")
    age_at = positions[schema.age_column]
    impact_at = positions[schema.impact_column]

    catalog = ItemCatalog()
    transactions: list[Itemset] = []
    try:
        for row in reader:
            age_cell = row[age_at] if age_at < len(row) else ""
            impact_cell = row[impact_at] if impact_at < len(row) else ""
            age = _parse_age(age_cell, schema)
            labels = [bucket_age(age, schema.missing_age_label)]
            labels.extend(impact_cell.split(schema.multiselect_delimiter))
            transactions.append(_intern_labels(catalog, labels, aliases))
    except csv.Error as exc:
        raise CsvParseError(f"line {reader.line_num}: {exc}") from exc
    return TransactionDb(catalog, tuple(transactions))
