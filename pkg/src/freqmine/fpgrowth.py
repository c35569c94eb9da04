"""FP-Growth mining over a prefix tree with per-item node-link chains.

Transactions are rewritten in descending item-frequency order (label order
breaks ties) so shared prefixes share nodes. Mining walks the header table
from the least frequent item upward, projecting a conditional pattern base
and a conditional tree per item. Output matches the levelwise miner exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .apriori import FrequentItemsets
from .dataset import ItemCatalog, ItemId, Itemset, TransactionDb, item_frequencies
from .errors import ValidationError

# Sentinel item for the root node; never a valid catalog handle.
ROOT_ITEM: ItemId = -1


class FPNode:
    """One prefix-tree node; next_same_item threads the per-item chain."""

    __slots__ = ("item", "count", "parent", "children", "next_same_item")

    def __init__(self, item: ItemId, parent: "FPNode | None") -> None:
        self.item = item
        self.count = 0
        self.parent = parent
        self.children: dict[ItemId, FPNode] = {}
        self.next_same_item: FPNode | None = None

    def __repr__(self) -> str:
        return f"FPNode(item={self.item}, count={self.count})"


@dataclass
class HeaderEntry:
    """Header-table row: an item, its total support, and its chain head."""

    item: ItemId
    total: int
    head: FPNode


class HeaderTable:
    """Per-item index ordered by descending total, ties by ascending label."""

    def __init__(self, entries: list[HeaderEntry]) -> None:
        self.entries = entries
        self._by_item = {entry.item: entry for entry in entries}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[HeaderEntry]:
        return iter(self.entries)

    def __contains__(self, item: ItemId) -> bool:
        return item in self._by_item

    def entry(self, item: ItemId) -> HeaderEntry:
        """Entry for an item; unknown items raise KeyError."""
        return self._by_item[item]


class FPTree:
    """Prefix tree of frequency-ordered transactions."""

    def __init__(self, catalog: ItemCatalog) -> None:
        self.catalog = catalog
        self.root = FPNode(ROOT_ITEM, None)
        self.node_count = 0


@dataclass
class TreeStats:
    """Node-creation counters across a mining run, conditional trees included."""

    nodes_created: int = 0
    alive_nodes: int = 0
    peak_alive_nodes: int = 0

    def created(self, count: int = 1) -> None:
        self.nodes_created += count
        self.alive_nodes += count
        if self.alive_nodes > self.peak_alive_nodes:
            self.peak_alive_nodes = self.alive_nodes

    def freed(self, count: int) -> None:
        self.alive_nodes -= count


@dataclass
class ConditionalPatternBase:
    """Prefix paths (root-to-parent order) with their counts, for one item."""

    paths: list[tuple[tuple[ItemId, ...], int]] = field(default_factory=list)


def order_transaction(
    transaction: Itemset,
    counts: Mapping[ItemId, int],
    min_support: int,
    catalog: ItemCatalog,
) -> tuple[ItemId, ...]:
    """Frequency-ordered view of a transaction.

    Items below min_support are dropped; the rest sort by descending count
    with ties broken by ascending display label.
    """
    kept = [item for item in transaction if counts.get(item, 0) >= min_support]
    kept.sort(key=lambda item: (-counts[item], catalog.label(item)))
    return tuple(kept)


def _insert(
    tree: FPTree,
    sequence: Sequence[ItemId],
    count: int,
    heads: dict[ItemId, FPNode],
    tails: dict[ItemId, FPNode],
    stats: TreeStats | None,
) -> None:
    """Add one ordered sequence with a count, extending chains at the tail."""
    node = tree.root
    created = 0
    for item in sequence:
        children = node.children
        child = children.get(item)
        if child is None:
            child = FPNode(item, node)
            children[item] = child
            created += 1
            tail = tails.get(item)
            if tail is None:
                heads[item] = child
            else:
                tail.next_same_item = child
            tails[item] = child
        child.count += count
        node = child
    if created:
        tree.node_count += created
        if stats is not None:
            stats.created(created)


def _header_from(
    totals: Mapping[ItemId, int], heads: dict[ItemId, FPNode], catalog: ItemCatalog
) -> HeaderTable:
    order = sorted(totals, key=lambda item: (-totals[item], catalog.label(item)))
    return HeaderTable([HeaderEntry(item, totals[item], heads[item]) for item in order])


def build_fptree(
    db: TransactionDb, min_support: int, stats: TreeStats | None = None
) -> tuple[FPTree, HeaderTable]:
    """Two-pass construction: count items, then insert each ordered transaction.

    The header table contains exactly the items with support >= min_support;
    every frequent item appears in at least one transaction, so every header
    entry has a chain.
    """
    if min_support < 1:
        raise ValidationError(f"min_support must be >= 1, got {min_support}")
    counts = item_frequencies(db)
    frequent = {item: c for item, c in counts.items() if c >= min_support}
    # Ranks encode the (-count, label) order once so per-transaction sorting
    # stays cheap; the resulting order matches order_transaction exactly.
    order = sorted(frequent, key=lambda item: (-frequent[item], db.catalog.label(item)))
    rank = {item: position for position, item in enumerate(order)}
    rank_of = rank.__getitem__
    tree = FPTree(db.catalog)
    heads: dict[ItemId, FPNode] = {}
    tails: dict[ItemId, FPNode] = {}
    for transaction in db.transactions:
        sequence = [item for item in transaction if item in rank]
        if sequence:
            sequence.sort(key=rank_of)
            _insert(tree, sequence, 1, heads, tails, stats)
    return tree, _header_from(frequent, heads, db.catalog)


def conditional_pattern_base(
    tree: FPTree, header: HeaderTable, item: ItemId
) -> ConditionalPatternBase:
    """Every root-to-parent path above the item's nodes, with the node counts.

    Paths follow the chain order; a node directly under the root contributes
    an empty path whose count still participates in conditional totals.
    Unknown items raise KeyError via the header lookup.
    """
    entry = header.entry(item)
    base = ConditionalPatternBase()
    paths_append = base.paths.append
    root = tree.root
    node: FPNode | None = entry.head
    while node is not None:
        prefix: list[ItemId] = []
        prefix_append = prefix.append
        above = node.parent
        while above is not root:
            prefix_append(above.item)
            above = above.parent
        prefix.reverse()
        paths_append((tuple(prefix), node.count))
        node = node.next_same_item
    return base


def build_conditional_tree(
    base: ConditionalPatternBase,
    min_support: int,
    catalog: ItemCatalog,
    stats: TreeStats | None = None,
) -> tuple[FPTree, HeaderTable]:
    """Re-insert the base's paths weighted by their counts, filtered by total.

    Items whose summed path counts fall below min_support are dropped before
    insertion. An empty base (or one where nothing survives) yields an empty
    tree and an empty header.
    """
    totals: dict[ItemId, int] = {}
    totals_get = totals.get
    for path, count in base.paths:
        for item in path:
            totals[item] = totals_get(item, 0) + count
    kept = {item: total for item, total in totals.items() if total >= min_support}
    tree = FPTree(catalog)
    heads: dict[ItemId, FPNode] = {}
    tails: dict[ItemId, FPNode] = {}
    # Inlined insertion (see _insert): this loop dominates mining time, so
    # the infrequent-item filter is fused into the walk and node creation is
    # tallied once per tree. The resulting tree is identical.
    root = tree.root
    make_node = FPNode
    tails_get = tails.get
    created = 0
    for path, count in base.paths:
        node = root
        for item in path:
            if item in kept:
                children = node.children
                child = children.get(item)
                if child is None:
                    child = make_node(item, node)
                    children[item] = child
                    created += 1
                    tail = tails_get(item)
                    if tail is None:
                        heads[item] = child
                    else:
                        tail.next_same_item = child
                    tails[item] = child
                child.count += count
                node = child
    if created:
        tree.node_count = created
        if stats is not None:
            stats.created(created)
    return tree, _header_from(kept, heads, catalog)


def _mine(
    tree: FPTree,
    header: HeaderTable,
    suffix: Itemset,
    min_support: int,
    out: dict[Itemset, int],
    stats: TreeStats | None,
) -> None:
    # Reversed header order: ascending support, ties by descending label.
    for entry in reversed(header.entries):
        itemset = tuple(sorted((entry.item, *suffix)))
        out[itemset] = entry.total
        base = conditional_pattern_base(tree, header, entry.item)
        subtree, subheader = build_conditional_tree(
            base, min_support, tree.catalog, stats
        )
        if subheader.entries:
            _mine(subtree, subheader, itemset, min_support, out, stats)
        if stats is not None:
            stats.freed(subtree.node_count)


def fpgrowth_mine(
    db: TransactionDb, min_support: int, stats: TreeStats | None = None
) -> FrequentItemsets:
    """Mine all itemsets with support >= min_support by conditional projection."""
    if min_support < 1:
        raise ValidationError(f"min_support must be >= 1, got {min_support}")
    tree, header = build_fptree(db, min_support, stats)
    support: dict[Itemset, int] = {}
    _mine(tree, header, (), min_support, support, stats)
    if stats is not None:
        stats.freed(tree.node_count)
    return FrequentItemsets(support, db.n)


def dump_tree(tree: FPTree) -> str:
    """Indented label:count rendering, children sorted by display label."""
    lines: list[str] = []

    def walk(node: FPNode, depth: int) -> None:
        children = sorted(
            node.children.values(), key=lambda child: tree.catalog.label(child.item)
        )
        for child in children:
            lines.append("  " * depth + f"{tree.catalog.label(child.item)}:{child.count}")
            walk(child, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines) + ("\n" if lines else "")
