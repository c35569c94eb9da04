"""FP-tree construction, conditional projection, and mining equivalence."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

import conftest
from freqmine.apriori import apriori_mine
from freqmine.dataset import item_frequencies, parse_transactions
from freqmine.errors import ValidationError
from freqmine.fpgrowth import (
    TreeStats,
    build_conditional_tree,
    build_fptree,
    conditional_pattern_base,
    dump_tree,
    fpgrowth_mine,
    order_transaction,
)

DB5_TREE_DUMP = "a:4\n  b:3\n    c:2\n  c:1\nb:1\n  c:1\n"


def test_order_transaction_db5(db5):
    counts = item_frequencies(db5)
    full = db5.transactions[4]  # {a, b, c, d}
    assert order_transaction(full, counts, 3, db5.catalog) == (0, 1, 2)


def test_order_transaction_sorts_by_count_then_label():
    db = parse_transactions("b\nb\nb\na\na\nc,a,b\n")
    counts = item_frequencies(db)  # b:4, a:3, c:1
    assert order_transaction(db.transactions[5], counts, 1, db.catalog) == (
        db.catalog.lookup("b"),
        db.catalog.lookup("a"),
        db.catalog.lookup("c"),
    )


def test_build_fptree_db5_shape(db5):
    tree, header = build_fptree(db5, 3)
    assert tree.node_count == 6
    assert dump_tree(tree) == DB5_TREE_DUMP
    assert [(db5.catalog.label(e.item), e.total) for e in header.entries] == [
        ("a", 4),
        ("b", 4),
        ("c", 4),
    ]


def test_header_excludes_infrequent_items(db5):
    _, header = build_fptree(db5, 3)
    assert db5.catalog.lookup("d") not in header


def test_header_order_descending_support():
    db = parse_transactions("a\na\na\nb\nb\nc,b\n")
    _, header = build_fptree(db, 1)
    assert [(db.catalog.label(e.item), e.total) for e in header.entries] == [
        ("a", 3),
        ("b", 3),
        ("c", 1),
    ]


def test_chain_counts_sum_to_header_total(db5):
    _, header = build_fptree(db5, 1)
    for entry in header.entries:
        total = 0
        node = entry.head
        while node is not None:
            assert node.item == entry.item
            total += node.count
            node = node.next_same_item
        assert total == entry.total


def test_conditional_pattern_base_db5_golden(db5):
    tree, header = build_fptree(db5, 3)
    base = conditional_pattern_base(tree, header, db5.catalog.lookup("c"))
    named = [(db5.catalog.labels_of(path), count) for path, count in base.paths]
    assert named == [(("a", "b"), 2), (("a",), 1), (("b",), 1)]


def test_conditional_pattern_base_unknown_item(db5):
    tree, header = build_fptree(db5, 3)
    with pytest.raises(KeyError):
        conditional_pattern_base(tree, header, db5.catalog.lookup("d"))


def test_empty_prefix_paths_keep_their_counts():
    db = parse_transactions("a\nb\na,b\n")
    tree, header = build_fptree(db, 1)
    b = db.catalog.lookup("b")
    base = conditional_pattern_base(tree, header, b)
    assert sorted(base.paths) == [((), 1), ((db.catalog.lookup("a"),), 1)]


def test_build_conditional_tree_db5_c(db5):
    tree, header = build_fptree(db5, 3)
    base = conditional_pattern_base(tree, header, db5.catalog.lookup("c"))
    subtree, subheader = build_conditional_tree(base, 3, db5.catalog)
    assert subtree.node_count == 3
    assert dump_tree(subtree) == "a:3\n  b:2\nb:1\n"
    assert [(db5.catalog.label(e.item), e.total) for e in subheader.entries] == [
        ("a", 3),
        ("b", 3),
    ]


def test_build_conditional_tree_filters_below_threshold(db5):
    tree, header = build_fptree(db5, 3)
    base = conditional_pattern_base(tree, header, db5.catalog.lookup("c"))
    subtree, subheader = build_conditional_tree(base, 4, db5.catalog)
    assert subtree.node_count == 0
    assert len(subheader) == 0


def test_fpgrowth_db5_golden(db5):
    stats = TreeStats()
    freq = fpgrowth_mine(db5, 3, stats=stats)
    named = {db5.catalog.labels_of(s): c for s, c in freq.support.items()}
    assert named == {
        ("a",): 4,
        ("b",): 4,
        ("c",): 4,
        ("a", "b"): 3,
        ("a", "c"): 3,
        ("b", "c"): 3,
    }
    assert stats.nodes_created == 10
    assert stats.alive_nodes == 0
    assert stats.peak_alive_nodes >= 6


def test_fpgrowth_rejects_bad_threshold(db5):
    with pytest.raises(ValidationError):
        fpgrowth_mine(db5, 0)
    with pytest.raises(ValidationError):
        build_fptree(db5, -1)


def test_fpgrowth_empty_db():
    freq = fpgrowth_mine(parse_transactions(""), 1)
    assert freq.support == {} and freq.n == 0


def test_dump_tree_empty():
    tree, _ = build_fptree(parse_transactions(""), 1)
    assert dump_tree(tree) == ""


@settings(max_examples=100, deadline=None)
@given(conftest.dbs_with_threshold())
def test_fpgrowth_matches_apriori(case):
    db, threshold = case
    assert fpgrowth_mine(db, threshold).support == apriori_mine(db, threshold).support


@settings(max_examples=60, deadline=None)
@given(conftest.dbs_with_threshold())
def test_header_totals_equal_item_frequencies(case):
    db, threshold = case
    counts = item_frequencies(db)
    _, header = build_fptree(db, threshold)
    expected = {i: c for i, c in counts.items() if c >= threshold}
    assert {e.item: e.total for e in header.entries} == expected


@settings(max_examples=60, deadline=None)
@given(conftest.dbs_with_threshold())
def test_node_count_bounded_by_ordered_volume(case):
    db, threshold = case
    counts = item_frequencies(db)
    volume = sum(
        len(order_transaction(t, counts, threshold, db.catalog))
        for t in db.transactions
    )
    tree, _ = build_fptree(db, threshold)
    assert tree.node_count <= volume


@settings(max_examples=60, deadline=None)
@given(conftest.dbs_with_threshold())
def test_tree_stats_drain_to_zero(case):
    db, threshold = case
    stats = TreeStats()
    fpgrowth_mine(db, threshold, stats=stats)
    assert stats.alive_nodes == 0
    assert stats.peak_alive_nodes <= stats.nodes_created
