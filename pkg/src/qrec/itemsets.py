"""Maximal frequent itemset mining over relevance-vector transactions.

FP-growth over a prefix tree enumerates the frequent itemsets; a final
subsumption pass keeps exactly the maximal ones (no frequent proper superset).
Transaction databases here are small (one transaction per reference-query
column occurrence), so exactness wins over aggressive pruning.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Hashable, Iterable, Sequence

from .errors import DimensionMismatch


class _Node:
    __slots__ = ("item", "count", "parent", "children")

    def __init__(self, item, parent):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children: dict = {}


def _required_count(min_support: float, n_transactions: int) -> int:
    if not 0.0 < min_support <= 1.0:
        raise ValueError("min_support must be in (0, 1]")
    # relative support >= min_support, robust to float dust
    return max(1, math.ceil(min_support * n_transactions - 1e-9))


def _build_tree(transactions, counts, order):
    root = _Node(None, None)
    node_links: dict = defaultdict(list)
    for tx in transactions:
        items = sorted(
            (item for item in tx if item in counts),
            key=lambda it: (-counts[it], order[it]),
        )
        node = root
        for item in items:
            child = node.children.get(item)
            if child is None:
                child = _Node(item, node)
                node.children[item] = child
                node_links[item].append(child)
            child.count += 1
            node = child
    return root, node_links


def _grow(transactions, suffix, required, out):
    counts: dict = defaultdict(int)
    for tx in transactions:
        for item in tx:
            counts[item] += 1
    counts = {item: c for item, c in counts.items() if c >= required}
    if not counts:
        return
    order = {item: rank for rank, item in enumerate(sorted(counts))}
    _root, node_links = _build_tree(transactions, counts, order)

    # expand items from least to most frequent, FP-growth style
    for item in sorted(counts, key=lambda it: (counts[it], order[it])):
        found = suffix | {item}
        out.add(frozenset(found))
        conditional = []
        for node in node_links[item]:
            path = []
            parent = node.parent
            while parent is not None and parent.item is not None:
                path.append(parent.item)
                parent = parent.parent
            if path:
                conditional.extend([tuple(path)] * node.count)
        if conditional:
            _grow(conditional, found, required, out)


def mine_maximal(transactions: Sequence[Iterable[Hashable]], min_support: float) -> set[frozenset]:
    """Maximal frequent itemsets of a transaction database at relative support.

    An itemset is maximal iff it is frequent and no proper frequent superset
    exists.  Empty transactions count toward the support denominator.
    """
    txs = [frozenset(tx) for tx in transactions]
    if not txs:
        return set()
    required = _required_count(min_support, len(txs))

    frequent: set[frozenset] = set()
    _grow(txs, set(), required, frequent)

    by_size = sorted(frequent, key=len, reverse=True)
    maximal: list[frozenset] = []
    for itemset in by_size:
        if not any(itemset < kept for kept in maximal):
            maximal.append(itemset)
    return set(maximal)


def itemset_support(transactions: Sequence[Iterable[Hashable]], itemset: frozenset) -> int:
    """Absolute support count of an itemset."""
    return sum(1 for tx in transactions if itemset <= frozenset(tx))


def mine_frequent_attribute_sets(vectors, min_support: float) -> set[frozenset]:
    """Maximal frequent column combinations across relevance vectors.

    Each bit position is one reference occurrence; its transaction is the set
    of columns whose vector carries a 1 there.  All vectors must have been
    built over the same occurrence list.
    """
    vectors = list(vectors)
    if not vectors:
        return set()
    width = len(vectors[0].bits)
    for v in vectors:
        if len(v.bits) != width:
            raise DimensionMismatch(
                f"relevance vectors disagree in length: {len(v.bits)} vs {width}"
            )
    if width == 0:
        return set()
    transactions = [
        frozenset(v.column for v in vectors if v.bits[position])
        for position in range(width)
    ]
    return mine_maximal(transactions, min_support)
