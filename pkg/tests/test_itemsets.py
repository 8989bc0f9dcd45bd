import random

import pytest

from brute_oracles import brute_force_maximal
from qrec import ColumnRef, mine_frequent_attribute_sets
from qrec.errors import DimensionMismatch
from qrec.itemsets import itemset_support, mine_maximal
from qrec.relevance import RelevanceVector


def test_worked_example():
    transactions = [{"A", "B"}, {"A", "B", "C"}, {"A", "C"}]
    assert mine_maximal(transactions, 2 / 3) == {frozenset("AB"), frozenset("AC")}


def test_single_transaction():
    assert mine_maximal([{"A"}], 1.0) == {frozenset("A")}


def test_support_above_transaction_count():
    # required count exceeds what any itemset can reach
    assert mine_maximal([{"A"}, {"B"}], 1.0) == set()


def test_empty_transactions_count_in_denominator():
    # {A} appears in 1 of 4 transactions: frequent at 0.25, not at 0.26
    txs = [{"A"}, set(), set(), set()]
    assert mine_maximal(txs, 0.25) == {frozenset("A")}
    assert mine_maximal(txs, 0.26) == set()


def test_matches_brute_force_randomized():
    rng = random.Random(23)
    for _ in range(300):
        n_items = rng.randint(1, 6)
        n_tx = rng.randint(1, 12)
        items = [f"i{k}" for k in range(n_items)]
        txs = [
            {item for item in items if rng.random() < 0.45}
            for _ in range(n_tx)
        ]
        support = rng.choice([0.1, 0.2, 1 / 3, 0.5, 2 / 3, 0.75, 1.0])
        assert mine_maximal(txs, support) == brute_force_maximal(txs, support), (txs, support)


def test_bad_support_rejected():
    with pytest.raises(ValueError):
        mine_maximal([{"A"}], 0.0)
    with pytest.raises(ValueError):
        mine_maximal([{"A"}], 1.5)


def test_itemset_support_counts():
    txs = [{"A", "B"}, {"A"}, {"B"}]
    assert itemset_support(txs, frozenset("A")) == 2
    assert itemset_support(txs, frozenset("AB")) == 1


def _vec(column, bits):
    return RelevanceVector(column=ColumnRef("t", column), bits=tuple(bits))


def test_attribute_sets_from_vectors():
    vectors = [
        _vec("a", [1, 1, 1]),
        _vec("b", [1, 1, 0]),
        _vec("c", [0, 1, 1]),
    ]
    # transactions: {a,b}, {a,b,c}, {a,c} — the worked example shape
    result = mine_frequent_attribute_sets(vectors, 2 / 3)
    assert result == {
        frozenset({ColumnRef("t", "a"), ColumnRef("t", "b")}),
        frozenset({ColumnRef("t", "a"), ColumnRef("t", "c")}),
    }


def test_attribute_sets_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mine_frequent_attribute_sets([_vec("a", [1, 0]), _vec("b", [1])], 0.5)


def test_attribute_sets_empty_inputs():
    assert mine_frequent_attribute_sets([], 0.5) == set()
    assert mine_frequent_attribute_sets([_vec("a", [])], 0.5) == set()
