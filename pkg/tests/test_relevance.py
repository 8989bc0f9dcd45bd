import pytest

from brute_oracles import brute_force_bits
from qrec import ActionKind, ColumnRef, column_relevance_vector, parse_sql
from qrec.relevance import action_occurrences, max_similarity

# goldens from tests/embedding_oracle.py: "order quantity" against the four
# reference occurrence texts, and the threshold-straddling pair
SIMS_NEAR_DUPLICATES = {
    "order quantity": 1.0,
    "quantity ordered": 0.876714007519,
    "order qty": 0.639009650423,
    "singer name": 0.081649658093,
}
SIM_ORDER_STATUS_VIP_STATUS = 0.502518907630


def _refs_for_occurrences(repo):
    """Reference IRs whose SELECT occurrences are exactly the 4 near-duplicate texts."""
    coa = next(g for g in repo.groups if g.domain_label == "customer order addresses")
    spo = next(g for g in repo.groups if g.domain_label == "store product orders")
    singer = next(g for g in repo.groups if g.domain_label == "concert singer")
    return [
        parse_sql("SELECT order_quantity FROM orders", coa.schema),
        parse_sql("SELECT quantity_ordered FROM products_sold", spo.schema),
        parse_sql("SELECT singer_name FROM singer", singer.schema),
    ]


def test_near_duplicate_bits(toy_catalog, repo):
    # occurrences: order_quantity, quantity_ordered, singer_name -> bits 1,1,0
    refs = _refs_for_occurrences(repo)
    vector = column_relevance_vector(
        ColumnRef("order_items", "order_quantity"), toy_catalog, refs,
        ActionKind.SELECTION, 0.5,
    )
    assert vector.bits == (1, 1, 0)
    assert vector.frequency == 2


def test_bits_match_oracle(toy_catalog, repo):
    refs = _refs_for_occurrences(repo)
    occurrence_texts = [
        occ.column.replace("_", " ")
        for occ in action_occurrences(refs, ActionKind.SELECTION)
    ]
    expected = brute_force_bits("order quantity", occurrence_texts, 0.5)
    vector = column_relevance_vector(
        ColumnRef("order_items", "order_quantity"), toy_catalog, refs,
        ActionKind.SELECTION, 0.5,
    )
    assert list(vector.bits) == expected


def test_unreachable_threshold(toy_catalog, repo):
    refs = _refs_for_occurrences(repo)
    vector = column_relevance_vector(
        ColumnRef("order_items", "order_quantity"), toy_catalog, refs,
        ActionKind.SELECTION, 1.01,
    )
    assert vector.bits == (0, 0, 0)
    assert vector.frequency == 0


def test_empty_refs(toy_catalog):
    vector = column_relevance_vector(
        ColumnRef("order_items", "order_quantity"), toy_catalog, [],
        ActionKind.SELECTION, 0.5,
    )
    assert vector.bits == ()
    assert vector.frequency == 0


def test_grouping_occurrences_differ_from_selection(toy_catalog, repo):
    coa = next(g for g in repo.groups if g.domain_label == "customer order addresses")
    ir = parse_sql(
        "SELECT customer_name, SUM(order_quantity) FROM orders "
        "JOIN clients ON orders.customer_id = clients.customer_id "
        "GROUP BY customer_name",
        coa.schema,
    )
    assert [o.column for o in action_occurrences([ir], ActionKind.SELECTION)] == [
        "customer_name", "order_quantity",
    ]
    assert [o.column for o in action_occurrences([ir], ActionKind.GROUPING)] == ["customer_name"]
    # aggregation shares SELECT occurrences
    assert action_occurrences([ir], ActionKind.AGGREGATION) == action_occurrences(
        [ir], ActionKind.SELECTION
    )


def test_threshold_straddles_oracle_value(toy_catalog, repo):
    """The vip_status ~ order_status pair sits just above 0.5; nudging the
    threshold across the oracle-computed similarity flips the bit."""
    coa = next(g for g in repo.groups if g.domain_label == "customer order addresses")
    refs = [parse_sql("SELECT order_status FROM orders", coa.schema)]
    column = ColumnRef("customers", "vip_status")

    def bit(threshold):
        return column_relevance_vector(
            column, toy_catalog, refs, ActionKind.SELECTION, threshold
        ).bits[0]

    s = SIM_ORDER_STATUS_VIP_STATUS
    assert bit(0.5) == 1            # default threshold, similarity is just above
    assert bit(s - 0.001) == 1
    assert bit(s + 0.001) == 0


def test_max_similarity_fallback_signal(toy_catalog, repo):
    refs = _refs_for_occurrences(repo)
    best = max_similarity(
        ColumnRef("order_items", "order_quantity"), toy_catalog, refs, ActionKind.SELECTION
    )
    assert best == pytest.approx(1.0, abs=1e-9)
    none = max_similarity(
        ColumnRef("order_items", "order_quantity"), toy_catalog, [], ActionKind.SELECTION
    )
    assert none == 0.0
