import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # embedding_oracle, brute_oracles

from qrec import (
    AggregateFn,
    ExplorationContext,
    RecommenderConfig,
    assemble_query,
    load_snapshot,
    load_sqlite_schema,
)

ROOT = Path(__file__).parent.parent
FIXTURES = ROOT / "fixtures"

TOY_DB = FIXTURES / "toy.sqlite"
MINI_DB = FIXTURES / "mini.sqlite"
SPIDER_TABLES = FIXTURES / "customers_and_orders.tables.json"
REF_SCHEMAS = FIXTURES / "refs.schemas.json"
REF_QUERIES = FIXTURES / "refs.queries.json"
REF_SNAPSHOT = FIXTURES / "refs.json"

# hand-maintained copy of the toy database rows (fixtures/build_fixtures.py);
# execution goldens are recomputed from these by plain python aggregation
TOY_ORDER_ITEMS = [
    (1, 1, 1, 2), (2, 1, 2, 1), (3, 2, 1, 3), (4, 2, 3, 5), (5, 3, 3, 4),
    (6, 3, 1, 1), (7, 4, 2, 2), (8, 4, 3, 6), (9, 5, 1, 2), (10, 5, 3, 3),
]
TOY_PRODUCTS = [(1, "Americano", 3.5), (2, "Latte", 4.25), (3, "Dove Chocolate", 2.0)]
TOY_ORDERS = [
    (1, 1, "Delivered", "2020-03-17"), (2, 1, "Cancelled", "2020-03-18"),
    (3, 2, "Delivered", "2020-03-19"), (4, 3, "Cancelled", "2020-03-20"),
    (5, 2, "Cancelled", "2020-03-21"),
]
TOY_CUSTOMERS = [(1, "Alice", "Gold"), (2, "Bob", "None"), (3, "Carol", "Silver")]

WALKTHROUGH_SQL = (
    "SELECT products.product_details, SUM(order_items.order_quantity) "
    "FROM order_items JOIN products ON order_items.product_id = products.product_id "
    "GROUP BY products.product_details"
)


@pytest.fixture(scope="session")
def toy_catalog():
    return load_sqlite_schema(TOY_DB, domain_label="customers and orders")


@pytest.fixture(scope="session")
def mini_catalog():
    return load_sqlite_schema(MINI_DB)


@pytest.fixture(scope="session")
def repo():
    return load_snapshot(REF_SNAPSHOT)


@pytest.fixture(scope="session")
def context(toy_catalog, repo):
    return ExplorationContext(catalog=toy_catalog, repository=repo)


@pytest.fixture(scope="session")
def config():
    return RecommenderConfig()


def make_random_ir(rng: random.Random, catalog):
    """Random valid IR over a connected catalog, built through assemble_query."""
    columns = catalog.all_columns()
    chosen = rng.sample(columns, k=rng.randint(1, min(4, len(columns))))
    aggregates = [None] + list(AggregateFn)
    items = [(c, rng.choice(aggregates)) for c in chosen]
    plain = [c for c, a in items if a is None]
    has_agg = any(a is not None for _, a in items)
    if has_agg and plain:
        grouping = list(plain)
    elif plain and rng.random() < 0.4:
        grouping = list(plain)
    else:
        grouping = []
    if grouping and rng.random() < 0.3:
        extra = rng.choice(columns)
        if extra not in grouping:
            grouping.append(extra)
    return assemble_query(items, grouping, catalog)
