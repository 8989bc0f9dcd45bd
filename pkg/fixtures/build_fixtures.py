"""Rebuild the binary fixtures: toy.sqlite, mini.sqlite, refs.json, config.json.

Run from the repository root:  python3 fixtures/build_fixtures.py
"""

import json
import sqlite3
import sys
from pathlib import Path

HERE = Path(__file__).parent

TOY_DDL = """
CREATE TABLE customers (
    customer_id INTEGER PRIMARY KEY,
    customer_name TEXT,
    vip_status TEXT
);
CREATE TABLE customer_orders (
    order_id INTEGER PRIMARY KEY,
    customer_id INTEGER REFERENCES customers(customer_id),
    order_status TEXT,
    order_date DATE
);
CREATE TABLE products (
    product_id INTEGER PRIMARY KEY,
    product_details TEXT,
    product_price REAL
);
CREATE TABLE order_items (
    order_item_id INTEGER PRIMARY KEY,
    order_id INTEGER REFERENCES customer_orders(order_id),
    product_id INTEGER REFERENCES products(product_id),
    order_quantity INTEGER
);
"""

TOY_ROWS = {
    "customers": [
        (1, "Alice", "Gold"),
        (2, "Bob", "None"),
        (3, "Carol", "Silver"),
    ],
    "customer_orders": [
        (1, 1, "Delivered", "2020-03-17"),
        (2, 1, "Cancelled", "2020-03-18"),
        (3, 2, "Delivered", "2020-03-19"),
        (4, 3, "Cancelled", "2020-03-20"),
        (5, 2, "Cancelled", "2020-03-21"),
    ],
    "products": [
        (1, "Americano", 3.5),
        (2, "Latte", 4.25),
        (3, "Dove Chocolate", 2.0),
    ],
    "order_items": [
        (1, 1, 1, 2),
        (2, 1, 2, 1),
        (3, 2, 1, 3),
        (4, 2, 3, 5),
        (5, 3, 3, 4),
        (6, 3, 1, 1),
        (7, 4, 2, 2),
        (8, 4, 3, 6),
        (9, 5, 1, 2),
        (10, 5, 3, 3),
    ],
}

MINI_DDL = """
CREATE TABLE products (
    product_id INTEGER PRIMARY KEY,
    product_details TEXT,
    product_price REAL
);
CREATE TABLE order_items (
    order_item_id INTEGER PRIMARY KEY,
    product_id INTEGER REFERENCES products(product_id),
    order_quantity INTEGER,
    item_notes TEXT
);
"""

MINI_ROWS = {
    "products": [(1, "Americano", 3.5), (2, "Latte", 4.25)],
    "order_items": [(1, 1, 2, "rush"), (2, 2, 1, None)],
}


def build_db(path: Path, ddl: str, rows: dict) -> None:
    if path.exists():
        path.unlink()
    conn = sqlite3.connect(str(path))
    try:
        conn.executescript(ddl)
        for table, data in rows.items():
            placeholders = ", ".join("?" for _ in data[0])
            conn.executemany(f"INSERT INTO {table} VALUES ({placeholders})", data)
        conn.commit()
    finally:
        conn.close()


def main() -> int:
    sys.path.insert(0, str(HERE.parent / "src"))
    from qrec.reference import load_log, save_snapshot

    build_db(HERE / "toy.sqlite", TOY_DDL, TOY_ROWS)
    build_db(HERE / "mini.sqlite", MINI_DDL, MINI_ROWS)
    repo = load_log(HERE / "refs.schemas.json", HERE / "refs.queries.json")
    save_snapshot(repo, HERE / "refs.json")

    config = {
        "databases": ["toy.sqlite"],
        "reference_snapshot": "refs.json",
        "storage": "qrec-events.jsonl",
        "port": 8077,
        "recommender": {"alpha": 0.8, "beta": 0.5, "top_k": 5},
        "embedder": {"provider": "lexical_default", "dimension": 256},
    }
    with open(HERE / "config.json", "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")

    print("fixtures rebuilt: toy.sqlite, mini.sqlite, refs.json, config.json")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
