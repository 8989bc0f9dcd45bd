"""Acceptance suite: one test per release criterion, each printing a PASS/FAIL
line.  Run with ``pytest tests/test_acceptance.py -s`` to see the lines.

Expected values come from the independent oracles in this directory
(embedding_oracle, brute_oracles, scenario_oracle): exhaustive enumeration,
direct summation, and hand aggregation — never from the code paths under test.
"""

import contextlib
import json
import random
import time
from unittest import mock

import pytest

import scenario_oracle as scenario
from brute_oracles import brute_force_maximal, direct_contextual, display
from conftest import (
    REF_SNAPSHOT,
    TOY_DB,
    WALKTHROUGH_SQL,
    make_random_ir,
)
from qrec import (
    ActionKind,
    ColumnRef,
    ExplorationContext,
    RecommenderConfig,
    SessionService,
    action_columns,
    column_relevance_vector,
    contextual_score,
    load_snapshot,
    load_sqlite_schema,
    parse_sql,
    recommend_chart,
    recommend_initial,
    recommend_next,
    retrieve_relevant_domains,
    synthesize_sql,
)
from qrec.execution import ResultTable
from qrec.itemsets import mine_maximal
from qrec.session import DashboardCell, DatabaseBundle


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except Exception:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


def test_fpmax_oracle_equivalence():
    with criterion("FP-Max equals brute-force enumeration on 1000 random databases"):
        started = time.monotonic()
        assert mine_maximal([{"A", "B"}, {"A", "B", "C"}, {"A", "C"}], 2 / 3) == {
            frozenset("AB"),
            frozenset("AC"),
        }
        rng = random.Random(2024)
        for _ in range(1000):
            items = [f"i{k}" for k in range(rng.randint(1, 6))]
            transactions = [
                {item for item in items if rng.random() < 0.5}
                for _ in range(rng.randint(1, 12))
            ]
            support = rng.choice([0.1, 0.25, 1 / 3, 0.5, 2 / 3, 0.75, 1.0])
            assert mine_maximal(transactions, support) == brute_force_maximal(
                transactions, support
            ), (transactions, support)
        elapsed = time.monotonic() - started
        assert elapsed < 10.0, f"took {elapsed:.1f}s"


def test_contextual_scorer_oracle_equivalence():
    with criterion("Eq.(1)/(2) scorer matches direct summation within 1e-9"):
        catalog = load_sqlite_schema(TOY_DB, domain_label="customers and orders")
        repo = load_snapshot(REF_SNAPSHOT)
        refs = [q for g in repo.groups for q in g.queries]
        config = RecommenderConfig()
        rng = random.Random(99)
        for _ in range(40):
            history = [make_random_ir(rng, catalog) for _ in range(rng.randint(1, 5))]
            candidate = make_random_ir(rng, catalog)
            for action in ActionKind:
                got = contextual_score(history, refs, candidate, action, config)
                expected = direct_contextual(
                    [[display(c.column) for c in action_columns(q, action)] for q in history],
                    [[display(c.column) for c in action_columns(r, action)] for r in refs],
                    [display(c.column) for c in action_columns(candidate, action)],
                    config.alpha,
                    config.beta,
                )
                assert abs(got - expected) < 1e-9

        # closed form: relevance contributions 1.0, 0.5, 0.25 at alpha = 0.8
        values = iter([1.0, 0.5, 0.25])
        with mock.patch("qrec.recommender.relevance", side_effect=lambda *a, **k: next(values)):
            history = [make_random_ir(rng, catalog) for _ in range(3)]
            total = contextual_score(
                history, [], history[0], ActionKind.SELECTION, RecommenderConfig(alpha=0.8)
            )
        assert abs(total - 1.56) < 1e-9


def test_binarization_threshold_default_and_flip():
    with criterion("Binarization threshold defaults to 0.5 and flips across the oracle value"):
        assert RecommenderConfig().binarization_threshold == 0.5
        catalog = load_sqlite_schema(TOY_DB, domain_label="customers and orders")
        repo = load_snapshot(REF_SNAPSHOT)
        coa = next(g for g in repo.groups if g.domain_label == "customer order addresses")
        refs = [parse_sql("SELECT order_status FROM orders", coa.schema)]
        column = ColumnRef("customers", "vip_status")
        oracle_value = scenario.sim("vip status", "order status")
        assert 0.4 < oracle_value < 0.6  # straddles the default threshold

        def bit(threshold):
            return column_relevance_vector(
                column, catalog, refs, ActionKind.SELECTION, threshold
            ).bits[0]

        assert bit(oracle_value - 1e-6) == 1
        assert bit(oracle_value + 1e-6) == 0
        assert bit(0.5) == (1 if oracle_value >= 0.5 else 0)


def test_default_five_distinct_recommendations():
    with criterion("Default recommendation count is 5, distinct, history excluded (100 sessions)"):
        config = RecommenderConfig()
        assert config.top_k == 5
        catalog = load_sqlite_schema(TOY_DB, domain_label="customers and orders")
        repo = load_snapshot(REF_SNAPSHOT)
        context = ExplorationContext(catalog=catalog, repository=repo)
        rng = random.Random(41)
        for _ in range(100):
            history = [make_random_ir(rng, catalog) for _ in range(rng.randint(0, 3))]
            result = recommend_next(history, context, config)
            assert len(result.items) == 5
            queries = [rec.query for rec in result.items]
            for i, a in enumerate(queries):
                for b in queries[i + 1 :]:
                    assert a != b
                for h in history:
                    assert a != h


def test_parser_round_trip_thousand():
    with criterion("parse(synthesize(ir)) = ir for 1000 generated IRs, zero failures"):
        catalog = load_sqlite_schema(TOY_DB, domain_label="customers and orders")
        rng = random.Random(404)
        failures = 0
        for _ in range(1000):
            ir = make_random_ir(rng, catalog)
            if parse_sql(synthesize_sql(ir), catalog) != ir:
                failures += 1
        assert failures == 0


def test_domain_retrieval_self_consistency():
    with criterion("Exact label ranks first at 1.0; deliveries/addresses beats unrelated domains"):
        repo = load_snapshot(REF_SNAPSHOT)
        exact = retrieve_relevant_domains(repo, "customer order addresses", 5)
        assert exact[0][0].domain_label == "customer order addresses"
        assert abs(exact[0][1] - 1.0) < 1e-9

        ranked = retrieve_relevant_domains(repo, "customer order deliveries", len(repo.groups))
        scores = {g.domain_label: s for g, s in ranked}
        assert ranked[0][0].domain_label == "customer order addresses"
        for unrelated in ("concert singer", "flight company", "course teach"):
            assert scores["customer order addresses"] > scores[unrelated]


def test_chart_rule_table_complete():
    with criterion("All 9 chart rules produce exactly the specified marks"):
        def table(columns, rows):
            return ResultTable(columns=tuple(columns), rows=tuple(tuple(r) for r in rows))

        cases = [
            (table([("total", "Q")], [(42,)]), "value_card"),
            (table([("product", "N"), ("total", "Q")], [("a", 1), ("b", 2)]), "bar"),
            (table([("day", "T"), ("total", "Q")], [("2020-01-01", 1), ("2020-01-02", 2)]), "line"),
            (table([("price", "Q"), ("qty", "Q")], [(1.0, 2), (2.0, 3)]), "scatter"),
            (table([("status", "N"), ("vip", "N")], [("d", "g"), ("c", "g")]), "heatmap"),
            (table([("qty", "Q")], [(1,), (2,), (3,)]), "histogram"),
            (table([("status", "N")], [("d",), ("c",), ("d",)]), "bar"),
            (table([("status", "N"), ("total", "Q"), ("vip", "N")], [("d", 1, "g")]), "bar"),
            (
                table(
                    [("a", "N"), ("b", "Q"), ("c", "T"), ("d", "N"), ("e", "Q")],
                    [("x", 1, "2020-01-01", "y", 2)],
                ),
                "table",
            ),
        ]
        marks = []
        for result_table, expected_mark in cases:
            chart = recommend_chart(result_table)
            assert chart.mark == expected_mark, (result_table.columns, chart.mark)
            marks.append(chart.mark)
        # the 9 cases exercise every mark in the rule set
        assert set(marks) == {"value_card", "bar", "line", "scatter", "heatmap", "histogram", "table"}


def test_end_to_end_desk_scenario():
    with criterion("Desk scenario: order-quantity in initial top-5, order follow-up after walkthrough"):
        started = time.monotonic()
        catalog = load_sqlite_schema(TOY_DB, domain_label="customers and orders")
        repo = load_snapshot(REF_SNAPSHOT)
        context = ExplorationContext(catalog=catalog, repository=repo)
        config = RecommenderConfig()
        pool = scenario.reference_pool("customers and orders", config.reference_domain_k)

        # initial step: scores must equal the brute-force frequency ranking
        initial = recommend_initial(context, config)
        quantity = ColumnRef("order_items", "order_quantity")
        assert any(
            quantity in action_columns(rec.query, ActionKind.SELECTION)
            for rec in initial.items
        )
        freqs = scenario.column_frequencies(pool)
        oracle_pool = [frozenset([c]) for c in scenario.TOY_COLUMNS] + [
            s for s in scenario.maximal_sets(pool) if len(s) > 1
        ]
        oracle_scores = sorted(
            (float(sum(freqs[c] for c in cand)) for cand in oracle_pool), reverse=True
        )[: config.top_k]
        got_scores = [rec.score for rec in initial.items]
        assert all(abs(a - b) < 1e-9 for a, b in zip(got_scores, oracle_scores)), (
            got_scores,
            oracle_scores,
        )

        # follow-up step after the walkthrough query
        history_ir = parse_sql(WALKTHROUGH_SQL, catalog)
        follow = recommend_next([history_ir], context, config)
        explored = action_columns(history_ir, ActionKind.SELECTION) | action_columns(
            history_ir, ActionKind.GROUPING
        )
        order_related = {
            ColumnRef("customer_orders", "order_id"),
            ColumnRef("customer_orders", "order_status"),
            ColumnRef("customer_orders", "order_date"),
            ColumnRef("order_items", "order_id"),
            ColumnRef("order_items", "order_item_id"),
        }
        assert any(
            (action_columns(rec.query, ActionKind.SELECTION) - explored) & order_related
            for rec in follow.items
        )

        # follow-up scores must equal the brute-force contextual ranking over
        # the independently enumerated candidate pool
        history_actions = [
            {
                "selection": [("products", "product_details"), ("order_items", "order_quantity")],
                "grouping": [("products", "product_details")],
                "aggregation": [("order_items", "order_quantity")],
            }
        ]
        explored_keys = {("products", "product_details"), ("order_items", "order_quantity")}
        unexplored = [c for c in scenario.TOY_COLUMNS if c not in explored_keys]
        cand_sets = [[c] for c in unexplored]
        cand_sets += [
            sorted(s) for s in scenario.maximal_sets(pool)
            if len(s) > 1 and any(c not in explored_keys for c in s)
        ]
        cand_sets += [[u, e] for u in unexplored for e in sorted(explored_keys)]
        scored = {}
        for cols in cand_sets:
            actions = scenario.candidate_actions(cols, pool)
            key = (
                tuple(actions["selection"]),
                tuple(actions["grouping"]),
                tuple(actions["aggregation"]),
            )
            if key not in scored:
                scored[key] = scenario.contextual_candidate_score(
                    history_actions, pool, cols, config.alpha, config.beta
                )
        oracle_top = sorted(scored.values(), reverse=True)[: config.top_k]
        got_top = [rec.score for rec in follow.items]
        assert all(abs(a - b) < 1e-9 for a, b in zip(got_top, oracle_top)), (
            got_top,
            oracle_top,
        )

        elapsed = time.monotonic() - started
        assert elapsed < 5.0, f"took {elapsed:.1f}s"


def test_service_durability():
    with criterion("Service restart preserves history and dashboards structurally"):
        import tempfile
        from pathlib import Path

        def build(storage):
            catalog = load_sqlite_schema(TOY_DB, domain_label="customers and orders")
            return SessionService(
                databases={
                    "toy": DatabaseBundle(
                        database_id="toy", catalog=catalog, sqlite_path=str(TOY_DB)
                    )
                },
                repository=load_snapshot(REF_SNAPSHOT),
                recommender_config=RecommenderConfig(),
                storage_path=storage,
            )

        with tempfile.TemporaryDirectory() as tmp:
            storage = Path(tmp) / "events.jsonl"
            service = build(storage)
            session, _ = service.create_session("toy")
            service.submit_query(session.id, recommendation_index=0)
            service.submit_query(session.id, sql=WALKTHROUGH_SQL)
            service.submit_query(session.id, sql="SELECT customer_name FROM customers")
            dashboard = service.save_dashboard(
                session.id,
                [
                    DashboardCell(history_index=0, row=0, col=0, width=6, height=4),
                    DashboardCell(history_index=2, row=4, col=0, width=6, height=4),
                ],
            )
            history_json = json.dumps(
                [e.to_dict() for e in service.history(session.id)], sort_keys=True
            )
            dashboard_json = json.dumps(dashboard.to_dict(), sort_keys=True)
            service.close()  # simulated kill: drop every in-memory handle

            revived = build(storage)
            assert json.dumps(
                [e.to_dict() for e in revived.history(session.id)], sort_keys=True
            ) == history_json
            assert json.dumps(
                revived.load_dashboard(dashboard.id).to_dict(), sort_keys=True
            ) == dashboard_json
            assert len(revived.history(session.id)) == 3
            revived.close()
