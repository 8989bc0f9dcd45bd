"""Command-line entry points: serve, mine, recommend, repl."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import AppConfig, build_service
from .embedding import Embedder, EmbedderConfig
from .errors import QrecError
from .execution import SqliteBackend, classify_fields, execute
from .charts import recommend_chart
from .ir import ActionKind, synthesize_sql
from .itemsets import itemset_support, mine_frequent_attribute_sets
from .recommender import ExplorationContext, RecommenderConfig, recommend_initial
from .reference import ReferenceRepository, load_log, load_snapshot
from .relevance import column_relevance_vector
from .schema import load_sqlite_schema
from .session import DatabaseBundle, SessionService

CONFIG_ENV = "QREC_CONFIG"


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrec", description="Next-step SQL query recommendation")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help=f"config JSON path (falls back to ${CONFIG_ENV})")

    p_rec = sub.add_parser("recommend", help="print top-k recommendations for a database")
    p_rec.add_argument("--db", required=True, help="SQLite database file")
    p_rec.add_argument("--log", required=True, help="reference log: snapshot JSON or Spider queries JSON")
    p_rec.add_argument("--schemas", help="Spider tables.json (required when --log is a queries list)")
    p_rec.add_argument("--top-k", type=int, dest="top_k", help="override the configured top_k")
    p_rec.add_argument("--out", help="directory for the CSV + figure report")
    add_common(p_rec)

    p_mine = sub.add_parser("mine", help="write per-domain frequent attribute sets as JSON")
    p_mine.add_argument("--log", required=True)
    p_mine.add_argument("--schemas")
    p_mine.add_argument("--out", required=True, help="report file path")
    add_common(p_mine)

    p_repl = sub.add_parser("repl", help="interactive submit/recommend loop on stdin")
    p_repl.add_argument("--db", required=True)
    p_repl.add_argument("--log", required=True)
    p_repl.add_argument("--schemas")
    p_repl.add_argument("--top-k", type=int, dest="top_k")
    add_common(p_repl)

    p_serve = sub.add_parser("serve", help="start the HTTP session service")
    p_serve.add_argument("--port", type=int, help="override the configured port")
    add_common(p_serve)

    return parser


def _config_path(args) -> str | None:
    return args.config or os.environ.get(CONFIG_ENV)


def _recommender_config(args) -> RecommenderConfig:
    path = _config_path(args)
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        data = data.get("recommender", data)
        config = RecommenderConfig.from_dict(data)
    else:
        config = RecommenderConfig()
    if getattr(args, "top_k", None):
        config = RecommenderConfig.from_dict({**config.__dict__, "top_k": args.top_k})
    return config


def _load_repository(parser, args) -> ReferenceRepository:
    with open(args.log, encoding="utf-8") as fh:
        head = json.load(fh)
    if isinstance(head, dict):
        return load_snapshot(args.log)
    if args.schemas is None:
        parser.error("--schemas is required when --log holds a raw queries list")
    return load_log(args.schemas, args.log)


def _print_recommendations(items, stream=sys.stdout) -> None:
    for rank, rec in enumerate(items, start=1):
        print(f"#{rank}  score={rec.score:.6f}", file=stream)
        print(f"  nl:  {rec.nl_text}", file=stream)
        print(f"  sql: {synthesize_sql(rec.query)}", file=stream)


def _cmd_recommend(parser, args) -> int:
    config = _recommender_config(args)
    repo = _load_repository(parser, args)
    catalog = load_sqlite_schema(args.db)
    context = ExplorationContext(catalog=catalog, repository=repo, embedder=Embedder(EmbedderConfig()))
    recommended = recommend_initial(context, config)
    _print_recommendations(recommended.items)

    if args.out:
        from .report import write_report

        backend = SqliteBackend(args.db)
        results = []
        for rec in recommended.items:
            table = classify_fields(execute(rec.query, backend))
            results.append((table, recommend_chart(table)))
        backend.close()
        written = write_report(recommended.items, results, args.out)
        for name in written:
            print(f"wrote {Path(args.out) / name}")
    return 0


def _cmd_mine(parser, args) -> int:
    config = _recommender_config(args)
    repo = _load_repository(parser, args)
    embedder = Embedder(EmbedderConfig())
    report = {"min_support": config.min_support, "domains": []}
    for group in repo.groups:
        vectors = [
            column_relevance_vector(
                col, group.schema, group.queries, ActionKind.SELECTION,
                config.binarization_threshold, embedder,
            )
            for col in group.schema.all_columns()
        ]
        width = len(vectors[0].bits) if vectors else 0
        transactions = [
            frozenset(v.column for v in vectors if v.bits[i]) for i in range(width)
        ]
        mined = sorted(
            mine_frequent_attribute_sets(vectors, config.min_support),
            key=lambda s: sorted(f"{c.table}.{c.column}" for c in s),
        )
        report["domains"].append(
            {
                "domain_label": group.domain_label,
                "transactions": width,
                "itemsets": [
                    {
                        "columns": sorted(f"{c.table}.{c.column}" for c in s),
                        "support": itemset_support(transactions, s),
                    }
                    for s in mined
                ],
            }
        )
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out}")
    return 0


def _cmd_repl(parser, args) -> int:
    config = _recommender_config(args)
    repo = _load_repository(parser, args)
    catalog = load_sqlite_schema(args.db)
    database_id = Path(args.db).stem
    service = SessionService(
        databases={
            database_id: DatabaseBundle(
                database_id=database_id, catalog=catalog, sqlite_path=args.db
            )
        },
        repository=repo,
        recommender_config=config,
    )
    session, initial = service.create_session(database_id)
    print(f"exploring {catalog.domain_label!r}; :pick <n>, :history, :quit, or raw SQL")
    _print_recommendations(initial.items)

    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        if line == ":quit":
            break
        if line == ":history":
            for entry in service.history(session.id):
                print(f"[{entry.index}] {entry.nl_text} ({len(entry.result.rows)} rows)")
            continue
        try:
            if line.startswith(":pick"):
                pick = line.split()
                if len(pick) != 2 or not pick[1].isdigit():
                    print("usage: :pick <n>")
                    continue
                entry, next_set = service.submit_query(
                    session.id, recommendation_index=int(pick[1])
                )
            else:
                entry, next_set = service.submit_query(session.id, sql=line)
        except QrecError as exc:
            print(f"error: {exc}")
            continue
        print(f"[{entry.index}] {entry.nl_text}")
        print(f"  sql:   {synthesize_sql(entry.query)}")
        print(f"  rows:  {len(entry.result.rows)}")
        print(f"  chart: {entry.chart.mark}")
        _print_recommendations(next_set.items)
    service.close()
    return 0


def _cmd_serve(parser, args) -> int:
    path = _config_path(args)
    if not path:
        parser.error(f"serve needs --config or ${CONFIG_ENV}")
    app_config = AppConfig.from_json(path)
    service = build_service(app_config)

    import uvicorn

    from .server import create_app

    port = args.port or app_config.port
    uvicorn.run(create_app(service), host="127.0.0.1", port=port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_arg_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "recommend":
            return _cmd_recommend(parser, args)
        if args.command == "mine":
            return _cmd_mine(parser, args)
        if args.command == "repl":
            return _cmd_repl(parser, args)
        if args.command == "serve":
            return _cmd_serve(parser, args)
    except QrecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
