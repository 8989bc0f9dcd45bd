"""Reference query repository: domain-grouped logs of other users' queries.

Built from Spider-style files (a multi-database ``tables.json`` plus a list of
``{db_id, question, query}`` records) or reloaded from a self-contained JSON
snapshot (schema documented in ``docs/formats.md``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .embedding import Embedder, default_embedder
from .errors import MalformedFile, NoUsableQueries, QrecError
from .ir import QueryIR, synthesize_sql
from .parser import parse_sql
from .schema import SchemaCatalog, parse_spider_entry

SNAPSHOT_FORMAT = "qrec-reference-snapshot"


@dataclass(frozen=True)
class DomainGroup:
    domain_label: str
    schema: SchemaCatalog
    queries: tuple[QueryIR, ...]

    def __post_init__(self):
        if not self.queries:
            raise MalformedFile(f"domain group {self.domain_label!r} has no queries")


@dataclass(frozen=True)
class ReferenceRepository:
    groups: tuple[DomainGroup, ...] = ()
    skipped_queries: int = field(default=0, compare=False)

    def __post_init__(self):
        labels = [g.domain_label for g in self.groups]
        if len(set(labels)) != len(labels):
            raise MalformedFile("duplicate domain labels in repository")

    def to_dict(self) -> dict:
        return {
            "format": SNAPSHOT_FORMAT,
            "version": 1,
            "domains": [
                {
                    "domain_label": g.domain_label,
                    "schema": g.schema.to_dict(),
                    "queries": [q.to_dict() for q in g.queries],
                }
                for g in self.groups
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReferenceRepository":
        if not isinstance(data, dict) or data.get("format") != SNAPSHOT_FORMAT:
            raise MalformedFile("not a reference repository snapshot")
        try:
            groups = tuple(
                DomainGroup(
                    domain_label=d["domain_label"],
                    schema=SchemaCatalog.from_dict(d["schema"]),
                    queries=tuple(QueryIR.from_dict(q) for q in d["queries"]),
                )
                for d in data["domains"]
            )
        except (KeyError, TypeError) as exc:
            raise MalformedFile(f"bad snapshot payload: {exc}") from exc
        return cls(groups=groups)


def load_log(schemas_path, queries_path) -> ReferenceRepository:
    """Load a Spider-style reference log into a domain-grouped repository.

    Queries outside the supported subset, over unknown databases, or duplicated
    per (db_id, canonical SQL) are counted and skipped; databases whose every
    query is skipped are dropped.
    """
    try:
        with open(schemas_path, encoding="utf-8") as fh:
            schema_entries = json.load(fh)
        with open(queries_path, encoding="utf-8") as fh:
            records = json.load(fh)
    except OSError as exc:
        raise MalformedFile(f"cannot read reference log: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"reference log is not valid JSON: {exc}") from exc
    if not isinstance(schema_entries, list) or not isinstance(records, list):
        raise MalformedFile("reference log files must hold JSON lists")

    catalogs: dict[str, SchemaCatalog] = {}
    for entry in schema_entries:
        if not isinstance(entry, dict) or "db_id" not in entry:
            raise MalformedFile("schema entry without db_id")
        try:
            catalogs[entry["db_id"]] = parse_spider_entry(entry)
        except QrecError:
            continue  # a broken reference schema only disables its own domain

    grouped: dict[str, list[QueryIR]] = {}
    seen: set[tuple[str, str]] = set()
    skipped = 0
    for record in records:
        if not isinstance(record, dict):
            skipped += 1
            continue
        db_id = record.get("db_id")
        sql = record.get("query")
        catalog = catalogs.get(db_id)
        if catalog is None or not isinstance(sql, str):
            skipped += 1
            continue
        try:
            ir = parse_sql(sql, catalog)
        except QrecError:
            skipped += 1
            continue
        key = (db_id, synthesize_sql(ir))
        if key in seen:
            skipped += 1
            continue
        seen.add(key)
        grouped.setdefault(db_id, []).append(ir)

    groups = tuple(
        DomainGroup(
            domain_label=db_id.replace("_", " "),
            schema=catalogs[db_id],
            queries=tuple(irs),
        )
        for db_id, irs in sorted(grouped.items())
    )
    if not groups:
        raise NoUsableQueries("every reference query was skipped")
    return ReferenceRepository(groups=groups, skipped_queries=skipped)


def save_snapshot(repo: ReferenceRepository, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(repo.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_snapshot(path) -> ReferenceRepository:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MalformedFile(f"cannot read snapshot: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"snapshot is not valid JSON: {exc}") from exc
    return ReferenceRepository.from_dict(data)


def retrieve_relevant_domains(
    repo: ReferenceRepository,
    target_domain: str,
    k: int,
    embedder: Embedder | None = None,
) -> list[tuple[DomainGroup, float]]:
    """Rank domain groups by label similarity to the target domain, top k.

    Ties break lexicographically by label so the prefix is stable.
    """
    emb = embedder or default_embedder()
    scored = [(g, emb.similarity(target_domain, g.domain_label)) for g in repo.groups]
    scored.sort(key=lambda pair: (-pair[1], pair[0].domain_label))
    return scored[: max(k, 0)]


def reference_queries(groups: list[DomainGroup]) -> list[QueryIR]:
    """Concatenate group queries in rank order."""
    out: list[QueryIR] = []
    for g in groups:
        out.extend(g.queries)
    return out
