"""Service configuration file loading and wiring helpers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .embedding import Embedder, EmbedderConfig
from .errors import MalformedFile
from .recommender import RecommenderConfig
from .reference import ReferenceRepository, load_log, load_snapshot
from .schema import load_sqlite_schema
from .session import DatabaseBundle, SessionService


@dataclass(frozen=True)
class AppConfig:
    """Service settings: where the data lives, how the recommender is tuned."""

    databases: tuple[str, ...] = ()
    reference_snapshot: str | None = None
    reference_schemas: str | None = None
    reference_queries: str | None = None
    storage: str | None = None
    port: int = 8000
    recommender: RecommenderConfig = field(default_factory=RecommenderConfig)
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "AppConfig":
        def resolve(value):
            if value is None or base_dir is None:
                return value
            return str((base_dir / value).resolve()) if not Path(value).is_absolute() else value

        return cls(
            databases=tuple(resolve(p) for p in data.get("databases", [])),
            reference_snapshot=resolve(data.get("reference_snapshot")),
            reference_schemas=resolve(data.get("reference_schemas")),
            reference_queries=resolve(data.get("reference_queries")),
            storage=resolve(data.get("storage")),
            port=int(data.get("port", 8000)),
            recommender=RecommenderConfig.from_dict(data.get("recommender", {})),
            embedder=EmbedderConfig.from_dict(data.get("embedder", {})),
        )

    @classmethod
    def from_json(cls, path) -> "AppConfig":
        p = Path(path)
        try:
            with open(p, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise MalformedFile(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedFile(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data, base_dir=p.parent)


def load_reference(config: AppConfig) -> ReferenceRepository:
    if config.reference_snapshot:
        return load_snapshot(config.reference_snapshot)
    if config.reference_schemas and config.reference_queries:
        return load_log(config.reference_schemas, config.reference_queries)
    return ReferenceRepository()


def build_service(config: AppConfig) -> SessionService:
    bundles = {}
    for path in config.databases:
        catalog = load_sqlite_schema(path)
        database_id = Path(path).stem
        bundles[database_id] = DatabaseBundle(
            database_id=database_id, catalog=catalog, sqlite_path=str(path)
        )
    return SessionService(
        databases=bundles,
        repository=load_reference(config),
        recommender_config=config.recommender,
        embedder=Embedder(config.embedder),
        storage_path=config.storage,
    )
