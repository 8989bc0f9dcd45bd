"""qrec: next-step SQL query recommendation with chart suggestion.

Load a schema catalog and a reference query log, ask for initial or
context-aware next-step queries, execute them, and map results to chart
specs.  The CLI (``qrec``) and the HTTP session service wrap the same
library surface.
"""

from .charts import ChartSpec, recommend_chart
from .embedding import Embedder, EmbedderConfig, EmbeddingVector, cosine, embed, text_similarity
from .execution import ResultTable, SqliteBackend, classify_fields, execute
from .ir import (
    ActionKind,
    AggregateFn,
    QueryIR,
    SelectItem,
    action_columns,
    render_nl,
    synthesize_sql,
)
from .itemsets import mine_frequent_attribute_sets
from .parser import parse_sql
from .recommender import (
    ExplorationContext,
    Recommendation,
    RecommendationSet,
    RecommenderConfig,
    action_similarity,
    assemble_query,
    contextual_score,
    recommend_initial,
    recommend_next,
    relevance,
    suggest_aggregations,
)
from .reference import (
    DomainGroup,
    ReferenceRepository,
    load_log,
    load_snapshot,
    reference_queries,
    retrieve_relevant_domains,
    save_snapshot,
)
from .relevance import RelevanceVector, column_relevance_vector
from .schema import (
    ColumnRef,
    SchemaCatalog,
    TableDef,
    join_path,
    load_spider_schema,
    load_sqlite_schema,
)
from .session import DashboardCell, HistoryEntry, SessionService, build_explanation

__version__ = "0.1.0"

__all__ = [
    "ActionKind",
    "AggregateFn",
    "ChartSpec",
    "ColumnRef",
    "DashboardCell",
    "DomainGroup",
    "Embedder",
    "EmbedderConfig",
    "EmbeddingVector",
    "ExplorationContext",
    "HistoryEntry",
    "QueryIR",
    "Recommendation",
    "RecommendationSet",
    "RecommenderConfig",
    "ReferenceRepository",
    "RelevanceVector",
    "ResultTable",
    "SchemaCatalog",
    "SelectItem",
    "SessionService",
    "SqliteBackend",
    "TableDef",
    "action_columns",
    "action_similarity",
    "assemble_query",
    "build_explanation",
    "classify_fields",
    "column_relevance_vector",
    "contextual_score",
    "cosine",
    "embed",
    "execute",
    "join_path",
    "load_log",
    "load_snapshot",
    "load_spider_schema",
    "load_sqlite_schema",
    "mine_frequent_attribute_sets",
    "parse_sql",
    "recommend_chart",
    "recommend_initial",
    "recommend_next",
    "reference_queries",
    "relevance",
    "render_nl",
    "retrieve_relevant_domains",
    "save_snapshot",
    "suggest_aggregations",
    "synthesize_sql",
    "text_similarity",
]
