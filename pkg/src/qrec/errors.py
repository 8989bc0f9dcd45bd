"""Exception hierarchy shared across the package."""


class QrecError(Exception):
    """Base class for all package errors."""


# -- schema loading ----------------------------------------------------------

class MalformedFile(QrecError):
    """Input file cannot be parsed in the expected format."""


class EmptyCatalog(QrecError):
    """Schema source contains no user tables."""


class DanglingForeignKey(QrecError):
    """A foreign-key pair references a missing table or column."""


class NoJoinPath(QrecError):
    """Two tables are not connected through any chain of FK edges."""


# -- SQL parsing -------------------------------------------------------------

class SqlSyntaxError(QrecError):
    """Query text is outside the supported grammar.

    ``position`` is the character offset of the offending token.
    """

    def __init__(self, message: str, position: int = 0):
        super().__init__(message)
        self.position = position


class UnknownTable(QrecError):
    """A referenced table does not exist in the catalog."""


class UnknownColumn(QrecError):
    """A referenced column does not exist in its table."""


class AmbiguousColumn(QrecError):
    """An unqualified column name matches more than one source table."""


class InvalidQueryIR(QrecError):
    """A QueryIR violates one of its structural invariants."""


# -- embedding ---------------------------------------------------------------

class EmptyText(QrecError):
    """Text is empty after trimming and cannot be embedded."""


class DimensionMismatch(QrecError):
    """Vectors (or relevance bit strings) have unequal lengths."""


class EmbeddingServiceError(QrecError):
    """The external embedding service failed or returned a bad payload."""


# -- reference repository ----------------------------------------------------

class NoUsableQueries(QrecError):
    """Every record of a reference log was skipped."""


# -- recommendation ----------------------------------------------------------

class EmptyHistory(QrecError):
    """A contextual score was requested for an empty history."""


class NoCandidates(QrecError):
    """No recommendation candidate could be produced at all."""


# -- execution ---------------------------------------------------------------

class BackendError(QrecError):
    """The execution backend failed while evaluating a query."""


class SchemaDrift(QrecError):
    """A query references columns that no longer exist in the backend."""


# -- session service ---------------------------------------------------------

class UnknownDatabase(QrecError):
    """The requested database id is not registered with the service."""


class UnknownSession(QrecError):
    """The requested session id does not exist."""


class StaleRecommendationIndex(QrecError):
    """A recommendation index does not match the last-served set."""


class IndexOutOfRange(QrecError):
    """A history index is outside the session's history."""


class InvalidCell(QrecError):
    """A dashboard cell references an invalid history index or geometry."""


class OverlappingCells(QrecError):
    """Two dashboard cells occupy overlapping grid areas."""


class UnknownDashboard(QrecError):
    """The requested dashboard id does not exist."""
