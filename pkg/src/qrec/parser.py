"""Parser for the supported SQL subset.

Grammar (see ``docs/sql-subset.md``): a single SELECT list of columns or
aggregates, FROM with INNER JOIN ... ON equality chains, and an optional
GROUP BY.  Reference logs contain richer SQL, so WHERE / HAVING / ORDER BY /
LIMIT clauses, set operations past the first SELECT block, DISTINCT, aliases,
and star or unsupported select items are tolerated and dropped; any drop marks
the resulting IR ``lossy``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AmbiguousColumn, SqlSyntaxError, UnknownColumn, UnknownTable
from .ir import AggregateFn, QueryIR, SelectItem, validate_ir
from .schema import ColumnRef, SchemaCatalog

_KEYWORDS = {
    "SELECT", "FROM", "JOIN", "INNER", "LEFT", "RIGHT", "FULL", "CROSS", "OUTER",
    "ON", "GROUP", "BY", "WHERE", "HAVING", "ORDER", "LIMIT", "OFFSET", "AS",
    "AND", "OR", "NOT", "DISTINCT", "UNION", "INTERSECT", "EXCEPT", "ASC", "DESC",
}
_AGGREGATES = {fn.value for fn in AggregateFn}
_CLAUSE_STARTERS = {"GROUP", "ORDER", "HAVING", "LIMIT", "OFFSET", "UNION", "INTERSECT", "EXCEPT"}


@dataclass(frozen=True)
class _Token:
    kind: str  # KEYWORD | IDENT | NUMBER | STRING | SYMBOL | EOF
    value: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if ch in "'\"`":
            quote = ch
            i += 1
            while i < n and text[i] != quote:
                i += 1
            if i >= n:
                raise SqlSyntaxError("unterminated string literal", start)
            tokens.append(_Token("STRING", text[start + 1 : i], start))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            i += 1
            while i < n and (text[i].isdigit() or text[i] == "."):
                i += 1
            tokens.append(_Token("NUMBER", text[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            i += 1
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            word = text[start:i]
            upper = word.upper()
            if upper in _KEYWORDS or upper in _AGGREGATES:
                tokens.append(_Token("KEYWORD", upper, start))
            else:
                tokens.append(_Token("IDENT", word, start))
            continue
        if text[i : i + 2] in ("<=", ">=", "!=", "<>"):
            tokens.append(_Token("SYMBOL", text[i : i + 2], start))
            i += 2
            continue
        if ch in "(),.*=<>;+-/%":
            tokens.append(_Token("SYMBOL", ch, start))
            i += 1
            continue
        raise SqlSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("EOF", "", n))
    return tokens


@dataclass
class _RawColumn:
    qualifier: str | None
    name: str
    position: int


class _Parser:
    def __init__(self, text: str, catalog: SchemaCatalog):
        self.text = text
        self.catalog = catalog
        self.tokens = _tokenize(text)
        self.pos = 0
        self.lossy = False

    # -- token plumbing ---------------------------------------------------

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def accept(self, kind: str, value: str | None = None) -> _Token | None:
        tok = self.peek()
        if tok.kind == kind and (value is None or tok.value == value):
            return self.advance()
        return None

    def expect(self, kind: str, value: str | None = None) -> _Token:
        tok = self.accept(kind, value)
        if tok is None:
            got = self.peek()
            want = value or kind
            raise SqlSyntaxError(f"expected {want}, found {got.value or 'end of input'!r}", got.position)
        return tok

    def skip_until(self, stops: set[str]) -> None:
        """Skip tokens (paren-balanced) until one of the stop keywords at depth 0."""
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return
            if tok.kind == "SYMBOL" and tok.value == "(":
                depth += 1
            elif tok.kind == "SYMBOL" and tok.value == ")":
                if depth == 0:
                    return
                depth -= 1
            elif depth == 0 and tok.kind == "KEYWORD" and tok.value in stops:
                return
            self.advance()

    # -- grammar ----------------------------------------------------------

    def parse(self) -> QueryIR:
        self.expect("KEYWORD", "SELECT")
        if self.accept("KEYWORD", "DISTINCT"):
            self.lossy = True

        raw_items = self.parse_select_list()
        self.expect("KEYWORD", "FROM")
        aliases: dict[str, str] = {}
        from_table = self.parse_table_ref(aliases)
        tables_in_order = [from_table]
        raw_joins: list[tuple[_RawColumn, _RawColumn, str]] = []

        while True:
            tok = self.peek()
            if tok.kind != "KEYWORD":
                break
            if tok.value in ("JOIN", "INNER", "LEFT", "RIGHT", "FULL", "CROSS"):
                joined = self.parse_join(aliases, raw_joins)
                tables_in_order.append(joined)
                continue
            break

        if self.accept("KEYWORD", "WHERE"):
            self.lossy = True
            self.skip_until(_CLAUSE_STARTERS)

        raw_grouping: list[_RawColumn] = []
        if self.peek().kind == "KEYWORD" and self.peek().value == "GROUP":
            self.advance()
            self.expect("KEYWORD", "BY")
            raw_grouping.append(self.parse_column_token())
            while self.accept("SYMBOL", ","):
                raw_grouping.append(self.parse_column_token())

        if self.accept("KEYWORD", "HAVING"):
            self.lossy = True
            self.skip_until(_CLAUSE_STARTERS - {"HAVING"})
        if self.peek().kind == "KEYWORD" and self.peek().value == "ORDER":
            self.lossy = True
            self.advance()
            self.skip_until({"LIMIT", "OFFSET", "UNION", "INTERSECT", "EXCEPT"})
        if self.peek().kind == "KEYWORD" and self.peek().value in ("LIMIT", "OFFSET"):
            self.lossy = True
            self.skip_until({"UNION", "INTERSECT", "EXCEPT"})
        if self.peek().kind == "KEYWORD" and self.peek().value in ("UNION", "INTERSECT", "EXCEPT"):
            self.lossy = True
            while self.peek().kind != "EOF":
                self.advance()
        self.accept("SYMBOL", ";")
        tail = self.peek()
        if tail.kind != "EOF":
            raise SqlSyntaxError(f"unexpected trailing input {tail.value!r}", tail.position)

        return self.resolve(raw_items, tables_in_order, raw_joins, raw_grouping, aliases)

    def parse_select_list(self) -> list[tuple[_RawColumn | None, AggregateFn | None]]:
        items: list[tuple[_RawColumn | None, AggregateFn | None]] = []
        while True:
            items.append(self.parse_select_item())
            if not self.accept("SYMBOL", ","):
                break
        if not any(col is not None for col, _ in items):
            raise SqlSyntaxError("no supported select items", self.peek().position)
        return items

    def parse_select_item(self) -> tuple[_RawColumn | None, AggregateFn | None]:
        tok = self.peek()
        if tok.kind == "SYMBOL" and tok.value == "*":
            self.advance()
            self.lossy = True
            return None, None
        if tok.kind == "KEYWORD" and tok.value in _AGGREGATES:
            fn = AggregateFn(self.advance().value)
            self.expect("SYMBOL", "(")
            if self.accept("KEYWORD", "DISTINCT"):
                self.lossy = True
            if self.accept("SYMBOL", "*"):
                self.expect("SYMBOL", ")")
                self.lossy = True
                self.maybe_alias()
                return None, None
            col = self.parse_column_token()
            self.expect("SYMBOL", ")")
            self.maybe_alias()
            return col, fn
        if tok.kind == "IDENT":
            # An identifier followed by "(" is an unsupported function call.
            if self.peek(1).kind == "SYMBOL" and self.peek(1).value == "(":
                self.advance()
                self.skip_balanced_call()
                self.lossy = True
                self.maybe_alias()
                return None, None
            col = self.parse_column_token()
            self.maybe_alias()
            return col, None
        raise SqlSyntaxError(f"unsupported select item {tok.value!r}", tok.position)

    def skip_balanced_call(self) -> None:
        self.expect("SYMBOL", "(")
        depth = 1
        while depth > 0:
            tok = self.advance()
            if tok.kind == "EOF":
                raise SqlSyntaxError("unterminated parenthesis", tok.position)
            if tok.kind == "SYMBOL" and tok.value == "(":
                depth += 1
            elif tok.kind == "SYMBOL" and tok.value == ")":
                depth -= 1

    def maybe_alias(self) -> None:
        if self.accept("KEYWORD", "AS"):
            self.expect("IDENT")
            self.lossy = True
        elif self.peek().kind == "IDENT":
            self.advance()
            self.lossy = True

    def parse_column_token(self) -> _RawColumn:
        tok = self.expect("IDENT")
        qualifier = None
        name = tok.value
        if self.accept("SYMBOL", "."):
            qualifier = name
            name = self.expect("IDENT").value
        return _RawColumn(qualifier=qualifier, name=name, position=tok.position)

    def parse_table_ref(self, aliases: dict[str, str]) -> str:
        tok = self.expect("IDENT")
        name = tok.value
        if not self.catalog.has_table(name):
            raise UnknownTable(f"unknown table {name!r}")
        canonical = self.catalog.table(name).name
        if self.accept("KEYWORD", "AS"):
            alias = self.expect("IDENT").value
            aliases[alias.lower()] = canonical
            self.lossy = True
        elif self.peek().kind == "IDENT":
            alias = self.advance().value
            aliases[alias.lower()] = canonical
            self.lossy = True
        return canonical

    def parse_join(self, aliases: dict[str, str], raw_joins: list) -> str:
        tok = self.peek()
        if tok.value in ("LEFT", "RIGHT", "FULL", "CROSS"):
            self.advance()
            self.lossy = True
            self.accept("KEYWORD", "OUTER")
        elif tok.value == "INNER":
            self.advance()
        self.expect("KEYWORD", "JOIN")
        joined = self.parse_table_ref(aliases)
        self.expect("KEYWORD", "ON")
        left = self.parse_column_token()
        eq = self.expect("SYMBOL")
        if eq.value != "=":
            raise SqlSyntaxError("join conditions must be column equalities", eq.position)
        right = self.parse_column_token()
        raw_joins.append((left, right, joined))
        while self.accept("KEYWORD", "AND"):
            # extra conjuncts carry filter semantics the IR does not model
            self.lossy = True
            self.skip_until({"JOIN", "INNER", "LEFT", "RIGHT", "FULL", "CROSS", "WHERE"} | _CLAUSE_STARTERS)
            break
        return joined

    # -- name resolution ----------------------------------------------------

    def resolve_column(self, raw: _RawColumn, source_tables: list[str], aliases: dict[str, str]) -> ColumnRef:
        if raw.qualifier is not None:
            key = raw.qualifier.lower()
            if key in aliases:
                table = aliases[key]
            elif self.catalog.has_table(raw.qualifier):
                table = self.catalog.table(raw.qualifier).name
            else:
                raise UnknownTable(f"unknown table or alias {raw.qualifier!r}")
            if table not in source_tables:
                raise UnknownTable(f"table {table!r} is not part of the FROM clause")
            col = self.catalog.find_column(ColumnRef(table, raw.name))
            if col is None:
                raise UnknownColumn(f"table {table!r} has no column {raw.name!r}")
            return ColumnRef(table, col.name)

        owners = []
        for table in source_tables:
            col = self.catalog.table(table).column(raw.name)
            if col is not None:
                owners.append(ColumnRef(table, col.name))
        if not owners:
            raise UnknownColumn(f"no source table has a column {raw.name!r}")
        if len(owners) > 1:
            raise AmbiguousColumn(
                f"column {raw.name!r} matches {', '.join(str(o) for o in owners)}"
            )
        return owners[0]

    def resolve(
        self,
        raw_items: list[tuple[_RawColumn | None, AggregateFn | None]],
        tables_in_order: list[str],
        raw_joins: list[tuple[_RawColumn, _RawColumn, str]],
        raw_grouping: list[_RawColumn],
        aliases: dict[str, str],
    ) -> QueryIR:
        selections = tuple(
            SelectItem(self.resolve_column(raw, tables_in_order, aliases), fn)
            for raw, fn in raw_items
            if raw is not None
        )
        grouping = list(
            self.resolve_column(raw, tables_in_order, aliases) for raw in raw_grouping
        )

        # orient each ON equality so the already-joined side comes first
        seen = {tables_in_order[0]}
        edges = []
        for left_raw, right_raw, joined in raw_joins:
            left = self.resolve_column(left_raw, tables_in_order, aliases)
            right = self.resolve_column(right_raw, tables_in_order, aliases)
            if left.table in seen:
                edges.append((left, right))
            elif right.table in seen:
                edges.append((right, left))
            else:
                raise SqlSyntaxError(
                    f"join condition {left} = {right} references tables not yet joined",
                    left_raw.position,
                )
            seen.add(joined)
            seen.add(left.table)
            seen.add(right.table)

        # repair the grouping invariant: a plain selection absent from GROUP BY
        # keeps its selection signal but marks the IR lossy
        if grouping:
            group_set = set(grouping)
            for item in selections:
                if item.aggregate is None and item.column not in group_set:
                    grouping.append(item.column)
                    group_set.add(item.column)
                    self.lossy = True

        ir = QueryIR(
            selections=selections,
            grouping=tuple(grouping),
            source_tables=frozenset(tables_in_order),
            join_edges=tuple(edges),
            lossy=self.lossy,
        )
        validate_ir(ir)
        return ir


def parse_sql(text: str, catalog: SchemaCatalog) -> QueryIR:
    """Parse SQL text against a catalog into a validated :class:`QueryIR`.

    Raises :class:`SqlSyntaxError` (with a character position), or
    :class:`UnknownTable` / :class:`UnknownColumn` / :class:`AmbiguousColumn`
    when identifiers do not resolve.
    """
    if not text or not text.strip():
        raise SqlSyntaxError("empty query text", 0)
    return _Parser(text, catalog).parse()
