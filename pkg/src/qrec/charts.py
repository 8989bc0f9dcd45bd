"""Rule-based mapping from classified result tables to chart specifications."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .execution import ResultTable

MARKS = ("bar", "line", "scatter", "heatmap", "histogram", "value_card", "table")

_VEGA_MARK = {
    "bar": "bar",
    "line": "line",
    "scatter": "point",
    "heatmap": "rect",
    "histogram": "bar",
    "value_card": "text",
    "table": "text",
}

_VEGA_TYPE = {"Q": "quantitative", "N": "nominal", "T": "temporal"}


@dataclass(frozen=True)
class ChartSpec:
    """Declarative chart: mark, channel encodings, and inline data rows."""

    mark: str
    encodings: dict[str, tuple[str, str]] = field(default_factory=dict)
    data: tuple[dict, ...] = ()

    def __post_init__(self):
        if self.mark not in MARKS:
            raise ValueError(f"unknown mark {self.mark!r}")
        if self.mark not in ("table", "value_card") and not (
            "x" in self.encodings and "y" in self.encodings
        ):
            raise ValueError(f"mark {self.mark!r} needs x and y encodings")

    def to_dict(self) -> dict:
        return {
            "mark": self.mark,
            "encodings": {ch: [f, t] for ch, (f, t) in self.encodings.items()},
            "data": [dict(row) for row in self.data],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChartSpec":
        return cls(
            mark=data["mark"],
            encodings={ch: (f, t) for ch, (f, t) in data["encodings"].items()},
            data=tuple(data["data"]),
        )

    def to_vega_lite(self) -> dict:
        """Valid vega-lite document for any renderer.

        Graphic marks translate directly; value_card and the raw-table
        fallback become text marks so the document stays loadable.
        """
        doc: dict = {
            "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
            "mark": _VEGA_MARK[self.mark],
            "data": {"values": [dict(row) for row in self.data]},
        }
        encoding: dict = {}
        if self.mark == "histogram":
            f, t = self.encodings["x"]
            encoding["x"] = {"field": f, "type": _VEGA_TYPE[t], "bin": True}
            encoding["y"] = {"aggregate": "count", "type": "quantitative"}
        else:
            for channel, (f, t) in self.encodings.items():
                encoding[channel] = {"field": f, "type": _VEGA_TYPE[t]}
        if self.mark in ("value_card", "table") and self.data:
            first_field = next(iter(self.data[0]))
            encoding = {"text": {"field": first_field, "type": "nominal"}}
        if encoding:
            doc["encoding"] = encoding
        return doc


def _rows_as_dicts(table: ResultTable) -> tuple[dict, ...]:
    names = [name for name, _ in table.columns]
    return tuple({name: value for name, value in zip(names, row)} for row in table.rows)


def _value_counts(table: ResultTable, index: int) -> tuple[dict, ...]:
    name = table.columns[index][0]
    counts = Counter(str(row[index]) for row in table.rows)
    return tuple({name: value, "count": counts[value]} for value in sorted(counts))


def _cooccurrence(table: ResultTable, i: int, j: int) -> tuple[dict, ...]:
    name_i = table.columns[i][0]
    name_j = table.columns[j][0]
    counts = Counter((str(row[i]), str(row[j])) for row in table.rows)
    return tuple(
        {name_i: a, name_j: b, "count": counts[(a, b)]} for a, b in sorted(counts)
    )


def recommend_chart(table: ResultTable) -> ChartSpec:
    """Pick a mark from the field-type signature of a classified table.

    Rule table: 1x1 -> value_card; QxN -> bar; QxT -> line; QxQ -> scatter;
    NxN -> co-occurrence heatmap; lone Q -> histogram; lone N -> count bar;
    QxNxN -> grouped bar with color; anything else -> raw table.
    """
    types = table.field_types
    if any(t is None for t in types):
        raise ValueError("classify_fields must run before chart recommendation")
    names = [name for name, _ in table.columns]
    rows = _rows_as_dicts(table)

    def first(kind: str, skip: int = 0) -> int:
        seen = 0
        for idx, t in enumerate(types):
            if t == kind:
                if seen == skip:
                    return idx
                seen += 1
        raise IndexError(kind)

    if len(types) == 1 and len(table.rows) == 1:
        return ChartSpec(mark="value_card", data=rows)

    signature = sorted(types)
    if len(types) == 1:
        if types[0] == "Q":
            return ChartSpec(
                mark="histogram",
                encodings={"x": (names[0], "Q"), "y": ("count", "Q")},
                data=rows,
            )
        if types[0] == "N":
            return ChartSpec(
                mark="bar",
                encodings={"x": (names[0], "N"), "y": ("count", "Q")},
                data=_value_counts(table, 0),
            )
        return ChartSpec(mark="table", data=rows)

    if len(types) == 2:
        if signature == ["N", "Q"]:
            return ChartSpec(
                mark="bar",
                encodings={"x": (names[first("N")], "N"), "y": (names[first("Q")], "Q")},
                data=rows,
            )
        if signature == ["Q", "T"]:
            return ChartSpec(
                mark="line",
                encodings={"x": (names[first("T")], "T"), "y": (names[first("Q")], "Q")},
                data=rows,
            )
        if signature == ["Q", "Q"]:
            return ChartSpec(
                mark="scatter",
                encodings={"x": (names[0], "Q"), "y": (names[1], "Q")},
                data=rows,
            )
        if signature == ["N", "N"]:
            return ChartSpec(
                mark="heatmap",
                encodings={
                    "x": (names[0], "N"),
                    "y": (names[1], "N"),
                    "color": ("count", "Q"),
                },
                data=_cooccurrence(table, 0, 1),
            )

    if len(types) == 3 and signature == ["N", "N", "Q"]:
        return ChartSpec(
            mark="bar",
            encodings={
                "x": (names[first("N")], "N"),
                "y": (names[first("Q")], "Q"),
                "color": (names[first("N", skip=1)], "N"),
            },
            data=rows,
        )

    return ChartSpec(mark="table", data=rows)
