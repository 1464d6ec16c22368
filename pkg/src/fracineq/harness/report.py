"""Run reports and their JSON / CSV serialisations.

Every result is a flat row dict with a ``kind`` (``identity``, ``bound``,
``remark``, ``certification``, ``falsify`` or ``error``), a ``key`` naming
the instance and a ``status`` (``pass``, ``flag``, ``fail`` or ``error``).
CSV output uses :data:`COLUMNS` as its fixed column order and leaves cells
that do not apply to a row's kind empty. Floats are written with ``repr``
so a JSON -> CSV -> float round trip is exact.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

__all__ = [
    "COLUMNS",
    "STATUSES",
    "RunReport",
    "summarize",
    "rows_to_csv",
    "read_csv",
    "json_to_csv",
]

STATUSES = ("pass", "flag", "fail", "error")

COLUMNS = (
    "kind", "key", "status",
    "theorem", "mode", "variant", "lemma", "trial",
    "fn", "map", "a", "b", "alpha", "lambda", "q",
    "gap", "paper_bound", "oracle_bound", "oracle_bound_loose", "slack_ratio",
    "bound_holds_oracle", "bound_holds_paper", "paper_vs_oracle_rel_diff",
    "paper_below_oracle", "certified", "tolerance", "gap_error", "oracle_error",
    "lhs", "rhs", "residual", "abs_residual", "combined_quadrature_error",
    "general_bound", "remark_bound", "rel_diff", "rel_diff_prefactor",
    "max_violation", "argmax_u", "argmax_v", "argmax_t", "grid_u", "grid_v", "grid_t",
    "error", "message", "notes",
)

_BOOL_COLUMNS = {"bound_holds_oracle", "bound_holds_paper", "paper_below_oracle", "certified"}
_INT_COLUMNS = {"trial", "grid_u", "grid_v", "grid_t"}
_TEXT_COLUMNS = {"kind", "key", "status", "theorem", "mode", "variant", "lemma", "fn", "map",
                 "error", "message", "notes"}
_KIND_ORDER = {"identity": 0, "certification": 1, "bound": 2, "remark": 3, "falsify": 4, "error": 5}


def row_sort_key(row: dict):
    return (
        row.get("key", ""),
        _KIND_ORDER.get(row.get("kind"), 9),
        row.get("lemma") or "",
        row.get("theorem") or "",
        row.get("mode") or "",
        row.get("variant") or "",
    )


def summarize(results) -> dict:
    counts = {s: 0 for s in STATUSES}
    for row in results:
        counts[row["status"]] += 1
    counts["total"] = len(results)
    return counts


@dataclass
class RunReport:
    command: str
    tool_version: str
    config_echo: dict
    results: list
    summary: dict = field(default_factory=dict)
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.summary:
            self.summary = summarize(self.results)

    @property
    def exit_code(self) -> int:
        """0 when every row passed, 1 when any flag, failure or error is present."""
        s = self.summary
        return 0 if s["flag"] == s["fail"] == s["error"] == 0 else 1

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "command": self.command,
            "tool_version": self.tool_version,
            "config_echo": self.config_echo,
            "summary": self.summary,
        }
        if self.extra:
            out["extra"] = self.extra
        out["results"] = self.results
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_timing: bool = False) -> str:
        # wall_time is opt-in so that reruns stay byte-identical
        return json.dumps(self.to_dict(include_timing), indent=2) + "\n"

    def to_csv(self) -> str:
        return rows_to_csv(self.results)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(
            command=data.get("command", ""),
            tool_version=data.get("tool_version", ""),
            config_echo=data.get("config_echo", {}),
            results=list(data.get("results", [])),
            summary=data.get("summary", {}),
            wall_time=data.get("wall_time", 0.0),
            extra=data.get("extra", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "; ".join(str(v) for v in value)
    return str(value)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        unknown = set(row) - set(COLUMNS)
        if unknown:
            raise KeyError(f"row has columns outside the CSV schema: {sorted(unknown)}")
        writer.writerow([_cell(row.get(c)) for c in COLUMNS])
    return buf.getvalue()


def _parse_cell(column, text):
    if text == "":
        return None
    if column in _TEXT_COLUMNS:
        return text
    if column in _BOOL_COLUMNS:
        return text == "true"
    if column in _INT_COLUMNS:
        return int(text)
    return float(text)


def read_csv(text: str) -> list[dict]:
    """Parse CSV written by :func:`rows_to_csv`; empty cells are dropped."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError("CSV header does not match the report column order")
    rows = []
    for raw in reader:
        row = {}
        for col, cell in zip(header, raw):
            value = _parse_cell(col, cell)
            if value is not None:
                row[col] = value
        rows.append(row)
    return rows


def json_to_csv(json_text: str) -> str:
    return RunReport.from_json(json_text).to_csv()
