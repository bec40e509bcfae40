"""Structured analysis reports: deterministic text plus a JSON sidecar.

Reports are byte-identical across runs given the same input, seed and trial
counts; wall-clock timing therefore never enters the report body (the CLI
prints it to stderr instead).  The JSON schema is versioned; see README for
the field list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from . import __version__
from .completability import CompletabilityVerdict
from .patterns import MatroidContext, Pattern, cells_one_based, pattern_digest

SCHEMA_VERSION = 1


@dataclass
class Report:
    pattern: Pattern
    ctx: MatroidContext
    sections: dict[str, dict[str, Any]] = field(default_factory=dict)
    verdict: Optional[CompletabilityVerdict] = None

    def add(self, name: str, **fields: Any) -> None:
        self.sections[name] = fields

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "detmatroid", "version": __version__},
            "input": {
                "digest": pattern_digest(self.pattern),
                "m": self.pattern.m,
                "n": self.pattern.n,
                "observed": self.pattern.size,
                "rank": self.ctx.r,
                "rank_bound": self.ctx.rank_bound,
            },
            "analyses": self.sections,
        }
        if self.verdict is not None:
            out["verdict"] = {
                "status": self.verdict.status.value,
                "confidence": self.verdict.confidence.value,
                "unique_ruled_out": self.verdict.unique_ruled_out,
                "evidence": [
                    {"rule": e.rule, "detail": e.detail, "proved": e.proved}
                    for e in self.verdict.evidence
                ],
            }
        return out

    def to_text(self) -> str:
        lines = [
            f"detmatroid report v{SCHEMA_VERSION} (tool {__version__})",
            f"input: {self.pattern.m}x{self.pattern.n}, rank bound r={self.ctx.r}, "
            f"observed {self.pattern.size} of {self.pattern.m * self.pattern.n} "
            f"(matroid rank bound {self.ctx.rank_bound})",
            f"digest: {pattern_digest(self.pattern)}",
        ]
        for name in self.sections:
            lines.append(f"[{name}]")
            for key, value in self.sections[name].items():
                lines.append(f"  {key}: {_fmt(value)}")
        if self.verdict is not None:
            lines.append("[verdict]")
            lines.append(f"  status: {self.verdict.status.value}")
            lines.append(f"  confidence: {self.verdict.confidence.value}")
            lines.append(f"  unique_ruled_out: {self.verdict.unique_ruled_out}")
            for e in self.verdict.evidence:
                tag = "proved" if e.proved else "heuristic"
                lines.append(f"  - {e.rule} ({tag}): {e.detail}")
        return "\n".join(lines) + "\n"

    def write_json(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fmt(value: Any) -> str:
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    if isinstance(value, (list, tuple)):
        return json.dumps(list(value))
    return str(value)


def describe_blocks(blocks: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]) -> list[str]:
    out = []
    for rows, cols in blocks:
        out.append(
            "rows {" + ",".join(str(i + 1) for i in rows) + "} x cols {"
            + ",".join(str(j + 1) for j in cols) + "}"
        )
    return out


def describe_cells(cells) -> list[list[int]]:
    return [[i, j] for i, j in cells_one_based(cells)]
