"""Packaged corpus of worked example patterns with their known classification.

Every pattern ships as a text file under ``data/patterns`` and carries the
rank bound it is meant to be analyzed at plus the expected analysis outcome,
which `detmatroid verify-fixtures` replays.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .completability import Status
from .patterns import Pattern, parse_pattern


@dataclass(frozen=True)
class Fixture:
    name: str
    r: int
    is_base: Optional[bool]  # None: not asserted
    status: Optional[Status]
    unique_ruled_out: bool = False
    note: str = ""

    def load(self) -> Pattern:
        return load_pattern(self.name)


def load_pattern(name: str) -> Pattern:
    text = resources.files("detmatroid").joinpath(f"data/patterns/{name}.txt").read_text()
    return parse_pattern(text)


FIXTURES: tuple[Fixture, ...] = (
    Fixture(
        "antidiag-9x9",
        r=4,
        is_base=True,
        status=None,
        note="anti-diagonal path-family base; no column partition certificate exists",
    ),
    Fixture(
        "slmf-but-not-base",
        r=2,
        is_base=False,
        status=Status.NOT_FINITELY,
        note="passes the necessary column-excess test yet is dependent (chained 3x3 blocks)",
    ),
    Fixture(
        "ladder-dep-9x9",
        r=4,
        is_base=False,
        status=Status.NOT_FINITELY,
        note="staircase region with two overfull blocks; dependence via the chained-block bound",
    ),
    Fixture(
        "blocks-dep-12x12",
        r=5,
        is_base=False,
        status=Status.NOT_FINITELY,
        note="four 6x6 blocks overlapping in a 4x4 core; 3 missing cells < 4 capacities",
    ),
    Fixture(
        "hollow-4x4",
        r=2,
        is_base=True,
        status=Status.FINITELY,
        unique_ruled_out=True,
        note="all ones minus the diagonal; the exceptional non-unique corank-2 base",
    ),
    Fixture(
        "unique-6x6",
        r=2,
        is_base=True,
        status=Status.UNIQUELY,
        note="uniquely completable base that greedy closure cannot certify",
    ),
    Fixture(
        "nonunique-5x6",
        r=3,
        is_base=True,
        status=Status.FINITELY,
        unique_ruled_out=True,
        note="base whose missing-corner fiber is a cubic; generically three completions",
    ),
    Fixture("antidiag-4x4-1", r=2, is_base=True, status=Status.UNIQUELY, note="staircase ladder"),
    Fixture("antidiag-4x4-2", r=2, is_base=True, status=Status.UNIQUELY, note="staircase ladder"),
    Fixture(
        "antidiag-4x4-3",
        r=2,
        is_base=True,
        status=Status.UNIQUELY,
        note="unique but not a ladder under any row/column permutation",
    ),
    Fixture(
        "antidiag-4x4-4",
        r=2,
        is_base=True,
        status=Status.FINITELY,
        unique_ruled_out=True,
        note="path family whose four missing cells are scattered; not uniquely completable",
    ),
)


def fixture_by_name(name: str) -> Fixture:
    for f in FIXTURES:
        if f.name == name:
            return f
    raise KeyError(f"unknown fixture {name!r}")
