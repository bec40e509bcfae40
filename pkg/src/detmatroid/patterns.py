"""Observation patterns and their structural transforms.

A pattern records which entries of an m x n matrix are observed.  Cells are
kept as a frozenset of 0-based ``(row, col)`` pairs; the text format and all
human-facing output use 1-based coordinates.  Patterns are immutable: every
transform returns a new value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class PatternFormatError(ValueError):
    """Raised when a pattern file does not follow the expected format."""


class RegimeError(ValueError):
    """Raised when an operation is applied outside its rank regime."""


@dataclass(frozen=True)
class Pattern:
    """An m x n incidence pattern of observed cells (0-based internally)."""

    m: int
    n: int
    cells: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError(f"pattern dimensions must be positive, got {self.m}x{self.n}")
        cells = frozenset((int(i), int(j)) for i, j in self.cells)
        object.__setattr__(self, "cells", cells)
        for i, j in cells:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise ValueError(f"cell ({i},{j}) outside {self.m}x{self.n} grid")

    @property
    def size(self) -> int:
        return len(self.cells)

    def __contains__(self, cell: tuple[int, int]) -> bool:
        return cell in self.cells

    def row_counts(self) -> list[int]:
        counts = [0] * self.m
        for i, _ in self.cells:
            counts[i] += 1
        return counts

    def col_counts(self) -> list[int]:
        counts = [0] * self.n
        for _, j in self.cells:
            counts[j] += 1
        return counts

    def row_masks(self) -> list[int]:
        """Rows as column bitmasks (bit j set iff (i, j) observed)."""
        masks = [0] * self.m
        for i, j in self.cells:
            masks[i] |= 1 << j
        return masks

    def column_cells(self, j: int) -> frozenset[int]:
        return frozenset(i for i, c in self.cells if c == j)

    def complement_cells(self) -> frozenset[tuple[int, int]]:
        universe = {(i, j) for i in range(self.m) for j in range(self.n)}
        return frozenset(universe - self.cells)

    def with_cell(self, i: int, j: int) -> "Pattern":
        return Pattern(self.m, self.n, self.cells | {(i, j)})

    def without_cell(self, i: int, j: int) -> "Pattern":
        return Pattern(self.m, self.n, self.cells - {(i, j)})

    def grid_lines(self) -> list[str]:
        rows = []
        for i in range(self.m):
            rows.append("".join("1" if (i, j) in self.cells else "0" for j in range(self.n)))
        return rows

    def sorted_cells(self) -> list[tuple[int, int]]:
        return sorted(self.cells)

    @staticmethod
    def from_rows(rows: Sequence[str]) -> "Pattern":
        """Build a pattern from '0'/'1' strings, one per row."""
        m = len(rows)
        n = len(rows[0])
        cells = {(i, j) for i, line in enumerate(rows) for j, ch in enumerate(line) if ch == "1"}
        return Pattern(m, n, frozenset(cells))

    @staticmethod
    def full(m: int, n: int) -> "Pattern":
        return Pattern(m, n, frozenset((i, j) for i in range(m) for j in range(n)))


@dataclass(frozen=True)
class MatroidContext:
    """Problem dimensions together with the rank bound r, 1 <= r < min(m, n)."""

    m: int
    n: int
    r: int

    def __post_init__(self) -> None:
        if self.m < 2 or self.n < 2:
            raise RegimeError(f"need m, n >= 2, got {self.m}x{self.n}")
        if not 1 <= self.r < min(self.m, self.n):
            raise RegimeError(
                f"rank bound must satisfy 1 <= r < min(m, n); got r={self.r} for {self.m}x{self.n}"
            )

    @property
    def rank_bound(self) -> int:
        """Largest possible matroid rank of a pattern, r*(m+n-r)."""
        return self.r * (self.m + self.n - self.r)

    def check_pattern(self, p: Pattern) -> None:
        if (p.m, p.n) != (self.m, self.n):
            raise ValueError(f"pattern is {p.m}x{p.n} but context is {self.m}x{self.n}")

    def transposed(self) -> "MatroidContext":
        return MatroidContext(self.n, self.m, self.r)


def parse_pattern(text: str) -> Pattern:
    """Parse the pattern file format.

    First line is ``"m n"``; then m lines of exactly n characters '0'/'1'.
    A trailing newline is optional.  Raises :class:`PatternFormatError` on a
    malformed header, wrong line count or length, or illegal characters.
    """
    lines = text.splitlines()
    if not lines:
        raise PatternFormatError("empty pattern file")
    header = lines[0].split()
    if len(header) != 2:
        raise PatternFormatError(f"header must be 'm n', got {lines[0]!r}")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError as exc:
        raise PatternFormatError(f"non-integer header {lines[0]!r}") from exc
    if m < 1 or n < 1:
        raise PatternFormatError(f"dimensions must be positive, got {m}x{n}")
    body = lines[1:]
    if len(body) != m:
        raise PatternFormatError(f"expected {m} rows, got {len(body)}")
    cells = set()
    for i, line in enumerate(body):
        if len(line) != n:
            raise PatternFormatError(f"row {i + 1} has length {len(line)}, expected {n}")
        for j, ch in enumerate(line):
            if ch == "1":
                cells.add((i, j))
            elif ch != "0":
                raise PatternFormatError(f"illegal character {ch!r} in row {i + 1}")
    return Pattern(m, n, frozenset(cells))


def serialize_pattern(p: Pattern) -> str:
    lines = [f"{p.m} {p.n}"]
    lines.extend(p.grid_lines())
    return "\n".join(lines) + "\n"


def transpose(p: Pattern) -> Pattern:
    return Pattern(p.n, p.m, frozenset((j, i) for i, j in p.cells))


def permute(p: Pattern, row_perm: Sequence[int], col_perm: Sequence[int]) -> Pattern:
    """Relabel rows and columns; ``row_perm[i]`` is the new index of row i."""
    if sorted(row_perm) != list(range(p.m)):
        raise ValueError("row_perm is not a permutation of the rows")
    if sorted(col_perm) != list(range(p.n)):
        raise ValueError("col_perm is not a permutation of the columns")
    return Pattern(p.m, p.n, frozenset((row_perm[i], col_perm[j]) for i, j in p.cells))


def restrict_columns(p: Pattern, cols: Sequence[int]) -> Pattern:
    """Keep only the given columns (in the given order), renumbering them.

    An empty selection collapses to an empty m x 1 pattern, the smallest
    representable carrier of "nothing observed".
    """
    if not cols:
        return Pattern(p.m, 1, frozenset())
    index = {j: t for t, j in enumerate(cols)}
    cells = frozenset((i, index[j]) for i, j in p.cells if j in index)
    return Pattern(p.m, len(cols), cells)


def restrict_rows(p: Pattern, rows: Sequence[int]) -> Pattern:
    return transpose(restrict_columns(transpose(p), rows))


def reduce_columns(p: Pattern, ctx: MatroidContext) -> tuple[Pattern, list[int]]:
    """Drop every column with at most r observed entries.

    Dropping such columns does not change independence of the pattern.  The
    returned list holds the dropped 0-based column indices of the input.
    Row reduction is obtained by conjugating with :func:`transpose`.
    """
    ctx.check_pattern(p)
    counts = p.col_counts()
    kept = [j for j in range(p.n) if counts[j] > ctx.r]
    removed = [j for j in range(p.n) if counts[j] <= ctx.r]
    if not removed:
        return p, []
    return restrict_columns(p, kept), removed


def stitch(p: Pattern) -> Pattern:
    """Append a fully observed last row and last column."""
    cells = set(p.cells)
    cells.update((i, p.n) for i in range(p.m + 1))
    cells.update((p.m, j) for j in range(p.n))
    return Pattern(p.m + 1, p.n + 1, frozenset(cells))


def excise(p: Pattern) -> Pattern:
    """Inverse of :func:`stitch`; requires the last row and column fully observed."""
    if p.m < 2 or p.n < 2:
        raise ValueError("cannot excise a pattern with a single row or column")
    for j in range(p.n):
        if (p.m - 1, j) not in p.cells:
            raise ValueError("last row is not fully observed")
    for i in range(p.m):
        if (i, p.n - 1) not in p.cells:
            raise ValueError("last column is not fully observed")
    cells = frozenset((i, j) for i, j in p.cells if i < p.m - 1 and j < p.n - 1)
    return Pattern(p.m - 1, p.n - 1, cells)


def _order_convex(p: Pattern, flip_cols: bool) -> bool:
    # Convexity under (i,j) <= (a,b) iff i <= a and j <= b, optionally after
    # mirroring columns, which yields the anti-diagonal order.
    def key(cell: tuple[int, int]) -> tuple[int, int]:
        i, j = cell
        return (i, p.n - 1 - j) if flip_cols else (i, j)

    cells = {key(c) for c in p.cells}
    for i, j in itertools.product(range(p.m), range(p.n)):
        if (i, j) in cells:
            continue
        below = any(a <= i and b <= j for a, b in cells)
        above = any(a >= i and b >= j for a, b in cells)
        if below and above:
            return False
    return True


def is_ladder(p: Pattern) -> bool:
    """True iff the pattern is order-convex under one of the two partial orders.

    The two orders compare cells coordinatewise, either with columns as given
    (diagonal order) or mirrored (anti-diagonal order).
    """
    return _order_convex(p, False) or _order_convex(p, True)


def pattern_digest(p: Pattern) -> str:
    import hashlib

    return hashlib.sha256(serialize_pattern(p).encode()).hexdigest()[:16]


def cells_one_based(cells: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Convert internal 0-based cells to the 1-based convention used in output."""
    return sorted((i + 1, j + 1) for i, j in cells)
