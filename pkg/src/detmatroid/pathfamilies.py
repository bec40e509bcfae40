"""Families of non-intersecting monotone staircase paths.

Path i (0-based, i < r) runs from cell (i, n-1) to cell (m-1, i) by unit
steps Down and Left; it is encoded as a step string over {'D', 'L'} with
m-1-i downs and n-1-i lefts.  A family of r pairwise disjoint such paths
covers exactly r(m+n-r) cells, and the union is always a base pattern of
the rank-r matroid; mirroring the columns turns these "anti-diagonal" bases
into "diagonal" ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .patterns import MatroidContext, Pattern

ENUMERATION_CAP = 10**6


@dataclass(frozen=True)
class PathFamily:
    m: int
    n: int
    r: int
    steps: tuple[str, ...]  # steps[i] drives the path starting at (i, n-1)

    def __post_init__(self) -> None:
        if not 1 <= self.r < min(self.m, self.n):
            raise ValueError("need 1 <= r < min(m, n)")
        if len(self.steps) != self.r:
            raise ValueError(f"expected {self.r} step strings")
        for i, s in enumerate(self.steps):
            downs = s.count("D")
            lefts = s.count("L")
            if downs != self.m - 1 - i or lefts != self.n - 1 - i or downs + lefts != len(s):
                raise ValueError(f"path {i} needs {self.m - 1 - i} D and {self.n - 1 - i} L steps")

    def path_cells(self, i: int) -> list[tuple[int, int]]:
        return _path_from_steps(i, self.n, self.steps[i])

    def all_cells(self) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for i in range(self.r):
            out.update(self.path_cells(i))
        return out


@dataclass(frozen=True)
class FamilyEnumeration:
    families: tuple[PathFamily, ...]
    truncated: bool


def family_to_pattern(f: PathFamily) -> Pattern:
    return Pattern(f.m, f.n, frozenset(f.all_cells()))


def diagonal_variant(f: PathFamily) -> Pattern:
    """Column-mirrored pattern: paths run from the left edge instead."""
    p = family_to_pattern(f)
    return Pattern(p.m, p.n, frozenset((i, p.n - 1 - j) for i, j in p.cells))


def _path_from_steps(i: int, n: int, steps: str) -> list[tuple[int, int]]:
    row, col = i, n - 1
    cells = [(row, col)]
    for ch in steps:
        if ch == "D":
            row += 1
        else:
            col -= 1
        cells.append((row, col))
    return cells


def enumerate_families(ctx: MatroidContext, limit: int = ENUMERATION_CAP) -> FamilyEnumeration:
    """All disjoint families in lexicographic step order ('D' < 'L'),
    truncated at ``limit`` with an explicit flag."""
    m, n, r = ctx.m, ctx.n, ctx.r
    found: list[PathFamily] = []
    truncated = False

    def step_strings(downs: int, lefts: int) -> list[str]:
        if downs == 0:
            return ["L" * lefts]
        if lefts == 0:
            return ["D" * downs]
        return ["D" + s for s in step_strings(downs - 1, lefts)] + [
            "L" + s for s in step_strings(downs, lefts - 1)
        ]

    per_path = [step_strings(m - 1 - i, n - 1 - i) for i in range(r)]

    def recurse(i: int, used: set[tuple[int, int]], chosen: list[str]) -> bool:
        nonlocal truncated
        if i == r:
            found.append(PathFamily(m, n, r, tuple(chosen)))
            if len(found) >= limit:
                truncated = True
                return False
            return True
        for s in per_path[i]:
            cells = _path_from_steps(i, n, s)
            if any(c in used for c in cells):
                continue
            chosen.append(s)
            used.update(cells)
            keep_going = recurse(i + 1, used, chosen)
            used.difference_update(cells)
            chosen.pop()
            if not keep_going:
                return False
        return True

    recurse(0, set(), [])
    return FamilyEnumeration(tuple(found), truncated)


def sample_family(ctx: MatroidContext, seed: int, enumerate_below: int = 20000) -> PathFamily:
    """Random disjoint family, reproducible from the seed.

    Uniform over the full enumeration when it is small; otherwise paths are
    rejection-sampled (uniform step shuffles, retried until disjoint) with a
    deterministic fallback to the first enumerable family.
    """
    rng = random.Random(("family", seed))
    small = enumerate_families(ctx, limit=enumerate_below)
    if not small.truncated:
        return small.families[rng.randrange(len(small.families))]
    m, n, r = ctx.m, ctx.n, ctx.r
    for _attempt in range(100000):
        used: set[tuple[int, int]] = set()
        steps: list[str] = []
        ok = True
        for i in range(r):
            letters = ["D"] * (m - 1 - i) + ["L"] * (n - 1 - i)
            rng.shuffle(letters)
            s = "".join(letters)
            cells = _path_from_steps(i, n, s)
            if any(c in used for c in cells):
                ok = False
                break
            used.update(cells)
            steps.append(s)
        if ok:
            return PathFamily(m, n, r, tuple(steps))
    return enumerate_families(ctx, limit=1).families[0]


def ladder_unique_check(f: PathFamily) -> bool:
    """True iff the family's pattern is order-convex (a "ladder").

    Ladder families are uniquely completable bases: greedy closure succeeds
    by determining the cells below the staircase left to right, top to
    bottom, then the cells above it right to left, bottom to top.
    """
    from .patterns import is_ladder

    return is_ladder(family_to_pattern(f))
