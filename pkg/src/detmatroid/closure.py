"""Structural closure of a pattern via single-unknown minors.

An unobserved cell (i, j) is *determined* once there are r rows R and r
columns C, all distinct from i and j, such that the block R x C together
with row i restricted to C and column j restricted to R is already known:
the (r+1)-minor on R+{i}, C+{j} then pins the value at (i, j) generically.
Iterating this to a fixed point is a sufficient test for unique
completability; the same machinery also plans the search order used by the
fiber counter, which falls back to branching on cells that no minor pins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .patterns import MatroidContext, Pattern

MAX_EXACT_DIM = 20  # witness search is exhaustive (branch and bound) up to here


@dataclass(frozen=True)
class ClosureStep:
    cell: tuple[int, int]
    rows: tuple[int, ...]
    cols: tuple[int, ...]


@dataclass(frozen=True)
class ClosureTrace:
    """Order in which cells were determined, plus whatever never was."""

    order: tuple[ClosureStep, ...]
    residual: frozenset[tuple[int, int]]

    @property
    def closed(self) -> bool:
        return not self.residual


Witness = tuple[tuple[int, ...], tuple[int, ...]]


def _find_witnesses(
    row_masks: list[int],
    known_in_row: int,
    rows_with_col: list[int],
    r: int,
    limit: int,
) -> list[Witness]:
    """Branch and bound for up to ``limit`` sets of r rows whose masks share
    >= r known columns.

    ``rows_with_col`` are candidate rows (already observed in the target
    column); ``known_in_row`` is the bitmask of columns observed in the
    target row.  Rows are tried in a fixed order for determinism.  Several
    witnesses are collected because a witness block can be singular at
    particular field values, in which case the enumerator needs a fallback.
    """

    def popcount(x: int) -> int:
        return x.bit_count()

    candidates = [(rho, row_masks[rho] & known_in_row) for rho in rows_with_col]
    candidates = [(rho, mask) for rho, mask in candidates if popcount(mask) >= r]
    candidates.sort(key=lambda t: (-popcount(t[1]), t[0]))

    chosen: list[int] = []
    found: list[Witness] = []

    def recurse(start: int, mask: int) -> bool:
        if len(chosen) == r:
            shared = []
            mm = mask
            while mm:
                low = mm & -mm
                shared.append(low.bit_length() - 1)
                mm ^= low
            # emit a few column choices per row set, not just the first
            for offset in range(min(len(shared) - r + 1, limit - len(found))):
                cols = tuple(shared[offset : offset + r])
                found.append((tuple(sorted(chosen)), cols))
                if len(found) >= limit:
                    return False
            return True
        if len(candidates) - start < r - len(chosen):
            return True
        for idx in range(start, len(candidates)):
            rho, rmask = candidates[idx]
            new_mask = mask & rmask
            if popcount(new_mask) < r:
                continue
            chosen.append(rho)
            keep_going = recurse(idx + 1, new_mask)
            chosen.pop()
            if not keep_going:
                return False
        return True

    recurse(0, known_in_row)
    return found


def _determinable(
    cell: tuple[int, int], masks: list[int], r: int, limit: int = 1
) -> list[Witness]:
    i, j = cell
    known_in_row = masks[i] & ~(1 << j)
    rows_with_col = [rho for rho in range(len(masks)) if rho != i and (masks[rho] >> j) & 1]
    if known_in_row.bit_count() < r or len(rows_with_col) < r:
        return []
    return _find_witnesses(masks, known_in_row, rows_with_col, r, limit)


def greedy_closure(p: Pattern, ctx: MatroidContext) -> ClosureTrace:
    """Fixed-point iteration of single-unknown minor determination.

    Full closure proves unique completability; failure proves nothing (there
    are uniquely completable bases that admit no single-unknown minor at the
    first step).
    """
    ctx.check_pattern(p)
    if max(ctx.m, ctx.n) > MAX_EXACT_DIM:
        raise ValueError(f"closure search is exact only up to {MAX_EXACT_DIM} rows/columns")
    masks = p.row_masks()
    unknown = sorted(set((i, j) for i in range(ctx.m) for j in range(ctx.n)) - p.cells)
    order: list[ClosureStep] = []
    progress = True
    while progress and unknown:
        progress = False
        for cell in list(unknown):
            witnesses = _determinable(cell, masks, ctx.r)
            if witnesses:
                rows, cols = witnesses[0]
                order.append(ClosureStep(cell, rows, cols))
                masks[cell[0]] |= 1 << cell[1]
                unknown.remove(cell)
                progress = True
    return ClosureTrace(tuple(order), frozenset(unknown))


@dataclass(frozen=True)
class EnumerationStep:
    """One slot of the fiber-enumeration plan.

    ``witnesses`` is empty for free cells (the enumerator branches over all
    field values); otherwise each entry is the (rows, cols) of an r x r
    known block whose bordering minor pins the cell.  Alternatives matter
    because any single block may be singular at the sampled values.
    """

    cell: tuple[int, int]
    witnesses: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


def plan_enumeration(
    p: Pattern, ctx: MatroidContext, witness_limit: int = 8
) -> list[EnumerationStep]:
    """Order all unobserved cells, pinning as many as possible.

    Greedily mark determinable cells (as in :func:`greedy_closure`); whenever
    none exists, pick the unobserved cell with the densest row and column as
    a branch point and continue as if it were known.
    """
    ctx.check_pattern(p)
    masks = p.row_masks()
    unknown = sorted(set((i, j) for i in range(ctx.m) for j in range(ctx.n)) - p.cells)
    plan: list[EnumerationStep] = []
    while unknown:
        placed = False
        for cell in list(unknown):
            witnesses = _determinable(cell, masks, ctx.r, limit=witness_limit)
            if witnesses:
                plan.append(EnumerationStep(cell, tuple(witnesses)))
                masks[cell[0]] |= 1 << cell[1]
                unknown.remove(cell)
                placed = True
                break
        if placed:
            continue

        def density(cell: tuple[int, int]) -> tuple[int, tuple[int, int]]:
            i, j = cell
            col_count = sum((masks[rho] >> j) & 1 for rho in range(ctx.m))
            return (-(masks[i].bit_count() + col_count), cell)

        branch = min(unknown, key=density)
        plan.append(EnumerationStep(branch, ()))
        masks[branch[0]] |= 1 << branch[1]
        unknown.remove(branch)
    return plan


def free_cell_count(plan: list[EnumerationStep]) -> int:
    return sum(1 for step in plan if not step.witnesses)
