"""Counting rank-bounded completions over a small prime field.

Each trial samples a rank <= r matrix X = A*B over Z/q, keeps only the
observed entries, and counts *all* completions of rank <= r.  The count is
exact: the enumerator walks the cell order produced by
:func:`detmatroid.closure.plan_enumeration`, branching over all q values at
free cells and solving a bordering (r+1)-minor at pinned cells.  Solving is
conservative (a degenerate witness block falls back to branching or to a
sound prune), and every leaf is verified with an actual rank computation, so
no completion is missed or double counted.

The factors are sampled in *generic position*: A and B are redrawn until
all their r x r minors are nonzero, which (Cauchy-Binet) makes every r x r
minor of X nonzero.  Without this, a fraction of roughly r^2/q of raw
samples lands on special loci whose fibers are wildly larger than the
generic one, drowning the statistics the histogram is meant to expose.
Small q still only approximates generic behaviour, which is why results are
reported as histograms over many trials, never as a single verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .closure import EnumerationStep, free_cell_count, plan_enumeration
from .ffield import DEFAULT_SEED, FieldSpec, is_prime
from .patterns import MatroidContext, Pattern

LOW_CONFIDENCE_Q = 7


class FiberBudgetError(RuntimeError):
    """Raised when the enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class FiberCountResult:
    """Histogram of completion counts across trials.

    ``counts`` maps a completion count to the number of trials producing it;
    ``unknown_budget`` is the number of unobserved entries enumerated.
    Results with q < 7 are flagged low-confidence.
    """

    q: int
    trials: int
    counts: dict[int, int]
    unknown_budget: int
    free_cells: int
    low_confidence: bool

    def fraction(self, count: int) -> float:
        return self.counts.get(count, 0) / self.trials

    def fraction_not(self, count: int) -> float:
        return 1.0 - self.fraction(count)


def _det_mod(rows: list[list[int]], q: int) -> int:
    """Determinant over Z/q by fraction-free-ish elimination (tiny inputs)."""
    n = len(rows)
    mat = [row[:] for row in rows]
    det = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if mat[i][c] % q:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        det = det * mat[c][c] % q
        inv = pow(mat[c][c], -1, q)
        for i in range(c + 1, n):
            f = mat[i][c] * inv % q
            if f:
                mat[i] = [(a - f * b) % q for a, b in zip(mat[i], mat[c])]
    return det % q


def _rank_mod(rows: list[list[int]], q: int) -> int:
    mat = [row[:] for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if mat[i][c] % q:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, q)
        for i in range(rank + 1, nrows):
            f = mat[i][c] * inv % q
            if f:
                mat[i] = [(a - f * b) % q for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int) -> None:
        self.left = limit

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise FiberBudgetError("fiber enumeration exceeded the node budget")


def _generic_factor(rng, rows: int, cols: int, q: int, max_draws: int) -> list[list[int]]:
    """Matrix whose maximal (min(rows, cols) sized) minors are all nonzero."""
    import itertools as it

    r = min(rows, cols)
    long_axis = max(rows, cols)
    index_sets = list(it.combinations(range(long_axis), r))
    for _ in range(max_draws):
        mat = [[rng.randrange(q) for _ in range(cols)] for _ in range(rows)]
        if rows <= cols:
            minors = ([[mat[i][j] for i in range(rows)] for j in sel] for sel in index_sets)
        else:
            minors = ([[mat[i][j] for j in range(cols)] for i in sel] for sel in index_sets)
        if all(_det_mod(minor, q) for minor in minors):
            return mat
    raise FiberBudgetError(
        f"could not sample a {rows}x{cols} factor in generic position over Z/{q}; "
        "q is too small for these dimensions"
    )


def _count_completions(
    y: list[list[int]],
    plan: list[EnumerationStep],
    pos: int,
    r: int,
    q: int,
    budget: _Budget,
) -> int:
    if pos == len(plan):
        return 1 if _rank_mod(y, q) <= r else 0
    step = plan[pos]
    i, j = step.cell
    budget.spend()
    for rows, cols in step.witnesses:
        block = [[y[a][b] for b in cols] for a in rows]
        cof = _det_mod(block, q)
        border_rows = list(rows) + [i]
        border_cols = list(cols) + [j]
        y[i][j] = 0
        d0 = _det_mod([[y[a][b] for b in border_cols] for a in border_rows], q)
        if cof:
            # minor(x) = d0 + x*cof must vanish for every completion
            y[i][j] = (-d0) * pow(cof, -1, q) % q
            total = _count_completions(y, plan, pos + 1, r, q, budget)
            y[i][j] = -1
            return total
        if d0:
            y[i][j] = -1
            return 0  # this minor cannot vanish whatever the cell value is
        # block singular and bordered minor identically zero in the cell:
        # this witness constrains nothing, try the next one
    total = 0
    for value in range(q):
        y[i][j] = value
        total += _count_completions(y, plan, pos + 1, r, q, budget)
    y[i][j] = -1
    return total


def fiber_count(
    p: Pattern,
    ctx: MatroidContext,
    q: int = 11,
    trials: int = 100,
    seed: int = DEFAULT_SEED,
    budget_bits: float = 24.0,
    node_budget: int = 500_000,
    max_resamples: int = 25,
) -> FiberCountResult:
    """Histogram of |{Y : rank(Y) <= r, Y agrees with X on p}| over trials.

    The sampled observations always come from an actual rank <= r matrix, so
    every trial has at least one completion.  The pre-gate rejects inputs
    whose *free* (non-pinned) cells would force more than ``2**budget_bits``
    branches; ``node_budget`` additionally caps the work per sample.  A
    sample that overruns the node budget sits over a degenerate point whose
    fiber is far larger than the generic one; such samples are redrawn, and
    the call fails once ``max_resamples`` redraws are spent (which is what
    happens when every fiber is infinite, i.e. the pattern is not finitely
    completable).
    """
    ctx.check_pattern(p)
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    plan = plan_enumeration(p, ctx)
    free = free_cell_count(plan)
    if free * math.log2(q) > budget_bits:
        raise FiberBudgetError(
            f"{free} free cells over Z/{q} need {free * math.log2(q):.1f} bits, "
            f"budget is {budget_bits}"
        )
    spec = FieldSpec(q, seed)
    counts: dict[int, int] = {}
    resamples = 0
    done = 0
    draw = 0
    while done < trials:
        rng = spec.rng(draw)
        draw += 1
        a = _generic_factor(rng, ctx.m, ctx.r, q, max_draws=5000)
        b = _generic_factor(rng, ctx.r, ctx.n, q, max_draws=5000)
        y = [[-1] * ctx.n for _ in range(ctx.m)]
        for i, j in p.cells:
            y[i][j] = sum(a[i][k] * b[k][j] for k in range(ctx.r)) % q
        budget = _Budget(node_budget)
        try:
            found = _count_completions(y, plan, 0, ctx.r, q, budget)
        except FiberBudgetError:
            resamples += 1
            if resamples > max_resamples:
                raise FiberBudgetError(
                    f"more than {max_resamples} samples overran the node budget; "
                    "the fibers do not look zero-dimensional"
                )
            continue
        assert found >= 1, "the sampled matrix itself must be counted"
        counts[found] = counts.get(found, 0) + 1
        done += 1
    return FiberCountResult(
        q=q,
        trials=trials,
        counts=counts,
        unknown_budget=ctx.m * ctx.n - p.size,
        free_cells=free,
        low_confidence=q < LOW_CONFIDENCE_Q,
    )
