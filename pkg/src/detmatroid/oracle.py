"""Randomized exact oracle for the rank-r observation matroid.

Observed entries of a generic rank-r product A*B (A of shape m x r, B of
shape r x n) are algebraically independent exactly when the corresponding
rows of the Jacobian of the parametrization are linearly independent at a
generic point.  Evaluating that Jacobian at random points over a large prime
field gives rank values that are always exact lower bounds on the matroid
rank, and equal it except with probability bounded by Schwartz-Zippel.

Consequences:

* "independent" answers (rank estimate reaching the set size) are certain;
* "dependent" answers carry a small, quantified failure probability, which
  is why they are re-checked on a second prime by default.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ffield import (
    DEFAULT_SEED,
    SECOND_PRIME,
    FFMatrix,
    FieldSpec,
    RowBasis,
    ff_random_matrix,
)
from .patterns import MatroidContext, Pattern


@dataclass(frozen=True)
class OracleVerdict:
    """Outcome of a randomized matroid-rank estimation.

    ``rank_estimate`` is the maximum Jacobian rank seen over all trials.  It
    never exceeds the true matroid rank, hence ``is_exact_lower_bound`` is
    always True; ``failure_note`` bounds the probability that the estimate is
    strictly below the true rank.
    """

    rank_estimate: int
    trials: int
    is_exact_lower_bound: bool
    failure_note: str


def jacobian_matrix(p: Pattern, ctx: MatroidContext, a: FFMatrix, b: FFMatrix) -> FFMatrix:
    """Jacobian of the observed entries of A*B with respect to (A, B).

    Row order follows ``p.sorted_cells()``.  Columns are the m*r entries of A
    in row-major order followed by the r*n entries of B in row-major order.
    The row of cell (i, j) holds B[k, j] in the column of A[i, k] and A[i, k]
    in the column of B[k, j].
    """
    ctx.check_pattern(p)
    m, n, r = ctx.m, ctx.n, ctx.r
    if (a.rows, a.cols) != (m, r) or (b.rows, b.cols) != (r, n):
        raise ValueError("factor shapes must be m x r and r x n")
    if a.p != b.p:
        raise ValueError("factors live over different primes")
    ncols = r * (m + n)
    rows = []
    for i, j in p.sorted_cells():
        row = [0] * ncols
        for k in range(r):
            row[i * r + k] = b.entries[k][j]
            row[m * r + k * n + j] = a.entries[i][k]
        rows.append(tuple(row))
    return FFMatrix(len(rows), ncols, tuple(rows), a.p)


def jacobian_rows(p: Pattern, ctx: MatroidContext, a: FFMatrix, b: FFMatrix) -> dict[tuple[int, int], tuple[int, ...]]:
    """Jacobian rows keyed by cell, for callers that assemble submatrices."""
    full = jacobian_matrix(p, ctx, a, b)
    return dict(zip(p.sorted_cells(), full.entries))


def _trial_fields(field: FieldSpec, trials: int, second_prime: int | None) -> list[FieldSpec]:
    specs = [field] * max(trials, 1)
    if second_prime is not None and second_prime != field.p:
        specs.append(FieldSpec(second_prime, field.seed))
    return specs


def _rank_once(p: Pattern, ctx: MatroidContext, spec: FieldSpec, salt: int) -> int:
    a = ff_random_matrix(spec, ctx.m, ctx.r, salt, 0)
    b = ff_random_matrix(spec, ctx.r, ctx.n, salt, 1)
    jac = jacobian_matrix(p, ctx, a, b)
    basis = RowBasis(jac.cols, jac.p)
    rank = 0
    for row in jac.entries:
        if basis.add(row):
            rank += 1
    return rank


def _failure_note(degree: int, specs: list[FieldSpec]) -> str:
    bound = Fraction(1)
    for s in specs:
        bound *= Fraction(min(degree, s.p), s.p)
    terms = " * ".join(f"({min(degree, s.p)}/{s.p})" for s in specs)
    return f"P[rank_estimate < true rank] <= {terms} ~= {float(bound):.3e}"


def matroid_rank(
    p: Pattern,
    ctx: MatroidContext,
    trials: int = 3,
    field: FieldSpec | None = None,
    second_prime: int | None = SECOND_PRIME,
) -> OracleVerdict:
    """Max Jacobian rank over random points; an exact lower bound on rank(p)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ctx.check_pattern(p)
    field = field or FieldSpec()
    cap = min(p.size, ctx.rank_bound)
    if p.size == 0:
        return OracleVerdict(0, trials, True, "empty pattern: rank 0 exactly")
    specs = _trial_fields(field, trials, second_prime)
    best = 0
    for t, spec in enumerate(specs):
        best = max(best, _rank_once(p, ctx, spec, t))
        if best == cap:
            break
    assert best <= cap
    return OracleVerdict(best, trials, True, _failure_note(cap, specs))


def is_independent(
    p: Pattern,
    ctx: MatroidContext,
    trials: int = 3,
    field: FieldSpec | None = None,
    second_prime: int | None = SECOND_PRIME,
) -> bool:
    """One-sided test: True answers are certain, False ones carry the
    Schwartz-Zippel bound reported by :func:`matroid_rank`."""
    if p.size > ctx.rank_bound:
        return False
    return matroid_rank(p, ctx, trials, field, second_prime).rank_estimate == p.size


def is_base(
    p: Pattern,
    ctx: MatroidContext,
    trials: int = 3,
    field: FieldSpec | None = None,
    second_prime: int | None = SECOND_PRIME,
) -> bool:
    return p.size == ctx.rank_bound and is_independent(p, ctx, trials, field, second_prime)


def find_circuit(
    p: Pattern,
    ctx: MatroidContext,
    trials: int = 3,
    field: FieldSpec | None = None,
) -> Pattern:
    """Extract a minimal dependent subset of a dependent pattern.

    Greedy: walk the cells in sorted order and drop any cell whose removal
    keeps the set dependent.  What remains is dependent with every proper
    subset independent.
    """
    if is_independent(p, ctx, trials, field):
        raise ValueError("pattern is independent; it contains no circuit")
    current = p
    for cell in p.sorted_cells():
        candidate = current.without_cell(*cell)
        if not is_independent(candidate, ctx, trials, field):
            current = candidate
    return current


def matroid_closure(
    p: Pattern,
    ctx: MatroidContext,
    trials: int = 3,
    field: FieldSpec | None = None,
) -> Pattern:
    """All cells whose addition does not increase the matroid rank.

    A cell is kept only if its Jacobian row lies in the row span of the
    pattern's Jacobian in *every* trial; a single rank increase certifies
    that the cell is outside the closure.
    """
    ctx.check_pattern(p)
    field = field or FieldSpec()
    if p.size == 0:
        return Pattern(p.m, p.n, frozenset())
    outside = {(i, j) for i in range(ctx.m) for j in range(ctx.n)} - p.cells
    closure = set(p.cells)
    candidates = set(outside)
    full = Pattern.full(ctx.m, ctx.n)
    for t in range(max(trials, 1)):
        if not candidates:
            break
        a = ff_random_matrix(field, ctx.m, ctx.r, t, 0)
        b = ff_random_matrix(field, ctx.r, ctx.n, t, 1)
        rows = jacobian_rows(full, ctx, a, b)
        basis = RowBasis(ctx.r * (ctx.m + ctx.n), field.p)
        for cell in p.sorted_cells():
            basis.add(rows[cell])
        candidates = {c for c in candidates if basis.reduces_to_zero(rows[c])}
    closure.update(candidates)
    return Pattern(p.m, p.n, frozenset(closure))
