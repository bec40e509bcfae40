"""Deciders for finite and unique completability, and the verdict pipeline.

Status semantics: a pattern is *finitely completable* when its matroid rank
reaches r(m+n-r) (generic observations admit finitely many rank <= r
completions), and *uniquely completable* when the generic completion is a
single point.  The pipeline stacks reductions, exact closed forms for the
extreme rank regimes, structural closure, combinatorial certificates, the
randomized rank oracle and finally fiber statistics, and reports the
strongest status it can defend together with the trail of applied rules.

"Proved" verdicts rest on a theorem or on exact lower bounds (a rank
estimate meeting the bound is exact); "Probabilistic" ones rest on
small-field fiber histograms and never override a proved status.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from . import criteria
from .closure import greedy_closure
from .ffield import DEFAULT_SEED, FieldSpec
from .fibers import FiberBudgetError, FiberCountResult, fiber_count
from .oracle import matroid_rank
from .patterns import MatroidContext, Pattern, RegimeError, excise, permute, transpose


class Status(str, enum.Enum):
    NOT_FINITELY = "NotFinitelyCompletable"
    FINITELY = "FinitelyCompletable"
    UNIQUELY = "UniquelyCompletable"
    UNKNOWN = "Unknown"


class Confidence(str, enum.Enum):
    PROVED = "Proved"
    PROBABILISTIC = "Probabilistic"


@dataclass(frozen=True)
class Evidence:
    rule: str
    detail: str
    proved: bool = True


@dataclass(frozen=True)
class CompletabilityVerdict:
    """Final status plus the ordered trail of rules that led to it.

    ``unique_ruled_out`` marks patterns known to be finitely but not
    uniquely completable (with the confidence of the evidence that says so).
    """

    status: Status
    confidence: Confidence
    evidence: tuple[Evidence, ...]
    unique_ruled_out: bool = False


@dataclass(frozen=True)
class ReductionOutcome:
    """Result of stripping lines observed exactly r times.

    ``not_finitely`` is set when a line with fewer than r observations
    surfaced; such a pattern cannot be finitely completable.
    """

    pattern: Pattern
    steps: tuple[str, ...]
    not_finitely: bool = False


def column_reduce_unique(p: Pattern, ctx: MatroidContext) -> ReductionOutcome:
    """Drop columns (and rows, via transposition) observed exactly r times.

    Each drop preserves finite and unique completability.  Lines are only
    dropped while more than r+1 of them remain, so the result stays inside a
    valid context; when exactly r+1 lines remain the corank-1 closed form
    takes over anyway.  A line with fewer than r observations makes the
    pattern not finitely completable and stops the reduction.
    """
    from .patterns import restrict_columns, restrict_rows

    ctx.check_pattern(p)
    r = ctx.r
    cur = p
    steps: list[str] = []
    while True:
        col_counts = cur.col_counts()
        row_counts = cur.row_counts()
        if min(col_counts) < r or min(row_counts) < r:
            which = "column" if min(col_counts) < r else "row"
            steps.append(f"{which} with fewer than r = {r} observations")
            return ReductionOutcome(cur, tuple(steps), not_finitely=True)
        exact_col = next((j for j, c in enumerate(col_counts) if c == r), None)
        if exact_col is not None and cur.n - 1 >= r + 1:
            kept = [j for j in range(cur.n) if j != exact_col]
            cur = restrict_columns(cur, kept)
            steps.append(f"dropped column {exact_col + 1} (exactly r observations)")
            continue
        exact_row = next((i for i, c in enumerate(row_counts) if c == r), None)
        if exact_row is not None and cur.m - 1 >= r + 1:
            kept = [i for i in range(cur.m) if i != exact_row]
            cur = restrict_rows(cur, kept)
            steps.append(f"dropped row {exact_row + 1} (exactly r observations)")
            continue
        return ReductionOutcome(cur, tuple(steps))


def unique_r1(p: Pattern) -> CompletabilityVerdict:
    """Rank 1: finite and unique completability coincide, and hold exactly
    when every line is observed and the bipartite cell graph is connected."""
    row_ok = all(c >= 1 for c in p.row_counts())
    col_ok = all(c >= 1 for c in p.col_counts())
    if not (row_ok and col_ok):
        return CompletabilityVerdict(
            Status.NOT_FINITELY,
            Confidence.PROVED,
            (Evidence("rank1-empty-line", "a row or column has no observations"),),
        )
    parent = list(range(p.m + p.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in p.cells:
        parent[find(i)] = find(p.m + j)
    roots = {find(v) for v in range(p.m + p.n)}
    if len(roots) == 1:
        return CompletabilityVerdict(
            Status.UNIQUELY,
            Confidence.PROVED,
            (Evidence("rank1-connected", "cell graph is connected and spans all lines"),),
        )
    return CompletabilityVerdict(
        Status.NOT_FINITELY,
        Confidence.PROVED,
        (Evidence("rank1-disconnected", f"cell graph splits into {len(roots)} components"),),
    )


def unique_corank1(p: Pattern, ctx: MatroidContext) -> CompletabilityVerdict:
    """Regime r = min(m, n) - 1 (orienting the smaller side as rows):
    finitely = uniquely completable, holding iff every column misses at most
    one row and at least r fully observed columns exist."""
    ctx.check_pattern(p)
    if ctx.r != min(ctx.m, ctx.n) - 1:
        raise RegimeError("corank-1 decider needs r = min(m,n) - 1")
    q = p if ctx.m <= ctx.n else transpose(p)
    m = q.m
    col_counts = q.col_counts()
    if any(c < m - 1 for c in col_counts):
        return CompletabilityVerdict(
            Status.NOT_FINITELY,
            Confidence.PROVED,
            (Evidence("corank1-sparse-column", "a column misses more than one row"),),
        )
    full = sum(1 for c in col_counts if c == m)
    if full >= m - 1:
        return CompletabilityVerdict(
            Status.UNIQUELY,
            Confidence.PROVED,
            (Evidence("corank1-full-columns", f"{full} fully observed columns >= r = {m - 1}"),),
        )
    return CompletabilityVerdict(
        Status.NOT_FINITELY,
        Confidence.PROVED,
        (Evidence("corank1-few-full-columns", f"only {full} fully observed columns, need {m - 1}"),),
    )


def _corank2_square_base(p: Pattern, r: int) -> bool:
    if p.m != p.n or p.m < 4 or r != p.m - 2:
        return False
    if p.size != p.m * p.m - 4:
        return False
    zeros = p.complement_cells()
    rows = [i for i, _ in zeros]
    cols = [j for _, j in zeros]
    return max(rows.count(i) for i in rows) <= 2 and max(cols.count(j) for j in cols) <= 2


def unique_corank2_square(p: Pattern, ctx: MatroidContext) -> CompletabilityVerdict:
    """Square patterns at r = m - 2 that are bases: uniquely completable
    unless the four unobserved cells sit in four distinct rows and columns."""
    ctx.check_pattern(p)
    if ctx.m != ctx.n or ctx.r != ctx.m - 2 or ctx.m < 4:
        raise RegimeError("corank-2 square decider needs m = n and r = m - 2, m >= 4")
    if not _corank2_square_base(p, ctx.r):
        raise RegimeError("pattern is not a base of the corank-2 square regime")
    zeros = sorted(p.complement_cells())
    zero_rows = {i for i, _ in zeros}
    zero_cols = {j for _, j in zeros}
    scattered = len(zero_rows) == 4 and len(zero_cols) == 4
    if scattered:
        return CompletabilityVerdict(
            Status.FINITELY,
            Confidence.PROVED,
            (
                Evidence(
                    "corank2-scattered-zeros",
                    "base with its four unobserved cells in distinct rows and columns; "
                    "finitely but not uniquely completable",
                ),
            ),
            unique_ruled_out=True,
        )
    return CompletabilityVerdict(
        Status.UNIQUELY,
        Confidence.PROVED,
        (Evidence("corank2-shared-zero-line", "two unobserved cells share a row or column"),),
    )


@dataclass(frozen=True)
class DescentReport:
    """Fiber check that a proved uniquely completable pattern stays so at a
    smaller rank bound."""

    r_from: int
    r_to: int
    unique_at_r: bool
    fiber: Optional[FiberCountResult]
    all_single: Optional[bool]


def rank_descent_check(
    p: Pattern,
    ctx: MatroidContext,
    r_prime: int,
    q: int = 11,
    trials: int = 50,
    seed: int = DEFAULT_SEED,
) -> DescentReport:
    if not 1 <= r_prime <= ctx.r:
        raise RegimeError("need 1 <= r' <= r")
    verdict = verdict_pipeline(p, ctx)
    unique = verdict.status is Status.UNIQUELY and verdict.confidence is Confidence.PROVED
    if not unique:
        return DescentReport(ctx.r, r_prime, False, None, None)
    sub = MatroidContext(ctx.m, ctx.n, r_prime)
    fib = fiber_count(p, sub, q=q, trials=trials, seed=seed)
    return DescentReport(ctx.r, r_prime, True, fib, fib.counts.get(1, 0) == trials)


def _find_full_line(p: Pattern) -> Optional[tuple[int, int]]:
    rows = p.row_counts()
    cols = p.col_counts()
    full_row = next((i for i, c in enumerate(rows) if c == p.n), None)
    full_col = next((j for j, c in enumerate(cols) if c == p.m), None)
    if full_row is None or full_col is None:
        return None
    return full_row, full_col


def verdict_pipeline(
    p: Pattern,
    ctx: MatroidContext,
    oracle_trials: int = 3,
    field: FieldSpec | None = None,
    q: int = 11,
    fiber_trials: int = 100,
    seed: int = DEFAULT_SEED,
    asche_budget: int = 20000,
    unique_threshold: float = 0.95,
    nonunique_threshold: float = 0.30,
) -> CompletabilityVerdict:
    """Run every applicable rule and return the strongest defensible status.

    Stage order: deficient-line gate, exact-r reductions, closed-form
    regimes, excision of full line pairs, greedy closure, combinatorial
    dependence certificates, randomized rank oracle, fiber statistics.
    """
    ctx.check_pattern(p)
    field = field or FieldSpec()
    ev: list[Evidence] = []
    cur = p
    r = ctx.r

    def done(status: Status, confidence: Confidence, ruled_out: bool = False) -> CompletabilityVerdict:
        return CompletabilityVerdict(status, confidence, tuple(ev), ruled_out)

    # --- reductions, closed forms and excision, iterated until stable ---
    while True:
        cctx = MatroidContext(cur.m, cur.n, r)
        outcome = column_reduce_unique(cur, cctx)
        for step in outcome.steps:
            ev.append(Evidence("line-reduction", step))
        if outcome.not_finitely:
            return done(Status.NOT_FINITELY, Confidence.PROVED)
        cur = outcome.pattern
        cctx = MatroidContext(cur.m, cur.n, r)
        bound = cctx.rank_bound

        if cur.size < bound:
            ev.append(
                Evidence("size-deficit", f"{cur.size} observed cells < rank bound {bound}")
            )
            return done(Status.NOT_FINITELY, Confidence.PROVED)

        if r == 1:
            sub = unique_r1(cur)
            ev.extend(sub.evidence)
            return done(sub.status, sub.confidence, sub.unique_ruled_out)
        if r == min(cur.m, cur.n) - 1:
            sub = unique_corank1(cur, cctx)
            ev.extend(sub.evidence)
            return done(sub.status, sub.confidence, sub.unique_ruled_out)
        if r == min(cur.m, cur.n) - 2 and _corank2_square_base(cur, r):
            sub = unique_corank2_square(cur, cctx)
            ev.extend(sub.evidence)
            return done(sub.status, sub.confidence, sub.unique_ruled_out)

        if r >= 2:
            lines = _find_full_line(cur)
            if lines is not None:
                i, j = lines
                row_perm = [k for k in range(cur.m) if k != i] + [i]
                col_perm = [k for k in range(cur.n) if k != j] + [j]
                inv_row = [0] * cur.m
                inv_col = [0] * cur.n
                for new, old in enumerate(row_perm):
                    inv_row[old] = new
                for new, old in enumerate(col_perm):
                    inv_col[old] = new
                cur = excise(permute(cur, inv_row, inv_col))
                r -= 1
                ev.append(
                    Evidence(
                        "excision",
                        f"removed full row {i + 1} and full column {j + 1}; rank bound drops to {r}",
                    )
                )
                continue
        break

    cctx = MatroidContext(cur.m, cur.n, r)
    bound = cctx.rank_bound
    fc_proved = False

    # corank-2 independence closed form (any shape)
    if r == min(cur.m, cur.n) - 2:
        cert = criteria.closed_form_corank2(cur, cctx)
        if cert is None and cur.size == bound:
            ev.append(Evidence("corank2-base", "closed form: the pattern is a base"))
            fc_proved = True
        elif cert is not None and cur.size == bound:
            ev.append(Evidence("corank2-dependent", cert.description))
            return done(Status.NOT_FINITELY, Confidence.PROVED)

    closure = greedy_closure(cur, cctx)
    if closure.closed:
        ev.append(
            Evidence("greedy-closure", f"all {len(closure.order)} unobserved cells determined")
        )
        return done(Status.UNIQUELY, Confidence.PROVED)
    ev.append(
        Evidence(
            "greedy-closure",
            f"stalled with {len(closure.residual)} undetermined cells",
            proved=False,
        )
    )

    if not fc_proved:
        found = criteria.asche_search(cur, cctx, budget=asche_budget)
        if found is not None:
            _, cert = found
            ev.append(Evidence(f"certificate-{cert.kind}", cert.description))
            if cur.size == bound:
                return done(Status.NOT_FINITELY, Confidence.PROVED)

    if not fc_proved:
        verdict = matroid_rank(cur, cctx, trials=oracle_trials, field=field)
        ev.append(
            Evidence(
                "oracle-rank",
                f"rank estimate {verdict.rank_estimate} of bound {bound} ({verdict.failure_note})",
                proved=verdict.rank_estimate == bound,
            )
        )
        if verdict.rank_estimate == bound:
            fc_proved = True
        else:
            return done(Status.NOT_FINITELY, Confidence.PROBABILISTIC)

    try:
        fib = fiber_count(cur, cctx, q=q, trials=fiber_trials, seed=seed)
    except FiberBudgetError as exc:
        ev.append(Evidence("fiber-count", f"skipped: {exc}", proved=False))
        return done(Status.FINITELY, Confidence.PROVED)
    hist = dict(sorted(fib.counts.items()))
    ev.append(
        Evidence(
            "fiber-count",
            f"histogram over {fib.trials} trials at q={fib.q}: {hist}",
            proved=False,
        )
    )
    if fib.fraction(1) >= unique_threshold:
        return done(Status.UNIQUELY, Confidence.PROBABILISTIC)
    if fib.fraction_not(1) >= nonunique_threshold:
        return done(Status.FINITELY, Confidence.PROVED, ruled_out=True)
    return done(Status.FINITELY, Confidence.PROVED)
