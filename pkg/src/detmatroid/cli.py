"""Command line front end.

Subcommands:

* ``analyze``: run every applicable test on a pattern file and emit a
  deterministic report (text to stdout, optional JSON sidecar).
* ``gen-bases``: enumerate disjoint staircase path families, verify each
  with the oracle and write them out as pattern files.
* ``conjecture-scan``: sample random patterns and tabulate how many of the
  dependent ones are explained by a combinatorial certificate.
* ``verify-fixtures``: replay the packaged corpus against its expected
  classification.

Exit codes: 0 ok, 2 pattern parse error, 3 rank regime error, 4 fixture or
verification mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Optional

from . import criteria, fixtures
from .closure import MAX_EXACT_DIM, greedy_closure
from .completability import Status, verdict_pipeline
from .ffield import DEFAULT_SEED, FieldSpec
from .fibers import FiberBudgetError, fiber_count
from .oracle import is_base, is_independent, matroid_rank
from .pathfamilies import diagonal_variant, enumerate_families, family_to_pattern
from .patterns import (
    MatroidContext,
    Pattern,
    PatternFormatError,
    RegimeError,
    parse_pattern,
    serialize_pattern,
)
from .polynomials import hollow_circuit_polynomial, polynomial_vanishes_on_variety, univariate_in
from .report import Report, describe_blocks

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_REGIME = 3
EXIT_MISMATCH = 4

MAX_PARTITION_COLS = 12


def build_report(
    p: Pattern,
    ctx: MatroidContext,
    seed: int = DEFAULT_SEED,
    trials: int = 3,
    q: int = 11,
    fiber_trials: int = 100,
    budget: int = 20000,
) -> Report:
    field = FieldSpec(seed=seed)
    report = Report(p, ctx)

    if ctx.m <= criteria.MAX_SLMF_ROWS:
        necessary = criteria.slmf_necessary_check(p, ctx)
        section: dict = {"necessary_check": necessary}
        if p.size == ctx.rank_bound and ctx.n <= MAX_PARTITION_COLS:
            groups = criteria.partition_slmf_search(p, ctx)
            section["partition"] = (
                None if groups is None else [[j + 1 for j in g] for g in groups]
            )
        report.add("slmf", **section)

    block = criteria.block_dependence_scan(p, ctx)
    asche = criteria.asche_search(p, ctx, budget=budget)
    cert_section: dict = {}
    if block is not None:
        cert_section["block"] = {
            "blocks": describe_blocks(block.blocks),
            "deficit": block.deficit,
            "inequality": block.description,
        }
    if asche is not None:
        fam, cert = asche
        cert_section["asche"] = {
            "blocks": describe_blocks(cert.blocks),
            "deficit": cert.deficit,
            "inequality": cert.description,
        }
    if not cert_section:
        cert_section["found"] = False
    report.add("certificates", **cert_section)

    verdict = matroid_rank(p, ctx, trials=trials, field=field)
    report.add(
        "oracle",
        rank_estimate=verdict.rank_estimate,
        trials=verdict.trials,
        independent=verdict.rank_estimate == p.size,
        base=p.size == ctx.rank_bound and verdict.rank_estimate == p.size,
        failure_note=verdict.failure_note,
    )

    if max(ctx.m, ctx.n) <= MAX_EXACT_DIM:
        closure = greedy_closure(p, ctx)
        report.add(
            "closure",
            closed=closure.closed,
            determined=len(closure.order),
            residual=len(closure.residual),
        )

    try:
        fib = fiber_count(p, ctx, q=q, trials=fiber_trials, seed=seed, budget_bits=16.0)
        report.add(
            "fiber",
            q=fib.q,
            trials=fib.trials,
            histogram={str(k): v for k, v in sorted(fib.counts.items())},
            free_cells=fib.free_cells,
            low_confidence=fib.low_confidence,
        )
    except FiberBudgetError as exc:
        report.add("fiber", skipped=str(exc))

    report.verdict = verdict_pipeline(
        p,
        ctx,
        oracle_trials=trials,
        field=field,
        q=q,
        fiber_trials=fiber_trials,
        seed=seed,
        asche_budget=budget,
    )
    return report


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            p = parse_pattern(fh.read())
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PatternFormatError as exc:
        print(f"error: bad pattern file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        ctx = MatroidContext(p.m, p.n, args.rank)
    except RegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    t0 = time.perf_counter()
    report = build_report(
        p,
        ctx,
        seed=args.seed,
        trials=args.trials,
        q=args.q,
        fiber_trials=args.fiber_trials,
        budget=args.budget,
    )
    sys.stdout.write(report.to_text())
    if args.json:
        report.write_json(args.json)
    print(f"elapsed: {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return EXIT_OK


def cmd_gen_bases(args: argparse.Namespace) -> int:
    try:
        ctx = MatroidContext(args.m, args.n, args.rank)
    except RegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    enum = enumerate_families(ctx, limit=args.count)
    os.makedirs(args.outdir, exist_ok=True)
    field = FieldSpec(seed=args.seed)
    written = 0
    for idx, fam in enumerate(enum.families):
        pattern = diagonal_variant(fam) if args.diagonal else family_to_pattern(fam)
        if not is_base(pattern, ctx, trials=2, field=field):
            print(f"error: family {idx} failed oracle verification", file=sys.stderr)
            return EXIT_MISMATCH
        kind = "diag" if args.diagonal else "antidiag"
        name = f"{kind}-{ctx.m}x{ctx.n}-r{ctx.r}-{idx:04d}.txt"
        with open(os.path.join(args.outdir, name), "w", encoding="utf-8") as fh:
            fh.write(serialize_pattern(pattern))
        written += 1
    suffix = " (truncated)" if enum.truncated else " (complete enumeration)"
    print(f"wrote {written} verified base patterns to {args.outdir}{suffix}")
    return EXIT_OK


def cmd_conjecture_scan(args: argparse.Namespace) -> int:
    try:
        ctx = MatroidContext(args.m, args.n, args.rank)
    except RegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    field = FieldSpec(seed=args.seed)
    rng = field.rng(101)
    bound = ctx.rank_bound
    cells_all = [(i, j) for i in range(ctx.m) for j in range(ctx.n)]
    dependent = 0
    explained = 0
    for _s in range(args.samples):
        size = rng.randrange(max(bound - 2, 1), min(ctx.m * ctx.n, bound + 3) + 1)
        chosen = rng.sample(cells_all, size)
        p = Pattern(ctx.m, ctx.n, frozenset(chosen))
        if is_independent(p, ctx, trials=2, field=field):
            continue
        dependent += 1
        cert = criteria.block_dependence_scan(p, ctx)
        if cert is None:
            found = criteria.asche_search(p, ctx, budget=args.budget)
            cert = found[1] if found is not None else None
        if cert is not None:
            explained += 1
    regime = (
        "r=1"
        if ctx.r == 1
        else "corank-1"
        if ctx.r == min(ctx.m, ctx.n) - 1
        else "corank-2"
        if ctx.r == min(ctx.m, ctx.n) - 2
        else "middle"
    )
    print(f"context: {ctx.m}x{ctx.n} r={ctx.r} ({regime} regime), {args.samples} samples")
    print(f"dependent: {dependent}")
    print(f"explained by certificate: {explained}")
    unexplained = dependent - explained
    print(f"unexplained: {unexplained}")
    if dependent:
        print(f"explained fraction: {explained / dependent:.3f}")
    return EXIT_OK


def _check(label: str, ok: bool, failures: list[str]) -> None:
    print(f"{'PASS' if ok else 'FAIL'}  {label}")
    if not ok:
        failures.append(label)


def cmd_verify_fixtures(args: argparse.Namespace) -> int:
    failures: list[str] = []
    field = FieldSpec(seed=args.seed)

    # transcription checks for the packaged circuit polynomial come first
    poly = hollow_circuit_polynomial()
    assign = {
        (0, 1): 0, (3, 0): 0,
        (0, 2): 1, (0, 3): 1, (1, 0): 1, (1, 3): 1,
        (2, 0): 1, (2, 1): 1, (3, 1): 1, (3, 2): 1,
        (1, 2): 2, (2, 3): 2,
    }
    quad = univariate_in(poly, (0, 0), assign)
    _check("polynomial fixture: rational specialization is 1 - 3z + 3z^2", quad == [1, -3, 3], failures)
    ctx44 = MatroidContext(4, 4, 2)
    _check(
        "polynomial fixture: vanishes on rank<=2 matrices (two primes)",
        polynomial_vanishes_on_variety(poly, ctx44, trials=10, field=field),
        failures,
    )

    for fx in fixtures.FIXTURES:
        p = fx.load()
        ctx = MatroidContext(p.m, p.n, fx.r)
        if fx.is_base is not None:
            got = is_base(p, ctx, trials=args.trials, field=field)
            _check(f"{fx.name}: base={fx.is_base}", got == fx.is_base, failures)
        if fx.status is not None:
            verdict = verdict_pipeline(
                p, ctx, oracle_trials=args.trials, field=field, q=args.q,
                fiber_trials=args.fiber_trials, seed=args.seed,
            )
            ok = verdict.status is fx.status and verdict.unique_ruled_out == fx.unique_ruled_out
            _check(
                f"{fx.name}: status={fx.status.value}"
                + (", not unique" if fx.unique_ruled_out else ""),
                ok,
                failures,
            )
    if failures:
        print(f"{len(failures)} fixture check(s) failed")
        return EXIT_MISMATCH
    print("all fixture checks passed")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="detmatroid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--trials", type=int, default=3, help="oracle trials")
        sp.add_argument("--q", type=int, default=11, help="fiber counting prime")
        sp.add_argument("--fiber-trials", type=int, default=100)
        sp.add_argument("--budget", type=int, default=20000, help="certificate search budget")

    sp = sub.add_parser("analyze", help="analyze a pattern file")
    sp.add_argument("file")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--json", default=None, help="write a JSON sidecar here")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("gen-bases", help="generate staircase path-family bases")
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("rank", type=int)
    sp.add_argument("count", type=int)
    sp.add_argument("--diagonal", action="store_true", help="mirror columns")
    sp.add_argument("--outdir", default="bases-out")
    common(sp)
    sp.set_defaults(func=cmd_gen_bases)

    sp = sub.add_parser("conjecture-scan", help="tabulate certificate coverage on random dependents")
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("rank", type=int)
    sp.add_argument("--samples", type=int, default=100)
    common(sp)
    sp.set_defaults(func=cmd_conjecture_scan)

    sp = sub.add_parser("verify-fixtures", help="replay the packaged corpus")
    common(sp)
    sp.set_defaults(func=cmd_verify_fixtures)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
