"""Combinatorial independence and dependence certificates.

Three families of certificates, all sound:

* column-excess inequalities over all row subsets (the SLMF tests), giving a
  necessary condition for bases and, through column partitions, a sufficient
  one;
* overfull rectangles: a block I x J observed at more than r(|I|+|J|-r)
  cells forces a dependence;
* chained block families: rectangles whose pairwise overlaps are thin (fit
  in a strip of at most r rows or columns) prove dependence as soon as the
  union misses fewer cells than the sum of the blocks' (|I|-r)(|J|-r)
  capacities.

Closed forms for the extreme rank regimes (r = 1 and r within 2 of the
smaller dimension) decide independence outright; in those regimes the block
certificate is complete, i.e. it explains every dependent set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .patterns import MatroidContext, Pattern, RegimeError

MAX_SLMF_ROWS = 20


@dataclass(frozen=True)
class SlmfParams:
    """Multiplicity nu, rank r and row count m for a column-excess check."""

    nu: int
    r: int
    m: int

    def __post_init__(self) -> None:
        if self.nu < 1 or not 1 <= self.r < self.m:
            raise ValueError(f"need nu >= 1 and 1 <= r < m, got {self}")


@dataclass(frozen=True)
class DependenceCertificate:
    """A witness that a pattern is dependent.

    ``blocks`` lists the rectangles involved (one for kind 'block' or
    'closed-form', several for 'asche', possibly none for a bare 'height'
    witness).  ``capacity`` is the side the theorem compares against the
    number of cells of the witness region missing from the pattern; validity
    means ``deficit = capacity - missing >= 1``.
    """

    kind: str
    blocks: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    missing: int
    capacity: int
    description: str

    @property
    def deficit(self) -> int:
        return self.capacity - self.missing

    def __post_init__(self) -> None:
        if self.deficit < 1:
            raise ValueError("certificate does not satisfy its inequality")


@dataclass(frozen=True)
class BlockFamily:
    """Ordered rectangles (rows_1 x cols_1, ..., rows_s x cols_s)."""

    blocks: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @staticmethod
    def of(blocks: Sequence[tuple[Sequence[int], Sequence[int]]]) -> "BlockFamily":
        return BlockFamily(
            tuple((tuple(sorted(set(rs))), tuple(sorted(set(cs)))) for rs, cs in blocks)
        )

    def cells(self) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for rows, cols in self.blocks:
            out.update(itertools.product(rows, cols))
        return out

    def chain_violation(self, r: int) -> Optional[str]:
        """None if the family satisfies the thin-overlap chain condition."""
        for rows, cols in self.blocks:
            if len(rows) <= r or len(cols) <= r:
                return f"block {rows}x{cols} has a side of size <= r"
        seen: set[tuple[int, int]] = set()
        for idx, (rows, cols) in enumerate(self.blocks):
            if idx > 0:
                overlap = set(itertools.product(rows, cols)) & seen
                if overlap:
                    orows = {i for i, _ in overlap}
                    ocols = {j for _, j in overlap}
                    if min(len(orows), len(ocols)) > r:
                        return (
                            f"overlap of block {idx + 1} with its predecessors spans "
                            f"{len(orows)} rows and {len(ocols)} columns, both > r"
                        )
            seen.update(itertools.product(rows, cols))
        return None


def slmf_check(p: Pattern, params: SlmfParams) -> bool:
    """Column-excess inequality over every row subset with |I| > r.

    Requires sum_j max(|cells in I x {j}| - r, 0) <= nu*(|I| - r) for all
    such I, with equality at I = [m].  Exhausts all 2^m subsets; rejects
    m > 20.
    """
    if p.m != params.m:
        raise ValueError("params.m does not match the pattern")
    if p.m > MAX_SLMF_ROWS:
        raise ValueError(f"subset exhaustion is capped at m <= {MAX_SLMF_ROWS}")
    r, nu = params.r, params.nu
    masks = p.row_masks()
    for size in range(r + 1, p.m + 1):
        for rows in itertools.combinations(range(p.m), size):
            counts = [0] * p.n
            for i in rows:
                mask = masks[i]
                while mask:
                    low = mask & -mask
                    counts[low.bit_length() - 1] += 1
                    mask ^= low
            excess = sum(c - r for c in counts if c > r)
            if excess > nu * (size - r):
                return False
            if size == p.m and excess != nu * (size - r):
                return False
    return True


def slmf_necessary_check(p: Pattern, ctx: MatroidContext) -> bool:
    """Necessary condition for a base: the nu = r column-excess check.

    A False answer certifies "not a base"; True proves nothing on its own.
    """
    ctx.check_pattern(p)
    return slmf_check(p, SlmfParams(ctx.r, ctx.r, ctx.m))


def partition_slmf_search(p: Pattern, ctx: MatroidContext) -> Optional[list[list[int]]]:
    """Search for a column partition certifying that the pattern is a base.

    Looks for a partition of the columns into r groups, each passing the
    nu = 1 column-excess check on its own column set.  Success is a proof of
    base-ness.  Returns the groups as lists of 0-based column indices, or
    None after exhaustive backtracking (patterns of the wrong size are
    rejected immediately).
    """
    ctx.check_pattern(p)
    if p.size != ctx.rank_bound:
        return None
    r, m = ctx.r, ctx.m
    target = m - r
    col_counts = p.col_counts()
    excess = [max(c - r, 0) for c in col_counts]
    if sum(excess) != r * target:
        return None
    positive = [e for e in excess if e > 0]
    if positive and target > 0:
        g = math.gcd(*positive) if len(positive) > 1 else positive[0]
        if target % g != 0:
            return None

    order = sorted(range(p.n), key=lambda j: (-excess[j], j))
    groups: list[list[int]] = [[] for _ in range(r)]
    sums = [0] * r

    def verify(groups: list[list[int]]) -> bool:
        from .patterns import restrict_columns

        for cols in groups:
            if not cols:
                return False
            sub = restrict_columns(p, sorted(cols))
            if not slmf_check(sub, SlmfParams(1, r, m)):
                return False
        return True

    def backtrack(idx: int) -> Optional[list[list[int]]]:
        if idx == len(order):
            if all(s == target for s in sums) and verify(groups):
                return [sorted(g) for g in groups]
            return None
        j = order[idx]
        for g in range(r):
            was_empty = not groups[g]
            if sums[g] + excess[j] <= target:
                groups[g].append(j)
                sums[g] += excess[j]
                found = backtrack(idx + 1)
                if found is not None:
                    return found
                groups[g].pop()
                sums[g] -= excess[j]
            if was_empty:
                break  # later empty groups are symmetric to this one
        return None

    return backtrack(0)


def _block_certificate(
    p: Pattern, rows: tuple[int, ...], cols: tuple[int, ...], r: int, kind: str = "block"
) -> DependenceCertificate:
    cells = set(itertools.product(rows, cols))
    missing = len(cells - p.cells)
    capacity = (len(rows) - r) * (len(cols) - r)
    observed = len(cells) - missing
    desc = (
        f"|observed in {len(rows)}x{len(cols)} block| = {observed} > "
        f"r(|I|+|J|-r) = {r * (len(rows) + len(cols) - r)}"
    )
    return DependenceCertificate(kind, ((rows, cols),), missing, capacity, desc)


def block_dependence_scan(
    p: Pattern, ctx: MatroidContext, cap: Optional[int] = None
) -> Optional[DependenceCertificate]:
    """Exhaustive search for an overfull rectangle.

    For each row subset the best column set is computable directly (take all
    columns observed more than r times inside those rows, padded to size
    r+1), so the scan is exhaustive over row subsets.  ``cap`` limits the
    subset size when 2^m is too large.
    """
    ctx.check_pattern(p)
    r = ctx.r
    max_size = p.m if (cap is None and p.m <= 18) else min(cap or (r + 4), p.m)
    masks = p.row_masks()
    best: Optional[DependenceCertificate] = None
    sizes = range(r + 1, max_size + 1)
    for size in sizes:
        for rows in itertools.combinations(range(p.m), size):
            counts = [0] * p.n
            for i in rows:
                mask = masks[i]
                while mask:
                    low = mask & -mask
                    counts[low.bit_length() - 1] += 1
                    mask ^= low
            ranked = sorted(range(p.n), key=lambda j: (-counts[j], j))
            cols = [j for j in ranked if counts[j] > r]
            for j in ranked:
                if len(cols) > r:
                    break
                if counts[j] <= r:
                    cols.append(j)
            if len(cols) <= r:
                continue
            overflow = sum(counts[j] for j in cols) - r * (size + len(cols) - r)
            if overflow > 0:
                cert = _block_certificate(p, tuple(rows), tuple(sorted(cols)), r)
                if best is None or cert.deficit > best.deficit:
                    best = cert
    return best


def asche_verify(
    p: Pattern, fam: BlockFamily, ctx: MatroidContext
) -> Optional[DependenceCertificate]:
    """Check the chained-blocks dependence inequality for a given family.

    Raises if the family violates the thin-overlap chain condition; returns
    a certificate iff |union \\ pattern| < sum of block capacities.
    """
    ctx.check_pattern(p)
    r = ctx.r
    violation = fam.chain_violation(r)
    if violation is not None:
        raise ValueError(f"invalid block family: {violation}")
    union = fam.cells()
    missing = len(union - p.cells)
    capacity = sum((len(rows) - r) * (len(cols) - r) for rows, cols in fam.blocks)
    if capacity <= missing:
        return None
    desc = f"|T \\ pattern| = {missing} < {capacity} = sum of block capacities"
    return DependenceCertificate("asche", fam.blocks, missing, capacity, desc)


def _candidate_blocks(
    p: Pattern, ctx: MatroidContext, slack: int, budget: int
) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """Rectangles with capacity - missing >= -slack, scored for the beam."""
    r = ctx.r
    masks = p.row_masks()
    out = []
    seen = 0
    for size in range(r + 1, p.m + 1):
        for rows in itertools.combinations(range(p.m), size):
            seen += 1
            if seen > budget:
                return out
            counts = [0] * p.n
            for i in rows:
                mask = masks[i]
                while mask:
                    low = mask & -mask
                    counts[low.bit_length() - 1] += 1
                    mask ^= low
            ranked = sorted(range(p.n), key=lambda j: (-counts[j], j))
            # grow the column set greedily; keep every prefix that stays
            # within the allowed slack
            cols: list[int] = []
            obs = 0
            for j in ranked:
                cols.append(j)
                obs += counts[j]
                if len(cols) <= r:
                    continue
                capacity = (size - r) * (len(cols) - r)
                missing = size * len(cols) - obs
                if capacity - missing >= -slack:
                    out.append((tuple(rows), tuple(sorted(cols)), capacity - missing))
    return out


def asche_search(
    p: Pattern,
    ctx: MatroidContext,
    budget: int = 20000,
    beam_width: int = 64,
    max_blocks: int = 6,
    slack: int = 4,
) -> Optional[tuple[BlockFamily, DependenceCertificate]]:
    """Best-effort search for a chained-blocks certificate.

    Seeds a beam with near-overfull rectangles and extends families while
    the chain condition holds, keeping the states with the best
    capacity-minus-missing score.  Always deterministic; a None answer means
    "no certificate found", never "independent".
    """
    ctx.check_pattern(p)
    single = block_dependence_scan(p, ctx)
    if single is not None:
        rows, cols = single.blocks[0]
        return BlockFamily(((rows, cols),)), single

    candidates = _candidate_blocks(p, ctx, slack, budget)
    candidates.sort(key=lambda t: (-t[2], t[:2]))
    candidates = candidates[: max(beam_width * 4, 128)]
    if not candidates:
        return None

    # beam state: (ordered blocks, union cells, missing, capacity)
    states: list[tuple[tuple, set, int, int]] = []
    for rows, cols, _score in candidates[:beam_width]:
        cells = set(itertools.product(rows, cols))
        missing = len(cells - p.cells)
        capacity = (len(rows) - ctx.r) * (len(cols) - ctx.r)
        states.append((((rows, cols),), cells, missing, capacity))

    for _depth in range(max_blocks - 1):
        next_states = []
        for blocks, cells, missing, capacity in states:
            for rows, cols, _score in candidates:
                if (rows, cols) in blocks:
                    continue
                block_cells = set(itertools.product(rows, cols))
                overlap = block_cells & cells
                if overlap:
                    orows = {i for i, _ in overlap}
                    ocols = {j for _, j in overlap}
                    if min(len(orows), len(ocols)) > ctx.r:
                        continue
                new_missing = missing + len({c for c in block_cells - cells if c not in p.cells})
                new_capacity = capacity + (len(rows) - ctx.r) * (len(cols) - ctx.r)
                new_blocks = blocks + ((rows, cols),)
                if new_capacity > new_missing:
                    fam = BlockFamily(new_blocks)
                    cert = asche_verify(p, fam, ctx)
                    if cert is not None:
                        return fam, cert
                next_states.append(
                    (new_blocks, cells | block_cells, new_missing, new_capacity)
                )
        next_states.sort(key=lambda s: (-(s[3] - s[2]), s[0]))
        states = next_states[:beam_width]
        if not states:
            break
    return None


def height_criterion_check(
    p: Pattern, region: Pattern | Sequence[tuple[int, int]], height: int
) -> Optional[DependenceCertificate]:
    """Dependence witness from a caller-supplied ideal height.

    The caller asserts that the minors supported on the region generate an
    ideal of the given height; the check is then height > |region \\
    pattern|.  Heights of rectangles are (|I|-r)(|J|-r); for anything else
    they must come from outside.
    """
    cells = set(region.cells) if isinstance(region, Pattern) else set(region)
    missing = len(cells - p.cells)
    if height <= missing:
        return None
    desc = f"height = {height} > {missing} = |T \\ pattern|"
    return DependenceCertificate("height", (), missing, height, desc)


def rectangle_height(rows: Sequence[int], cols: Sequence[int], r: int) -> int:
    return (len(set(rows)) - r) * (len(set(cols)) - r)


def closed_form_r1(p: Pattern) -> Optional[Pattern]:
    """Rank-1 regime: independent iff the bipartite cell graph is a forest.

    Returns None when independent, otherwise the cells of a cycle (a
    circuit).  Cells are edges between row vertex i and column vertex m+j;
    edges are inserted into a union-find forest, and the first edge joining
    an already-connected pair closes the cycle.
    """
    parent = list(range(p.m + p.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    forest: dict[int, list[int]] = {v: [] for v in range(p.m + p.n)}
    for i, j in sorted(p.cells):
        u, v = i, p.m + j
        ru, rv = find(u), find(v)
        if ru == rv:
            # path from u to v inside the forest, then close with (u, v)
            prev = {u: -1}
            queue = [u]
            while queue:
                node = queue.pop(0)
                if node == v:
                    break
                for nxt in forest[node]:
                    if nxt not in prev:
                        prev[nxt] = node
                        queue.append(nxt)
            path = [v]
            while path[-1] != u:
                path.append(prev[path[-1]])
            cells = set()
            for a, b in zip(path, path[1:] + [v]):
                ii, jj = (a, b - p.m) if a < p.m else (b, a - p.m)
                cells.add((ii, jj))
            return Pattern(p.m, p.n, frozenset(cells))
        parent[ru] = rv
        forest[u].append(v)
        forest[v].append(u)
    return None


def closed_form_corank1(p: Pattern, ctx: MatroidContext) -> Optional[Pattern]:
    """Regime r = min(m, n) - 1: dependent iff r+1 lines of the smaller side
    are fully observed; the witness is that full (r+1) x (r+1) block."""
    ctx.check_pattern(p)
    r = ctx.r
    if r != min(ctx.m, ctx.n) - 1:
        raise RegimeError(f"corank-1 closed form needs r = min(m,n)-1, got r={r}")
    transposed = ctx.m > ctx.n
    q = p if not transposed else _transposed(p)
    full_cols = [j for j, c in enumerate(q.col_counts()) if c == q.m]
    if len(full_cols) < q.m:
        return None
    cols = full_cols[: q.m]
    cells = {(i, j) for i in range(q.m) for j in cols}
    witness = Pattern(q.m, q.n, frozenset(cells))
    return _transposed(witness) if transposed else witness


def _transposed(p: Pattern) -> Pattern:
    from .patterns import transpose

    return transpose(p)


def closed_form_corank2(
    p: Pattern, ctx: MatroidContext
) -> Optional[DependenceCertificate]:
    """Regime r = min(m, n) - 2: decide independence by the reduction loop.

    Repeatedly drops columns observed at most r times (independence is
    unchanged); once a line of the smaller side gets that sparse, the
    question drops into the corank-1 regime.  A fully reduced pattern is
    independent iff it has at most r(m'+n'-r) cells; otherwise the surviving
    rectangle itself is an overfull-block certificate (in the original
    coordinates).
    """
    ctx.check_pattern(p)
    r = ctx.r
    if r != min(ctx.m, ctx.n) - 2:
        raise RegimeError(f"corank-2 closed form needs r = min(m,n)-2, got r={r}")

    if ctx.m <= ctx.n:
        rows = list(range(ctx.m))
        cols = list(range(ctx.n))
        cells = set(p.cells)
    else:
        rows = list(range(ctx.n))
        cols = list(range(ctx.m))
        cells = {(j, i) for i, j in p.cells}
    # below, `rows` is the short side, r = len(rows) - 2; certificates are
    # mapped back through `oriented` at the end
    flip = ctx.m > ctx.n

    def make_cert(crows: Sequence[int], ccols: Sequence[int]) -> DependenceCertificate:
        rr = tuple(sorted(crows))
        cc = tuple(sorted(ccols))
        if flip:
            rr, cc = cc, rr
        return _block_certificate(p, rr, cc, r, kind="closed-form")

    while True:
        col_count = {j: 0 for j in cols}
        row_count = {i: 0 for i in rows}
        live = {(i, j) for (i, j) in cells if i in row_count and j in col_count}
        for i, j in live:
            col_count[j] += 1
            row_count[i] += 1
        sparse_cols = [j for j in cols if col_count[j] <= r]
        if sparse_cols:
            cols = [j for j in cols if col_count[j] > r]
            continue
        if len(cols) <= r:
            return None
        if len(cols) == r + 1:
            # corank-1 on the transposed view: dependent iff r+1 rows are
            # fully observed on the surviving columns
            full_rows = [i for i in rows if row_count[i] == len(cols)]
            if len(full_rows) >= r + 1:
                return make_cert(full_rows[: r + 1], cols)
            return None
        sparse_rows = [i for i in rows if row_count[i] <= r]
        if sparse_rows:
            rows = [i for i in rows if i != sparse_rows[0]]
            # now r = len(rows) - 1: corank-1; dependent iff len(rows) full columns
            col_count = {j: 0 for j in cols}
            for i, j in cells:
                if i in set(rows) and j in col_count:
                    col_count[j] += 1
            full_cols = [j for j in cols if col_count[j] == len(rows)]
            if len(full_cols) >= len(rows):
                return make_cert(rows, full_cols[: len(rows)])
            return None
        observed = len(live)
        bound = r * (len(rows) + len(cols) - r)
        if observed > bound:
            return make_cert(rows, cols)
        return None
