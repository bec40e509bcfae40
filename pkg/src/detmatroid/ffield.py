"""Exact linear algebra over prime fields Z/p.

Everything here works on plain Python integers, so arithmetic is exact for
any word-sized prime.  Matrices are small (at most a few hundred rows), and
straightforward Gaussian elimination with ``pow(x, -1, p)`` inverses is both
simple and fast enough at that scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

#: Default modulus: the Mersenne prime 2^61 - 1.
DEFAULT_PRIME = (1 << 61) - 1

#: Confirmation modulus used for re-running dependence verdicts: 2^31 - 1.
SECOND_PRIME = (1 << 31) - 1

#: Default RNG seed used across the package when none is given.
DEFAULT_SEED = 20240911


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime modulus plus the RNG seed controlling random draws."""

    p: int = DEFAULT_PRIME
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def rng(self, *salt: int) -> random.Random:
        """Independent stream derived from (seed, salt); deterministic."""
        return random.Random((self.seed,) + salt)


@dataclass(frozen=True)
class FFMatrix:
    """Immutable matrix over Z/p; entries are residues in [0, p)."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]
    p: int

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("column count mismatch")
            for x in row:
                if not 0 <= x < self.p:
                    raise ValueError(f"entry {x} outside [0, {self.p})")

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> "FFMatrix":
        t = tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        return FFMatrix(self.cols, self.rows, t, self.p)


def ff_matrix(rows: Sequence[Sequence[int]], p: int) -> FFMatrix:
    ents = tuple(tuple(x % p for x in row) for row in rows)
    return FFMatrix(len(ents), len(ents[0]) if ents else 0, ents, p)


def ff_random_matrix(spec: FieldSpec, rows: int, cols: int, *salt: int) -> FFMatrix:
    """Matrix with entries i.i.d. uniform in [0, p), reproducible from the seed.

    Extra ``salt`` integers select independent streams for parallel trials.
    """
    rng = spec.rng(*salt)
    ents = tuple(tuple(rng.randrange(spec.p) for _ in range(cols)) for _ in range(rows))
    return FFMatrix(rows, cols, ents, spec.p)


def _eliminate(rows: list[list[int]], p: int) -> tuple[int, list[int]]:
    """In-place row echelon form; returns (rank, pivot column list)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    pivots: list[int] = []
    for c in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        prow = [x * inv % p for x in rows[rank]]
        rows[rank] = prow
        for i in range(rank + 1, nrows):
            f = rows[i][c]
            if f:
                ri = rows[i]
                rows[i] = [(a - f * b) % p for a, b in zip(ri, prow)]
        pivots.append(c)
        rank += 1
        if rank == nrows:
            break
    return rank, pivots


def ff_rank(a: FFMatrix) -> int:
    """Row-echelon rank; deterministic for a fixed input."""
    if a.rows == 0 or a.cols == 0:
        return 0
    rank, _ = _eliminate(a.to_lists(), a.p)
    return rank


def ff_count_solutions(a: FFMatrix, b: Sequence[int]) -> int:
    """Exact number of solutions x of a*x = b over Z/p: 0 or p**nullity."""
    if len(b) != a.rows:
        raise ValueError("right-hand side length mismatch")
    p = a.p
    aug = [list(row) + [bi % p] for row, bi in zip(a.entries, b)]
    if a.rows == 0:
        return p**a.cols
    rank_aug, pivots = _eliminate(aug, p)
    if a.cols in pivots:
        return 0  # a pivot in the augmented column: inconsistent system
    return p ** (a.cols - rank_aug)


class RowBasis:
    """Incrementally maintained echelon basis of row vectors over Z/p.

    Supports membership tests (``reduces_to_zero``) and cheap copying, which
    is what the subset-enumeration harnesses need.
    """

    def __init__(self, ncols: int, p: int) -> None:
        self.ncols = ncols
        self.p = p
        self.rows: list[tuple[int, ...]] = []
        self.pivots: list[int] = []

    def copy(self) -> "RowBasis":
        dup = RowBasis(self.ncols, self.p)
        dup.rows = list(self.rows)
        dup.pivots = list(self.pivots)
        return dup

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: Sequence[int]) -> list[int]:
        p = self.p
        v = [x % p for x in vec]
        for row, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                v = [(a - f * b) % p for a, b in zip(v, row)]
        return v

    def reduces_to_zero(self, vec: Sequence[int]) -> bool:
        return not any(self._reduce(vec))

    def add(self, vec: Sequence[int]) -> bool:
        """Insert a row; returns True if it enlarged the span."""
        v = self._reduce(vec)
        for c, x in enumerate(v):
            if x:
                inv = pow(x, -1, self.p)
                row = tuple(a * inv % self.p for a in v)
                self.rows.append(row)
                self.pivots.append(c)
                return True
        return False
