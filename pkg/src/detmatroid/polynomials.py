"""Sparse integer polynomials in matrix-entry variables.

Used for one job: checking that an explicitly tabulated polynomial vanishes
on the variety of rank-bounded matrices, by evaluating it at random points
A*B over large prime fields.  The file format is line based::

    polyspec 1
    # optional comments
    <coeff> <i>,<j>:<e> <i>,<j>:<e> ...

with 1-based matrix coordinates, one term per line.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .ffield import SECOND_PRIME, FieldSpec, ff_random_matrix
from .patterns import MatroidContext

FORMAT_HEADER = "polyspec 1"


@dataclass(frozen=True)
class PolynomialSpec:
    """Integer polynomial as (coefficient, exponent vector) terms.

    ``variables`` are 0-based matrix cells; exponent vectors are parallel to
    it.  Coefficients are nonzero, exponents nonnegative.
    """

    variables: tuple[tuple[int, int], ...]
    terms: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        nvars = len(self.variables)
        if len(set(self.variables)) != nvars:
            raise ValueError("duplicate variables")
        for coeff, exps in self.terms:
            if coeff == 0:
                raise ValueError("zero coefficient term")
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError("malformed exponent vector")


def parse_polynomial(text: str) -> PolynomialSpec:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != FORMAT_HEADER:
        raise ValueError(f"polynomial file must start with {FORMAT_HEADER!r}")
    var_index: dict[tuple[int, int], int] = {}
    raw_terms: list[tuple[int, dict[int, int]]] = []
    for ln in lines[1:]:
        parts = ln.split()
        coeff = int(parts[0])
        exps: dict[int, int] = {}
        for tok in parts[1:]:
            pos, _, e = tok.partition(":")
            i_s, _, j_s = pos.partition(",")
            cell = (int(i_s) - 1, int(j_s) - 1)
            idx = var_index.setdefault(cell, len(var_index))
            exps[idx] = exps.get(idx, 0) + int(e)
        raw_terms.append((coeff, exps))
    nvars = len(var_index)
    variables = tuple(sorted(var_index, key=var_index.get))
    terms = tuple(
        (coeff, tuple(exps.get(k, 0) for k in range(nvars))) for coeff, exps in raw_terms
    )
    return PolynomialSpec(variables, terms)


def serialize_polynomial(spec: PolynomialSpec) -> str:
    lines = [FORMAT_HEADER]
    for coeff, exps in spec.terms:
        toks = [str(coeff)]
        for (i, j), e in zip(spec.variables, exps):
            if e:
                toks.append(f"{i + 1},{j + 1}:{e}")
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def evaluate(spec: PolynomialSpec, values: dict[tuple[int, int], int], modulus: int | None = None) -> int:
    """Evaluate at integer values (exact, or reduced mod ``modulus``)."""
    total = 0
    for coeff, exps in spec.terms:
        term = coeff
        for (cell, e) in zip(spec.variables, exps):
            if e:
                v = values[cell]
                term *= pow(v, e, modulus) if modulus else v**e
        total += term
        if modulus:
            total %= modulus
    return total % modulus if modulus else total


def univariate_in(
    spec: PolynomialSpec,
    var: tuple[int, int],
    assignment: dict[tuple[int, int], int],
) -> list[int]:
    """Substitute every variable except ``var``; ascending coefficient list."""
    coeffs: dict[int, int] = {}
    for coeff, exps in spec.terms:
        term = coeff
        degree = 0
        for (cell, e) in zip(spec.variables, exps):
            if not e:
                continue
            if cell == var:
                degree += e
            else:
                term *= assignment[cell] ** e
        coeffs[degree] = coeffs.get(degree, 0) + term
    top = max((d for d, c in coeffs.items() if c), default=0)
    return [coeffs.get(d, 0) for d in range(top + 1)]


def polynomial_vanishes_on_variety(
    spec: PolynomialSpec,
    ctx: MatroidContext,
    trials: int = 10,
    field: FieldSpec | None = None,
    second_prime: int | None = SECOND_PRIME,
) -> bool:
    """True iff the polynomial evaluates to 0 at ``trials`` random rank <= r
    points over each prime.

    A polynomial that vanishes identically on the variety passes always; a
    nonmember fails except with probability bounded by Schwartz-Zippel.
    """
    for i, j in spec.variables:
        if not (0 <= i < ctx.m and 0 <= j < ctx.n):
            raise ValueError(f"variable ({i + 1},{j + 1}) outside {ctx.m}x{ctx.n}")
    field = field or FieldSpec()
    specs = [field]
    if second_prime is not None and second_prime != field.p:
        specs.append(FieldSpec(second_prime, field.seed))
    for fs in specs:
        for t in range(trials):
            a = ff_random_matrix(fs, ctx.m, ctx.r, 7, t, 0)
            b = ff_random_matrix(fs, ctx.r, ctx.n, 7, t, 1)
            values = {
                (i, j): sum(a.entries[i][k] * b.entries[k][j] for k in range(ctx.r)) % fs.p
                for i in range(ctx.m)
                for j in range(ctx.n)
            }
            if evaluate(spec, values, fs.p) != 0:
                return False
    return True


def load_packaged_polynomial(name: str) -> PolynomialSpec:
    text = resources.files("detmatroid").joinpath(f"data/poly/{name}.txt").read_text()
    return parse_polynomial(text)


def hollow_circuit_polynomial() -> PolynomialSpec:
    """The degree-2 relation satisfied by the missing corner entry of the
    hollow 4x4 pattern at rank 2 (quadratic in the (1,1) entry)."""
    return load_packaged_polynomial("hollow-4x4-circuit")
