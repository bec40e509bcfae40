"""detmatroid: combinatorics and randomized algebra for deciding when a
partially observed matrix admits finitely many, or exactly one, bounded-rank
completion."""

__version__ = "0.1.0"

from .completability import (
    CompletabilityVerdict,
    Confidence,
    Status,
    column_reduce_unique,
    rank_descent_check,
    unique_corank1,
    unique_corank2_square,
    unique_r1,
    verdict_pipeline,
)
from .closure import ClosureTrace, greedy_closure
from .criteria import (
    BlockFamily,
    DependenceCertificate,
    SlmfParams,
    asche_search,
    asche_verify,
    block_dependence_scan,
    closed_form_corank1,
    closed_form_corank2,
    closed_form_r1,
    height_criterion_check,
    partition_slmf_search,
    slmf_check,
    slmf_necessary_check,
)
from .ffield import DEFAULT_PRIME, SECOND_PRIME, FFMatrix, FieldSpec, ff_count_solutions, ff_random_matrix, ff_rank
from .fibers import FiberBudgetError, FiberCountResult, fiber_count
from .oracle import OracleVerdict, find_circuit, is_base, is_independent, jacobian_matrix, matroid_closure, matroid_rank
from .pathfamilies import (
    FamilyEnumeration,
    PathFamily,
    diagonal_variant,
    enumerate_families,
    family_to_pattern,
    ladder_unique_check,
    sample_family,
)
from .patterns import (
    MatroidContext,
    Pattern,
    PatternFormatError,
    RegimeError,
    excise,
    is_ladder,
    parse_pattern,
    permute,
    reduce_columns,
    serialize_pattern,
    stitch,
    transpose,
)
from .polynomials import (
    PolynomialSpec,
    hollow_circuit_polynomial,
    parse_polynomial,
    polynomial_vanishes_on_variety,
    serialize_polynomial,
)

__all__ = [name for name in dir() if not name.startswith("_")]
