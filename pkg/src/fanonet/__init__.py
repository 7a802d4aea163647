"""Generalized Fano and non-Fano networks over finite fields."""

from .errors import (
    BudgetExceeded,
    CharacteristicMismatch,
    CycleDetected,
    NetcodeError,
    NoSolution,
    NotInvertible,
    ParseError,
    SourceHasInEdge,
    TerminalHasOutEdge,
    UnknownDemand,
    ValidationError,
)
from .families import (
    FamilySpec,
    classic_variants,
    fano,
    generalized_fano,
    generalized_non_fano,
    modified_fano,
    modified_non_fano,
    non_fano,
    q_from_primes,
)
from .gf import Field, FieldMatrix, field_new, kron_identity, mat_inverse, mat_mul, mat_rank, solve_left
from .linear_code import (
    CodingAssignment,
    GlobalCode,
    SolvabilityReport,
    decodable,
    function_check,
    global_codes,
    verify_solution,
)
from .network import Network, from_json, network_validate, to_dot, to_json, topological_order
from .search import (
    SearchOutcome,
    Status,
    characteristic_table,
    exhaustive_scalar_search,
    randomized_vector_search,
)
from .solutions import fano_paper_solution, non_fano_paper_solution

__version__ = "0.1.0"
