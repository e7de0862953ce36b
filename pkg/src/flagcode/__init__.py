"""Network coding with degenerate flags and flag rank metric codes over finite fields."""

from .codes import (
    FlagRankCode,
    SyndromeTable,
    build_max_distance_code,
    build_syndrome_table,
    decode,
    dual_code,
    example_code_t,
    exhaustive_nearest,
    min_distance,
    syndrome,
    trace_pairing,
)
from .errors import BudgetError, CellError, DomainError, ParseError, ValidationError
from .flags import (
    DegenerateFlag,
    FullFlag,
    UpperTriangular,
    d_max,
    flag_distance,
    flag_from_matrix,
    flag_rank,
    full_flag_from_matrix,
    matrix_from_flag,
    project,
)
from .gf import FieldElement, FieldSpec, regular_representation
from .linalg import MatrixF, Subspace, grassmann_distance, rank, rref, subspace_from_rows

__version__ = "0.1.0"
