"""Exact rational toolkit for orbit spaces of compact coregular linear
groups: gradient grammians (P-matrices), the boundary equation, and the
semialgebraic stratification they determine."""

from .polyring import (
    ArityMismatch,
    MultiPoly,
    ParseError,
    PolyMatrix,
    SpaceMismatch,
    UnknownVariable,
    VariableSpace,
    ZeroDivisor,
    ZeroPolynomial,
    exact_divide,
    format_poly,
    monomials_of_weight,
    p_space,
    parse_poly,
    poly_det,
)
from .linalg import NotSymmetric, RationalMatrix, det, nullspace, rank, solve_linear
from .basisreg import (
    BadParameter,
    BasisFormatError,
    BasisReport,
    BasisValidationError,
    IntegrityBasis,
    NotInvariantInSpan,
    RelationFound,
    UnknownBasis,
    builtin_basis,
    builtin_names,
    expand_in_x,
    format_basis,
    orbit_map,
    parse_basis,
    rewrite_in_basis,
    verify_basis,
)
from .pmatrix import (
    BadIbt,
    IbtSpec,
    PMatrix,
    RewriteFailed,
    apply_ibt,
    build_p_matrix,
    evaluate_p,
    format_p_matrix,
    grading_check,
    gradient_grammian_at,
    identity_ibt,
    invert_ibt,
    parse_p_matrix,
    transport_poly,
)
from .boundary import (
    ACTIVE_WITH_LAMBDA,
    Activity,
    BoundaryResidual,
    FactorSplit,
    INACTIVE,
    InitialConditionsReport,
    NothingActive,
    STRICTLY_ACTIVE,
    WeightOutOfBounds,
    boundary_residual,
    check_active,
    complete_factor_scan,
    find_active,
    initial_conditions_check,
    normalize_factor,
    p0_point,
)
from .strata import (
    IN_S,
    OUTSIDE,
    SectionGrid,
    StratumLabel,
    classify_point,
    principal_connectivity,
    psd_rank,
    read_section_csv,
    section_grid,
    section_summary,
    write_section_csv,
)
from .catalog import AllowableClass, BadParameters, CLASS_TABLE, Match, class_degrees, table_match
from .searchq2 import Q2Solution, search_allowable_q2

__version__ = "0.1.0"
