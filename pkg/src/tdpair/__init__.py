"""Exact-arithmetic verification and analysis of tridiagonal pairs of
linear transformations over Q, GF(p), and their quadratic extensions."""

from .errors import (
    ConsistencyError,
    FieldError,
    InconclusiveError,
    NotDiagonalizableError,
    NotSplitError,
    ShapeError,
    SingularMatrixError,
)
from .fields import GF, QQ, PrimeField, QuadraticExtension, RationalField
from .linalg import Matrix, Subspace, inverse, kernel, rank, rref
from .poly import Polynomial, char_poly, roots_in_field
from .spectra import EigenData, SpectralDecomposition, diagonalize, verify_idempotent_identities
from .tdcore import (
    TDSystem,
    VerificationReport,
    affine_transform,
    find_tridiagonal_orderings,
    is_irreducible,
    relatives,
    verify_td_pair,
)
from .split import SplitData, build_split, shape, split_projections, split_subspaces, vij_lattice
from .raiselower import (
    RaiseLowerData,
    RLExpression,
    build_rl,
    check_cubic_vanishing,
    check_quantum_serre_rl,
    rank_profile,
    rewrite_word,
)
from .recurrence import (
    NON_UNIQUE,
    ClosedFormFit,
    ParameterSet,
    RecurrenceClass,
    classify_sequence,
    derive_parameters,
    field_constraints_check,
    fit_closed_form,
)
from .relations import (
    RelationReport,
    check_tridiagonal_relations,
    is_generalized_td_pair,
    solve_parameters_and_verify,
)
from .conjectures import (
    ConjectureReport,
    check_factorization,
    check_rho_bound,
    check_spanning,
    run_conjectures,
)
from .generators import ScanConfig, Sl2Spec, conjugate_pair, qform_instance, scan, sl2_module
from .pipeline import OrderingAnalysis, analyze_pair, analyze_system

__version__ = "0.1.0"
