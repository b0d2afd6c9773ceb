"""tlspin: Temperley-Lieb representations, R-matrices, L-operators, and
open spin-chain verification, all generated by one invertible matrix b.

The library constructs the two-site rank-one generator from b, the braid
solution R = q I + X and its Baxterization, the auxiliary-space L-operator
and its coproduct tower, and the chain Hamiltonian; it verifies every
defining identity numerically and matches spectra against the integer
representation-ring predictions.
"""

from .bform import BForm, builtin_bform, gauge_transform, load_bform, make_bform, parse_b_matrix
from .chain import (
    IsotypicAssignment,
    SpectrumReport,
    check_global_weight_symmetry,
    check_isotypic,
    hamiltonian,
    spectrum,
)
from .errors import (
    ConventionMismatch,
    ConvergenceFailure,
    DegenerateParameter,
    NoConsistentAssignment,
    NormalizationFailure,
    SingularMatrix,
    SizeBudgetExceeded,
    TLSpinError,
    UnsupportedDimension,
    ZeroSpectralParameter,
)
from .qalg import (
    AuxOperatorMatrix,
    CasimirResult,
    DecompositionEvidence,
    GeneratorSet,
    casimir,
    casimir_combination,
    check_centralizer,
    check_coassociativity,
    check_pminus_invariance,
    check_rll,
    coproduct_T,
    generator_blocks,
    highest_weight_scan,
    l_operator,
)
from .rep_ring import (
    DecompositionTable,
    catalan,
    decomposition_table,
    dims_p,
    mult_nu,
    poincare_series,
    quantum_plane_dims,
    symmetrizer,
)
from .reports import CheckResult, ResidualReport
from .rmatrix import (
    AntisymmetrizerResult,
    SpectralR,
    check_braid,
    check_spectral_ybe,
    check_tl_cubic,
    check_unitarity,
    check_weight_symmetry,
    constant_R,
    constant_R_inverse,
    projectors,
    q_antisymmetrizer,
    spectral_R,
    spectral_weight,
)
from .tl_rep import ChainOp, LocalOp, check_tl_relations, embed, local_X

__version__ = "0.1.0"

__all__ = [
    "BForm",
    "builtin_bform",
    "make_bform",
    "gauge_transform",
    "load_bform",
    "parse_b_matrix",
    "LocalOp",
    "ChainOp",
    "local_X",
    "embed",
    "check_tl_relations",
    "constant_R",
    "constant_R_inverse",
    "projectors",
    "spectral_R",
    "spectral_weight",
    "SpectralR",
    "check_braid",
    "check_spectral_ybe",
    "check_tl_cubic",
    "check_unitarity",
    "check_weight_symmetry",
    "q_antisymmetrizer",
    "AntisymmetrizerResult",
    "AuxOperatorMatrix",
    "GeneratorSet",
    "l_operator",
    "generator_blocks",
    "coproduct_T",
    "check_centralizer",
    "casimir",
    "casimir_combination",
    "CasimirResult",
    "check_rll",
    "check_coassociativity",
    "check_pminus_invariance",
    "highest_weight_scan",
    "DecompositionEvidence",
    "dims_p",
    "mult_nu",
    "catalan",
    "decomposition_table",
    "DecompositionTable",
    "poincare_series",
    "quantum_plane_dims",
    "symmetrizer",
    "hamiltonian",
    "spectrum",
    "SpectrumReport",
    "check_isotypic",
    "IsotypicAssignment",
    "check_global_weight_symmetry",
    "CheckResult",
    "ResidualReport",
    "TLSpinError",
    "SingularMatrix",
    "DegenerateParameter",
    "SizeBudgetExceeded",
    "ZeroSpectralParameter",
    "UnsupportedDimension",
    "ConventionMismatch",
    "NoConsistentAssignment",
    "NormalizationFailure",
    "ConvergenceFailure",
]
