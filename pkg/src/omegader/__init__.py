"""omegader: exact spaces of extended derivations of finite-dimensional algebras.

The library computes, in exact rational (and number-field) arithmetic:

- solved spaces of operator triples (A, B, C) attached to a 2x3 constraint
  matrix, and the named spaces (derivations, centroid, quasicentroid,
  nearly derivations, quasiderivations, ...);
- the canonical classification of constraint matrices into eleven classes;
- invariant profiles with one-parameter families and exact special-value
  detection, including irrational values via irreducible moduli;
- degeneration obstructions: dimension invariants can only grow under
  degeneration, so a strict drop certifies non-degeneration.
"""

from .algebras import (
    Algebra,
    AlgebraDocument,
    ValidationReport,
    bracket,
    center,
    change_basis,
    corpus,
    corpus_document,
    corpus_names,
    derived_span,
    document_from_algebra,
    document_from_json,
    document_to_json,
    load_algebra,
    load_document,
    make_algebra,
    random_basis_change,
    save_document,
    validate,
)
from .errors import DocumentError, PreconditionError
from .linalg import (
    ExactMatrix,
    ParametricElimination,
    nullity,
    nullspace,
    parametric_elimination,
    rank,
    rank_at,
    rref,
)
from .profiles import (
    FAMILIES,
    HypothesisReport,
    InvariantProfile,
    ObstructionVerdict,
    ParametricReport,
    SpecialPoint,
    Witness,
    evaluate_at,
    family_matrix,
    hypothesis_check,
    obstruct,
    profile,
    sweep,
)
from .scalars import (
    NumberField,
    NumberFieldElem,
    Poly,
    ReducibleModulusError,
    format_poly,
    format_rational,
    nf_inverse,
    parse_rational,
    poly_gcd,
    rational_roots,
)
from .spaces import (
    CanonicalClass,
    DerivationTriple,
    NQPair,
    OmegaSpec,
    OperatorPair,
    OperatorSpace,
    PairSpace,
    TripleSpace,
    build_system,
    canonical_class,
    class_dimension,
    decompose,
    embed,
    is_abc_derivation,
    is_derivation_triple,
    is_nearly_pair,
    is_omega_derivation,
    is_p_pair,
    is_quasicentroid,
    named_dimension,
    named_space,
    omega_dimension,
    omega_space,
    recompose,
    transform_omega,
)

__version__ = "0.1.0"
