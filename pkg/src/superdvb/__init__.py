"""Exact symbolic kernel for graded polynomial algebras and super vector
fields, with checkers for double and multiple bracket structures."""

from .algebra import (
    BASE,
    CORE,
    EVEN,
    FIBER,
    ODD,
    Chart,
    ChartMismatchError,
    Generator,
    GradedPoly,
    KernelError,
    ParityError,
    UnknownGeneratorError,
    WeightError,
    normalize_product,
)
from .fields import (
    Derivation,
    Substitution,
    Verdict,
    check_weight,
    commutator,
    homological_residuals,
    is_homological,
    related,
    reverse_chart,
    reverse_field,
    reverse_function,
)
from .brackets import BracketTable
from .algebroid import (
    AlgebroidData,
    Section,
    derived_anchor,
    derived_bracket,
    frame_section,
    odd_algebroid_chart,
    section_to_field,
    tangent_chart,
    tangent_prolongation,
)
from .doubles import (
    DoubleData,
    anchor_system,
    bialg_system,
    check_commutativity,
    check_condition_I,
    check_condition_II,
    check_condition_III,
    dual_chart,
    dualize,
    enumerate_neighbors,
    full_check,
    i12_substitution,
    schouten_on_dual,
)
from .drinfeld import (
    Bialgebroid,
    bialgebra,
    build_cotangent_double,
    canonical_poisson,
    cotangent_chart,
    hamiltonian_lift,
    search_cobracket,
)
from .multifold import (
    MultiStructure,
    MultiTransition,
    check_nfold,
    face_structure,
    multi_chart,
    partial_reverse_multifold,
    validate_transition,
)
from .dsl import ParseError, StructureFile, emit, parse

__version__ = "0.1.0"
