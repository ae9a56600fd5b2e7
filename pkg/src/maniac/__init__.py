"""Rank-metric coding for two-source random linear network coding."""

from . import backend
from .errors import (
    BadDimensions,
    BadNetwork,
    ColumnCountNotDivisible,
    DecodeFailure,
    DimensionMismatch,
    DivideByZero,
    IncompatibleFields,
    ManiacError,
    MalformedRre,
    NotFullColumnRank,
    NotInSubfield,
    NotPrime,
    RateRegionViolation,
    SearchSpaceTooLarge,
    ShapeMismatch,
    SingularD,
    Stage1Failure,
    Stage2Failure,
    UnknownNode,
)
from .fields import (
    Elem,
    ExtField,
    Field,
    FieldTower,
    PrimeField,
    extend,
    field_from_descriptor,
    find_irreducible,
    make_prime_field,
)
from .matrix import (
    Mat,
    RreResult,
    hstack,
    left_inverse,
    left_nullspace,
    rank,
    row_space_distance,
    rre,
    vstack,
)
from .fold import FoldSpec, fold, fold_to, unfold, unfold_to
from .gabidulin import (
    BruteForceResult,
    DecodeDiagnostics,
    GabidulinCode,
    SideInfo,
    brute_force_decode,
    decode,
    encode,
    make_code,
)
from .netsim import (
    AdversaryPlan,
    CutProfile,
    NetworkSpec,
    TransmissionResult,
    reference_network,
    transmit,
)
from .codec import (
    ManiacParams,
    Stage1Extract,
    binomial_margin,
    coherent_decode,
    derive_params,
    lift_headers,
    noncoherent_decode,
    rre_extract,
    s1_encode,
    s2_encode,
    success_lower_bound,
)

__version__ = "0.1.0"
