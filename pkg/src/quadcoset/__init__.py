"""Exact arithmetic for positive ternary quadratic polynomials as Z-cosets."""

__version__ = "0.1.0"

from .errors import (
    BehavesWellAtP,
    DenominatorAtP,
    EvenPrime,
    InternalCheckError,
    NotComplete,
    NotIntegralLattice,
    NotPositiveDefinite,
    NotPrimitive,
    NotReduced,
    NotUnimodular,
    PrimeDividesConductor,
    PrimeDividesNorm,
    QuadCosetError,
    SingularGram,
)
from .forms import (
    Coset,
    NormIdeals,
    QuadPolynomial,
    conductor,
    coset_from_record,
    coset_to_polynomial,
    coset_to_record,
    diagonal_coset,
    discriminant,
    is_primitive,
    norm_ideals,
    polynomial_to_coset,
    transform,
)
from .reduction import (
    ReducedCoset,
    canonical_form,
    canonical_key,
    count_representations,
    enumerate_represented,
    min_value,
    reduce,
    represents,
    search_box_filter,
)
from .padic import (
    JordanBlock,
    JordanSplitting,
    LocalClass,
    ProgressionData,
    behaves_well,
    jordan_decompose,
    local_class,
    local_represents,
    progression_data,
    relevant_primes,
)
from .watson import (
    WatsonStep,
    coset_descend,
    descend_chain,
    lambda_sublattice,
    watson_map,
)
from .regularity import (
    CensusRecord,
    GenusCheck,
    RegularityVerdict,
    census,
    check_regular,
    genus_represents,
    verify_counting_identity,
)
from .polygonal import (
    GonalForm,
    canonicalize,
    gonal_conductor,
    gonal_number,
    gonal_represents,
    is_regular_up_to,
    is_universal_up_to,
    to_coset,
)
