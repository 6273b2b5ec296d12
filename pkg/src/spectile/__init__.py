"""Exact spectral-set and tiling decisions on finite abelian groups.

Decides whether subsets of a finite abelian group (given as a product of
cyclic factors) are spectral and/or tiles, produces certifying witnesses
(spectra, tiling complements, subgroup complements), and runs desk-scale
verification sweeps of the spectral <=> tile equivalence on groups of shape
Z_p^2 x Z_q^2.
"""

from .errors import (
    UNDECIDED,
    BudgetExhausted,
    EmptyInput,
    GroupMismatch,
    InvalidArgument,
    InvalidDirection,
    InvalidElement,
    InvalidModulus,
    NotADivisor,
    NotASpectralPair,
    NotATilingPair,
    NotPQShape,
    NotTwoDistinctPrimes,
    Overflow,
    ParseError,
    SpectileError,
    TheoremViolation,
    TooSmall,
    Undecided,
    WrongShape,
)
from .groups import (
    Direction,
    Element,
    Group,
    Multiset,
    Subgroup,
    all_directions,
    annihilator,
    cyclic_subgroup,
    determined_directions,
    direction_rep,
    dot,
    element_order,
    make_group,
    project_along,
    subgroups_of_order,
    sylow_projection,
)
from .cyclotomic import (
    CubeDecomposition,
    CyclotomicInt,
    IntPolynomial,
    ZeroSet,
    char_sum,
    char_sum_vanishes,
    cube_decompose,
    cyclotomic_poly,
    euler_phi,
    zero_set,
)
from .spectra import (
    SpectrumWitness,
    equidistributed,
    find_spectrum,
    is_spectral,
    is_spectral_pair,
)
from .tiling import (
    ComplementMethod,
    ComplementWitness,
    enumerate_tiles,
    find_complement,
    is_tiling_pair,
    tiles_by_subgroup,
)
from .structure import (
    CaseKind,
    CaseTag,
    LeafConstancy,
    LeafDecomposition,
    PQShape,
    TrichotomyResult,
    TrichotomyWitnessKind,
    assumption_a_holds,
    classify_case,
    direction_trichotomy,
    divisibility_class,
    leaf_constancy,
    leaf_decomposition,
    pq_shape,
    prop1_validate,
)
from .harness import (
    ComplementConstruction,
    ConstructedComplement,
    ConstructedSpectrum,
    ProbeReport,
    SpectrumConstruction,
    SubgroupTilingReport,
    VerificationPlan,
    VerificationReport,
    automorphism_index_perms,
    case5_nonexistence_probe,
    probe_sizes,
    spectral_to_complement,
    tile_to_spectrum,
    verify_fuglede,
    verify_subgroup_tiling,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
