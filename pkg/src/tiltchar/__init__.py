"""Exact tilting-module character computations.

Characters of indecomposable tilting modules (quantum at a root of unity,
and modular through digit recursions and reported identity checks) over
root systems of rank at most 3, with an affine Kazhdan-Lusztig engine
supplying quantum multiplicities.  Everything is exact integer or rational
arithmetic.
"""

from .charring import (
    CharacterExpansion,
    ExactDivisionError,
    ExpansionError,
    GroupRingElement,
    antisymmetrize,
    expand_in_basis,
    expand_weyl_basis,
    frobenius_twist,
    is_invariant,
    monomial,
    one,
    weyl_character,
    weyl_denominator,
)
from .digits import (
    DigitVector,
    digit,
    digit_splice,
    digit_tail,
    in_strict_sector,
    iter_restricted,
    iter_strict_sector,
    strict_sector_level,
    to_digits,
    top_digit_level,
)
from .klengine import (
    KLEngine,
    KLPolynomial,
    LengthBoundExceeded,
    MultiplicityTable,
    NotMinimalCoset,
    TableValidationError,
    WallWeight,
)
from .rootdata import (
    AffineWeyl,
    AffineWeylElement,
    RootDataError,
    RootSystem,
    WeylElement,
    WeylGroup,
    weight_add,
    weight_sub,
    weight_scale,
)
from .tilting import (
    CHECK_NAMES,
    CharacterTable,
    CharacterUnavailable,
    OracleValidationError,
    TiltingContext,
    derived_quantum_table,
    digit_formula_coefficients,
    full_quantum_product,
    is_prime,
    modular_character,
    modular_digit_product,
    modular_tilting_character,
    quantum_character,
    quantum_split_product,
    quantum_tilting_character,
    rank1_box_table,
    relative_coefficients,
    run_check,
    tower_character,
    tower_coefficients,
    tower_product,
)

__version__ = "0.1.0"
