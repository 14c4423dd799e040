"""Arithmetic partial derivative D_p over the integers.

Exact orbit structure of x, D_p(x), D_p^2(x), ..., enumeration and counting
of anti-partial derivatives, constructions with a prescribed number of them,
and brute-force oracles that cross-check all of it.
"""

__version__ = "0.1.0"

from .antideriv import (
    AntiSet,
    ConstructionResult,
    anti_derivatives,
    c_set,
    c_set_rational,
    construct_a0,
    construct_b0,
    construct_k0,
    construct_with_n_antis,
    count_anti,
    count_anti_rational,
    expand_c,
    expand_c_rational,
    primitive_anti,
)
from .core import (
    INF,
    PSplit,
    StandardForm,
    d_full,
    dp,
    dp_standard,
    ord_p,
    parse_number,
    pfloor,
    psplit,
    size_limit,
    to_standard,
)
from .errors import (
    ApderivError,
    EmptySet,
    FactorBoundExceeded,
    InfiniteSet,
    ParameterError,
    TooLarge,
    VerificationFailure,
)
from .orbit import (
    IncProfile,
    OrbitClass,
    OrbitKind,
    classify,
    inc_profile,
    lchain,
    ord_sequence,
    ord_step,
    period,
    reverse_construct,
    segment,
)
