"""Smith normal forms over exact rings and the combinatorial matrices that motivate them."""

from .errors import *  # noqa: F401,F403
from .rings import (  # noqa: F401
    QQ,
    ZZ,
    MultiPoly,
    RatFunc,
    UniPoly,
    cyclotomic_factor,
    cyclotomic_poly,
    int_gcd,
    multipoly_gcd,
    multipoly_ring,
    poly_ring,
    ratfunc_field,
    ratfunc_poly_ring,
    specialize,
    unipoly_gcd,
)
from .exactmat import (  # noqa: F401
    AbelianGroupDesc,
    RingMatrix,
    SnfResult,
    cokernel,
    det_exact,
    gcd_of_minors,
    refute_snf_by_specialization,
    snf,
    snf_via_minors,
)

__version__ = "0.1.0"
