"""Prime-characteristic singularity invariants over F_p: Frobenius powers and
roots, test ideals and test modules, F-pure modules, F-singularity predicates
and compatible prime ideals."""

from .polyring import PolyRing, Polynomial, MonomialOrder
from .groebner import Ideal, SubmoduleOfFree, Matrix, minors, kernel_of_ring_map, set_budget
from .frobenius import (
    RationalExponent, frobenius, frobenius_root, frobenius_root_mult, frobenius_power, submodule_root,
)
from .cartier import (
    CartierDatum, q_gorenstein_generator, trace_on_canonical, test_element, ascend_ideal, ascend_module,
    descend_chain,
)
from .homological import canonical_ideal, is_cohen_macaulay, ext_module, frobenius_ext_map, ideals_isomorphic
from .invariants import (
    PairSpec, test_module, test_ideal, parameter_test_ideal, f_pure_module, level, is_f_pure, is_f_regular,
    is_f_rational, is_f_injective,
)
from .decompose import factor_univariate, minimal_primes, compatible_ideals, quotient_by

__version__ = "0.1.0"
