"""Exact computation in Hecke algebras of discrete Hecke pairs and
mechanical verification of covariance identities for their representations."""

from .scalars import Scalar
from .groups import (AdditiveRationals, ConfigurationError, CyclicGroup, Group,
                     MultiplicativeRationals, SemidirectProduct, SymmetricGroup,
                     semidirect_product)
from .pair import (CosetKey, DoubleCosetKey, HeckePair, OrbitCapExceeded, coset_count_R,
                   left_cosets_in_double_coset, same_double_coset, same_left_coset)
from .hecke import (HeckeElement, check_mult_identity, convolve, involution,
                    product_counting_value, structure_constants)
from .reports import CheckReport
from .covariance import RepPair, decompose_theorem_mult, mrho_pair, search_matrix_unit_converse
from .semigroup import SemidirectHeckeInstance
from .instances import load_instance

__version__ = "0.1.0"

__all__ = [
    "Scalar", "AdditiveRationals", "ConfigurationError", "CyclicGroup", "Group",
    "MultiplicativeRationals", "SemidirectProduct", "SymmetricGroup", "semidirect_product",
    "CosetKey", "DoubleCosetKey", "HeckePair", "OrbitCapExceeded", "coset_count_R",
    "left_cosets_in_double_coset", "same_double_coset", "same_left_coset",
    "HeckeElement", "check_mult_identity", "convolve", "involution",
    "product_counting_value", "structure_constants", "CheckReport",
    "RepPair", "decompose_theorem_mult", "mrho_pair", "search_matrix_unit_converse", "SemidirectHeckeInstance", "load_instance",
]
