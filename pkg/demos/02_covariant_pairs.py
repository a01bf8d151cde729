"""Covariant pairs on l2(G/H) for S4 relative to a point stabiliser.

(M, rho) is covariant and a matrix-unit pair.  Replacing rho by the character
of the Hecke algebra keeps a representation but breaks covariance, and the
checkers report the offending triple.
"""

from heckecov.covariance import (character_pair, check_covariant_pair, check_lemma_conditions,
                                 check_matrix_unit_pair, mrho_pair)
from heckecov.instances import s4_s3

pair = s4_s3()

good = mrho_pair(pair)
print("(M, rho) covariant:", check_covariant_pair(pair, good).passed)
print("(M, rho) matrix-unit:", check_matrix_unit_pair(pair, good).passed)
lem = check_lemma_conditions(pair, good)
print("conditions (i)-(iv):", {k: lem.details[k] for k in ("i", "ii", "iii", "iv")})

bad = character_pair(pair)
cov = check_covariant_pair(pair, bad)
print("character pair covariant:", cov.passed)
print("witness:", cov.witness)
