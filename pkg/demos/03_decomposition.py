"""Recovering the multiplicity of a covariant pair.

Three copies of (M, rho) for S3/S2 are hidden by a random exact unitary.  The
decomposition finds the multiplicity and a unitary Psi that carries the pair
back onto 1 (x) M and 1 (x) rho.
"""

import random

from heckecov.covariance import decompose_theorem_mult, multiple_pair, random_conjugate
from heckecov.instances import s3_s2

pair = s3_s2()
rp, W = random_conjugate(multiple_pair(pair, 3), random.Random(2024))
print("carrier dimension:", len(rp.carrier))
print("a disguised entry of nu(eH):", rp.nu(pair.group.identity()).entries()[0][0])

dec = decompose_theorem_mult(pair, rp)
print("multiplicity:", dec.multiplicity)
print("Psi unitary:", dec.psi.is_unitary())
print("Ad Psi matches 1 (x) M and 1 (x) rho:", dec.report.passed)
