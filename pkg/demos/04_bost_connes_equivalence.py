"""The one-prime Bost-Connes pair (Z[1/2] x| 2^Z, Z).

R((0,2)) = 2 while (0,2)H is a single coset.  The pair (M, rho) is covariant,
and covariance agrees with the two translation conditions on random probes.
A translated multiplication representation fails both sides.
"""

import random
from fractions import Fraction as F

from heckecov.covariance import mrho_pair, shift_nu
from heckecov.instances import bc_one_prime
from heckecov.semigroup import check_msms, check_theorem_equiv

inst = bc_one_prime(2)
pair = inst.pair
s = (F(0), F(2))
print("R((0,2)) =", pair.R(s), " cosets in H(0,2)H:", len(pair.left_cosets(s)),
      " cosets in H(0,1/2)H:", len(pair.left_cosets((F(0), F(1, 2)))))
print("[HsH][Hs^-1H] as a sum of e(mH):", check_msms(inst, s).passed)

rng = random.Random(0)
probes = {"axb": [(inst.sample(rng), inst.sample(rng), inst.sample(rng)) for _ in range(60)],
          "nx": [(inst.sample(rng, "n"), inst.sample(rng)) for _ in range(60)],
          "sx": [(inst.sample(rng, "s"), inst.sample(rng)) for _ in range(60)]}
base = mrho_pair(pair, window=[inst.group.identity()])
for name, rp in (("(M, rho)", base), ("shifted nu", shift_nu(base, inst.n_elem(F(1, 2))))):
    rep = check_theorem_equiv(inst, rp, probes)
    d = rep.details
    print(f"{name}: covariant={d['covariant']} rtnh={d['rtnh']} wkly={d['wkly']} agree={rep.passed}")
