"""Three notions of covariance for the isometries mu_s on the one-prime pair.

Murphy covariance holds for (M, rho o mu).  Stacey covariance fails at
s = (0,3) because rho(mu_s) is a proper isometry: rho(mu_s) rho(mu_s)* sends
e_x to a third of an indicator function.  The Exel conditions hold.
"""

import random
from fractions import Fraction as F

from heckecov.covariance import mrho_pair
from heckecov.instances import bc_one_prime
from heckecov.semigroup import check_exel, check_murphy, check_stacey, stacey_obstruction

inst = bc_one_prime(3)
pair = inst.pair
rp = mrho_pair(pair, window=[inst.group.identity()])
rng = random.Random(5)
xs = [inst.sample(rng) for _ in range(20)]
s = (F(0), F(3))

print("Murphy:", check_murphy(inst, rp, [s], xs).passed)
print("Stacey:", check_stacey(inst, rp, [s], xs).passed)
print("obstruction:", stacey_obstruction(inst, s, xs).details)
rep = check_exel(inst, rp, s, xs[:10])
print("Exel conditions:", rep.details["parts"])
