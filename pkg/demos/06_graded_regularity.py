"""Deciding regularity of covariant representations of a graded algebra.

For the group algebra of S3, graded by S3, the regular representation built
from a representation theta is recognised and theta is recovered.  Three
corrupted triples are rejected at different stages with witnesses.
"""

from heckecov.fell import (build_regular_rep, decide_regularity, group_algebra, noncommuting_v, perturb_nu,
                           regular_v, theta_equal, trivial_rep, unequal_ranks)
from heckecov.instances import s3_s2

pair = s3_s2()
algebra = group_algebra(pair.group)
theta = trivial_rep(algebra)
ct = build_regular_rep(algebra, theta, pair)
verdict = decide_regularity(ct, regular_v(ct))
print(f"regular: {verdict.regular}, carrier dimension {len(ct.carrier)}, "
      f"theta recovered: {theta_equal(verdict.theta, theta)}")

for name, v in (("perturbed nu", decide_regularity(perturb_nu(ct))),
                ("non-commuting V", decide_regularity(ct, noncommuting_v(ct))),
                ("unequal ranks", decide_regularity(unequal_ranks(ct)))):
    print(f"{name}: regular={v.regular} stage={v.stage} witness={v.witness}")
