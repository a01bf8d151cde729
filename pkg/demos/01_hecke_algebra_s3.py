"""The Hecke algebra of S3 relative to the stabiliser of a point.

Lists the cosets and double cosets, the counting map R, and the relation
T^2 = 2 + T for the non-trivial basis element T.
"""

from heckecov.hecke import HeckeElement, structure_constants
from heckecov.instances import s3_s2

pair = s3_s2()
g = pair.group

print("left cosets:", [pair.fmt(c) for c in pair.cosets()])
for k in pair.double_cosets():
    print(f"double coset {pair.fmt(k)}: R = {pair.R(k.rep)}, cosets inside = "
          f"{[pair.fmt(c) for c in pair.left_cosets(k.rep)]}")

T = HeckeElement.basis(pair, g.cycle(0, 2))
one = HeckeElement.unit(pair)
print("T*T =", T * T)
print("T*T == 2 + T:", T * T == one * 2 + T)

print("structure constants (x, y, z, c):")
for row in structure_constants(pair, [k.rep for k in pair.double_cosets()]).rows():
    print("  ", row)
