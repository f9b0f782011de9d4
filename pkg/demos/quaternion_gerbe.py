"""
The quaternion group as a gerbe over the Klein four-group
=========================================================

Q8 is a central extension of C2 x C2 by {+1, -1}.  Its invariants split
into two pieces, one per character of the centre: the untwisted algebra of
C2 x C2 and the algebra twisted by the extension class.
"""

from gerbegw import (BandedData, GWQuery, TwistedAlgebra, build_group, gw_bg, is_coboundary,
                     verify_decomposition)

G = build_group("Q8")
data = BandedData(G)
print("centre:", data.Z.elements, " quotient order:", data.K.order)

# The extension class is not a coboundary
print("coboundary?", is_coboundary(data.nu)[0])

# Each character of the centre gives a sector
for lam in data.characters:
    A = data.sector(lam)
    dims = [ir.dim for ir in A.twisted_irreps()]
    print(lam, "regular classes:", len(A.c_regular_classes()), "irrep dims:", dims)

# The twisted sector has one irrep of dimension two, so its only idempotent is 1
twisted = data.sector((1,))
print(twisted.idempotent(0) == twisted.identity)

# Moving a class sum of Q8 into each sector and back
d = data.base.center_basis()[2]
parts = data.transform_I_all(d)
for lam, v in parts.items():
    print(lam, {k: str(x) for k, x in sorted(v.coeffs.items())})
print("round trip:", data.transform_J(parts) == d)

# A descendant invariant of BQ8, genus one
A = TwistedAlgebra(G)
print(gw_bg(GWQuery(A, 1, [A.identity], [1])))

# The decomposition, checked on every class-sum insertion up to 2g+n = 4
rep = verify_decomposition(G, max_g=2, max_n=4, max_weight=4)
print(rep.summary())
