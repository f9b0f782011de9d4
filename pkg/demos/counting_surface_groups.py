"""
Counting maps from surface groups
=================================

How many homomorphisms from a surface group land in a fixed set of
conjugacy classes?  Two answers: brute enumeration and a character sum.
"""

from gerbegw import SurfaceGroupInstance, build_group, character_table, omega, omega_brute_force

# The quaternion group, with its five conjugacy classes
G = build_group("builtin:Q8")
for k, cl in enumerate(G.conjugacy_classes()):
    print(k, cl.members)

# Its character table, with exact values
T = character_table(G)
for ir in T.irreps:
    print(ir.dim, [str(v) for v in ir.values])

# A genus-one surface with two marked points, both in the class of i
inst = SurfaceGroupInstance(G, genus=1, classes=(2, 2))
print("character sum:", omega(inst))
print("enumeration:  ", omega_brute_force(inst))

# Twisting by the central element -1 changes the answer
twisted = SurfaceGroupInstance(G, genus=1, classes=(2, 2), central=1)
print("twisted:", omega(twisted), omega_brute_force(twisted))

# On a torus with one unmarked point the count is the number of classes
print(omega(SurfaceGroupInstance(G, 1, (0,))), len(G.conjugacy_classes()))
