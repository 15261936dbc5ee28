"""
Cohomology of small finite spaces
=================================

A finite poset is a topological space whose open sets are the up-sets.
The four-point pseudocircle already has the cohomology of a circle.
"""

from finspace.derived import cohomology_table, homology_table
from finspace.poset import projective_plane, pseudocircle, sphere_model
from finspace.sheafdata import constant_data, sections, support_constant
from finspace.zlin import FgAbGroup, format_invariants

# the pseudocircle: two closed points a, b below two open points c, d
s1 = pseudocircle()
print(s1)
print("U_a =", sorted(s1.up_set("a")), " C_c =", sorted(s1.down_set("c")))

# global sections of the constant data see the connected components
z = constant_data(s1)
print("Gamma(S1, Z) =", sections(s1.elements, z))
print("Gamma({c, d}, Z) =", sections(["c", "d"], z))

# cohomology and homology come from Godement resolutions and Smith normal form
for name, table in [("H^*(S1, Z)", cohomology_table(z)), ("H_*(S1, Z)", homology_table(z))]:
    print(name, {i: format_invariants(v) for i, v in table.items()})

# spheres of every dimension as iterated suspensions of two points
for n in range(4):
    t = cohomology_table(constant_data(sphere_model(n)))
    print(f"S^{n} ({len(sphere_model(n))} points):", {i: format_invariants(v) for i, v in t.items()})

# torsion: a 31-point model of the real projective plane
rp2 = projective_plane()
for g in (FgAbGroup.free(1), FgAbGroup.cyclic(2)):
    t = homology_table(constant_data(rp2, g))
    print(f"H_*(RP2, {g}) =", {i: format_invariants(v) for i, v in t.items()})

# Z supported on an open set computes relative cohomology
u = s1.up_set("a")
print("H^*(S1, Z_U) for U = U_a:", cohomology_table(support_constant(s1, u)))
