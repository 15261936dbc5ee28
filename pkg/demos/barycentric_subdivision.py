"""
Barycentric subdivision
=======================

The chains of X, ordered by inclusion, form a poset whose map "last element"
back to X is h-open with contractible fibers.  So it induces isomorphisms on
homology with any constant coefficients.
"""

from finspace.classify import classify_map, verify_fiber_theorem
from finspace.derived import homology_table
from finspace.poset import barycentric, pseudocircle
from finspace.sheafdata import constant_data
from finspace.zlin import FgAbGroup

x = pseudocircle()
bx, pi = barycentric(x)
print(f"{len(x)} points subdivide into {len(bx)} points")
print("pi is", {k: v for k, v in classify_map(pi).as_dict().items() if k != "witnesses"})

for g in (FgAbGroup.free(1), FgAbGroup.cyclic(2), FgAbGroup.free(2)):
    print(f"G = {g}:", homology_table(constant_data(bx, g)), "=", homology_table(constant_data(x, g)))
    print("  fiber theorem:", verify_fiber_theorem(pi, g).holds)

# subdividing twice still gives a circle
bbx, _ = barycentric(bx)
print(f"second subdivision has {len(bbx)} points, H_* =", homology_table(constant_data(bbx)))
