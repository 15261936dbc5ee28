"""
Dualizing complexes and Gorenstein spaces
=========================================

D_X represents F -> R Gamma(X, F)^v and D^X co-represents homology.
On a sphere model both are a single invertible data shifted by the
dimension; on a non-orientable space that data has no global sections.
"""

from finspace.duality import (codualizing_complex, dualizing_complex, gorenstein_check,
                              verify_homology_cohomology_duality, verify_topological_duality)
from finspace.poset import Poset, projective_plane, sphere_model
from finspace.sheafdata import constant_data, sections

s2 = sphere_model(2)
print("stalk cohomology of D^X on S2:", codualizing_complex(s2).cohomology_invariants())
print("stalk cohomology of D_X on S2:", dualizing_complex(s2).cohomology_invariants())
print("S2:", gorenstein_check(s2).as_dict())

rp2 = projective_plane()
rep = gorenstein_check(rp2)
print("RP2:", rep.as_dict())
print("global sections of the orientation data:", sections(rp2.elements, rep.orientation))

# three segments glued at one end is not Gorenstein
tripod = Poset("abcm", [("a", "m"), ("b", "m"), ("c", "m")])
print("tripod:", gorenstein_check(tripod).verdict)

# duality statements, checked on invariants
print(verify_topological_duality(s2, constant_data(s2)).as_dict())
print(verify_homology_cohomology_duality(s2).as_dict())
