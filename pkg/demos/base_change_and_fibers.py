"""
When does base change hold?
===========================

A map of finite spaces is c-proper when it is closed and the fibers of each
restriction C_x -> C_f(x) are homologically trivial; h-open is the mirror
notion with the open sets U_x.  Cohomological base change holds exactly for
c-proper maps, and homological base change exactly for h-open maps.
"""

from finspace.classify import (classify_map, map_corpus, verify_base_change_theorem,
                               verify_support_commutation)
from finspace.poset import MonotoneMap, Poset, cone_over, inclusion, interval, pseudocircle

# collapse a circle to a point, keeping the cone apex separate
cone = cone_over(pseudocircle(), "m")
f = MonotoneMap(cone, interval(), {"a": "0", "b": "0", "c": "0", "d": "0", "m": "1"})
c = classify_map(f)
print("cone map:", c.as_dict())

# the verifier compares (R f_* F)_y with R Gamma(f^-1(y), F) for many data F
r = verify_base_change_theorem(f)
print("cohomology side holds:", r.sides["cohomology"].holds)
print("witness:", r.sides["cohomology"].witness)
print("homology side holds:", r.sides["homology"].holds)

# an open point included in the Sierpinski space has an empty fiber
j = inclusion(Poset(["c", "g"], [("c", "g")]), ["g"])
print("open inclusion:", classify_map(j).as_dict())
print("witness:", verify_base_change_theorem(j).sides["cohomology"].witness)

# support commutation obeys the same dichotomy
print("support commutation consistent:", verify_support_commutation(f).consistent)

# a small census: how many maps between posets of at most 3 and 2 points are in each class
maps = map_corpus(3, 2)
counts = {"c_proper": 0, "h_open": 0, "both": 0}
for g in maps:
    k = classify_map(g)
    counts["c_proper"] += k.c_proper
    counts["h_open"] += k.h_open
    counts["both"] += k.c_proper and k.h_open
print(len(maps), "maps:", counts)
