"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the pytest terminal summary.
Run directly with `python tests/test_acceptance.py` to print only the lines.
"""

import os
import random
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from finspace.classify import (base_change_stability_failures, check_duality_of_classes,  # noqa: E402
                               classify_map, composition_failures, map_corpus,
                               verify_base_change_theorem, verify_fiber_theorem,
                               verify_support_commutation)
from finspace.complexes import DataComplex, godement_chain, godement_cochain  # noqa: E402
from finspace.derived import (cohomology_table, homology_table, lgamma,  # noqa: E402
                              rgamma)
from finspace.duality import (codualizing_complex, codualizing_stalk_oracle,  # noqa: E402
                              dualizing_complex, dualizing_stalk_oracle, stalk_invariants,
                              verify_homology_cohomology_duality, verify_support_duality,
                              verify_topological_duality)
from finspace.poset import (MonotoneMap, Poset, barycentric, cone_over, inclusion,  # noqa: E402
                            interval, posets_up_to_iso, pseudocircle, random_poset, sphere_model)
from finspace.sheafdata import constant_data, hom_group, random_data  # noqa: E402
from finspace.zlin import FgAbGroup, IntMatrix, determinant, smith_normal_form  # noqa: E402

RESULTS = []


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line, flush=True)


def small_posets():
    """Every poset on 1 to 4 points up to isomorphism (24 of them)."""
    return [x for n in range(1, 5) for x in posets_up_to_iso(n)]


def random_corpus():
    """50 seeded random posets with at most 8 points."""
    rng = random.Random(2024)
    return [random_poset(rng.randint(1, 8), rng) for _ in range(50)]


_CORPUS = {}


def corpus():
    if "maps" not in _CORPUS:
        _CORPUS["maps"] = map_corpus(4, 3)
    return _CORPUS["maps"]


# ---------------------------------------------------------------------------


def criterion_1():
    bad = []
    for n in (1, 2, 3):
        x = sphere_model(n)
        if cohomology_table(constant_data(x)) != {0: (1, ()), n: (1, ())}:
            bad.append(f"H(S^{n})")
        ux = codualizing_complex(x)
        inv = ux.cohomology_invariants()
        if inv != {n: {p: (1, ()) for p in x.elements}}:
            bad.append(f"D^X(S^{n}) degrees")
            continue
        # H^n(D^X) is constant: a connected base and Hom(Z, H^n) = Z with every stalk Z
        if hom_group(constant_data(x), ux.cohomology_data(n)).invariants != (1, ()):
            bad.append(f"D^X(S^{n}) not constant")
    return not bad, "sphere models n=1,2,3" + (f"; failed: {bad}" if bad else "")


def criterion_2():
    bad, t = [], time.time()
    for f in corpus():
        r = verify_base_change_theorem(f, cls=classify_map(f))
        if not r.consistent:
            bad.append(f)
    return not bad, f"{len(corpus())} maps, {len(bad)} discrepancies ({time.time() - t:.0f}s)"


def criterion_3():
    bad, t = [], time.time()
    for f in corpus():
        r = verify_support_commutation(f, cls=classify_map(f))
        if not r.consistent:
            bad.append(f)
    return not bad, f"{len(corpus())} maps, {len(bad)} discrepancies ({time.time() - t:.0f}s)"


def criterion_4():
    c = corpus()
    dual_bad = sum(not check_duality_of_classes(f) for f in c)
    comp_bad = composition_failures(c)
    bc_bad = base_change_stability_failures(c)
    ok = dual_bad == 0 and not comp_bad and not bc_bad
    return ok, (f"class duality {dual_bad}, composition {len(comp_bad)}, "
                f"base change {len(bc_bad)} failures over {len(c)} maps")


def criterion_5():
    bad, checked = [], 0
    for x in random_corpus():
        dx, ux = dualizing_complex(x), codualizing_complex(x)
        for p in x.elements:
            checked += 1
            if stalk_invariants(dx, p) != dualizing_stalk_oracle(x, p):
                bad.append((x, p, "D_X"))
            if stalk_invariants(ux, p) != codualizing_stalk_oracle(x, p):
                bad.append((x, p, "D^X"))
    return not bad, f"{checked} stalks of D_X and D^X, {len(bad)} mismatches"


def criterion_6():
    bad = 0
    for k, x in enumerate(random_corpus()):
        for f in (constant_data(x), random_data(x, random.Random(k))):
            if not verify_topological_duality(x, f).holds:
                bad += 1
    return bad == 0, f"100 (space, data) pairs, {bad} mismatches"


def criterion_7():
    bad, supports = 0, 0
    for k, x in enumerate(random_corpus()):
        for f in (constant_data(x), random_data(x, random.Random(k))):
            if not verify_homology_cohomology_duality(x, f).holds:
                bad += 1
        for y in x.closeds():
            supports += 1
            if not verify_support_duality(x, y).holds:
                bad += 1
    return bad == 0, f"100 (space, data) pairs and {supports} closed supports, {bad} mismatches"


def criterion_8():
    bad, checked = [], 0
    coeffs = [FgAbGroup.free(1), FgAbGroup.cyclic(2), FgAbGroup.free(2)]
    for x in small_posets():
        bx, pi = barycentric(x)
        for g in coeffs:
            checked += 1
            direct = homology_table(constant_data(bx, g)) == homology_table(constant_data(x, g))
            r = verify_fiber_theorem(pi, g)
            if not (direct and r.precondition and r.holds):
                bad.append((x, str(g)))
    return not bad, f"{checked} (space, coefficient) pairs, {len(bad)} failures"


def criterion_9():
    rng = random.Random(9)
    snf_bad = 0
    for _ in range(10 ** 4):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        a = IntMatrix([[rng.randint(-50, 50) for _ in range(n)] for _ in range(m)])
        sf = smith_normal_form(a)
        d = sf.diagonal
        ok = (sf.u @ a @ sf.v == sf.s and abs(determinant(sf.u)) == 1 and abs(determinant(sf.v)) == 1
              and all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
              and all(sf.s[i, j] == 0 for i in range(m) for j in range(n) if i != j or i >= len(d)))
        snf_bad += not ok
    res_bad = 0
    spaces = small_posets() + random_corpus()
    for k, x in enumerate(spaces):
        for f in (constant_data(x), random_data(x, random.Random(k))):
            c, eps = godement_cochain(f)
            aug = DataComplex(x, c.lo - 1, [f] + list(c.terms), [eps] + list(c.diffs))
            res_bad += not aug.is_exact()
            for t in c.terms:
                res_bad += any(set(rgamma(t, u).invariants()) - {0} for u in x.open_masks())
            c, eps = godement_chain(f)
            aug = DataComplex(x, c.lo, list(c.terms) + [f], list(c.diffs) + [eps])
            res_bad += not aug.is_exact()
            for t in c.terms:
                res_bad += any(set(lgamma(t, z).invariants()) - {0} for z in x.closed_masks())
    ok = snf_bad == 0 and res_bad == 0
    return ok, (f"10000 matrices ({snf_bad} bad), Godement checks on {2 * len(spaces)} data "
                f"({res_bad} failures)")


def criterion_10():
    c = cone_over(pseudocircle(), "m")
    cone_map = MonotoneMap(c, interval(), {"a": "0", "b": "0", "c": "0", "d": "0", "m": "1"})
    j = inclusion(Poset(["c", "g"], [("c", "g")]), ["g"])
    got = []
    for f, expect in ((j, (0, "c", {"0": [1, []]}, {})),
                      (cone_map, (1, "0", {"0": [1, []]}, {"0": [1, []], "1": [1, []]}))):
        w = verify_base_change_theorem(f).sides["cohomology"].witness
        got.append(w is not None and (w["degree"], w["y"], w["source"], w["target"]) == expect)
    return all(got), "open-point inclusion Z -> 0 in degree 0, cone map 0 -> Z in degree 1"


# ---------------------------------------------------------------------------


def _run(number, fn):
    ok, detail = fn()
    report(number, ok, detail)
    assert ok, detail


def test_criterion_01_sphere_models():
    _run(1, criterion_1)


def test_criterion_02_base_change_equivalence():
    _run(2, criterion_2)


def test_criterion_03_support_commutation_equivalence():
    _run(3, criterion_3)


def test_criterion_04_class_duality_and_stability():
    _run(4, criterion_4)


def test_criterion_05_dualizing_stalks():
    _run(5, criterion_5)


def test_criterion_06_topological_duality():
    _run(6, criterion_6)


def test_criterion_07_homology_cohomology_duality():
    _run(7, criterion_7)


def test_criterion_08_barycentric_fiber_theorem():
    _run(8, criterion_8)


def test_criterion_09_kernel_correctness():
    _run(9, criterion_9)


def test_criterion_10_counterexample_regressions():
    _run(10, criterion_10)


if __name__ == "__main__":
    fns = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
           criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]
    for i, fn in enumerate(fns, 1):
        report(i, *fn())
    sys.exit(0 if all("PASS" in line for line in RESULTS) else 1)
