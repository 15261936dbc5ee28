"""Map classes (closed, open, c-proper, h-open) and mechanical theorem checks.

The decision procedures work on fibers of the restrictions C_x -> C_f(x)
and U_x -> U_f(x).  The verifiers compute base-change and support
comparison maps at the chain level and test them for quasi-isomorphism,
so their verdicts are independent of the fiber criterion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .complexes import DataComplex
from .derived import (base_change_chain_map_cohomology, base_change_chain_map_homology,
                      chain_map_is_quasi_isomorphism, cohomology_table, first_failure,
                      homology_table, lshriek_image, rdirect_image,
                      support_comparison_chain_maps)
from .poset import (MonotoneMap, Poset, fiber_product, is_closed_map, is_open_map,
                    maps_up_to_iso, posets_up_to_iso)
from .sheafdata import AbelianData, Z, constant_data, random_data, support_constant
from .zlin import FgAbGroup, format_invariants

# ---------------------------------------------------------------------------
# homological triviality

_TRIVIAL_CACHE: dict = {}


def _shape_key(x: Poset, mask: int):
    idx = [i for i in range(len(x)) if mask >> i & 1]
    pos = {i: k for k, i in enumerate(idx)}
    return tuple(sum(1 << pos[j] for j in idx if x.up_mask(i) >> j & 1) for i in idx)


def is_homologically_trivial(x: Poset) -> bool:
    """H^0(X, Z) = Z and H^i(X, Z) = 0 for i > 0.  The empty space is not."""
    return _trivial_mask(x, x.full_mask)


def _trivial_mask(x: Poset, mask: int) -> bool:
    if not mask:
        return False
    key = _shape_key(x, mask)
    hit = _TRIVIAL_CACHE.get(key)
    if hit is None:
        sub = x.subspace(x.labels(mask)) if mask != x.full_mask else x
        hit = cohomology_table(constant_data(sub)) == {0: (1, ())}
        _TRIVIAL_CACHE[key] = hit
    return hit


# ---------------------------------------------------------------------------
# classification


@dataclass
class FiberWitness:
    """A point x, a point y over which f restricted to C_x (or U_x) fails, and that fiber."""

    x: object
    y: object
    fiber: tuple
    reason: str

    def as_dict(self) -> dict:
        return {"x": _plain(self.x), "y": _plain(self.y),
                "fiber": [_plain(e) for e in self.fiber], "reason": self.reason}

    def __str__(self):
        fib = "{" + ", ".join(map(str, self.fiber)) + "}"
        return f"x={self.x}, y={self.y}, fiber={fib} ({self.reason})"


@dataclass
class MapClassification:
    closed: bool
    open: bool
    c_proper: bool
    h_open: bool
    witnesses: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"closed": self.closed, "open": self.open, "c_proper": self.c_proper,
                "h_open": self.h_open,
                "witnesses": {k: w.as_dict() for k, w in sorted(self.witnesses.items())}}


def _plain(v):
    if isinstance(v, tuple):
        return "(" + ",".join(map(str, v)) + ")"
    return v if isinstance(v, (int, str)) else str(v)


def _fiber_failure(f: MonotoneMap, upward: bool) -> FiberWitness | None:
    """First (x, y) where a fiber of f on C_x (U_x when upward) is empty or nontrivial."""
    X, Y = f.source, f.target
    for i in range(len(X)):
        local = X.up_mask(i) if upward else X.down_mask(i)
        fy = f.image_index(i)
        around = Y.up_mask(fy) if upward else Y.down_mask(fy)
        for j in range(len(Y)):
            if not around >> j & 1:
                continue
            fib = local & f.preimage_mask(1 << j)
            if not fib:
                reason = "empty fiber"
            elif not _trivial_mask(X, fib):
                inv = cohomology_table(constant_data(X.subspace(X.labels(fib))))
                reason = "cohomology " + ", ".join(f"H^{d}={format_invariants(v)}"
                                                   for d, v in sorted(inv.items()))
            else:
                continue
            labels = tuple(e for k, e in enumerate(X.elements) if fib >> k & 1)
            return FiberWitness(X.elements[i], Y.elements[j], labels, reason)
    return None


def classify_map(f: MonotoneMap) -> MapClassification:
    """Closed, open, c-proper and h-open flags with a witness for each failure."""
    down = _fiber_failure(f, upward=False)
    up = _fiber_failure(f, upward=True)
    closed = is_closed_map(f)
    opened = is_open_map(f)
    wit = {}
    if down is not None:
        wit["c_proper"] = down
        if not closed:
            wit["closed"] = down if down.reason == "empty fiber" else _fiber_failure_empty(f, False)
    if up is not None:
        wit["h_open"] = up
        if not opened:
            wit["open"] = up if up.reason == "empty fiber" else _fiber_failure_empty(f, True)
    return MapClassification(closed, opened, down is None, up is None, wit)


def _fiber_failure_empty(f: MonotoneMap, upward: bool) -> FiberWitness:
    X, Y = f.source, f.target
    for i in range(len(X)):
        local = X.up_mask(i) if upward else X.down_mask(i)
        fy = f.image_index(i)
        around = Y.up_mask(fy) if upward else Y.down_mask(fy)
        for j in range(len(Y)):
            if around >> j & 1 and not local & f.preimage_mask(1 << j):
                return FiberWitness(X.elements[i], Y.elements[j], (), "empty fiber")
    raise AssertionError("map is closed/open after all")


# ---------------------------------------------------------------------------
# coefficient families


def discriminating_family(x: Poset, n_random: int = 20, seed: int = 0) -> list[tuple[str, AbelianData]]:
    """Constant Z and Z/2, Z on every C_p and U_p, and seeded random data of stalk rank <= 2."""
    fam = [("Z", constant_data(x)), ("Z/2", constant_data(x, FgAbGroup.cyclic(2)))]
    for i, p in enumerate(x.elements):
        fam.append((f"Z_C({p})", support_constant(x, x.down_mask(i))))
    for i, p in enumerate(x.elements):
        fam.append((f"Z_U({p})", support_constant(x, x.up_mask(i))))
    rng = random.Random(seed)
    for k in range(n_random):
        fam.append((f"random[{k}]", random_data(x, rng, pieces=2)))
    return fam


# ---------------------------------------------------------------------------
# verification reports


@dataclass
class SideResult:
    """Outcome of one family of comparisons (one side of one theorem)."""

    holds: bool
    expected: bool | None
    tested: int
    witness: dict | None = None

    @property
    def agrees(self) -> bool:
        return self.expected is None or self.holds == self.expected

    def as_dict(self) -> dict:
        return {"holds": self.holds, "expected": self.expected, "agrees": self.agrees,
                "tested": self.tested, "witness": self.witness}


@dataclass
class TheoremReport:
    check: str
    sides: dict
    precondition: bool = True
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(s.holds for s in self.sides.values())

    @property
    def consistent(self) -> bool:
        """Every side agrees with the fiber classification."""
        return all(s.agrees for s in self.sides.values())

    def as_dict(self) -> dict:
        return {"check": self.check, "precondition": self.precondition, "holds": self.holds,
                "consistent": self.consistent,
                "sides": {k: v.as_dict() for k, v in self.sides.items()},
                "details": self.details}


def _inv_map(c):
    return {str(d): [r, list(t)] for d, (r, t) in sorted(c.invariants().items())}


def _failure_witness(name, y, chain_map, homological: bool) -> dict:
    deg = first_failure(chain_map)
    return {"data": name, "y": _plain(y),
            "degree": -deg if homological else deg,
            "source": _inv_map(chain_map.source), "target": _inv_map(chain_map.target)}


def verify_base_change_theorem(f: MonotoneMap, family=None, sides=("cohomology", "homology"),
                               cls: MapClassification | None = None) -> TheoremReport:
    """Test every base-change map over every y for every data of the family.

    cohomology: (R f_* F)_y -> R Gamma(f^-1(y), F), expected iso iff c-proper.
    homology:   L(f^-1(y), F) -> (L f_! F)_y,       expected iso iff h-open.
    """
    if family is None:
        family = discriminating_family(f.source)
    cls = classify_map(f) if cls is None else cls
    out = {}
    for side in sides:
        homological = side == "homology"
        build = base_change_chain_map_homology if homological else base_change_chain_map_cohomology
        tested, witness = 0, None
        for name, data in family:
            k = DataComplex.from_data(data)
            for y in f.target.elements:
                c = build(f, k, y)
                tested += 1
                if not chain_map_is_quasi_isomorphism(c):
                    witness = _failure_witness(name, y, c, homological)
                    break
            if witness is not None:
                break
        expected = cls.h_open if homological else cls.c_proper
        out[side] = SideResult(witness is None, expected, tested, witness)
    return TheoremReport("base change", out)


def verify_support_commutation(f: MonotoneMap, family=None,
                               cls: MapClassification | None = None) -> TheoremReport:
    """Support comparison maps over all closed and all open subsets of the target.

    Four sides: homological/closed, homological/open (expected iff h-open) and
    cohomological/closed, cohomological/open (expected iff c-proper).
    """
    if family is None:
        family = discriminating_family(f.source)
    cls = classify_map(f) if cls is None else cls
    Y = f.target
    out = {}
    for homological in (True, False):
        for kind in ("closed", "open"):
            subsets = Y.closed_masks() if kind == "closed" else Y.open_masks()
            tested, witness = 0, None
            for name, data in family:
                for m in subsets:
                    maps = support_comparison_chain_maps(f, data, m, homological, kind)
                    for y, c in maps.items():
                        tested += 1
                        if not chain_map_is_quasi_isomorphism(c):
                            witness = _failure_witness(name, y, c, homological)
                            witness["subset"] = [_plain(e) for e in Y.elements
                                                 if m >> Y.ix(e) & 1]
                            break
                    if witness is not None:
                        break
                if witness is not None:
                    break
            side = ("homological" if homological else "cohomological") + "/" + kind
            expected = cls.h_open if homological else cls.c_proper
            out[side] = SideResult(witness is None, expected, tested, witness)
    return TheoremReport("support commutation", out)


def verify_fiber_theorem(f: MonotoneMap, g: FgAbGroup = Z, homological: bool = True) -> TheoremReport:
    """H_i(X, G) = H_i(Y, G) for h-open f with trivial fibers (H^i and c-proper otherwise).

    Also checks the intermediate facts: the higher derived images of the
    constant data vanish and the zeroth one has stalks G with invertible
    restrictions.  A failed precondition is reported with its witness.
    """
    X, Y = f.source, f.target
    cls = classify_map(f)
    side = "homology" if homological else "cohomology"
    good_class = cls.h_open if homological else cls.c_proper
    bad_fiber = next((y for j, y in enumerate(Y.elements)
                      if not _trivial_mask(X, f.preimage_mask(1 << j))), None)
    details = {"class": "h_open" if homological else "c_proper", "class_holds": good_class}
    if not good_class or bad_fiber is not None:
        if bad_fiber is not None:
            details["nontrivial_fiber"] = {"y": _plain(bad_fiber),
                                          "fiber": [_plain(e) for e in sorted(f.fiber(bad_fiber), key=X.ix)]}
        if not good_class:
            w = cls.witnesses.get("h_open" if homological else "c_proper")
            details["class_witness"] = w.as_dict() if w else None
        return TheoremReport("fiber theorem", {side: SideResult(False, None, 0, None)},
                             precondition=False, details=details)
    cx, cy = constant_data(X, g), constant_data(Y, g)
    if homological:
        lhs, rhs = homology_table(cx), homology_table(cy)
        img = lshriek_image(f, cx)
    else:
        lhs, rhs = cohomology_table(cx), cohomology_table(cy)
        img = rdirect_image(f, cx)
    inv = img.cohomology_invariants()
    higher_vanish = set(inv) <= {0}
    h0 = img.cohomology_data(0)
    stalks_ok = all(s.invariants == g.invariants for s in h0.stalks)
    res_ok = all(h0.restriction(Y.elements[a], Y.elements[b]).is_isomorphism() for a, b in Y.covers())
    holds = lhs == rhs and higher_vanish and stalks_ok and res_ok
    details.update({"source": {str(k): [r, list(t)] for k, (r, t) in lhs.items()},
                    "target": {str(k): [r, list(t)] for k, (r, t) in rhs.items()},
                    "higher_images_vanish": higher_vanish,
                    "degree_zero_image_is_constant": stalks_ok and res_ok})
    witness = None if holds else {"source": details["source"], "target": details["target"]}
    return TheoremReport("fiber theorem", {side: SideResult(holds, True, 1, witness)},
                         details=details)


# ---------------------------------------------------------------------------
# corpus and stability checks


def map_corpus(max_source: int = 4, max_target: int = 3) -> list[MonotoneMap]:
    """Every monotone map between nonempty posets of the given sizes, up to isomorphism."""
    targets = [y for m in range(1, max_target + 1) for y in posets_up_to_iso(m)]
    out = []
    for n in range(1, max_source + 1):
        for x in posets_up_to_iso(n):
            for y in targets:
                out.extend(maps_up_to_iso(x, y))
    return out


def check_duality_of_classes(f: MonotoneMap) -> bool:
    """c-proper(f) == h-open(dual f) and h-open(f) == c-proper(dual f)."""
    a, b = classify_map(f), classify_map(f.dual())
    return a.c_proper == b.h_open and a.h_open == b.c_proper


def composition_failures(corpus: list[MonotoneMap]) -> list[tuple[MonotoneMap, MonotoneMap, str]]:
    """Composable pairs of c-proper (h-open) maps whose composite is not."""
    by_source: dict = {}
    for g in corpus:
        by_source.setdefault(g.source, []).append(g)
    cls = {f: classify_map(f) for f in corpus}
    bad = []
    for f in corpus:
        for g in by_source.get(f.target, ()):
            gf = g.after(f)
            c = classify_map(gf)
            if cls[f].c_proper and cls[g].c_proper and not c.c_proper:
                bad.append((f, g, "c_proper"))
            if cls[f].h_open and cls[g].h_open and not c.h_open:
                bad.append((f, g, "h_open"))
    return bad


def base_change_stability_failures(corpus: list[MonotoneMap]) -> list[tuple[MonotoneMap, MonotoneMap, str]]:
    """c-proper (h-open) f and any g into its target whose pulled-back map is not."""
    by_target: dict = {}
    for g in corpus:
        by_target.setdefault(g.target, []).append(g)
    bad = []
    for f in corpus:
        cf = classify_map(f)
        if not (cf.c_proper or cf.h_open):
            continue
        for g in by_target.get(f.target, ()):
            _, p1, _ = fiber_product(g, f)
            c = classify_map(p1)
            if cf.c_proper and not c.c_proper:
                bad.append((f, g, "c_proper"))
            if cf.h_open and not c.h_open:
                bad.append((f, g, "h_open"))
    return bad
