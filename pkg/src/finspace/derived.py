"""Derived functors: cohomology, homology, direct images, supports, Hom and tensor.

Cohomology of a subspace S is computed from the total complex of
Gamma(S, C^p K^q), homology from L(S, C_p K^q).  Derived direct images are
data complexes whose stalk at y is such a total complex over a preimage;
restrictions are chain projections (cohomology) or chain inclusions
(homology), so everything stays strictly functorial.
"""

from __future__ import annotations

from typing import Iterable

from .complexes import (
    DataChainMap,
    DataComplex,
    TotalComplex,
    _as_complex,
    _identity_blocks,
    cosection_complex,
    flat_replacement,
    godement_cochain_complex,
    hom_complex,
    inclusion_map,
    morphism_map,
    projective_replacement,
    restriction_map,
    section_complex,
    sheaf_hom_complex,
    tensor_complex,
)
from .poset import MonotoneMap, Poset
from .sheafdata import AbelianData, DataMorphism, constant_data, support_on
from .zlin import ChainMap, FgAbGroup, GroupComplex, GroupHom, IntMatrix, cone, induced_map_on_homology


def _mask(x: Poset, subset) -> int:
    if subset is None:
        return x.full_mask
    if isinstance(subset, int):
        return subset
    return x.mask(subset)


# ---------------------------------------------------------------------------
# absolute (co)homology


def rgamma(f, subset=None) -> GroupComplex:
    """R Gamma(S, K) as a complex of groups."""
    k = _as_complex(f)
    return section_complex(k, _mask(k.base, subset)).complex


def lgamma(f, subset=None) -> GroupComplex:
    """L(S, K) (derived cosections) as a cochain complex: H_i sits in degree -i."""
    k = _as_complex(f)
    return cosection_complex(k, _mask(k.base, subset)).complex


def cohomology(u, f, i: int) -> FgAbGroup:
    """H^i(U, F) for a subspace U (labels, mask or None for everything)."""
    return rgamma(f, u).homology(i)


def homology(z, f, i: int) -> FgAbGroup:
    """H_i(Z, F)."""
    return lgamma(f, z).homology(-i)


def cohomology_table(f, subset=None) -> dict[int, tuple]:
    """{i: invariants of H^i} for the nonzero groups."""
    return rgamma(f, subset).invariants()


def homology_table(f, subset=None) -> dict[int, tuple]:
    """{i: invariants of H_i} for the nonzero groups."""
    return {-n: inv for n, inv in sorted(lgamma(f, subset).invariants().items(), reverse=True)}


# ---------------------------------------------------------------------------
# direct images


def _stalkwise(base: Poset, tcs: list[TotalComplex], pair_map) -> DataComplex:
    lo = min((t.complex.lo for t in tcs if t.complex.terms), default=0)
    hi = max((t.complex.hi for t in tcs if t.complex.terms), default=-1)
    cache = {}

    def chain_map(i, j):
        m = cache.get((i, j))
        if m is None:
            m = cache[(i, j)] = pair_map(tcs[i], tcs[j])
        return m

    terms = []
    for n in range(lo, hi + 1):
        stalks = [t.complex.term(n) for t in tcs]
        terms.append(AbelianData._build(base, stalks, lambda i, j, n=n: chain_map(i, j).component(n)))
    diffs = []
    for k, n in enumerate(range(lo, hi)):
        diffs.append(DataMorphism._build(terms[k], terms[k + 1], [t.complex.diff(n) for t in tcs]))
    return DataComplex(base, lo, terms, diffs, check=False)


def rdirect_image(f: MonotoneMap, k) -> DataComplex:
    """R f_* K: stalk at y is Gamma(f^-1(U_y), C^. K)."""
    k = _as_complex(k)
    Y = f.target
    tcs = [section_complex(k, f.preimage_mask(Y.up_mask(y))) for y in range(len(Y))]
    return _stalkwise(Y, tcs, restriction_map)


def lshriek_image(f: MonotoneMap, k) -> DataComplex:
    """L f_! K: stalk at y is L(f^-1(C_y), C_. K)."""
    k = _as_complex(k)
    Y = f.target
    tcs = [cosection_complex(k, f.preimage_mask(Y.down_mask(y))) for y in range(len(Y))]
    return _stalkwise(Y, tcs, inclusion_map)


def higher_direct_image(f: MonotoneMap, g, i: int) -> AbelianData:
    """R^i f_* G as abelian data on the target."""
    return rdirect_image(f, g).cohomology_data(i)


def lower_shriek_image(f: MonotoneMap, g, i: int) -> AbelianData:
    """L_i f_! G as abelian data on the target."""
    return lshriek_image(f, g).cohomology_data(-i)


# ---------------------------------------------------------------------------
# supports


def local_cohomology_complex(f, closed) -> GroupComplex:
    """R Gamma_Y(X, K) = cone(R Gamma(X, K) -> R Gamma(X - Y, K))[-1]."""
    k = _as_complex(f)
    X = k.base
    m = _mask(X, closed)
    if X.down_closure_mask(m) != m:
        raise ValueError("local cohomology needs a closed subset")
    big = section_complex(k)
    small = section_complex(k, X.full_mask & ~m)
    return cone(restriction_map(big, small)).shift(-1)


def local_cohomology(f, closed, i: int) -> FgAbGroup:
    """H^i_Y(X, F)."""
    return local_cohomology_complex(f, closed).homology(i)


def cosupport_complex(f, open_set) -> GroupComplex:
    """Derived L^U(X, K) = cone(L(X - U, K) -> L(X, K))."""
    k = _as_complex(f)
    X = k.base
    m = _mask(X, open_set)
    if X.up_closure_mask(m) != m:
        raise ValueError("cosupport needs an open subset")
    small = cosection_complex(k, X.full_mask & ~m)
    big = cosection_complex(k)
    return cone(inclusion_map(small, big))


# ---------------------------------------------------------------------------
# Hom, tensor, duals


def rhom(f, g) -> GroupComplex:
    """RHom(F, G) = Hom(P, G) with P a projective replacement of F."""
    return hom_complex(projective_replacement(f), _as_complex(g))


def rsheaf_hom(f, g) -> DataComplex:
    """R Hom-sheaf(F, G) = Hom-sheaf(P, C^. G).

    The source is replaced by a projective complex and the target by its
    Godement resolution: restricting a projective to U_x need not stay
    projective, so both replacements are required for the stalk at x to be
    RHom(F|U_x, G|U_x).
    """
    return sheaf_hom_complex(projective_replacement(f), godement_cochain_complex(g))


def dual(f) -> DataComplex:
    """F^v = R Hom-sheaf(F, Z)."""
    k = _as_complex(f)
    return rsheaf_hom(f, constant_data(k.base))


def derived_tensor(f, g) -> DataComplex:
    """F (x)^L G through a stalkwise free replacement of F."""
    return tensor_complex(flat_replacement(f), _as_complex(g))


# ---------------------------------------------------------------------------
# base change and support comparison


def _check_point(y: Poset, pt):
    if pt not in y:
        raise ValueError(f"{pt!r} is not a point of the target")
    return y.ix(pt)


def base_change_chain_map_cohomology(f: MonotoneMap, g, y) -> ChainMap:
    """Gamma(f^-1(U_y), C^. F) -> Gamma(f^-1(y), C^. F): projection onto fiber chains."""
    Y = f.target
    j = _check_point(Y, y)
    k = _as_complex(g)
    big = section_complex(k, f.preimage_mask(Y.up_mask(j)))
    small = section_complex(k, f.preimage_mask(1 << j))
    return restriction_map(big, small)


def base_change_chain_map_homology(f: MonotoneMap, g, y) -> ChainMap:
    """L(f^-1(y), C_. F) -> L(f^-1(C_y), C_. F): inclusion of fiber chains."""
    Y = f.target
    j = _check_point(Y, y)
    k = _as_complex(g)
    small = cosection_complex(k, f.preimage_mask(1 << j))
    big = cosection_complex(k, f.preimage_mask(Y.down_mask(j)))
    return inclusion_map(small, big)


def base_change_map_cohomology(f: MonotoneMap, g, y, i: int) -> GroupHom:
    """(R^i f_* F)_y -> H^i(f^-1(y), F)."""
    return induced_map_on_homology(base_change_chain_map_cohomology(f, g, y), i)


def base_change_map_homology(f: MonotoneMap, g, y, i: int) -> GroupHom:
    """H_i(f^-1(y), F) -> (L_i f_! F)_y."""
    return induced_map_on_homology(base_change_chain_map_homology(f, g, y), -i)


def _zero_target_map(c: GroupComplex, into: bool) -> ChainMap:
    z = GroupComplex(c.lo, [FgAbGroup.zero()] * len(c.terms),
                     [IntMatrix.zeros(0, 0)] * len(c.diffs), check=False)
    if into:
        return ChainMap(z, c, {}, check=False)
    return ChainMap(c, z, {}, check=False)


def _support_kind(Y: Poset, m: int, kind: str | None) -> str:
    closed = Y.down_closure_mask(m) == m
    opened = Y.up_closure_mask(m) == m
    if kind is None:
        if closed:
            return "closed"
        if opened:
            return "open"
        raise ValueError("support comparison needs a closed or open subset")
    if kind == "closed" and not closed or kind == "open" and not opened:
        raise ValueError(f"subset is not {kind}")
    if kind not in ("closed", "open"):
        raise ValueError(f"unknown subset kind {kind!r}")
    return kind


def support_comparison_chain_maps(f: MonotoneMap, g: AbelianData, subset, homological: bool,
                                  kind: str | None = None) -> dict:
    """Stalkwise chain maps realizing the support comparison, keyed by target label.

    Homological side, closed C: L f_!(F_{f^-1 C}) -> (L f_! F)_C.
    Homological side, open V:   L f_!(F_{f^-1 V}) -> (L f_! F)_V.
    Cohomological side, closed C: (R f_* F)_C -> R f_*(F_{f^-1 C}).
    Cohomological side, open V:   (R f_* F)_V -> R f_*(F_{f^-1 V}).
    """
    X, Y = f.source, f.target
    m = _mask(Y, subset)
    kind = _support_kind(Y, m, kind)
    pre = f.preimage_mask(m)
    gs = support_on(g, pre)
    if kind == "closed":
        # F -> F_Z is the quotient onto a closed support
        phi = DataMorphism._build(g, gs, [IntMatrix.identity(g.stalk_at(i).ngens) if pre >> i & 1
                                          else IntMatrix.zeros(0, g.stalk_at(i).ngens)
                                          for i in range(len(X))])
    else:
        # F_Z -> F is the inclusion of an open support
        phi = DataMorphism._build(gs, g, [IntMatrix.identity(g.stalk_at(i).ngens) if pre >> i & 1
                                          else IntMatrix.zeros(g.stalk_at(i).ngens, 0)
                                          for i in range(len(X))])
    kg, ks = DataComplex.from_data(g), DataComplex.from_data(gs)
    out = {}
    for y in range(len(Y)):
        inside = bool(m >> y & 1)
        if homological:
            cm = f.preimage_mask(Y.down_mask(y))
            src = cosection_complex(ks, cm)
            if not inside:
                out[Y.elements[y]] = _zero_target_map(src.complex, into=False)
            elif kind == "closed":
                tgt = cosection_complex(kg, cm)
                out[Y.elements[y]] = src.block_map(tgt, _identity_blocks(src))
            else:
                tgt = cosection_complex(kg, cm)
                out[Y.elements[y]] = morphism_map(src, tgt, DataChainMap(ks, kg, {0: phi}, check=False))
        else:
            um = f.preimage_mask(Y.up_mask(y))
            tgt = section_complex(ks, um)
            if not inside:
                out[Y.elements[y]] = _zero_target_map(tgt.complex, into=True)
            elif kind == "closed":
                src = section_complex(kg, um)
                out[Y.elements[y]] = morphism_map(src, tgt, DataChainMap(kg, ks, {0: phi}, check=False))
            else:
                src = section_complex(kg, um)
                out[Y.elements[y]] = src.block_map(tgt, _identity_blocks(src))
    return out


def support_comparison(f: MonotoneMap, g: AbelianData, subset, i: int, homological: bool = True,
                       kind: str | None = None) -> dict:
    """{y: GroupHom} in homological degree i (homological side) or cohomological degree i."""
    maps = support_comparison_chain_maps(f, g, subset, homological, kind)
    deg = -i if homological else i
    return {y: induced_map_on_homology(c, deg) for y, c in maps.items()}


def chain_map_is_quasi_isomorphism(c: ChainMap) -> bool:
    """True when the induced map is an isomorphism in every degree."""
    return cone(c).is_exact()


def first_failure(c: ChainMap) -> int | None:
    """Smallest degree where the induced map is not an isomorphism, or None."""
    lo = min(c.source.lo, c.target.lo) if (c.source.terms or c.target.terms) else 0
    hi = max(c.source.hi, c.target.hi) if (c.source.terms or c.target.terms) else -1
    for n in range(lo, hi + 1):
        if not induced_map_on_homology(c, n).is_isomorphism():
            return n
    return None


def subset_labels(x: Poset, subset) -> Iterable:
    return sorted(x.labels(_mask(x, subset)), key=x.ix)
