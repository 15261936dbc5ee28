"""Dualizing and codualizing complexes, the dual space functor and duality checks.

D_X sits in degrees -dim X .. 0 with term -p the sum over chains x_0 < ... < x_p
of Z supported on C_{x_p}; D^X sits in degrees 0 .. dim X with term i the sum
over chains of Z supported on U_{x_0}.  Both are built explicitly and checked
against independent stalk computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import (
    DataComplex,
    _as_complex,
    _chains_by_len,
    flat_replacement,
    hom_complex,
    projective_replacement,
)
from .derived import lgamma, local_cohomology_complex, rgamma, rsheaf_hom, dual
from .poset import Poset
from .sheafdata import AbelianData, DataMorphism, constant_data, is_locally_constant, support_constant
from .zlin import (
    FgAbGroup,
    GroupComplex,
    IntMatrix,
    direct_sum,
    dual_group_complex,
    free_model,
    hom_space,
    hstack,
    matrix_to_vec,
    solve,
    vec_to_matrix,
    vstack,
)


# ---------------------------------------------------------------------------
# explicit complexes


def _layout(x: Poset, select) -> list[dict]:
    """Per point q: {chain: position} for the chains kept by select(chain, q)."""
    chains = x.chain_indices()
    out = []
    for q in range(len(x)):
        lay = {}
        for c in chains:
            if select(c, q):
                lay.setdefault(len(c) - 1, {})[c] = len(lay.get(len(c) - 1, {}))
        out.append(lay)
    return out


def dualizing_complex(x: Poset) -> DataComplex:
    """D_X: term -p is the sum over p-chains of Z_{C_{x_p}}; d drops vertices with sign (-1)^i."""
    n = len(x)
    dim = x.dimension()
    lay = _layout(x, lambda c, q: x._down[c[-1]] >> q & 1)
    terms = []
    for p in range(dim, -1, -1):
        stalks = [FgAbGroup.free(len(lay[q].get(p, {}))) for q in range(n)]

        def res(q, r, p=p):
            src, tgt = lay[q].get(p, {}), lay[r].get(p, {})
            rows = []
            for c in tgt:
                row = [0] * len(src)
                row[src[c]] = 1
                rows.append(tuple(row))
            return IntMatrix._raw(tuple(rows), len(src))

        terms.append(AbelianData._build(x, stalks, res))
    diffs = []
    for k, p in enumerate(range(dim, 0, -1)):
        comps = []
        for q in range(n):
            src, tgt = lay[q].get(p, {}), lay[q].get(p - 1, {})
            rows = [[0] * len(src) for _ in tgt]
            for c, j in src.items():
                for i in range(len(c)):
                    face = c[:i] + c[i + 1:]
                    t = tgt.get(face)
                    if t is not None:
                        rows[t][j] += -1 if i % 2 else 1
            comps.append(IntMatrix._raw(tuple(map(tuple, rows)), len(src)))
        diffs.append(DataMorphism._build(terms[k], terms[k + 1], comps))
    return DataComplex(x, -dim, terms, diffs, check=True)


def codualizing_complex(x: Poset) -> DataComplex:
    """D^X: term i is the sum over i-chains of Z_{U_{x_0}}; d inserts vertices with sign (-1)^j."""
    n = len(x)
    dim = x.dimension()
    lay = _layout(x, lambda c, q: x._up[c[0]] >> q & 1)
    terms = []
    for p in range(dim + 1):
        stalks = [FgAbGroup.free(len(lay[q].get(p, {}))) for q in range(n)]

        def res(q, r, p=p):
            src, tgt = lay[q].get(p, {}), lay[r].get(p, {})
            cols = []
            for c in src:
                col = [0] * len(tgt)
                col[tgt[c]] = 1
                cols.append(col)
            return IntMatrix.from_columns(cols, len(tgt))

        terms.append(AbelianData._build(x, stalks, res))
    diffs = []
    for p in range(dim):
        comps = []
        for q in range(n):
            src, tgt = lay[q].get(p, {}), lay[q].get(p + 1, {})
            rows = [[0] * len(src) for _ in tgt]
            for c, t in tgt.items():
                for j in range(len(c)):
                    face = c[:j] + c[j + 1:]
                    s = src.get(face)
                    if s is not None:
                        rows[t][s] += -1 if j % 2 else 1
            comps.append(IntMatrix._raw(tuple(map(tuple, rows)), len(src)))
        diffs.append(DataMorphism._build(terms[p], terms[p + 1], comps))
    return DataComplex(x, 0, terms, diffs, check=True)


def universal_coefficient_dual(inv: dict) -> dict:
    """Invariants of RHom(C, Z) from those of C: H^j gets rank of H^-j and torsion of H^(1-j)."""
    out = {}
    degs = set(-d for d in inv) | set(1 - d for d in inv)
    for j in degs:
        r = inv.get(-j, (0, ()))[0]
        t = inv.get(1 - j, (0, ()))[1]
        if r or t:
            out[j] = (r, t)
    return out


def dualizing_stalk_oracle(x: Poset, p) -> dict:
    """Expected cohomology invariants of (D_X)_p: the dual of R Gamma(X, Z_{U_p})."""
    inv = rgamma(support_constant(x, x.up_set(p))).invariants()
    return universal_coefficient_dual(inv)


def codualizing_stalk_oracle(x: Poset, p) -> dict:
    """Expected cohomology invariants of (D^X)_p: local cohomology with support C_p."""
    return local_cohomology_complex(constant_data(x), x.down_set(p)).invariants()


def stalk_invariants(k: DataComplex, p) -> dict:
    return k.stalk_complex(p).invariants()


# ---------------------------------------------------------------------------
# Hom complexes of groups and the dual space functor


class GroupHomComplex:
    """Hom^n(A, B) = prod_q Hom(A^q, B^(q+n)) for complexes of groups."""

    def __init__(self, a: GroupComplex, b: GroupComplex):
        self.a, self.b = a, b
        lo, hi = b.lo - a.hi, b.hi - a.lo
        self.spaces = {}
        self.layout = {}
        terms = []
        for n in range(lo, hi + 1):
            lay, gs, off = [], [], 0
            for q in a.degrees():
                if not (b.lo <= q + n <= b.hi):
                    continue
                hs = hom_space(a.term(q), b.term(q + n))
                self.spaces[(q, n)] = hs
                if hs.group.ngens:
                    lay.append((q, off, hs.group.ngens))
                    gs.append(hs.group)
                    off += hs.group.ngens
            self.layout[n] = lay
            terms.append(direct_sum(gs))
        diffs = []
        for n in range(lo, hi):
            tgt = {q: o for q, o, _ in self.layout[n + 1]}
            nt = terms[n + 1 - lo].ngens
            sgn = -1 if n % 2 else 1
            cols = []
            for q, off, size in self.layout[n]:
                for c in range(size):
                    h = self.matrix(q, n, c)
                    col = [0] * nt
                    if q in tgt:
                        v = self.coords_of(q, n + 1, b.diff(q + n) @ h)
                        for k, val in enumerate(v):
                            col[tgt[q] + k] += val
                    if q - 1 in tgt:
                        v = self.coords_of(q - 1, n + 1, h @ a.diff(q - 1))
                        for k, val in enumerate(v):
                            col[tgt[q - 1] + k] -= sgn * val
                    cols.append(col)
            diffs.append(IntMatrix.from_columns(cols, nt) if cols else IntMatrix.zeros(nt, terms[n - lo].ngens))
        self.complex = GroupComplex(lo, terms, diffs, check=False)

    def matrix(self, q: int, n: int, c: int) -> IntMatrix:
        hs = self.spaces[(q, n)]
        v = hs.reps.col(c)
        return vec_to_matrix(v, self.b.term(q + n).ngens, self.a.term(q).ngens)

    def coords_of(self, q: int, n: int, m: IntMatrix) -> tuple:
        hs = self.spaces.get((q, n))
        if hs is None or hs.group.ngens == 0:
            return ()
        return hs.coords(IntMatrix.from_columns([matrix_to_vec(m)], hs.ambient.ngens)).col(0)

    def coords(self, n: int, mats: dict) -> list[int]:
        out = []
        for q, _, size in self.layout[n]:
            out.extend(self.coords_of(q, n, mats[q]))
        return out

    def element(self, n: int, c: int) -> tuple[int, IntMatrix]:
        for q, off, size in self.layout[n]:
            if off <= c < off + size:
                return q, self.matrix(q, n, c - off)
        raise IndexError(c)


def group_rhom(a: GroupComplex, b: GroupComplex) -> GroupComplex:
    """RHom(A, B) for complexes of groups, through a free model of A."""
    t, _ = free_model(a)
    return GroupHomComplex(t, b).complex


def _inverse_iso(m: IntMatrix, src: FgAbGroup, tgt: FgAbGroup) -> IntMatrix:
    """Matrix of the inverse of the isomorphism src -> tgt given by m."""
    a = hstack([m, tgt.relations], tgt.ngens)
    cols = []
    for k in range(tgt.ngens):
        e = IntMatrix.from_columns([[1 if i == k else 0 for i in range(tgt.ngens)]], tgt.ngens)
        x = solve(a, e)
        if x is None:
            raise ValueError("restriction of the coefficient data is not invertible")
        cols.append(x.col(0)[:src.ngens])
    return IntMatrix.from_columns(cols, src.ngens)


def dhom(f, ell) -> DataComplex:
    """DHom(F, L) on the dual space: stalk at p is Hom(F_p, L_p).

    For p <= q in X (so q^ <= p^ on the dual space) the restriction from q^ to p^
    sends h to (r^L_pq)^-1 h r^F_pq.
    """
    k = _as_complex(f)
    ell = _as_complex(ell)
    X = k.base
    for t in ell.terms:
        if not is_locally_constant(t):
            raise ValueError("coefficient data must be locally constant")
    Xh = X.dual()
    n = len(X)
    local = [GroupHomComplex(k.stalk_complex_at(i), ell.stalk_complex_at(i)) for i in range(n)]
    lo, hi = ell.lo - k.hi, ell.hi - k.lo
    inv_cache = {}

    def inv(q, i, j):
        key = (q, i, j)
        if key not in inv_cache:
            t = ell.term(q)
            inv_cache[key] = _inverse_iso(t.res(j, i), t.stalk_at(j), t.stalk_at(i))
        return inv_cache[key]

    terms = []
    for deg in range(lo, hi + 1):
        stalks = [local[i].complex.term(deg) for i in range(n)]

        def res(i, j, deg=deg):
            # i <= j on the dual space, so j <= i on X
            li, lj = local[i], local[j]
            cols = []
            for c in range(li.complex.term(deg).ngens):
                q, h = li.element(deg, c)
                mats = {}
                for q2, _, _ in lj.layout[deg]:
                    if q2 == q:
                        mats[q2] = inv(q + deg, i, j) @ h @ k.term(q).res(j, i)
                    else:
                        mats[q2] = IntMatrix.zeros(ell.term(q2 + deg).stalk_at(j).ngens, k.term(q2).stalk_at(j).ngens)
                cols.append(lj.coords(deg, mats))
            return IntMatrix.from_columns(cols, lj.complex.term(deg).ngens)

        terms.append(AbelianData._build(Xh, stalks, res))
    diffs = []
    for idx, deg in enumerate(range(lo, hi)):
        diffs.append(DataMorphism._build(terms[idx], terms[idx + 1], [local[i].complex.diff(deg) for i in range(n)]))
    return DataComplex(Xh, lo, terms, diffs, check=False)


def derived_dhom(f, ell) -> DataComplex:
    """L DHom(F, L) through a stalkwise free replacement of F."""
    return dhom(flat_replacement(f), ell)


def hat(f) -> DataComplex:
    """F^ = L DHom(F, Z) on the dual space."""
    k = _as_complex(f)
    return derived_dhom(f, constant_data(k.base))


def as_dual_coefficients(ell: AbelianData) -> AbelianData:
    """A locally constant L on X viewed on the dual space (restrictions inverted)."""
    return dhom(constant_data(ell.base), ell).terms[0]


# ---------------------------------------------------------------------------
# reports


@dataclass
class DualityReport:
    name: str
    holds: bool
    lhs: dict = field(default_factory=dict)
    rhs: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"check": self.name, "holds": self.holds, "lhs": _jsonable(self.lhs),
                "rhs": _jsonable(self.rhs), "details": _jsonable(self.details)}


def _jsonable(d):
    if isinstance(d, dict):
        return {str(k): _jsonable(v) for k, v in d.items()}
    if isinstance(d, tuple):
        return [_jsonable(v) for v in d]
    return d


def constant_complex(x: Poset, g: GroupComplex) -> DataComplex:
    """The constant data complex with value the group complex g."""
    terms = [constant_data(x, t) for t in g.terms]
    diffs = [DataMorphism._build(terms[k], terms[k + 1], [d] * len(x)) for k, d in enumerate(g.diffs)]
    return DataComplex(x, g.lo, terms, diffs, check=False)


def verify_topological_duality(x: Poset, f=None, ell: AbelianData | None = None) -> DualityReport:
    """R Gamma(X^, L DHom(F, L)) against R Gamma(X, R Hom-sheaf(F, L)), plus H(X^, Z) = H(X, Z)."""
    if ell is None:
        ell = constant_data(x)
    base_l = rgamma(constant_data(x.dual())).invariants()
    base_r = rgamma(constant_data(x)).invariants()
    coef_l = rgamma(as_dual_coefficients(ell)).invariants()
    coef_r = rgamma(ell).invariants()
    details = {"H(X^,Z)": base_l, "H(X,Z)": base_r, "H(X^,L)": coef_l, "H(X,L)": coef_r}
    holds = base_l == base_r and coef_l == coef_r
    lhs = rhs = {}
    if f is not None:
        lhs = rgamma(derived_dhom(f, ell)).invariants()
        rhs = rgamma(rsheaf_hom(f, ell)).invariants()
        holds = holds and lhs == rhs
    return DualityReport("topological duality", holds, lhs, rhs, details)


def verify_homology_cohomology_duality(x: Poset, f=None, g: GroupComplex | None = None,
                                       closed=None) -> DualityReport:
    """RHom(L(X, F), G) against R Gamma(X, R Hom-sheaf(F, G)).

    With closed=Y also compares RHom(L(X, Z_Y), G) with R Gamma_Y(X, G).
    """
    if f is None:
        f = constant_data(x)
    if g is None:
        g = GroupComplex(0, [FgAbGroup.free(1)])
    lhs = group_rhom(lgamma(f), g).invariants()
    rhs = rgamma(rsheaf_hom(f, constant_complex(x, g))).invariants()
    holds = lhs == rhs
    details = {}
    if closed is not None:
        sl = group_rhom(lgamma(support_constant(x, closed)), g).invariants()
        sr = local_cohomology_complex(constant_complex(x, g), closed).invariants()
        details = {"RHom(L(X,Z_Y),G)": sl, "R Gamma_Y(X,G)": sr}
        holds = holds and sl == sr
    return DualityReport("homology/cohomology duality", holds, lhs, rhs, details)


def verify_support_duality(x: Poset, closed) -> DualityReport:
    """RHom(L(X, Z_Y), Z) against R Gamma_Y(X, Z) for a closed Y."""
    lhs = dual_group_complex(lgamma(support_constant(x, closed))).invariants()
    rhs = local_cohomology_complex(constant_data(x), closed).invariants()
    return DualityReport("support duality", lhs == rhs, lhs, rhs)


def verify_dualizing_pairing(x: Poset, f=None) -> DualityReport:
    """RHom(F, D_X) against R Gamma(X, F)^v and RHom(D^X, F) against L(X, F)."""
    if f is None:
        f = constant_data(x)
    dx, ux = dualizing_complex(x), codualizing_complex(x)
    a = hom_complex(projective_replacement(f), dx).invariants()
    b = dual_group_complex(rgamma(f)).invariants()
    c = hom_complex(ux, _as_complex(f)).invariants()
    d = lgamma(f).invariants()
    details = {"RHom(D^X,F)": c, "L(X,F)": d}
    return DualityReport("dualizing pairing", a == b and c == d, a, b, details)


@dataclass
class GorensteinReport:
    homological: bool
    cohomological: bool
    degree: int | None
    orientation: AbelianData | None = None
    coorientation: AbelianData | None = None
    dual_matches: bool | None = None

    @property
    def verdict(self) -> str:
        if self.homological:
            return "homologically Gorenstein"
        if self.cohomological:
            return "cohomologically Gorenstein"
        return "neither"

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "homological": self.homological, "cohomological": self.cohomological,
                "degree": self.degree, "dual_matches": self.dual_matches}


def _invertible_concentration(k: DataComplex) -> tuple[int | None, AbelianData | None]:
    """(d, H^d) when the cohomology of k is one invertible rank-one data in degree d."""
    inv = k.cohomology_invariants()
    if len(inv) != 1:
        return None, None
    (d, row), = inv.items()
    if len(row) != len(k.base) or any(v != (1, ()) for v in row.values()):
        return None, None
    h = k.cohomology_data(d)
    if not is_locally_constant(h):
        return None, None
    return d, h


def gorenstein_check(x: Poset) -> GorensteinReport:
    """Decide whether D^X is an invertible data shifted by -d (and D_X likewise by +d)."""
    ux, dx = codualizing_complex(x), dualizing_complex(x)
    d, t_up = _invertible_concentration(ux)
    e, t_low = _invertible_concentration(dx)
    rep = GorensteinReport(d is not None and d >= 0, e is not None and e <= 0,
                           d if d is not None else (-e if e is not None else None), t_up, t_low)
    if rep.homological:
        # the dual of T[-d] is Hom(T, Z)[d]; a rank-one T has restrictions +-1, so Hom(T, Z) = T
        rep.dual_matches = e == -d and _isomorphic_line_data(t_low, t_up)
    return rep


def _isomorphic_line_data(a: AbelianData, b: AbelianData) -> bool:
    """For locally constant data with stalks Z: Hom(a, b) is Z on a component iff a = b there."""
    from .sheafdata import hom_group
    return hom_group(a, b).invariants == (len(a.base.components()), ())


def dhom_adjunction_groups(t: AbelianData, f: AbelianData, ell: AbelianData) -> tuple[FgAbGroup, FgAbGroup]:
    """Hom(T, DHom(F, L)) and Hom(F, DHom(T, L)) for T on X^, F on X, L locally constant on X."""
    from .sheafdata import hom_group
    lhs = hom_group(t, dhom(f, ell).terms[0])
    rhs = hom_group(f, dhom(t, as_dual_coefficients(ell)).terms[0])
    return lhs, rhs
