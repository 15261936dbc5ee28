"""Bounded complexes of abelian data and their standard resolutions.

Cochain convention throughout: differentials raise the degree.  A chain
complex C_n is stored in degree -n.

Sign conventions (fixed once, checked by d o d = 0 on construction):
  * Godement cochain: (dx)_s = sum_i (-1)^i x_{face_i s}, applying the
    restriction when the top vertex is dropped.
  * Godement chain: boundary sum_i (-1)^i face_i, applying the restriction
    when the bottom vertex is dropped.
  * Total complexes: D = d_h + (-1)^h d_v on bidegree (h, v).
  * Hom complexes: D h = d o h - (-1)^deg(h) h o d.
  * cone(f)^n = A^(n+1) + B^n with d = [[-d_A, 0], [f, d_B]].
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .poset import Poset, _bits
from .sheafdata import (
    AbelianData,
    DataMorphism,
    HomSpace,
    constant_data,
    identity_morphism,
    zero_data,
)
from .zlin import (
    ChainMap,
    FgAbGroup,
    GroupComplex,
    IntMatrix,
    direct_sum,
    hstack,
    kron,
    tensor_groups,
    vstack,
)


class DataComplex:
    """Bounded cochain complex of abelian data on one base."""

    def __init__(self, base: Poset, lo: int, terms: Sequence[AbelianData],
                 diffs: Sequence[DataMorphism] = (), check: bool = True):
        self.base = base
        self.lo = lo
        self.terms = tuple(terms)
        self.diffs = tuple(diffs)
        if self.terms and len(self.diffs) != len(self.terms) - 1:
            raise ValueError("need one differential between consecutive terms")
        self._hcache = {}
        if check:
            self.validate()

    @classmethod
    def from_data(cls, f: AbelianData, degree: int = 0) -> DataComplex:
        return cls(f.base, degree, [f], [], check=False)

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, i: int) -> AbelianData:
        if self.lo <= i <= self.hi:
            return self.terms[i - self.lo]
        return zero_data(self.base)

    def diff(self, i: int) -> DataMorphism:
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        a, b = self.term(i), self.term(i + 1)
        return DataMorphism._build(a, b, [IntMatrix.zeros(y.ngens, x.ngens)
                                          for x, y in zip(a.stalks, b.stalks)])

    def validate(self) -> None:
        for k, d in enumerate(self.diffs):
            if d.source is not self.terms[k] or d.target is not self.terms[k + 1]:
                if d.source.base != self.base:
                    raise ValueError("differential on another space")
            d.validate()
        for k in range(len(self.diffs) - 1):
            if not self.diffs[k + 1].after(self.diffs[k]).is_zero():
                raise ValueError(f"d o d != 0 at degree {self.lo + k}")

    def stalk_complex(self, p) -> GroupComplex:
        i = self.base.ix(p)
        return self.stalk_complex_at(i)

    def stalk_complex_at(self, i: int) -> GroupComplex:
        return GroupComplex(self.lo, [t.stalk_at(i) for t in self.terms],
                            [d.comp(i) for d in self.diffs], check=False)

    def cohomology_data(self, n: int) -> AbelianData:
        """H^n as abelian data (stalkwise cohomology with induced restrictions)."""
        hit = self._hcache.get(n)
        if hit is not None:
            return hit
        X = self.base
        sqs = [self.stalk_complex_at(i).homology_data(n) for i in range(len(X))]
        t = self.term(n)
        h = AbelianData._build(X, [s.group for s in sqs],
                               lambda i, j: sqs[j].coords(t.res(i, j) @ sqs[i].reps))
        self._hcache[n] = h
        return h

    def cohomology_invariants(self) -> dict:
        """{degree: {point: invariants}} for the nonzero cohomology stalks."""
        out = {}
        for i, x in enumerate(self.base.elements):
            for n, inv in self.stalk_complex_at(i).invariants().items():
                out.setdefault(n, {})[x] = inv
        return {n: out[n] for n in sorted(out)}

    def is_exact(self) -> bool:
        return not self.cohomology_invariants()

    def shift(self, k: int) -> DataComplex:
        return shift(self, k)

    def __repr__(self):
        return f"DataComplex(degrees {self.lo}..{self.hi} on {len(self.base)} points)"


class DataChainMap:
    """Degree-preserving map of data complexes."""

    def __init__(self, source: DataComplex, target: DataComplex, components: Mapping[int, DataMorphism],
                 check: bool = True):
        self.source, self.target = source, target
        self.components = dict(components)
        if check:
            self.validate()

    def component(self, n: int) -> DataMorphism:
        c = self.components.get(n)
        if c is not None:
            return c
        a, b = self.source.term(n), self.target.term(n)
        return DataMorphism._build(a, b, [IntMatrix.zeros(y.ngens, x.ngens) for x, y in zip(a.stalks, b.stalks)])

    def validate(self) -> None:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi + 1):
            self.component(n).validate()
            lhs = self.target.diff(n).after(self.component(n))
            rhs = self.component(n + 1).after(self.source.diff(n))
            if not (lhs + (-rhs)).is_zero():
                raise ValueError(f"chain map does not commute with d at degree {n}")

    def stalk_map(self, i: int) -> ChainMap:
        return ChainMap(self.source.stalk_complex_at(i), self.target.stalk_complex_at(i),
                        {n: c.comp(i) for n, c in self.components.items()}, check=False)

    def is_quasi_isomorphism(self) -> bool:
        return all(cone(self).stalk_complex_at(i).is_exact() for i in range(len(self.source.base)))


# ---------------------------------------------------------------------------
# triangulated plumbing


def _zero_maps(a: AbelianData, b: AbelianData) -> list[IntMatrix]:
    return [IntMatrix.zeros(y.ngens, x.ngens) for x, y in zip(a.stalks, b.stalks)]


def shift(c: DataComplex, k: int) -> DataComplex:
    """c[k]: degree n holds c^(n+k); the differential is negated k times."""
    sign = -1 if k % 2 else 1
    return DataComplex(c.base, c.lo - k, c.terms, [d.scale(sign) for d in c.diffs], check=False)


def sum_data(datas: Sequence[AbelianData], base: Poset) -> AbelianData:
    from .zlin import block_diag
    return AbelianData._build(base, [direct_sum([d.stalk_at(i) for d in datas]) for i in range(len(base))],
                              lambda i, j: block_diag([d.res(i, j) for d in datas]))


def cone(f: DataChainMap) -> DataComplex:
    """cone(f)^n = A^(n+1) + B^n with d = [[-d_A, 0], [f, d_B]]."""
    a, b = f.source, f.target
    X = a.base
    lo = min(a.lo - 1, b.lo)
    hi = max(a.hi - 1, b.hi)
    terms = [sum_data([a.term(n + 1), b.term(n)], X) for n in range(lo, hi + 1)]
    diffs = []
    for k, n in enumerate(range(lo, hi)):
        da, db, fn = a.diff(n + 1), b.diff(n), f.component(n + 1)
        comps = []
        for i in range(len(X)):
            za = IntMatrix.zeros(a.term(n + 2).stalk_at(i).ngens, b.term(n).stalk_at(i).ngens)
            top = hstack([-da.comp(i), za])
            bot = hstack([fn.comp(i), db.comp(i)])
            comps.append(vstack([top, bot]))
        diffs.append(DataMorphism._build(terms[k], terms[k + 1], comps))
    return DataComplex(X, lo, terms, diffs, check=False)


def total(terms: Mapping[tuple[int, int], AbelianData],
          dh: Mapping[tuple[int, int], DataMorphism],
          dv: Mapping[tuple[int, int], DataMorphism], base: Poset) -> DataComplex:
    """Total complex of a bounded double complex, D = d_h + (-1)^h d_v.

    terms[(h, v)] are data; dh[(h, v)] goes to (h + 1, v), dv[(h, v)] to (h, v + 1).
    Missing differentials are zero.
    """
    keys = sorted(k for k, t in terms.items())
    if not keys:
        return DataComplex(base, 0, [], [], check=False)
    degs = sorted({h + v for h, v in keys})
    lo, hi = degs[0], degs[-1]
    layout = {n: [k for k in keys if k[0] + k[1] == n] for n in range(lo, hi + 1)}
    tot = {n: sum_data([terms[k] for k in layout[n]], base) for n in layout}
    diffs = []
    for n in range(lo, hi):
        comps = []
        for i in range(len(base)):
            rows = []
            for tk in layout[n + 1]:
                row = []
                for sk in layout[n]:
                    nt = terms[tk].stalk_at(i).ngens
                    ns = terms[sk].stalk_at(i).ngens
                    if tk == (sk[0] + 1, sk[1]) and sk in dh:
                        row.append(dh[sk].comp(i))
                    elif tk == (sk[0], sk[1] + 1) and sk in dv:
                        m = dv[sk].comp(i)
                        row.append(-m if sk[0] % 2 else m)
                    else:
                        row.append(IntMatrix.zeros(nt, ns))
                rows.append(hstack(row, nt) if row else IntMatrix.zeros(nt, 0))
            ncols = tot[n].stalk_at(i).ngens
            comps.append(vstack(rows, ncols) if rows else IntMatrix.zeros(0, ncols))
        diffs.append(DataMorphism._build(tot[n], tot[n + 1], comps))
    return DataComplex(base, lo, [tot[n] for n in range(lo, hi + 1)], diffs, check=False)


# ---------------------------------------------------------------------------
# Godement resolutions as data complexes


def _chains_by_len(x: Poset, mask: int) -> dict[int, list[tuple[int, ...]]]:
    out = {}
    for c in x.chain_indices(mask):
        out.setdefault(len(c) - 1, []).append(c)
    return out


def godement_cochain(f: AbelianData) -> tuple[DataComplex, DataMorphism]:
    """C^n F with stalk at p the product over chains in U_p of F_top; plus F -> C^0 F."""
    X = f.base
    n_pts = len(X)
    local = [_chains_by_len(X, X.up_mask(p)) for p in range(n_pts)]
    dim = max((max(l) for l in local if l), default=-1)
    terms = []
    for n in range(dim + 1):
        stalks = []
        layouts = []
        for p in range(n_pts):
            ch = local[p].get(n, [])
            stalks.append(direct_sum([f.stalk_at(c[-1]) for c in ch]))
            layouts.append(ch)

        def res(p, q, layouts=layouts, stalks=stalks):
            # projection onto the chains inside U_q
            pos, off = {}, 0
            for c in layouts[p]:
                pos[c] = off
                off += f.stalk_at(c[-1]).ngens
            rows = []
            for c in layouts[q]:
                k = f.stalk_at(c[-1]).ngens
                for a in range(k):
                    row = [0] * off
                    row[pos[c] + a] = 1
                    rows.append(tuple(row))
            return IntMatrix._raw(tuple(rows), off)

        terms.append(AbelianData._build(X, stalks, res))
    diffs = []
    for n in range(dim):
        comps = []
        for p in range(n_pts):
            comps.append(_cochain_boundary(f, local[p].get(n, []), local[p].get(n + 1, [])))
        diffs.append(DataMorphism._build(terms[n], terms[n + 1], comps))
    cx = DataComplex(X, 0, terms, diffs, check=False)
    aug = []
    for p in range(n_pts):
        blocks = [f.res(p, c[0]) for c in local[p].get(0, [])]
        aug.append(vstack(blocks, f.stalk_at(p).ngens) if blocks else IntMatrix.zeros(0, f.stalk_at(p).ngens))
    f0 = terms[0] if terms else zero_data(X)
    return cx, DataMorphism._build(f, f0, aug)


def _cochain_boundary(f: AbelianData, src: list, tgt: list) -> IntMatrix:
    """Matrix of d: prod_{src chains} F_top -> prod_{tgt chains} F_top."""
    pos, off = {}, 0
    for c in src:
        pos[c] = off
        off += f.stalk_at(c[-1]).ngens
    rows = []
    for c in tgt:
        k = f.stalk_at(c[-1]).ngens
        block = [[0] * off for _ in range(k)]
        top = len(c) - 1
        for i in range(len(c)):
            face = c[:i] + c[i + 1:]
            if face not in pos:
                continue
            sign = -1 if i % 2 else 1
            if i == top:
                m = f.res(face[-1], c[-1])
            else:
                m = None
            o = pos[face]
            if m is None:
                for a in range(k):
                    block[a][o + a] += sign
            else:
                for a in range(k):
                    for b, v in enumerate(m.rows[a]):
                        if v:
                            block[a][o + b] += sign * v
        rows.extend(tuple(r) for r in block)
    return IntMatrix._raw(tuple(rows), off)


def godement_chain(f: AbelianData) -> tuple[DataComplex, DataMorphism]:
    """C_n F (stored in degree -n) with stalk at p the sum over chains in C_p of F_bottom; plus C_0 F -> F."""
    X = f.base
    n_pts = len(X)
    local = [_chains_by_len(X, X.down_mask(p)) for p in range(n_pts)]
    dim = max((max(l) for l in local if l), default=-1)
    terms = {}
    for n in range(dim + 1):
        stalks = []
        layouts = []
        for p in range(n_pts):
            ch = local[p].get(n, [])
            stalks.append(direct_sum([f.stalk_at(c[0]) for c in ch]))
            layouts.append(ch)

        def res(p, q, layouts=layouts):
            # inclusion of the chains inside C_p into those inside C_q
            pos, off = {}, 0
            for c in layouts[q]:
                pos[c] = off
                off += f.stalk_at(c[0]).ngens
            cols = []
            for c in layouts[p]:
                for a in range(f.stalk_at(c[0]).ngens):
                    col = [0] * off
                    col[pos[c] + a] = 1
                    cols.append(col)
            return IntMatrix.from_columns(cols, off)

        terms[n] = AbelianData._build(X, stalks, res)
    diffs = []
    for n in range(dim, 0, -1):
        comps = [_chain_boundary(f, local[p].get(n, []), local[p].get(n - 1, [])) for p in range(n_pts)]
        diffs.append(DataMorphism._build(terms[n], terms[n - 1], comps))
    cx = DataComplex(X, -dim, [terms[n] for n in range(dim, -1, -1)], diffs, check=False)
    co = []
    for p in range(n_pts):
        blocks = [f.res(c[0], p) for c in local[p].get(0, [])]
        co.append(hstack(blocks, f.stalk_at(p).ngens) if blocks else IntMatrix.zeros(f.stalk_at(p).ngens, 0))
    c0 = terms[0] if terms else zero_data(X)
    return cx, DataMorphism._build(c0, f, co)


def _chain_boundary(f: AbelianData, src: list, tgt: list) -> IntMatrix:
    """Matrix of the boundary: sum_{src chains} F_bottom -> sum_{tgt chains} F_bottom."""
    pos, off = {}, 0
    for c in tgt:
        pos[c] = off
        off += f.stalk_at(c[0]).ngens
    cols = []
    for c in src:
        k = f.stalk_at(c[0]).ngens
        block = [[0] * off for _ in range(k)]
        for i in range(len(c)):
            face = c[:i] + c[i + 1:]
            if face not in pos:
                continue
            sign = -1 if i % 2 else 1
            o = pos[face]
            if i == 0:
                m = f.res(c[0], c[1])
                for b in range(k):
                    for a in range(m.nrows):
                        v = m.rows[a][b]
                        if v:
                            block[b][o + a] += sign * v
            else:
                for b in range(k):
                    block[b][o + b] += sign
        cols.extend(block)
    return IntMatrix.from_columns(cols, off)


# ---------------------------------------------------------------------------
# total complexes of sections and cosections


class TotalComplex:
    """Gamma(S, C^. K) or L(S, C_. K) for a data complex K, with its block layout.

    blocks[n] maps (chain, q) to (offset, size) inside the degree-n term.
    """

    def __init__(self, complex_: GroupComplex, blocks: dict, kind: str, mask: int):
        self.complex = complex_
        self.blocks = blocks
        self.kind = kind
        self.mask = mask

    def block_map(self, other: TotalComplex, fn) -> ChainMap:
        """Chain map other <- self built blockwise: fn(key) gives the matrix into the same key of other, or None."""
        maps = {}
        for n in set(self.blocks) | set(other.blocks):
            sb = self.blocks.get(n, {})
            tb = other.blocks.get(n, {})
            ns = self.complex.term(n).ngens
            nt = other.complex.term(n).ngens
            rows = [[0] * ns for _ in range(nt)]
            for key, (so, ss) in sb.items():
                hit = tb.get(key)
                if hit is None:
                    continue
                to, ts = hit
                m = fn(key)
                if m is None:
                    continue
                for a in range(ts):
                    r = m.rows[a]
                    for b in range(ss):
                        if r[b]:
                            rows[to + a][so + b] = r[b]
            maps[n] = IntMatrix._raw(tuple(map(tuple, rows)), ns)
        return ChainMap(self.complex, other.complex, maps, check=False)


def _as_complex(k) -> DataComplex:
    return DataComplex.from_data(k) if isinstance(k, AbelianData) else k


def section_complex(k, mask: int | None = None) -> TotalComplex:
    """Total complex of Gamma(S, C^p K^q) for the subspace S given by mask."""
    k = _as_complex(k)
    X = k.base
    if mask is None:
        mask = X.full_mask
    bylen = _chains_by_len(X, mask)
    if not bylen or not k.terms:
        return TotalComplex(GroupComplex(0, []), {}, "sections", mask)
    dim = max(bylen)
    lo, hi = k.lo, k.hi + dim
    blocks, terms = {}, []
    for n in range(lo, hi + 1):
        lay, gs, off = {}, [], 0
        for p in range(dim + 1):
            q = n - p
            if not (k.lo <= q <= k.hi):
                continue
            t = k.term(q)
            for c in bylen.get(p, []):
                g = t.stalk_at(c[-1])
                if g.ngens == 0:
                    continue
                lay[(c, q)] = (off, g.ngens)
                gs.append(g)
                off += g.ngens
        blocks[n] = lay
        terms.append(direct_sum(gs))
    diffs = []
    for n in range(lo, hi):
        src, tgt = blocks[n], blocks[n + 1]
        ns, nt = terms[n - lo].ngens, terms[n + 1 - lo].ngens
        rows = [[0] * ns for _ in range(nt)]
        for (c, q), (to, ts) in tgt.items():
            p = len(c) - 1
            t = k.term(q)
            # Godement part: faces of c in the same q
            for i in range(len(c)):
                face = c[:i] + c[i + 1:]
                hit = src.get((face, q))
                if hit is None:
                    continue
                so, ss = hit
                sign = -1 if i % 2 else 1
                if i == p:
                    m = t.res(face[-1], c[-1])
                    for a in range(ts):
                        r = m.rows[a]
                        for b in range(ss):
                            if r[b]:
                                rows[to + a][so + b] += sign * r[b]
                else:
                    for a in range(ts):
                        rows[to + a][so + a] += sign
            # internal differential from (c, q - 1)
            hit = src.get((c, q - 1))
            if hit is not None:
                so, ss = hit
                m = k.diff(q - 1).comp(c[-1])
                sign = -1 if p % 2 else 1
                for a in range(ts):
                    r = m.rows[a]
                    for b in range(ss):
                        if r[b]:
                            rows[to + a][so + b] += sign * r[b]
        diffs.append(IntMatrix._raw(tuple(map(tuple, rows)), ns))
    return TotalComplex(GroupComplex(lo, terms, diffs, check=False), blocks, "sections", mask)


def cosection_complex(k, mask: int | None = None) -> TotalComplex:
    """Total complex of L(S, C_p K^q), chain degree p sitting in degree q - p."""
    k = _as_complex(k)
    X = k.base
    if mask is None:
        mask = X.full_mask
    bylen = _chains_by_len(X, mask)
    if not bylen or not k.terms:
        return TotalComplex(GroupComplex(0, []), {}, "cosections", mask)
    dim = max(bylen)
    lo, hi = k.lo - dim, k.hi
    blocks, terms = {}, []
    for n in range(lo, hi + 1):
        lay, gs, off = {}, [], 0
        for p in range(dim + 1):
            q = n + p
            if not (k.lo <= q <= k.hi):
                continue
            t = k.term(q)
            for c in bylen.get(p, []):
                g = t.stalk_at(c[0])
                if g.ngens == 0:
                    continue
                lay[(c, q)] = (off, g.ngens)
                gs.append(g)
                off += g.ngens
        blocks[n] = lay
        terms.append(direct_sum(gs))
    diffs = []
    for n in range(lo, hi):
        src, tgt = blocks[n], blocks[n + 1]
        ns, nt = terms[n - lo].ngens, terms[n + 1 - lo].ngens
        rows = [[0] * ns for _ in range(nt)]
        for (c, q), (so, ss) in src.items():
            p = len(c) - 1
            t = k.term(q)
            if p >= 1:
                for i in range(len(c)):
                    face = c[:i] + c[i + 1:]
                    hit = tgt.get((face, q))
                    if hit is None:
                        continue
                    to, ts = hit
                    sign = -1 if i % 2 else 1
                    if i == 0:
                        m = t.res(c[0], c[1])
                        for a in range(ts):
                            r = m.rows[a]
                            for b in range(ss):
                                if r[b]:
                                    rows[to + a][so + b] += sign * r[b]
                    else:
                        for b in range(ss):
                            rows[to + b][so + b] += sign
            hit = tgt.get((c, q + 1))
            if hit is not None:
                to, ts = hit
                m = k.diff(q).comp(c[0])
                sign = -1 if p % 2 else 1
                for a in range(ts):
                    r = m.rows[a]
                    for b in range(ss):
                        if r[b]:
                            rows[to + a][so + b] += sign * r[b]
        diffs.append(IntMatrix._raw(tuple(map(tuple, rows)), ns))
    return TotalComplex(GroupComplex(lo, terms, diffs, check=False), blocks, "cosections", mask)


def restriction_map(big: TotalComplex, small: TotalComplex) -> ChainMap:
    """Gamma(S) -> Gamma(S') for S' inside S: keep the chains of S'."""
    return big.block_map(small, _identity_blocks(big))


def inclusion_map(small: TotalComplex, big: TotalComplex) -> ChainMap:
    """L(S') -> L(S) for S' inside S: chains of S' sit inside those of S."""
    return small.block_map(big, _identity_blocks(small))


def _identity_blocks(tc: TotalComplex):
    sizes = {key: s for lay in tc.blocks.values() for key, (_, s) in lay.items()}
    eye = {}

    def pick(key):
        s = sizes[key]
        m = eye.get(s)
        if m is None:
            m = eye[s] = IntMatrix.identity(s)
        return m

    return pick


def morphism_map(src: TotalComplex, tgt: TotalComplex, phi: DataChainMap) -> ChainMap:
    """Map of total complexes induced by a map of data complexes (same subspace)."""
    top = src.kind == "sections"

    def pick(key):
        c, q = key
        return phi.component(q).comp(c[-1] if top else c[0])

    return src.block_map(tgt, pick)


# ---------------------------------------------------------------------------
# projective and flat resolutions


def _generators_cover(f: AbelianData) -> tuple[AbelianData, DataMorphism]:
    """P0 = sum_p (Z^{g_p})_{U_p} with the evident surjection onto F."""
    X = f.base
    n = len(X)
    gens = [(p, a) for p in range(n) for a in range(f.stalk_at(p).ngens)]
    stalks = []
    idx = []
    for x in range(n):
        here = [k for k, (p, a) in enumerate(gens) if X.up_mask(p) >> x & 1]
        idx.append(here)
        stalks.append(FgAbGroup.free(len(here)))

    def res(x, y):
        pos = {k: r for r, k in enumerate(idx[y])}
        cols = []
        for k in idx[x]:
            col = [0] * len(idx[y])
            col[pos[k]] = 1
            cols.append(col)
        return IntMatrix.from_columns(cols, len(idx[y]))

    p0 = AbelianData._build(X, stalks, res)
    comps = []
    for x in range(n):
        cols = []
        for k in idx[x]:
            p, a = gens[k]
            cols.append(f.res(p, x).col(a))
        comps.append(IntMatrix.from_columns(cols, f.stalk_at(x).ngens))
    return p0, DataMorphism._build(p0, f, comps)


def projective_resolution(f: AbelianData) -> tuple[DataComplex, DataMorphism]:
    """Bounded projective resolution P -> F with P^0 = sum (Z^g)_{U_p}, then C_. of the kernel."""
    f = f.simplify()[0] if any(g.orders is None for g in f.stalks) else f
    p0, eps = _generators_cover(f)
    k, inc = eps.kernel()
    ck, co = godement_chain(k)
    X = f.base
    # splice: ... -> C_1 K -> C_0 K -> P0, with C_n K in degree -n-1
    terms = list(ck.terms) + [p0]
    diffs = list(ck.diffs) + [inc.after(co)]
    cx = DataComplex(X, ck.lo - 1, terms, diffs, check=False)
    return cx, eps


def flat_resolution(f: AbelianData) -> tuple[DataComplex, DataMorphism]:
    """0 -> K -> P0 -> F with stalkwise free terms; free-stalk data resolves itself."""
    if all(g.is_free() and g.orders is not None and all(d == 0 for d in g.orders) for g in f.stalks):
        return DataComplex.from_data(f), identity_morphism(f)
    p0, eps = _generators_cover(f.simplify()[0] if any(g.orders is None for g in f.stalks) else f)
    k, inc = eps.kernel()
    cx = DataComplex(f.base, -1, [k, p0], [inc], check=False)
    if eps.target is not f:
        # generators were taken on a simplified copy; compose back
        _, _, frm = f.simplify()
        eps = frm.after(eps)
    return cx, eps


# ---------------------------------------------------------------------------
# Hom and tensor complexes


class HomComplexData:
    """Hom^n(P, G) = prod_q Hom(P^q, G^(q+n)) with its HomSpace blocks."""

    def __init__(self, p: DataComplex, g: DataComplex):
        self.p, self.g = p, g
        lo = g.lo - p.hi
        hi = g.hi - p.lo
        self.spaces = {}
        terms = []
        layout = {}
        for n in range(lo, hi + 1):
            lay, gs, off = [], [], 0
            for q in p.degrees():
                if not (g.lo <= q + n <= g.hi):
                    continue
                hs = HomSpace(p.term(q), g.term(q + n))
                self.spaces[(q, n)] = hs
                if hs.group.ngens:
                    lay.append((q, off, hs.group.ngens))
                    gs.append(hs.group)
                    off += hs.group.ngens
            layout[n] = lay
            terms.append(direct_sum(gs))
        self.layout = layout
        diffs = []
        for n in range(lo, hi):
            src = layout[n]
            tgt = {q: (o, s) for q, o, s in layout[n + 1]}
            ns, nt = terms[n - lo].ngens, terms[n + 1 - lo].ngens
            cols = []
            sgn = -1 if n % 2 else 1
            for q, off, size in src:
                hs = self.spaces[(q, n)]
                for c in range(size):
                    fam = hs.family(c)
                    col = [0] * nt
                    # d_G o h lands in Hom(P^q, G^(q+n+1))
                    if q in tgt and (q, n + 1) in self.spaces:
                        dg = g.diff(q + n)
                        comp = [dg.comp(i) @ fam[i] for i in range(len(fam))]
                        v = self.spaces[(q, n + 1)].coords(comp)
                        o, _ = tgt[q]
                        for a, x in enumerate(v.col(0)):
                            col[o + a] += x
                    # -(-1)^n h o d_P lands in Hom(P^(q-1), G^(q+n))
                    if (q - 1) in tgt and (q - 1, n + 1) in self.spaces:
                        dp = p.diff(q - 1)
                        comp = [fam[i] @ dp.comp(i) for i in range(len(fam))]
                        v = self.spaces[(q - 1, n + 1)].coords(comp)
                        o, _ = tgt[q - 1]
                        for a, x in enumerate(v.col(0)):
                            col[o + a] -= sgn * x
                    cols.append(col)
            diffs.append(IntMatrix.from_columns(cols, nt) if cols else IntMatrix.zeros(nt, ns))
        self.complex = GroupComplex(lo, terms, diffs, check=False)

    def coords(self, n: int, families: Mapping[int, Sequence[IntMatrix]]) -> IntMatrix:
        """Coordinates in degree n of the element given by q -> family."""
        parts = []
        for q, off, size in self.layout[n]:
            parts.append(self.spaces[(q, n)].coords(families[q]))
        return vstack(parts, 1) if parts else IntMatrix.zeros(0, 1)

    def element(self, n: int, c: int) -> dict:
        """Generator c of degree n as {q: family}."""
        for q, off, size in self.layout[n]:
            if off <= c < off + size:
                return {q: self.spaces[(q, n)].family(c - off)}
        raise IndexError(c)


def hom_complex(p, g) -> GroupComplex:
    """Hom^.(P, G) as a complex of groups."""
    return HomComplexData(_as_complex(p), _as_complex(g)).complex


def sheaf_hom_complex(p, g) -> DataComplex:
    """Data complex with stalk at x the Hom complex of the restrictions to U_x."""
    p, g = _as_complex(p), _as_complex(g)
    X = p.base
    n_pts = len(X)
    subs = []
    local = []
    for x in range(n_pts):
        m = X.up_mask(x)
        pr = DataComplex(X.subspace(m), p.lo, [t.restrict(m) for t in p.terms],
                         [_restrict_morphism(d, m) for d in p.diffs], check=False)
        gr = DataComplex(X.subspace(m), g.lo, [t.restrict(m) for t in g.terms],
                         [_restrict_morphism(d, m) for d in g.diffs], check=False)
        subs.append(m)
        local.append(HomComplexData(pr, gr))
    lo = g.lo - p.hi
    hi = g.hi - p.lo
    terms = []
    for n in range(lo, hi + 1):
        stalks = [local[x].complex.term(n) for x in range(n_pts)]

        def res(x, y, n=n):
            # restrict families from U_x to U_y
            lx, ly = local[x], local[y]
            keep = [k for k, e in enumerate(_bits(subs[x])) if subs[y] >> e & 1]
            cols = []
            for c in range(lx.complex.term(n).ngens):
                el = lx.element(n, c)
                fams = {}
                for q, _, _ in ly.layout[n]:
                    fam = el.get(q)
                    if fam is None:
                        hs = ly.spaces[(q, n)]
                        fams[q] = [IntMatrix.zeros(hs.g.stalk_at(i).ngens, hs.f.stalk_at(i).ngens)
                                   for i in range(len(hs.f.base))]
                    else:
                        fams[q] = [fam[k] for k in keep]
                cols.append(ly.coords(n, fams).col(0))
            return IntMatrix.from_columns(cols, ly.complex.term(n).ngens)

        terms.append(AbelianData._build(X, stalks, res))
    diffs = []
    for k, n in enumerate(range(lo, hi)):
        diffs.append(DataMorphism._build(terms[k], terms[k + 1],
                                         [local[x].complex.diff(n) for x in range(n_pts)]))
    return DataComplex(X, lo, terms, diffs, check=False)


def _restrict_morphism(d: DataMorphism, m: int) -> DataMorphism:
    src, tgt = d.source.restrict(m), d.target.restrict(m)
    return DataMorphism._build(src, tgt, [d.comp(i) for i in _bits(m)])


def tensor_complex(a, b) -> DataComplex:
    """Stalkwise tensor product of two data complexes (Koszul signs)."""
    a, b = _as_complex(a), _as_complex(b)
    X = a.base
    n_pts = len(X)
    terms, dh, dv = {}, {}, {}
    simp = {}
    for i in a.degrees():
        for j in b.degrees():
            ta, tb = a.term(i), b.term(j)
            sqs = [tensor_groups(ta.stalk_at(x), tb.stalk_at(x)).simplify() for x in range(n_pts)]
            simp[(i, j)] = sqs
            terms[(i, j)] = AbelianData._build(
                X, [s.group for s in sqs],
                lambda x, y, sqs=sqs, ta=ta, tb=tb: sqs[y].to_matrix @ kron(ta.res(x, y), tb.res(x, y)) @ sqs[x].reps)
    for (i, j), t in terms.items():
        if (i + 1, j) in terms:
            src, dst = simp[(i, j)], simp[(i + 1, j)]
            da = a.diff(i)
            comps = [dst[x].to_matrix @ kron(da.comp(x), IntMatrix.identity(b.term(j).stalk_at(x).ngens)) @ src[x].reps
                     for x in range(n_pts)]
            dh[(i, j)] = DataMorphism._build(t, terms[(i + 1, j)], comps)
        if (i, j + 1) in terms:
            src, dst = simp[(i, j)], simp[(i, j + 1)]
            db = b.diff(j)
            comps = [dst[x].to_matrix @ kron(IntMatrix.identity(a.term(i).stalk_at(x).ngens), db.comp(x)) @ src[x].reps
                     for x in range(n_pts)]
            dv[(i, j)] = DataMorphism._build(t, terms[(i, j + 1)], comps)
    return total(terms, dh, dv, X)


# ---------------------------------------------------------------------------
# Godement resolutions of complexes


def _godement_functor(phi: DataMorphism, src: AbelianData, tgt: AbelianData, n: int, top: bool) -> DataMorphism:
    """C^n(phi) (top=True) or C_n(phi): blockwise phi at the top / bottom vertex of each chain."""
    from .zlin import block_diag
    X = phi.source.base
    comps = []
    for p in range(len(X)):
        m = X.up_mask(p) if top else X.down_mask(p)
        ch = _chains_by_len(X, m).get(n, [])
        comps.append(block_diag([phi.comp(c[-1] if top else c[0]) for c in ch]) if ch else
                     IntMatrix.zeros(0, 0))
    return DataMorphism._build(src, tgt, comps)


def godement_cochain_complex(k) -> DataComplex:
    """Total complex of C^p K^q: a flasque resolution of the data complex K."""
    k = _as_complex(k)
    X = k.base
    cols = {q: godement_cochain(k.term(q))[0] for q in k.degrees()}
    terms, dh, dv = {}, {}, {}
    for q, c in cols.items():
        for p in c.degrees():
            terms[(p, q)] = c.term(p)
            if p < c.hi:
                dh[(p, q)] = c.diff(p)
    for q in k.degrees():
        if q + 1 in cols:
            for p in cols[q].degrees():
                dv[(p, q)] = _godement_functor(k.diff(q), terms[(p, q)], terms[(p, q + 1)], p, True)
    return total(terms, dh, dv, X)


def godement_chain_complex(k) -> DataComplex:
    """Total complex of C_p K^q (chain index p in degree -p): a coflasque resolution of K."""
    k = _as_complex(k)
    X = k.base
    cols = {q: godement_chain(k.term(q))[0] for q in k.degrees()}
    terms, dh, dv = {}, {}, {}
    for q, c in cols.items():
        for h in c.degrees():
            terms[(h, q)] = c.term(h)
            if h < c.hi:
                dh[(h, q)] = c.diff(h)
    for q in k.degrees():
        if q + 1 in cols:
            for h in cols[q].degrees():
                dv[(h, q)] = _godement_functor(k.diff(q), terms[(h, q)], terms[(h, q + 1)], -h, False)
    return total(terms, dh, dv, X)


def has_free_stalks(k) -> bool:
    k = _as_complex(k)
    return all(g.orders is not None and all(d == 0 for d in g.orders)
               for t in k.terms for g in t.stalks)


def projective_replacement(k) -> DataComplex:
    """Termwise projective complex quasi-isomorphic to K.

    Single data go through projective_resolution; a complex must have free stalks,
    in which case the coflasque Godement total complex is already projective.
    """
    if isinstance(k, AbelianData):
        return projective_resolution(k)[0]
    if len(k.terms) == 1:
        return shift(projective_resolution(k.terms[0])[0], -k.lo)
    if not has_free_stalks(k):
        raise ValueError("projective replacement of a complex needs free stalks")
    return godement_chain_complex(k)


def flat_replacement(k) -> DataComplex:
    """Stalkwise free complex quasi-isomorphic to K (same restrictions as projective_replacement)."""
    if isinstance(k, AbelianData):
        return flat_resolution(k)[0]
    if len(k.terms) == 1:
        return shift(flat_resolution(k.terms[0])[0], -k.lo)
    if not has_free_stalks(k):
        raise ValueError("flat replacement of a complex needs free stalks")
    return k
