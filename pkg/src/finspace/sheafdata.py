"""Abelian data on a finite space.

An abelian data F assigns a finitely generated group F_p to every point
and a homomorphism r_pq : F_p -> F_q to every p <= q, functorially.  The
same object is a sheaf (sections over opens) and a cosheaf (cosections
over closed sets).  Only cover relations are stored; longer restrictions
are composed on demand.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .poset import Label, MonotoneMap, Poset, _bits
from .zlin import (
    FgAbGroup,
    GroupHom,
    IntMatrix,
    Subquotient,
    direct_sum,
    hom_space,
    hstack,
    kron,
    matrix_to_vec,
    smith_normal_form,
    subquotient,
    tensor_groups,
    vec_to_matrix,
    vstack,
)

Z = FgAbGroup.free(1)


def _as_group(g) -> FgAbGroup:
    if isinstance(g, FgAbGroup):
        return g
    if isinstance(g, int):
        return FgAbGroup.free(g)
    raise TypeError(f"not a group: {g!r}")


class AbelianData:
    """Functor from a poset to finitely generated abelian groups."""

    def __init__(self, base: Poset, stalks, restrictions: Mapping | None = None, check: bool = True):
        self.base = base
        if isinstance(stalks, Mapping):
            self._stalks = tuple(_as_group(stalks[x]) for x in base.elements)
        else:
            self._stalks = tuple(_as_group(g) for g in stalks)
        if len(self._stalks) != len(base):
            raise ValueError("one stalk per point is required")
        restrictions = restrictions or {}
        res = {}
        covers = set(base.covers())
        for key, h in restrictions.items():
            p, q = key
            i, j = base.ix(p), base.ix(q)
            if (i, j) not in covers:
                raise ValueError(f"{p!r} < {q!r} is not a cover relation")
            m = h.matrix if isinstance(h, GroupHom) else h
            if not isinstance(m, IntMatrix):
                m = IntMatrix(m, ncols=self._stalks[i].ngens) if self._stalks[j].ngens else \
                    IntMatrix.zeros(0, self._stalks[i].ngens)
            res[(i, j)] = m
        for i, j in covers:
            if (i, j) not in res:
                a, b = self._stalks[i], self._stalks[j]
                if a.ngens and b.ngens:
                    raise ValueError(f"missing restriction {base.elements[i]!r} -> {base.elements[j]!r}")
                res[(i, j)] = IntMatrix.zeros(b.ngens, a.ngens)
        self._res = res
        self._comp = {}
        if check:
            self.validate()

    @classmethod
    def _build(cls, base: Poset, stalks: Sequence[FgAbGroup], pair_matrix) -> AbelianData:
        """Trusted constructor; pair_matrix(i, j) gives r_ij on cover pairs."""
        d = cls.__new__(cls)
        d.base = base
        d._stalks = tuple(stalks)
        d._res = {(i, j): pair_matrix(i, j) for i, j in base.covers()}
        d._comp = {}
        return d

    # ---- access

    def stalk(self, p: Label) -> FgAbGroup:
        return self._stalks[self.base.ix(p)]

    def stalk_at(self, i: int) -> FgAbGroup:
        return self._stalks[i]

    @property
    def stalks(self) -> tuple[FgAbGroup, ...]:
        return self._stalks

    def res(self, i: int, j: int) -> IntMatrix:
        """Matrix of r_ij for indices i <= j."""
        if i == j:
            return IntMatrix.identity(self._stalks[i].ngens)
        m = self._res.get((i, j))
        if m is not None:
            return m
        m = self._comp.get((i, j))
        if m is not None:
            return m
        up = self.base.up_mask
        if not (up(i) >> j & 1):
            raise ValueError("restriction requested for incomparable points")
        for a, k in self.base.covers():
            if a == i and up(k) >> j & 1:
                m = self.res(k, j) @ self._res[(i, k)]
                break
        self._comp[(i, j)] = m
        return m

    def restriction(self, p: Label, q: Label) -> GroupHom:
        i, j = self.base.ix(p), self.base.ix(q)
        return GroupHom(self._stalks[i], self._stalks[j], self.res(i, j), check=False)

    def validate(self) -> None:
        """Well-defined restrictions and path independence; raises ValueError."""
        X = self.base
        e = X.elements
        for (i, j), m in self._res.items():
            a, b = self._stalks[i], self._stalks[j]
            if m.shape != (b.ngens, a.ngens):
                raise ValueError(f"restriction {e[i]!r} -> {e[j]!r} has the wrong shape")
            if a.relations.ncols and not b.contains(m @ a.relations):
                raise ValueError(f"restriction {e[i]!r} -> {e[j]!r} is not a homomorphism")
        for i in range(len(X)):
            for j in _bits(X.up_mask(i)):
                if j == i:
                    continue
                ref = self.res(i, j)
                for a, k in X.covers():
                    if a == i and X.up_mask(k) >> j & 1:
                        if not self._stalks[j].contains(self.res(k, j) @ self._res[(i, k)] - ref):
                            raise ValueError(f"restrictions from {e[i]!r} to {e[j]!r} depend on the path")

    def is_functorial(self) -> bool:
        try:
            self.validate()
        except ValueError:
            return False
        return True

    def restrict(self, subset: Iterable[Label]) -> AbelianData:
        """F|_S on the subspace S."""
        X = self.base
        m = X.mask(subset) if not isinstance(subset, int) else subset
        sub = X.subspace(m)
        idx = [X.ix(x) for x in sub.elements]
        return AbelianData._build(sub, [self._stalks[i] for i in idx],
                                  lambda a, b: self.res(idx[a], idx[b]))

    def simplify(self) -> tuple[AbelianData, DataMorphism, DataMorphism]:
        """Isomorphic data with canonical diagonal stalks, plus the two isomorphisms."""
        sqs = [g.simplify() for g in self._stalks]
        new = AbelianData._build(self.base, [s.group for s in sqs],
                                 lambda i, j: sqs[j].to_matrix @ self._res[(i, j)] @ sqs[i].reps)
        to = DataMorphism._build(self, new, [s.to_matrix for s in sqs])
        frm = DataMorphism._build(new, self, [s.reps for s in sqs])
        return new, to, frm

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self._stalks)

    def __eq__(self, other):
        """Same base, same presentations, same restriction matrices."""
        if not isinstance(other, AbelianData):
            return NotImplemented
        if self.base != other.base:
            return False
        for a, b in zip(self._stalks, other._stalks):
            if a.ngens != b.ngens or a.relations != b.relations:
                return False
        return self._res == other._res

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{x}: {g}" for x, g in zip(self.base.elements, self._stalks))
        return f"AbelianData({body})"


class DataMorphism:
    """Natural transformation between abelian data on one base."""

    def __init__(self, source: AbelianData, target: AbelianData, components, check: bool = True):
        if source.base != target.base:
            raise ValueError("morphism between data on different spaces")
        self.source = source
        self.target = target
        X = source.base
        comps = []
        for i, x in enumerate(X.elements):
            h = components[x] if isinstance(components, Mapping) else components[i]
            m = h.matrix if isinstance(h, GroupHom) else h
            if not isinstance(m, IntMatrix):
                m = IntMatrix(m, ncols=source.stalk_at(i).ngens) if target.stalk_at(i).ngens else \
                    IntMatrix.zeros(0, source.stalk_at(i).ngens)
            comps.append(m)
        self._comps = tuple(comps)
        if check:
            self.validate()

    @classmethod
    def _build(cls, source, target, comps) -> DataMorphism:
        m = cls.__new__(cls)
        m.source, m.target = source, target
        m._comps = tuple(comps)
        return m

    def component(self, p: Label) -> GroupHom:
        i = self.source.base.ix(p)
        return GroupHom(self.source.stalk_at(i), self.target.stalk_at(i), self._comps[i], check=False)

    def comp(self, i: int) -> IntMatrix:
        return self._comps[i]

    def validate(self) -> None:
        X = self.source.base
        for i, m in enumerate(self._comps):
            a, b = self.source.stalk_at(i), self.target.stalk_at(i)
            if m.shape != (b.ngens, a.ngens):
                raise ValueError(f"component at {X.elements[i]!r} has the wrong shape")
            if a.relations.ncols and not b.contains(m @ a.relations):
                raise ValueError(f"component at {X.elements[i]!r} is not a homomorphism")
        for i, j in X.covers():
            lhs = self.target.res(i, j) @ self._comps[i]
            rhs = self._comps[j] @ self.source.res(i, j)
            if not self.target.stalk_at(j).contains(lhs - rhs):
                raise ValueError(f"naturality fails on {X.elements[i]!r} < {X.elements[j]!r}")

    def after(self, other: DataMorphism) -> DataMorphism:
        """self o other."""
        return DataMorphism._build(other.source, self.target,
                                   [a @ b for a, b in zip(self._comps, other._comps)])

    def __add__(self, other: DataMorphism) -> DataMorphism:
        return DataMorphism._build(self.source, self.target, [a + b for a, b in zip(self._comps, other._comps)])

    def __neg__(self) -> DataMorphism:
        return DataMorphism._build(self.source, self.target, [-a for a in self._comps])

    def scale(self, c: int) -> DataMorphism:
        return DataMorphism._build(self.source, self.target, [a.scale(c) for a in self._comps])

    def is_zero(self) -> bool:
        return all(self.target.stalk_at(i).contains(m) for i, m in enumerate(self._comps))

    def is_isomorphism(self) -> bool:
        return all(self.component(x).is_isomorphism() for x in self.source.base.elements)

    def kernel(self) -> tuple[AbelianData, DataMorphism]:
        X = self.source.base
        sqs = [subquotient(self.source.stalk_at(i), m, self.target.stalk_at(i))
               for i, m in enumerate(self._comps)]
        k = AbelianData._build(X, [s.group for s in sqs],
                               lambda i, j: sqs[j].coords(self.source.res(i, j) @ sqs[i].reps))
        return k, DataMorphism._build(k, self.source, [s.reps for s in sqs])

    def cokernel(self) -> tuple[AbelianData, DataMorphism]:
        X = self.source.base
        sqs = [subquotient(self.target.stalk_at(i), None, None, m) for i, m in enumerate(self._comps)]
        c = AbelianData._build(X, [s.group for s in sqs],
                               lambda i, j: sqs[j].to_matrix @ self.target.res(i, j) @ sqs[i].reps)
        return c, DataMorphism._build(self.target, c, [s.to_matrix for s in sqs])

    def image(self) -> tuple[AbelianData, DataMorphism]:
        k, inc = self.cokernel()[1].kernel()
        return k, inc


def identity_morphism(f: AbelianData) -> DataMorphism:
    return DataMorphism._build(f, f, [IntMatrix.identity(g.ngens) for g in f.stalks])


def zero_morphism(f: AbelianData, g: AbelianData) -> DataMorphism:
    return DataMorphism._build(f, g, [IntMatrix.zeros(b.ngens, a.ngens) for a, b in zip(f.stalks, g.stalks)])


# ---------------------------------------------------------------------------
# basic data


def zero_data(x: Poset) -> AbelianData:
    return AbelianData._build(x, [FgAbGroup.zero()] * len(x), lambda i, j: IntMatrix.zeros(0, 0))


def constant_data(x: Poset, g: FgAbGroup = Z) -> AbelianData:
    g = _as_group(g)
    eye = IntMatrix.identity(g.ngens)
    return AbelianData._build(x, [g] * len(x), lambda i, j: eye)


def support_on(f: AbelianData, subset: Iterable[Label]) -> AbelianData:
    """F_S: stalks of F on S, zero elsewhere, for a locally closed S."""
    X = f.base
    m = X.mask(subset) if not isinstance(subset, int) else subset
    if X.up_closure_mask(m) & X.down_closure_mask(m) != m:
        raise ValueError("support must be a locally closed subset")
    zero = FgAbGroup.zero()
    stalks = [f.stalk_at(i) if m >> i & 1 else zero for i in range(len(X))]

    def r(i, j):
        if m >> i & 1 and m >> j & 1:
            return f.res(i, j)
        return IntMatrix.zeros(stalks[j].ngens, stalks[i].ngens)

    return AbelianData._build(X, stalks, r)


def support_constant(x: Poset, subset: Iterable[Label], g: FgAbGroup = Z) -> AbelianData:
    """G_S for a locally closed subset S."""
    return support_on(constant_data(x, g), subset)


def is_locally_constant(f: AbelianData) -> bool:
    """Every restriction is an isomorphism."""
    X = f.base
    return all(f.restriction(X.elements[i], X.elements[j]).is_isomorphism() for i, j in X.covers())


def direct_sum_data(datas: Sequence[AbelianData]) -> AbelianData:
    from .zlin import block_diag
    X = datas[0].base
    return AbelianData._build(X, [direct_sum([d.stalk_at(i) for d in datas]) for i in range(len(X))],
                              lambda i, j: block_diag([d.res(i, j) for d in datas]))


# ---------------------------------------------------------------------------
# sections and cosections


def _offsets(f: AbelianData, idx: Sequence[int]) -> dict[int, int]:
    out = {}
    off = 0
    for i in idx:
        out[i] = off
        off += f.stalk_at(i).ngens
    return out


def _sub_covers(x: Poset, m: int) -> list[tuple[int, int]]:
    """Cover pairs of the subspace with mask m, as indices of x."""
    out = []
    for i in _bits(m):
        for j in _bits(x.up_mask(i) & m):
            if j != i and x.up_mask(i) & x.down_mask(j) & m == (1 << i) | (1 << j):
                out.append((i, j))
    return out


def section_data(f: AbelianData, mask: int) -> tuple[Subquotient, list[int], dict[int, int]]:
    """Gamma(S, F) as a subquotient of the product of stalks over S."""
    X = f.base
    idx = list(_bits(mask))
    off = _offsets(f, idx)
    amb = direct_sum([f.stalk_at(i) for i in idx])
    pairs = _sub_covers(X, mask)
    if not pairs:
        return subquotient(amb), idx, off
    tgt = direct_sum([f.stalk_at(j) for _, j in pairs])
    n = amb.ngens
    rows = []
    for i, j in pairs:
        r = f.res(i, j)
        nj = f.stalk_at(j).ngens
        for a in range(nj):
            row = [0] * n
            for b, v in enumerate(r.rows[a]):
                row[off[i] + b] += v
            row[off[j] + a] -= 1
            rows.append(tuple(row))
    b = IntMatrix._raw(tuple(rows), n)
    return subquotient(amb, b, tgt), idx, off


def cosection_data(f: AbelianData, mask: int) -> tuple[Subquotient, list[int], dict[int, int]]:
    """L(S, F) as a quotient of the sum of stalks over S."""
    X = f.base
    idx = list(_bits(mask))
    off = _offsets(f, idx)
    amb = direct_sum([f.stalk_at(i) for i in idx])
    pairs = _sub_covers(X, mask)
    n = amb.ngens
    cols = []
    for i, j in pairs:
        r = f.res(i, j)
        for b in range(f.stalk_at(i).ngens):
            col = [0] * n
            for a in range(f.stalk_at(j).ngens):
                col[off[j] + a] += r.rows[a][b]
            col[off[i] + b] -= 1
            cols.append(col)
    a = IntMatrix.from_columns(cols, n)
    return subquotient(amb, None, None, a), idx, off


def sections(subset: Iterable[Label], f: AbelianData) -> FgAbGroup:
    return section_data(f, f.base.mask(subset))[0].group


def cosections(subset: Iterable[Label], f: AbelianData) -> FgAbGroup:
    return cosection_data(f, f.base.mask(subset))[0].group


def _restrict_sections(f, big, small):
    """Matrix of Gamma(big) -> Gamma(small) for small inside big (masks)."""
    sq_b, idx_b, off_b = big
    sq_s, idx_s, off_s = small
    rows = []
    for i in idx_s:
        for a in range(f.stalk_at(i).ngens):
            rows.append(sq_b.reps.rows[off_b[i] + a])
    proj = IntMatrix._raw(tuple(rows), sq_b.reps.ncols)
    return sq_s.coords(proj)


def _include_cosections(f, small, big):
    """Matrix of L(small) -> L(big) for small inside big."""
    sq_s, idx_s, off_s = small
    sq_b, idx_b, off_b = big
    n = sq_b.ambient.ngens
    rows = [[0] * sq_s.reps.ncols for _ in range(n)]
    for i in idx_s:
        for a in range(f.stalk_at(i).ngens):
            rows[off_b[i] + a] = list(sq_s.reps.rows[off_s[i] + a])
    emb = IntMatrix(rows, ncols=sq_s.reps.ncols)
    return sq_b.group.normalize(sq_b.to_matrix @ emb)


# ---------------------------------------------------------------------------
# images


def inverse_image(f: MonotoneMap, g: AbelianData) -> AbelianData:
    """(f^-1 G)_x = G_f(x)."""
    if g.base != f.target:
        raise ValueError("data does not live on the target of the map")
    img = [f.image_index(i) for i in range(len(f.source))]
    return AbelianData._build(f.source, [g.stalk_at(k) for k in img],
                              lambda i, j: g.res(img[i], img[j]))


def direct_image(f: MonotoneMap, g: AbelianData) -> AbelianData:
    """(f_* F)_y = Gamma(f^-1(U_y), F)."""
    X, Y = f.source, f.target
    if g.base != X:
        raise ValueError("data does not live on the source of the map")
    secs = [section_data(g, f.preimage_mask(Y.up_mask(y))) for y in range(len(Y))]
    return AbelianData._build(Y, [s[0].group for s in secs],
                              lambda a, b: _restrict_sections(g, secs[a], secs[b]))


def shriek_image(f: MonotoneMap, g: AbelianData) -> AbelianData:
    """(f_! F)_y = L(f^-1(C_y), F)."""
    X, Y = f.source, f.target
    if g.base != X:
        raise ValueError("data does not live on the source of the map")
    cos = [cosection_data(g, f.preimage_mask(Y.down_mask(y))) for y in range(len(Y))]
    return AbelianData._build(Y, [c[0].group for c in cos],
                              lambda a, b: _include_cosections(g, cos[a], cos[b]))


def gamma_support(f: AbelianData, closed: Iterable[Label]) -> FgAbGroup:
    """Gamma_Y(X, F) = ker(Gamma(X, F) -> Gamma(X - Y, F)) for closed Y."""
    X = f.base
    m = X.mask(closed)
    if X.down_closure_mask(m) != m:
        raise ValueError("support must be closed")
    full = section_data(f, X.full_mask)
    rest = section_data(f, X.full_mask & ~m)
    mat = _restrict_sections(f, full, rest)
    return GroupHom(full[0].group, rest[0].group, mat, check=False).kernel()[0]


def l_cosupport(f: AbelianData, open_set: Iterable[Label]) -> FgAbGroup:
    """L^U(X, F) = coker(L(X - U, F) -> L(X, F)) for open U."""
    X = f.base
    m = X.mask(open_set)
    if X.up_closure_mask(m) != m:
        raise ValueError("cosupport must be open")
    full = cosection_data(f, X.full_mask)
    rest = cosection_data(f, X.full_mask & ~m)
    mat = _include_cosections(f, rest, full)
    return GroupHom(rest[0].group, full[0].group, mat, check=False).cokernel()[0]


# ---------------------------------------------------------------------------
# Hom and tensor


class HomSpace:
    """Hom(F, G) for data on one base, with families of matrices as elements."""

    def __init__(self, f: AbelianData, g: AbelianData):
        if f.base != g.base:
            raise ValueError("data on different spaces")
        X = f.base
        self.f, self.g = f, g
        self.local = [hom_space(f.stalk_at(i), g.stalk_at(i)) for i in range(len(X))]
        dom = direct_sum([h.group for h in self.local])
        self._loc_off = []
        off = 0
        for h in self.local:
            self._loc_off.append(off)
            off += h.group.ngens
        pairs = X.covers()
        tgt = direct_sum([direct_sum([g.stalk_at(j)] * f.stalk_at(i).ngens) for i, j in pairs])
        cols = []
        for i, h in enumerate(self.local):
            nf, ng = f.stalk_at(i).ngens, g.stalk_at(i).ngens
            for c in range(h.group.ngens):
                hp = vec_to_matrix(h.reps.col(c), ng, nf)
                col = []
                for a, b in pairs:
                    if a == i:
                        col += matrix_to_vec(g.res(a, b) @ hp)
                    elif b == i:
                        col += matrix_to_vec(-(hp @ f.res(a, b)))
                    else:
                        col += [0] * (f.stalk_at(a).ngens * g.stalk_at(b).ngens)
                cols.append(col)
        phi = IntMatrix.from_columns(cols, tgt.ngens)
        self._sq = subquotient(dom, phi, tgt)
        self.group = self._sq.group

    def family(self, c: int) -> list[IntMatrix]:
        """Generator c of the group as a list of stalk matrices."""
        vec = self._sq.reps.col(c)
        out = []
        for i, h in enumerate(self.local):
            nf, ng = self.f.stalk_at(i).ngens, self.g.stalk_at(i).ngens
            loc = vec[self._loc_off[i]: self._loc_off[i] + h.group.ngens]
            amb = h.reps @ IntMatrix.from_columns([loc], h.group.ngens) if h.group.ngens else \
                IntMatrix.zeros(ng * nf, 1)
            out.append(vec_to_matrix(amb.col(0), ng, nf))
        return out

    def morphism(self, c: int) -> DataMorphism:
        return DataMorphism._build(self.f, self.g, self.family(c))

    def coords(self, family: Sequence[IntMatrix]) -> IntMatrix:
        """Coordinates (one column) of a natural family of matrices."""
        parts = []
        for i, h in enumerate(self.local):
            v = IntMatrix.from_columns([matrix_to_vec(family[i])], h.ambient.ngens)
            parts.append(h.coords(v))
        x = vstack(parts, 1) if parts else IntMatrix.zeros(0, 1)
        return self._sq.coords(x)


def hom_group(f: AbelianData, g: AbelianData) -> FgAbGroup:
    return HomSpace(f, g).group


def tensor(f: AbelianData, g: AbelianData) -> AbelianData:
    """Stalkwise tensor product."""
    if f.base != g.base:
        raise ValueError("data on different spaces")
    X = f.base
    sqs = [tensor_groups(f.stalk_at(i), g.stalk_at(i)).simplify() for i in range(len(X))]
    return AbelianData._build(X, [s.group for s in sqs],
                              lambda i, j: sqs[j].to_matrix @ kron(f.res(i, j), g.res(i, j)) @ sqs[i].reps)


# ---------------------------------------------------------------------------
# random data for tests and verifiers


def point_section_morphism(f: AbelianData, p: int, vec: Sequence[int]) -> DataMorphism:
    """Z_{U_p} -> F sending 1 to the element vec of F_p."""
    X = f.base
    src = support_constant(X, X.up_mask(p))
    v = IntMatrix.from_columns([list(vec)], f.stalk_at(p).ngens)
    comps = []
    for i in range(len(X)):
        if X.up_mask(p) >> i & 1:
            comps.append(f.res(p, i) @ v)
        else:
            comps.append(IntMatrix.zeros(f.stalk_at(i).ngens, 0))
    return DataMorphism._build(src, f, comps)


def random_data(x: Poset, rng, pieces: int = 2) -> AbelianData:
    """Random data with at most `pieces` generators per stalk.

    A sum of constant, open-support, closed-support and point-support pieces,
    optionally divided by the image of a random Z_{U_p}, then written in
    random bases.  Functoriality holds by construction.
    """
    n = len(x)
    parts = []
    for _ in range(pieces):
        kind = rng.choice(["const", "open", "closed", "point", "const2"])
        p = rng.randrange(n) if n else 0
        if kind == "const":
            parts.append(constant_data(x))
        elif kind == "const2":
            parts.append(constant_data(x, FgAbGroup.cyclic(rng.choice([2, 3]))))
        elif kind == "open":
            parts.append(support_constant(x, x.up_mask(p)))
        elif kind == "closed":
            parts.append(support_constant(x, x.down_mask(p)))
        else:
            parts.append(support_constant(x, 1 << p))
    f = direct_sum_data(parts)
    if n and rng.random() < 0.6:
        p = rng.randrange(n)
        k = f.stalk_at(p).ngens
        if k:
            vec = [rng.randint(-3, 3) for _ in range(k)]
            f = point_section_morphism(f, p, vec).cokernel()[0]
    f = f.simplify()[0]
    return random_basis_change(f, rng)


def random_basis_change(f: AbelianData, rng) -> AbelianData:
    """Same data written in random bases of the free parts (torsion kept diagonal)."""
    X = f.base
    mats = []
    invs = []
    for g in f.stalks:
        n = g.ngens
        u = IntMatrix.identity(n)
        if g.orders is not None and n >= 2:
            free = [i for i, d in enumerate(g.orders) if d == 0]
            if len(free) >= 2:
                a, b = free[0], free[1]
                c = rng.randint(-2, 2)
                rows = [list(r) for r in u.rows]
                rows[a][b] = c
                u = IntMatrix(rows, ncols=n)
        sf = smith_normal_form(u)
        inv = sf.v @ sf.u
        mats.append(u)
        invs.append(inv)
    return AbelianData._build(X, f.stalks, lambda i, j: mats[j] @ f.res(i, j) @ invs[i])
