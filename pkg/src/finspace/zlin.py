"""Exact integer linear algebra.

Matrices hold Python ints, so nothing ever overflows.  Every homology
computation in the package ends up in `smith_normal_form` below.

    >>> smith_normal_form(IntMatrix([[2, 4], [6, 8]])).diagonal
    (2, 4)
    >>> FgAbGroup(2, IntMatrix([[2, 0], [0, 4]])).invariants
    (0, (2, 4))
"""

from __future__ import annotations

from typing import Iterable, Sequence


class IntMatrix:
    """Dense integer matrix stored as a tuple of row tuples."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Iterable[Iterable[int]] = (), ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows, ncols):
        m = object.__new__(cls)
        m.rows = rows if type(rows) is tuple else tuple(rows)
        m.nrows = len(m.rows)
        m.ncols = ncols
        return m

    # constructors

    @classmethod
    def zeros(cls, m: int, n: int) -> IntMatrix:
        z = (0,) * n
        return cls._raw((z,) * m, n)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls._raw(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def diag(cls, entries: Sequence[int], m: int | None = None, n: int | None = None) -> IntMatrix:
        m = len(entries) if m is None else m
        n = len(entries) if n is None else n
        rows = [[0] * n for _ in range(m)]
        for i, d in enumerate(entries):
            rows[i][i] = d
        return cls._raw(tuple(map(tuple, rows)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        if not cols:
            return cls.zeros(nrows, 0)
        return cls._raw(tuple(zip(*cols)) if nrows else (), len(cols))

    # basic access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        if self.nrows == 0:
            return [()] * self.ncols
        return list(zip(*self.rows))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"

    # arithmetic

    @property
    def T(self) -> IntMatrix:
        if self.nrows == 0:
            return IntMatrix.zeros(self.ncols, 0)
        return IntMatrix._raw(tuple(zip(*self.rows)), self.nrows)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        n = other.ncols
        orows = other.rows
        out = []
        for row in self.rows:
            acc = [0] * n
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(orows[k]):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return IntMatrix._raw(tuple(out), n)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch in sum")
        return IntMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                    for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch in difference")
        return IntMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                    for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def take_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix._raw(tuple(self.rows[i] for i in idx), self.ncols)

    def take_cols(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix._raw(tuple(tuple(r[j] for j in idx) for r in self.rows), len(idx))


def hstack(mats: Sequence[IntMatrix], nrows: int | None = None) -> IntMatrix:
    if not mats:
        return IntMatrix.zeros(nrows or 0, 0)
    m = mats[0].nrows
    if any(a.nrows != m for a in mats):
        raise ValueError("hstack row mismatch")
    rows = tuple(sum((a.rows[i] for a in mats), ()) for i in range(m))
    return IntMatrix._raw(rows, sum(a.ncols for a in mats))


def vstack(mats: Sequence[IntMatrix], ncols: int | None = None) -> IntMatrix:
    if not mats:
        return IntMatrix.zeros(0, ncols or 0)
    n = mats[0].ncols
    if any(a.ncols != n for a in mats):
        raise ValueError("vstack column mismatch")
    return IntMatrix._raw(sum((a.rows for a in mats), ()), n)


def block_diag(mats: Sequence[IntMatrix]) -> IntMatrix:
    n = sum(a.ncols for a in mats)
    rows = []
    off = 0
    for a in mats:
        left = (0,) * off
        right = (0,) * (n - off - a.ncols)
        rows.extend(left + r + right for r in a.rows)
        off += a.ncols
    return IntMatrix._raw(tuple(rows), n)


def block_matrix(blocks: Sequence[Sequence[IntMatrix]]) -> IntMatrix:
    return vstack([hstack(list(row)) for row in blocks])


def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append(tuple(x * y for x in ra for y in rb))
    return IntMatrix._raw(tuple(rows), a.ncols * b.ncols)


# ---------------------------------------------------------------------------
# Smith normal form


class SmithForm:
    """u @ a @ v == s with u, v unimodular and s diagonal with d_i | d_{i+1}.

    u_inv and v_inv are kept as well; lattice computations need them.
    """

    __slots__ = ("u", "s", "v", "u_inv", "v_inv", "diagonal", "rank", "shape")

    def __init__(self, u, s, v, u_inv, v_inv, diagonal, shape):
        self.u, self.s, self.v = u, s, v
        self.u_inv, self.v_inv = u_inv, v_inv
        self.diagonal = diagonal
        self.rank = len(diagonal)
        self.shape = shape


def _find_pivot(A, t, m, n):
    best = None
    bv = 0
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            x = row[j]
            if x:
                ax = x if x > 0 else -x
                if best is None or ax < bv:
                    best, bv = (i, j), ax
                    if ax == 1:
                        return best
    return best


def _ident(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Smith normal form with the smallest-absolute-value pivot rule.

    Ties go to the lowest row, then the lowest column, so the result is a
    deterministic function of the input.
    """
    m, n = a.shape
    A = [list(r) for r in a.rows]
    U, UiT = _ident(m), _ident(m)  # UiT holds the columns of u^-1 as rows
    VT, Vi = _ident(n), _ident(n)  # VT holds the columns of v as rows

    def swap_rows(i, t):
        A[i], A[t] = A[t], A[i]
        U[i], U[t] = U[t], U[i]
        UiT[i], UiT[t] = UiT[t], UiT[i]

    def swap_cols(j, t):
        for r in A:
            r[j], r[t] = r[t], r[j]
        VT[j], VT[t] = VT[t], VT[j]
        Vi[j], Vi[t] = Vi[t], Vi[j]

    def addrow(dst, src, q, t0):
        # row dst += q * row src
        rd, rs = A[dst], A[src]
        for k in range(t0, n):
            if rs[k]:
                rd[k] += q * rs[k]
        ud, us = U[dst], U[src]
        for k in range(m):
            if us[k]:
                ud[k] += q * us[k]
        # u^-1: column src -= q * column dst
        wd, ws = UiT[dst], UiT[src]
        for k in range(m):
            if wd[k]:
                ws[k] -= q * wd[k]

    def addcol(dst, src, q, t0):
        # column dst += q * column src
        for r in range(t0, m):
            row = A[r]
            if row[src]:
                row[dst] += q * row[src]
        vd, vs = VT[dst], VT[src]
        for k in range(n):
            if vs[k]:
                vd[k] += q * vs[k]
        wd, ws = Vi[dst], Vi[src]
        for k in range(n):
            if wd[k]:
                ws[k] -= q * wd[k]

    diag = []
    t = 0
    while t < min(m, n):
        piv = _find_pivot(A, t, m, n)
        if piv is None:
            break
        while True:
            i, j = piv
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    q = x // p
                    addrow(i, t, -q, t)
                    if A[i][t]:
                        dirty = True
            rowt = A[t]
            for j in range(t + 1, n):
                x = rowt[j]
                if x:
                    q = x // p
                    addcol(j, t, -q, t)
                    if rowt[j]:
                        dirty = True
            if dirty:
                piv = _find_pivot(A, t, m, n)
                continue
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            addrow(t, bad, 1, t)
            piv = (t, t)
        if A[t][t] < 0:
            A[t][t] = -A[t][t]
            U[t] = [-x for x in U[t]]
            UiT[t] = [-x for x in UiT[t]]
        diag.append(A[t][t])
        t += 1

    u = IntMatrix._raw(tuple(map(tuple, U)), m)
    u_inv = IntMatrix._raw(tuple(zip(*UiT)) if m else (), m)
    v = IntMatrix._raw(tuple(zip(*VT)) if n else (), n)
    v_inv = IntMatrix._raw(tuple(map(tuple, Vi)), n)
    s = IntMatrix.diag(diag, m, n)
    return SmithForm(u, s, v, u_inv, v_inv, tuple(diag), (m, n))


def solve(a: IntMatrix, b: IntMatrix, sf: SmithForm | None = None) -> IntMatrix | None:
    """An integer matrix x with a @ x == b, or None if there is none.

    Free coordinates are set to zero, so the answer is canonical for a fixed a.
    """
    if a.nrows != b.nrows:
        raise ValueError("solve: row mismatch")
    if sf is None:
        sf = smith_normal_form(a)
    y = sf.u @ b
    r = sf.rank
    rows = []
    for i in range(r):
        d = sf.diagonal[i]
        row = y.rows[i]
        if d == 1:
            rows.append(row)
            continue
        out = []
        for x in row:
            qt, rm = divmod(x, d)
            if rm:
                return None
            out.append(qt)
        rows.append(tuple(out))
    for i in range(r, y.nrows):
        if any(y.rows[i]):
            return None
    head = sf.v.take_cols(range(r))
    return head @ IntMatrix._raw(tuple(rows), b.ncols)


def kernel_basis(a: IntMatrix, sf: SmithForm | None = None) -> IntMatrix:
    """Columns form a basis of the integer kernel of a."""
    if sf is None:
        sf = smith_normal_form(a)
    return sf.v.take_cols(range(sf.rank, a.ncols))


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice spanned by the columns of gens."""
    sf = smith_normal_form(gens)
    cols = sf.u_inv.take_cols(range(sf.rank))
    return IntMatrix._raw(tuple(tuple(x * d for x, d in zip(r, sf.diagonal)) for r in cols.rows),
                          sf.rank)


def determinant(a: IntMatrix) -> int:
    """Exact determinant via fraction-free elimination (Bareiss)."""
    n = a.nrows
    if n != a.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [list(r) for r in a.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# groups


_ZERO_GROUP: dict = {}


class FgAbGroup:
    """Z^n modulo the span of the relation columns.

    Equality is isomorphism: two groups are equal when their canonical
    invariants agree.  Maps are always written on the generators.
    """

    __slots__ = ("ngens", "relations", "orders", "_sf", "_inv")

    def __init__(self, ngens: int, relations: IntMatrix | None = None):
        if relations is None:
            relations = IntMatrix.zeros(ngens, 0)
        elif not isinstance(relations, IntMatrix):
            relations = IntMatrix(relations, ncols=None) if ngens else IntMatrix.zeros(0, 0)
        if relations.nrows != ngens:
            raise ValueError("relation matrix must have one row per generator")
        self.ngens = ngens
        self.relations = relations
        self.orders = _diagonal_orders(relations)
        self._sf = None
        self._inv = None

    @classmethod
    def free(cls, n: int) -> FgAbGroup:
        return cls.from_orders((0,) * n)

    @classmethod
    def zero(cls) -> FgAbGroup:
        z = _ZERO_GROUP.get("z")
        if z is None:
            z = _ZERO_GROUP["z"] = cls.from_orders(())
        return z

    @classmethod
    def cyclic(cls, n: int) -> FgAbGroup:
        return cls.from_orders((n,))

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> FgAbGroup:
        """Direct sum of cyclic groups Z/d (d = 0 meaning Z)."""
        orders = tuple(orders)
        n = len(orders)
        cols = [j for j, d in enumerate(orders) if d != 0]
        rel = IntMatrix._raw(tuple(tuple(orders[i] if i == j else 0 for j in cols)
                                   for i in range(n)), len(cols))
        g = object.__new__(cls)
        g.ngens = n
        g.relations = rel
        g.orders = orders
        g._sf = None
        g._inv = None
        return g

    @classmethod
    def from_invariants(cls, free_rank: int, torsion: Sequence[int] = ()) -> FgAbGroup:
        return cls.from_orders(tuple(torsion) + (0,) * free_rank)

    @property
    def smith(self) -> SmithForm:
        if self._sf is None:
            self._sf = smith_normal_form(self.relations)
        return self._sf

    @property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, invariant factors > 1)."""
        if self._inv is None:
            if self.orders is not None and all(d in (0, 1) for d in self.orders):
                self._inv = (sum(1 for d in self.orders if d == 0), ())
            else:
                sf = self.smith
                self._inv = (self.ngens - sf.rank, tuple(d for d in sf.diagonal if d > 1))
        return self._inv

    @property
    def free_rank(self) -> int:
        return self.invariants[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.invariants[1]

    def is_zero(self) -> bool:
        return self.invariants == (0, ())

    def is_free(self) -> bool:
        return not self.invariants[1]

    def order(self) -> int:
        """Cardinality, 0 when infinite."""
        r, t = self.invariants
        if r:
            return 0
        out = 1
        for d in t:
            out *= d
        return out

    def contains(self, vectors: IntMatrix) -> bool:
        """True iff every column of `vectors` lies in the relation lattice."""
        if vectors.nrows != self.ngens:
            raise ValueError("vector length differs from the number of generators")
        if self.orders is not None:
            for row, d in zip(vectors.rows, self.orders):
                if d == 0:
                    if any(row):
                        return False
                elif d != 1:
                    for x in row:
                        if x % d:
                            return False
            return True
        sf = self.smith
        y = sf.u @ vectors
        for i, row in enumerate(y.rows):
            if i < sf.rank:
                d = sf.diagonal[i]
                if d != 1 and any(x % d for x in row):
                    return False
            elif any(row):
                return False
        return True

    def normalize(self, vectors: IntMatrix) -> IntMatrix:
        """Reduce coordinates modulo the orders (diagonal presentations only)."""
        if self.orders is None:
            return vectors
        rows = tuple(tuple(x % d for x in r) if d > 0 else r
                     for r, d in zip(vectors.rows, self.orders))
        return IntMatrix._raw(rows, vectors.ncols)

    def simplify(self) -> Subquotient:
        """Canonical diagonal presentation with maps to and from this one."""
        return subquotient(self)

    def __eq__(self, other):
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.invariants == other.invariants

    def __hash__(self):
        return hash(self.invariants)

    def __str__(self):
        return format_invariants(self.invariants)

    def __repr__(self):
        return f"FgAbGroup<{self}>"


def _diagonal_orders(rel: IntMatrix):
    """Per-generator orders when every relation is a multiple of a distinct generator."""
    orders = [0] * rel.nrows
    if rel.ncols == 0:
        return tuple(orders)
    seen = set()
    for j, c in enumerate(rel.columns()):
        nz = [(i, x) for i, x in enumerate(c) if x]
        if not nz:
            continue
        if len(nz) != 1 or nz[0][0] in seen:
            return None
        i, x = nz[0]
        seen.add(i)
        orders[i] = abs(x)
    return tuple(orders)


def format_invariants(inv: tuple[int, Sequence[int]]) -> str:
    r, tors = inv
    parts = [f"Z/{d}" for d in tors]
    if r == 1:
        parts.append("Z")
    elif r > 1:
        parts.append(f"Z^{r}")
    return " + ".join(parts) if parts else "0"


def group_invariants(g: FgAbGroup) -> tuple[int, tuple[int, ...]]:
    return g.invariants


def direct_sum(groups: Sequence[FgAbGroup]) -> FgAbGroup:
    if all(g.orders is not None for g in groups):
        return FgAbGroup.from_orders(sum((g.orders for g in groups), ()))
    n = sum(g.ngens for g in groups)
    return FgAbGroup(n, block_diag([g.relations for g in groups]) if groups else None)


class Subquotient:
    """ker(b) / im(a) inside a group C, in a simplified presentation.

    `reps` sends generators of `group` to representative cycles in C and
    `coords` sends cycles of C back to coordinates in `group`.
    """

    __slots__ = ("ambient", "group", "reps", "cycles", "_to", "_sfB", "_trivial_basis")

    def __init__(self, ambient, group, reps, cycles, to, sfB, trivial_basis):
        self.ambient = ambient
        self.group = group
        self.reps = reps
        self.cycles = cycles
        self._to = to
        self._sfB = sfB
        self._trivial_basis = trivial_basis

    def coords(self, x: IntMatrix) -> IntMatrix:
        """Coordinates of cycle columns x (in ambient coordinates)."""
        if self._trivial_basis:
            z = x
        else:
            z = solve(self.cycles, x, self._sfB)
            if z is None:
                raise ValueError("vector is not a cycle")
        return self.group.normalize(self._to @ z)

    @property
    def to_matrix(self) -> IntMatrix:
        """Matrix from ambient coordinates (only valid when every vector is a cycle)."""
        if not self._trivial_basis:
            raise ValueError("subquotient is not a plain quotient")
        return self._to


def subquotient(c: FgAbGroup, b: IntMatrix | None = None, d: FgAbGroup | None = None,
                a: IntMatrix | None = None) -> Subquotient:
    """ker(b: C -> D) / (im(a) + relations of C), simplified."""
    n = c.ngens
    trivial = b is None or b.nrows == 0 or b.is_zero() or (d is not None and _all_zero_mod(d, b))
    if trivial:
        B = IntMatrix.identity(n)
        sfB = None
    else:
        if d is None or d.relations.ncols == 0:
            B = kernel_basis(b)
        else:
            K = kernel_basis(hstack([b, d.relations]))
            top = K.take_rows(range(n))
            if d.orders is not None:
                B = top
            else:
                B = lattice_basis(top)
        sfB = smith_normal_form(B)
    parts = [c.relations]
    if a is not None and a.ncols:
        parts.insert(0, a)
    W = hstack(parts)
    if trivial:
        Y = W
    else:
        Y = solve(B, W, sfB)
        if Y is None:
            raise ValueError("boundaries are not cycles (d o d != 0?)")
    k = B.ncols
    if Y.ncols == 0:
        group = FgAbGroup.free(k)
        return Subquotient(c, group, B, B, IntMatrix.identity(k), sfB, trivial)
    sfY = smith_normal_form(Y)
    sel = []
    orders = []
    for j in range(k):
        dj = sfY.diagonal[j] if j < sfY.rank else 0
        if dj != 1:
            sel.append(j)
            orders.append(dj)
    group = FgAbGroup.from_orders(orders)
    reps = B @ sfY.u_inv.take_cols(sel)
    to = sfY.u.take_rows(sel)
    return Subquotient(c, group, reps, B, to, sfB, trivial)


def _all_zero_mod(d: FgAbGroup, b: IntMatrix) -> bool:
    return d.contains(b)


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    """Homomorphism given by its matrix on generators (target x source)."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix, check: bool = True):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix, ncols=source.ngens) if target.ngens else IntMatrix.zeros(0, source.ngens)
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {matrix.shape} does not fit "
                             f"{source.ngens} -> {target.ngens} generators")
        if check and source.relations.ncols and not target.contains(matrix @ source.relations):
            raise ValueError("ill-defined homomorphism: relations not sent to relations")
        self.source = source
        self.target = target
        self.matrix = matrix

    @classmethod
    def identity(cls, g: FgAbGroup) -> GroupHom:
        return cls(g, g, IntMatrix.identity(g.ngens), check=False)

    @classmethod
    def zero(cls, s: FgAbGroup, t: FgAbGroup) -> GroupHom:
        return cls(s, t, IntMatrix.zeros(t.ngens, s.ngens), check=False)

    def __matmul__(self, other: GroupHom) -> GroupHom:
        """self o other."""
        if other.target.ngens != self.source.ngens:
            raise ValueError("composition of incompatible homomorphisms")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: GroupHom) -> GroupHom:
        return GroupHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: GroupHom) -> GroupHom:
        return GroupHom(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> GroupHom:
        return GroupHom(self.source, self.target, -self.matrix, check=False)

    def is_zero(self) -> bool:
        return self.target.contains(self.matrix)

    def equals(self, other: GroupHom) -> bool:
        return (self - other).is_zero()

    def kernel(self) -> tuple[FgAbGroup, GroupHom]:
        sq = subquotient(self.source, self.matrix, self.target)
        return sq.group, GroupHom(sq.group, self.source, sq.reps, check=False)

    def cokernel(self) -> tuple[FgAbGroup, GroupHom]:
        sq = subquotient(self.target, None, None, self.matrix)
        return sq.group, GroupHom(self.target, sq.group, sq.to_matrix, check=False)

    def image(self) -> tuple[FgAbGroup, GroupHom]:
        """Image with its inclusion into the target."""
        cyc = subquotient(self.source, self.matrix, self.target).cycles
        sq = subquotient(FgAbGroup.free(self.source.ngens), None, None, cyc)
        return sq.group, GroupHom(sq.group, self.target, self.matrix @ sq.reps, check=False)

    def is_injective(self) -> bool:
        return self.kernel()[0].is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel()[0].is_zero()

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def __repr__(self):
        return f"GroupHom({self.source} -> {self.target}, {self.matrix.tolist()})"


def hom_kernel(h: GroupHom):
    return h.kernel()


def hom_image(h: GroupHom):
    return h.image()


def hom_cokernel(h: GroupHom):
    return h.cokernel()


def hom_direct_sum(homs: Sequence[GroupHom]) -> GroupHom:
    return GroupHom(direct_sum([h.source for h in homs]), direct_sum([h.target for h in homs]),
                    block_diag([h.matrix for h in homs]), check=False)


def hom_space(a: FgAbGroup, b: FgAbGroup) -> Subquotient:
    """Hom(a, b) as a subquotient of b^(ngens a).

    A homomorphism with matrix M is encoded column by column: entry
    M[i][j] sits at index j * b.ngens + i.
    """
    na, nb = a.ngens, b.ngens
    amb = direct_sum([b] * na)
    phi = kron(a.relations.T, IntMatrix.identity(nb))
    tgt = direct_sum([b] * a.relations.ncols)
    return subquotient(amb, phi, tgt)


def vec_to_matrix(v: Sequence[int], nrows: int, ncols: int) -> IntMatrix:
    return IntMatrix._raw(tuple(tuple(v[j * nrows + i] for j in range(ncols)) for i in range(nrows)), ncols)


def matrix_to_vec(m: IntMatrix) -> list[int]:
    return [m.rows[i][j] for j in range(m.ncols) for i in range(m.nrows)]


def tensor_groups(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    if a.ngens == 0 or b.ngens == 0:
        return FgAbGroup.zero()
    rel = hstack([kron(a.relations, IntMatrix.identity(b.ngens)),
                  kron(IntMatrix.identity(a.ngens), b.relations)])
    return FgAbGroup(a.ngens * b.ngens, rel)


# ---------------------------------------------------------------------------
# complexes of groups (cochain convention: d raises degree by one)


class GroupComplex:
    """Bounded cochain complex C^lo -> ... -> C^hi of f.g. abelian groups."""

    __slots__ = ("lo", "terms", "diffs", "_hcache")

    def __init__(self, lo: int, terms: Sequence[FgAbGroup], diffs: Sequence = (), check: bool = True):
        terms = tuple(terms)
        if len(terms) and len(diffs) != len(terms) - 1:
            raise ValueError("need one differential between consecutive terms")
        ds = []
        for k, dmat in enumerate(diffs):
            if isinstance(dmat, GroupHom):
                dmat = dmat.matrix
            elif not isinstance(dmat, IntMatrix):
                dmat = IntMatrix(dmat, ncols=terms[k].ngens) if terms[k + 1].ngens else IntMatrix.zeros(0, terms[k].ngens)
            if dmat.shape != (terms[k + 1].ngens, terms[k].ngens):
                raise ValueError(f"differential {lo + k} has wrong shape")
            if check and terms[k].relations.ncols and not terms[k + 1].contains(dmat @ terms[k].relations):
                raise ValueError(f"differential {lo + k} is not well defined")
            ds.append(dmat)
        if check:
            for k in range(len(ds) - 1):
                if not terms[k + 2].contains(ds[k + 1] @ ds[k]):
                    raise ValueError(f"d o d != 0 at degree {lo + k}")
        self.lo = lo
        self.terms = terms
        self.diffs = tuple(ds)
        self._hcache = {}

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, i: int) -> FgAbGroup:
        if self.lo <= i <= self.hi:
            return self.terms[i - self.lo]
        return FgAbGroup.zero()

    def diff(self, i: int) -> IntMatrix:
        """Matrix of d^i : C^i -> C^(i+1)."""
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        return IntMatrix.zeros(self.term(i + 1).ngens, self.term(i).ngens)

    def homology_data(self, i: int) -> Subquotient:
        sq = self._hcache.get(i)
        if sq is None:
            sq = subquotient(self.term(i), self.diff(i), self.term(i + 1), self.diff(i - 1))
            self._hcache[i] = sq
        return sq

    def homology(self, i: int) -> FgAbGroup:
        return self.homology_data(i).group

    def invariants(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        """Invariants of every nonzero cohomology group, by degree."""
        inv = self._hcache.get("inv")
        if inv is None:
            inv = fast_invariants(self)
            self._hcache["inv"] = inv
        return dict(inv)

    def invariants_by_subquotient(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        """Invariants read off the explicit homology groups (slow route)."""
        out = {}
        for i in self.degrees():
            inv = self.homology(i).invariants
            if inv != (0, ()):
                out[i] = inv
        return out

    def is_exact(self) -> bool:
        return not self.invariants()

    def shift(self, k: int) -> GroupComplex:
        """C[k]: degree n holds C^(n+k), differential multiplied by (-1)^k."""
        sign = -1 if k % 2 else 1
        return GroupComplex(self.lo - k, self.terms, [d.scale(sign) for d in self.diffs], check=False)

    def __repr__(self):
        body = ", ".join(f"{i}: {g}" for i, g in zip(self.degrees(), self.terms))
        return f"GroupComplex({{{body}}})"


def complex_homology(c: GroupComplex, degree: int) -> FgAbGroup:
    return c.homology(degree)


def zero_complex() -> GroupComplex:
    return GroupComplex(0, [])


class ChainMap:
    """Degree-preserving map of group complexes, given by matrices per degree."""

    __slots__ = ("source", "target", "maps")

    def __init__(self, source: GroupComplex, target: GroupComplex, maps, check: bool = True):
        self.source = source
        self.target = target
        full = {}
        for i in range(min(source.lo, target.lo), max(source.hi, target.hi) + 1):
            m = maps.get(i) if hasattr(maps, "get") else None
            if m is None:
                m = IntMatrix.zeros(target.term(i).ngens, source.term(i).ngens)
            elif isinstance(m, GroupHom):
                m = m.matrix
            if m.shape != (target.term(i).ngens, source.term(i).ngens):
                raise ValueError(f"chain map component {i} has wrong shape")
            full[i] = m
        self.maps = full
        if check:
            for i, m in full.items():
                if source.term(i).relations.ncols and not target.term(i).contains(m @ source.term(i).relations):
                    raise ValueError(f"chain map component {i} is not well defined")
                left = target.diff(i) @ m
                right = self.component(i + 1) @ source.diff(i)
                if not target.term(i + 1).contains(left - right):
                    raise ValueError(f"chain map does not commute with d at degree {i}")

    def component(self, i: int) -> IntMatrix:
        m = self.maps.get(i)
        if m is None:
            return IntMatrix.zeros(self.target.term(i).ngens, self.source.term(i).ngens)
        return m

    def compose(self, other: ChainMap) -> ChainMap:
        """self o other."""
        degs = set(self.maps) | set(other.maps)
        return ChainMap(other.source, self.target,
                        {i: self.component(i) @ other.component(i) for i in degs}, check=False)


def induced_map_on_homology(f: ChainMap, degree: int) -> GroupHom:
    hs = f.source.homology_data(degree)
    ht = f.target.homology_data(degree)
    mat = ht.coords(f.component(degree) @ hs.reps)
    return GroupHom(hs.group, ht.group, mat, check=False)


def cone(f: ChainMap) -> GroupComplex:
    """cone(f)^n = A^(n+1) + B^n with d = [[-d_A, 0], [f, d_B]]."""
    a, b = f.source, f.target
    lo = min(a.lo - 1, b.lo)
    hi = max(a.hi - 1, b.hi)
    terms, diffs = [], []
    for n in range(lo, hi + 1):
        terms.append(direct_sum([a.term(n + 1), b.term(n)]))
    for n in range(lo, hi):
        top = hstack([-a.diff(n + 1), IntMatrix.zeros(a.term(n + 2).ngens, b.term(n).ngens)])
        bot = hstack([f.component(n + 1), b.diff(n)])
        diffs.append(vstack([top, bot]))
    return GroupComplex(lo, terms, diffs, check=False)


def free_model(c: GroupComplex) -> tuple[GroupComplex, ChainMap]:
    """A complex of free groups with a quasi-isomorphism onto c.

    Each term is put in diagonal form Z^n / R with R injective; the model is
    the twisted total complex of the resolutions 0 -> Z^m -R-> Z^n.
    """
    lo, hi = c.lo, c.hi
    if not c.terms:
        return c, ChainMap(c, c, {}, check=False)
    simp = {i: c.term(i).simplify() for i in c.degrees()}

    def n(i):
        return simp[i].group.ngens if i in simp else 0

    def R(i):
        if i in simp:
            return simp[i].group.relations
        return IntMatrix.zeros(0, 0)

    def m(i):
        return R(i).ncols

    def M(i):
        if lo <= i < hi:
            return simp[i + 1].to_matrix @ c.diff(i) @ simp[i].reps
        return IntMatrix.zeros(n(i + 1), n(i))

    def N(i):
        # M_i R_i = R_{i+1} N_i
        if m(i) == 0 or m(i + 1) == 0:
            return IntMatrix.zeros(m(i + 1), m(i))
        x = solve(R(i + 1), M(i) @ R(i))
        assert x is not None
        return x

    def H(i):
        # M_{i+1} M_i = R_{i+2} H_i
        if m(i + 2) == 0 or n(i) == 0:
            return IntMatrix.zeros(m(i + 2), n(i))
        x = solve(R(i + 2), M(i + 1) @ M(i))
        assert x is not None
        return x

    tlo = lo - 1
    terms, diffs, proj = [], [], {}
    for k in range(tlo, hi + 1):
        terms.append(FgAbGroup.free(n(k) + m(k + 1)))
        if k in simp:
            proj[k] = hstack([simp[k].reps, IntMatrix.zeros(c.term(k).ngens, m(k + 1))])
    for k in range(tlo, hi):
        top = hstack([M(k), R(k + 1) if k + 1 in simp else IntMatrix.zeros(n(k + 1), 0)])
        bot = hstack([-H(k), -N(k + 1)])
        diffs.append(vstack([top, bot]))
    model = GroupComplex(tlo, terms, diffs, check=False)
    return model, ChainMap(model, c, proj, check=False)


def dual_group_complex(c: GroupComplex) -> GroupComplex:
    """RHom(c, Z) in cochain convention: degree j holds Hom(T^-j, Z)."""
    t, _ = free_model(c)
    if not t.terms:
        return t
    lo = -t.hi
    terms, diffs = [], []
    for j in range(lo, -t.lo + 1):
        terms.append(FgAbGroup.free(t.term(-j).ngens))
    for j in range(lo, -t.lo):
        sign = -1 if (j + 1) % 2 else 1
        diffs.append(t.diff(-j - 1).T.scale(sign))
    return GroupComplex(lo, terms, diffs, check=False)


# ---------------------------------------------------------------------------
# fast invariants by sparse reduction


def _sparse_columns(m: IntMatrix, rkeys, ckeys):
    cols = {c: {} for c in ckeys}
    for r, row in zip(rkeys, m.rows):
        for c, x in zip(ckeys, row):
            if x:
                cols[c][r] = x
    return cols


def _sparse_free_model(c: GroupComplex):
    """Generators and sparse differentials of a free complex quasi-isomorphic to c.

    Returns (gens, diffs) with gens[k] a list of generator keys and diffs[k]
    a dict column key -> {row key: entry} for d^k.
    """
    if any(t.orders is None for t in c.terms):
        c, _ = free_model(c)
    lo, hi = c.lo, c.hi
    orders = {k: c.term(k).orders for k in range(lo, hi + 1)}

    def kept(k):
        o = orders.get(k, ())
        return [i for i, d in enumerate(o) if d != 1]

    def tors(k):
        o = orders.get(k, ())
        return [i for i, d in enumerate(o) if d > 1]

    gens = {}
    for k in range(lo - 1, hi + 1):
        gens[k] = [("g", k, i) for i in kept(k)] + [("r", k + 1, i) for i in tors(k + 1)]
    diffs = {}
    for k in range(lo - 1, hi):
        cols = {g: {} for g in gens[k]}
        if lo <= k and k + 1 <= hi:
            dk = c.diff(k)
            ok1 = orders[k + 1]
            for i in kept(k):
                col = cols[("g", k, i)]
                for j in range(dk.nrows):
                    x = dk.rows[j][i]
                    if x and ok1[j] != 1:
                        if ok1[j] > 1:
                            x %= ok1[j]
                        if x:
                            col[("g", k + 1, j)] = x
        if k + 1 <= hi:
            o = orders[k + 1]
            for i in tors(k + 1):
                cols[("r", k + 1, i)][("g", k + 1, i)] = o[i]
        diffs[k] = cols
    # correction terms: -H (g_k -> r_{k+2}) and -N (r_{k+1} -> r_{k+2})
    for k in range(lo - 1, hi):
        if k + 2 > hi:
            continue
        o2 = orders[k + 2]
        nxt = diffs[k + 1]
        cols = diffs[k]
        for key, col in cols.items():
            if key[0] == "r":
                # N: M_{k+1} R_{k+1} = R_{k+2} N
                i = key[2]
                src = {("g", k + 1, i): orders[k + 1][i]}
            else:
                src = {r: x for r, x in col.items() if r[0] == "g"}
            acc = {}
            for mid, x in src.items():
                for tgt, y in nxt.get(mid, {}).items():
                    if tgt[0] == "g":
                        acc[tgt] = acc.get(tgt, 0) + x * y
            for tgt, v in acc.items():
                d = o2[tgt[2]]
                if d == 0:
                    if v:
                        raise ValueError("d o d != 0")
                    continue
                if v % d:
                    raise ValueError("d o d != 0 modulo relations")
                if v:
                    col[("r", k + 2, tgt[2])] = -(v // d)
    return gens, diffs


def _eliminate_units(gens, diffs):
    """Cancel unit entries of a free complex in place, keeping its homotopy type."""
    for k in sorted(diffs):
        cols = diffs[k]
        rows = {}
        for c, col in cols.items():
            for r, x in col.items():
                rows.setdefault(r, {})[c] = x
        work = sorted(cols, key=lambda c: len(cols[c]))
        pending = set(work)
        while work:
            c = work.pop()
            pending.discard(c)
            col = cols.get(c)
            if not col:
                continue
            best = None
            for r, x in col.items():
                if x == 1 or x == -1:
                    if best is None or len(rows[r]) < len(rows[best]):
                        best = r
            if best is None:
                continue
            u = col[best]
            prow = rows.pop(best)
            others = [(r, x) for r, x in col.items() if r != best]
            for c2, y in prow.items():
                if c2 == c:
                    continue
                col2 = cols[c2]
                del col2[best]
                f = u * y
                for r, x in others:
                    v = col2.get(r, 0) - x * f
                    if v:
                        col2[r] = v
                        rows[r][c2] = v
                    else:
                        col2.pop(r, None)
                        rows[r].pop(c2, None)
                if c2 not in pending:
                    pending.add(c2)
                    work.append(c2)
            for r, _ in others:
                del rows[r][c]
            del cols[c]
            gens[k].remove(c)
            gens[k + 1].remove(best)
            prev = diffs.get(k - 1)
            if prev is not None:
                for pc in prev.values():
                    pc.pop(c, None)
            nxt = diffs.get(k + 1)
            if nxt is not None:
                nxt.pop(best, None)
    return gens, diffs


def fast_invariants(c: GroupComplex) -> dict[int, tuple[int, tuple[int, ...]]]:
    """Same result as c.invariants(), computed on a reduced free model."""
    if not c.terms:
        return {}
    gens, diffs = _sparse_free_model(c)
    gens = {k: list(v) for k, v in gens.items()}
    _eliminate_units(gens, diffs)
    ranks, tors = {}, {}
    for k, cols in diffs.items():
        rkeys = gens[k + 1]
        ckeys = gens[k]
        if not rkeys or not ckeys:
            ranks[k] = 0
            tors[k] = ()
            continue
        rix = {r: i for i, r in enumerate(rkeys)}
        mat = [[0] * len(ckeys) for _ in rkeys]
        for j, ck in enumerate(ckeys):
            for r, x in cols[ck].items():
                mat[rix[r]][j] = x
        diag = smith_normal_form(IntMatrix._raw(tuple(map(tuple, mat)), len(ckeys))).diagonal
        ranks[k] = len(diag)
        tors[k] = tuple(d for d in diag if d > 1)
    out = {}
    for k, g in gens.items():
        free = len(g) - ranks.get(k, 0) - ranks.get(k - 1, 0)
        t = tors.get(k - 1, ())
        if free or t:
            out[k] = (free, t)
    return out
