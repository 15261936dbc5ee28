"""Finite T0 spaces as partially ordered sets.

Open sets are up-sets.  For a point p, ``up_set(p)`` is the smallest open
neighbourhood of p and ``down_set(p)`` its closure.  Continuous maps are
the monotone ones.

Points are arbitrary hashable labels; their declaration order fixes every
index used further down (chains, matrix rows, golden outputs).
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Hashable, Iterable, Mapping, Sequence

Label = Hashable


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class Poset:
    """A finite partial order given by generating relations a < b."""

    def __init__(self, elements: Iterable[Label], relations: Iterable[tuple[Label, Label]] = (),
                 name: str | None = None):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate element labels")
        n = len(self.elements)
        up = [1 << i for i in range(n)]
        for a, b in relations:
            if a not in self.index or b not in self.index:
                raise ValueError(f"relation {a!r} < {b!r} mentions an unknown element")
            up[self.index[a]] |= 1 << self.index[b]
        for k in range(n):
            bk = 1 << k
            for i in range(n):
                if up[i] & bk:
                    up[i] |= up[k]
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        for i in range(n):
            if (up[i] & down[i]) != (1 << i):
                j = next(j for j in _bits(up[i] & down[i]) if j != i)
                raise ValueError(f"order has a cycle through {self.elements[i]!r} and {self.elements[j]!r}")
        self._up = tuple(up)
        self._down = tuple(down)
        self.name = name
        self._covers = None
        self._chain_cache = {}

    # ---- basic structure

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self):
        return hash((self.elements, self._up))

    def __repr__(self):
        rels = " ".join(f"{a}<{b}" for a, b in self.cover_relations())
        return f"Poset({' '.join(map(str, self.elements))} ; {rels})"

    def ix(self, x: Label) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise KeyError(f"unknown element {x!r}") from None

    def leq(self, a: Label, b: Label) -> bool:
        return bool(self._up[self.ix(a)] >> self.ix(b) & 1)

    def lt(self, a: Label, b: Label) -> bool:
        return a != b and self.leq(a, b)

    def covers(self) -> tuple[tuple[int, int], ...]:
        """Cover pairs (i, j) of indices, i < j with nothing in between."""
        if self._covers is None:
            out = []
            for i in range(len(self)):
                for j in _bits(self._up[i]):
                    if j != i and (self._up[i] & self._down[j]) == (1 << i) | (1 << j):
                        out.append((i, j))
            self._covers = tuple(out)
        return self._covers

    def cover_relations(self) -> list[tuple[Label, Label]]:
        e = self.elements
        return [(e[i], e[j]) for i, j in self.covers()]

    def relations(self) -> list[tuple[Label, Label]]:
        """All strict relations a < b."""
        e = self.elements
        return [(e[i], e[j]) for i in range(len(e)) for j in _bits(self._up[i]) if j != i]

    # ---- subsets (as frozensets of labels, or bit masks internally)

    @property
    def full_mask(self) -> int:
        return (1 << len(self)) - 1

    def mask(self, subset: Iterable[Label]) -> int:
        m = 0
        for x in subset:
            m |= 1 << self.ix(x)
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in _bits(mask))

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def up_set(self, p: Label) -> frozenset:
        """U_p, the smallest open set containing p."""
        return self.labels(self._up[self.ix(p)])

    def down_set(self, p: Label) -> frozenset:
        """C_p, the closure of p."""
        return self.labels(self._down[self.ix(p)])

    def up_closure_mask(self, m: int) -> int:
        out = 0
        for i in _bits(m):
            out |= self._up[i]
        return out

    def down_closure_mask(self, m: int) -> int:
        out = 0
        for i in _bits(m):
            out |= self._down[i]
        return out

    def is_open(self, subset: Iterable[Label]) -> bool:
        m = self.mask(subset)
        return self.up_closure_mask(m) == m

    def is_closed(self, subset: Iterable[Label]) -> bool:
        m = self.mask(subset)
        return self.down_closure_mask(m) == m

    def is_locally_closed(self, subset: Iterable[Label]) -> bool:
        """S is an intersection of an open and a closed set.

        The smallest candidates are the up-closure and the down-closure of S,
        so S is locally closed exactly when it equals their intersection.
        """
        m = self.mask(subset)
        return self.up_closure_mask(m) & self.down_closure_mask(m) == m

    def open_masks(self) -> list[int]:
        return [m for m in range(1 << len(self)) if self.up_closure_mask(m) == m]

    def closed_masks(self) -> list[int]:
        return [m for m in range(1 << len(self)) if self.down_closure_mask(m) == m]

    def opens(self) -> list[frozenset]:
        return [self.labels(m) for m in self.open_masks()]

    def closeds(self) -> list[frozenset]:
        return [self.labels(m) for m in self.closed_masks()]

    # ---- chains

    def chain_indices(self, mask: int | None = None) -> list[tuple[int, ...]]:
        """All nonempty chains inside the subset, as index tuples in lexicographic order."""
        if mask is None:
            mask = self.full_mask
        hit = self._chain_cache.get(mask)
        if hit is not None:
            return hit
        out = []
        up = self._up

        def grow(chain, last):
            out.append(chain)
            for j in _bits(up[last] & mask & ~(1 << last)):
                grow(chain + (j,), j)

        for i in _bits(mask):
            grow((i,), i)
        self._chain_cache[mask] = out
        return out

    def chains(self, n: int, subset: Iterable[Label] | None = None) -> list[tuple]:
        """Chains x_0 < ... < x_n inside the subset (n + 1 points)."""
        mask = self.full_mask if subset is None else self.mask(subset)
        e = self.elements
        return [tuple(e[i] for i in c) for c in self.chain_indices(mask) if len(c) == n + 1]

    def dimension(self, subset: Iterable[Label] | None = None) -> int:
        """Length of the longest chain; -1 for the empty space."""
        mask = self.full_mask if subset is None else self.mask(subset)
        return max((len(c) - 1 for c in self.chain_indices(mask)), default=-1)

    # ---- derived spaces

    def subspace(self, subset: Iterable[Label]) -> Poset:
        m = self.mask(subset) if not isinstance(subset, int) else subset
        keep = list(_bits(m))
        e = self.elements
        sub = Poset.__new__(Poset)
        sub.elements = tuple(e[i] for i in keep)
        sub.index = {x: k for k, x in enumerate(sub.elements)}
        pos = {i: k for k, i in enumerate(keep)}
        sub._up = tuple(sum(1 << pos[j] for j in _bits(self._up[i] & m)) for i in keep)
        sub._down = tuple(sum(1 << pos[j] for j in _bits(self._down[i] & m)) for i in keep)
        sub.name = None
        sub._covers = None
        sub._chain_cache = {}
        return sub

    def dual(self) -> Poset:
        """Same points, opposite order: opens and closeds swap."""
        d = Poset.__new__(Poset)
        d.elements = self.elements
        d.index = dict(self.index)
        d._up, d._down = self._down, self._up
        d.name = None if self.name is None else self.name + "^"
        d._covers = None
        d._chain_cache = {}
        return d

    def relabel(self, names: Mapping[Label, Label] | Sequence[Label]) -> Poset:
        if isinstance(names, Mapping):
            new = [names[x] for x in self.elements]
        else:
            new = list(names)
        return Poset(new, [(new[i], new[j]) for i, j in self.covers()], self.name)

    def components(self) -> list[frozenset]:
        parent = list(range(len(self)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in self.covers():
            parent[find(i)] = find(j)
        groups = {}
        for i in range(len(self)):
            groups.setdefault(find(i), []).append(self.elements[i])
        return [frozenset(g) for g in groups.values()]

    def minimum(self) -> Label | None:
        for i, u in enumerate(self._up):
            if u == self.full_mask:
                return self.elements[i]
        return None

    def maximum(self) -> Label | None:
        for i, d in enumerate(self._down):
            if d == self.full_mask:
                return self.elements[i]
        return None

    def minimal_elements(self) -> list[Label]:
        return [self.elements[i] for i, d in enumerate(self._down) if d == 1 << i]

    def maximal_elements(self) -> list[Label]:
        return [self.elements[i] for i, u in enumerate(self._up) if u == 1 << i]


class MonotoneMap:
    """A continuous map of finite spaces, i.e. an order-preserving one."""

    def __init__(self, source: Poset, target: Poset, assignment: Mapping[Label, Label],
                 check: bool = True, name: str | None = None):
        self.source = source
        self.target = target
        self.name = name
        try:
            self._img = tuple(target.ix(assignment[x]) for x in source.elements)
        except KeyError as exc:
            raise ValueError(f"map is not defined on, or sends outside the target: {exc}") from None
        if check:
            for i, j in source.covers():
                a, b = self._img[i], self._img[j]
                if not (target.up_mask(a) >> b & 1):
                    raise ValueError(f"map is not monotone: {source.elements[i]!r} <= "
                                     f"{source.elements[j]!r} but images are not ordered")

    @classmethod
    def _from_indices(cls, source, target, img, name=None):
        f = cls.__new__(cls)
        f.source, f.target, f.name = source, target, name
        f._img = tuple(img)
        return f

    def __call__(self, x: Label) -> Label:
        return self.target.elements[self._img[self.source.ix(x)]]

    def image_index(self, i: int) -> int:
        return self._img[i]

    @property
    def assignment(self) -> dict:
        t = self.target.elements
        return {x: t[k] for x, k in zip(self.source.elements, self._img)}

    def __eq__(self, other):
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self._img == other._img

    def __hash__(self):
        return hash((self.source, self.target, self._img))

    def __repr__(self):
        body = " ".join(f"{x}:{y}" for x, y in self.assignment.items())
        return f"MonotoneMap({body})"

    def preimage_mask(self, tmask: int) -> int:
        m = 0
        for i, k in enumerate(self._img):
            if tmask >> k & 1:
                m |= 1 << i
        return m

    def image_mask(self, smask: int) -> int:
        m = 0
        for i in _bits(smask):
            m |= 1 << self._img[i]
        return m

    def preimage(self, subset: Iterable[Label]) -> frozenset:
        return self.source.labels(self.preimage_mask(self.target.mask(subset)))

    def fiber(self, y: Label) -> frozenset:
        return self.preimage([y])

    def image(self) -> frozenset:
        return self.target.labels(self.image_mask(self.source.full_mask))

    def after(self, other: MonotoneMap) -> MonotoneMap:
        """self o other."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return MonotoneMap._from_indices(other.source, self.target,
                                         [self._img[k] for k in other._img])

    def dual(self) -> MonotoneMap:
        return MonotoneMap._from_indices(self.source.dual(), self.target.dual(), self._img)

    def restrict(self, subset: Iterable[Label]) -> MonotoneMap:
        """Restriction to a subspace of the source (same target)."""
        sub = self.source.subspace(subset)
        return MonotoneMap._from_indices(sub, self.target, [self._img[self.source.ix(x)] for x in sub.elements])


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """g o f."""
    return g.after(f)


def identity_map(x: Poset) -> MonotoneMap:
    return MonotoneMap._from_indices(x, x, range(len(x)))


def inclusion(x: Poset, subset: Iterable[Label]) -> MonotoneMap:
    sub = x.subspace(subset)
    return MonotoneMap._from_indices(sub, x, [x.ix(e) for e in sub.elements])


def to_point(x: Poset, pt: Poset | None = None) -> MonotoneMap:
    pt = point() if pt is None else pt
    if len(pt) != 1:
        raise ValueError("target must have one point")
    return MonotoneMap._from_indices(x, pt, [0] * len(x))


def dual(obj):
    """Dual space, or dual map, with the order reversed."""
    return obj.dual()


def up_set(x: Poset, p: Label) -> frozenset:
    return x.up_set(p)


def down_set(x: Poset, p: Label) -> frozenset:
    return x.down_set(p)


def chains(x: Poset, n: int, subset: Iterable[Label] | None = None) -> list[tuple]:
    return x.chains(n, subset)


# ---------------------------------------------------------------------------
# constructions


def point(label: Label = "p") -> Poset:
    return Poset([label], name="pt")


def interval() -> Poset:
    """The Sierpinski space {0 < 1}."""
    return Poset(["0", "1"], [("0", "1")], name="Sigma")


def antichain(n: int) -> Poset:
    return Poset([f"x{i}" for i in range(n)])


def pseudocircle() -> Poset:
    """Four-point model of the circle: a, b < c, d."""
    return Poset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")], name="S1")


def sphere_model(n: int) -> Poset:
    """Minimal finite model of the n-sphere: levels {a_i, b_i}, level i below level j for i < j."""
    if n < 0:
        raise ValueError("sphere dimension must be >= 0")
    elems = []
    rels = []
    for i in range(n + 1):
        elems += [f"a{i}", f"b{i}"]
        if i:
            for lo in (f"a{i-1}", f"b{i-1}"):
                for hi in (f"a{i}", f"b{i}"):
                    rels.append((lo, hi))
    return Poset(elems, rels, name=f"S{n}")


def cone_over(x: Poset, apex: Label = "m") -> Poset:
    """x with a new maximum added."""
    return Poset(list(x.elements) + [apex],
                 x.cover_relations() + [(e, apex) for e in x.maximal_elements()])


def fiber_product(f: MonotoneMap, g: MonotoneMap) -> tuple[Poset, MonotoneMap, MonotoneMap]:
    """X x_Y Ybar = {(x, ybar) : f(x) = g(ybar)} with the product order and both projections."""
    if f.target != g.target:
        raise ValueError("fiber product needs a common target")
    X, Yb = f.source, g.source
    pts = [(i, k) for i in range(len(X)) for k in range(len(Yb)) if f._img[i] == g._img[k]]
    labels = [(X.elements[i], Yb.elements[k]) for i, k in pts]
    rels = []
    for a, (i, k) in enumerate(pts):
        for b, (j, l) in enumerate(pts):
            if a != b and X.up_mask(i) >> j & 1 and Yb.up_mask(k) >> l & 1:
                rels.append((labels[a], labels[b]))
    P = Poset(labels, rels)
    p1 = MonotoneMap._from_indices(P, X, [i for i, _ in pts])
    p2 = MonotoneMap._from_indices(P, Yb, [k for _, k in pts])
    return P, p1, p2


def barycentric(x: Poset) -> tuple[Poset, MonotoneMap]:
    """Nonempty chains ordered by inclusion, with the map sending a chain to its top point."""
    ch = x.chain_indices()
    e = x.elements
    labels = [tuple(e[i] for i in c) for c in ch]
    sets = [frozenset(c) for c in ch]
    rels = [(labels[a], labels[b]) for a in range(len(ch)) for b in range(len(ch))
            if a != b and sets[a] < sets[b]]
    bx = Poset(labels, rels)
    return bx, MonotoneMap._from_indices(bx, x, [c[-1] for c in ch])


def face_poset(facets: Iterable[Iterable[Label]]) -> Poset:
    """Nonempty faces of the simplicial complex with the given facets, ordered by inclusion.

    A face is labelled by its vertices joined with '.', in sorted order.
    """
    faces = set()
    for f in facets:
        verts = sorted(set(f), key=str)
        for k in range(1, len(verts) + 1):
            faces.update(combinations(verts, k))
    faces = sorted(faces, key=lambda c: (len(c), tuple(map(str, c))))
    name = {c: ".".join(map(str, c)) for c in faces}
    rels = [(name[a], name[b]) for a in faces for b in faces
            if len(b) == len(a) + 1 and set(a) < set(b)]
    return Poset([name[c] for c in faces], rels)


def projective_plane() -> Poset:
    """Face poset of the six-vertex triangulation of the real projective plane."""
    tri = ["124", "126", "135", "136", "145", "234", "235", "256", "346", "456"]
    return face_poset([list(t) for t in tri])


def product_poset(x: Poset, y: Poset) -> Poset:
    pts = list(product(x.elements, y.elements))
    rels = [((a, b), (c, b)) for a, c in x.cover_relations() for b in y.elements]
    rels += [((a, b), (a, d)) for b, d in y.cover_relations() for a in x.elements]
    return Poset(pts, rels)


# ---------------------------------------------------------------------------
# point-set predicates


def is_closed_map(f: MonotoneMap) -> bool:
    """Every restriction C_x -> C_f(x) is onto."""
    X, Y = f.source, f.target
    return all(f.image_mask(X.down_mask(i)) == Y.down_mask(f._img[i]) for i in range(len(X)))


def is_open_map(f: MonotoneMap) -> bool:
    """Every restriction U_x -> U_f(x) is onto."""
    X, Y = f.source, f.target
    return all(f.image_mask(X.up_mask(i)) == Y.up_mask(f._img[i]) for i in range(len(X)))


def maps_closed_sets_to_closed_sets(f: MonotoneMap) -> bool:
    """The definition of a closed map, checked on every closed subset."""
    Y = f.target
    return all(Y.down_closure_mask(f.image_mask(c)) == f.image_mask(c) for c in f.source.closed_masks())


def maps_open_sets_to_open_sets(f: MonotoneMap) -> bool:
    Y = f.target
    return all(Y.up_closure_mask(f.image_mask(u)) == f.image_mask(u) for u in f.source.open_masks())


# ---------------------------------------------------------------------------
# isomorphism and enumeration


def _signature(x: Poset, i: int):
    return (bin(x.up_mask(i)).count("1"), bin(x.down_mask(i)).count("1"))


def find_isomorphism(x: Poset, y: Poset) -> dict | None:
    """An order isomorphism x -> y as a label dict, or None."""
    n = len(x)
    if n != len(y):
        return None
    sx = [_signature(x, i) for i in range(n)]
    sy = [_signature(y, i) for i in range(n)]
    if sorted(sx) != sorted(sy):
        return None
    assign = [-1] * n
    used = [False] * n

    def ok(i, k):
        for j in range(i):
            kj = assign[j]
            if bool(x.up_mask(j) >> i & 1) != bool(y.up_mask(kj) >> k & 1):
                return False
            if bool(x.up_mask(i) >> j & 1) != bool(y.up_mask(k) >> kj & 1):
                return False
        return True

    def rec(i):
        if i == n:
            return True
        for k in range(n):
            if not used[k] and sx[i] == sy[k] and ok(i, k):
                assign[i] = k
                used[k] = True
                if rec(i + 1):
                    return True
                used[k] = False
        return False

    if not rec(0):
        return None
    return {x.elements[i]: y.elements[assign[i]] for i in range(n)}


def is_isomorphic(x: Poset, y: Poset) -> bool:
    return find_isomorphism(x, y) is not None


def _canonical_code(n: int, up: Sequence[int]):
    best = None
    for perm in permutations(range(n)):
        code = tuple(sorted((perm[i], perm[j]) for i in range(n) for j in _bits(up[i]) if i != j))
        if best is None or code < best:
            best = code
    return best


def posets_up_to_iso(n: int) -> list[Poset]:
    """One representative of every isomorphism class of posets on n points.

    Brute force over relation sets closed under transitivity; fine for n <= 5.
    """
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = set()
    out = []
    # only relations i < j on labels, since every poset has a linear extension
    pairs = [(i, j) for i, j in pairs if i < j]
    for bits in range(1 << len(pairs)):
        up = [1 << i for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                up[i] |= 1 << j
        closed = True
        for i in range(n):
            for j in _bits(up[i]):
                if up[j] & ~up[i]:
                    closed = False
                    break
            if not closed:
                break
        if not closed:
            continue
        code = _canonical_code(n, up)
        if code in seen:
            continue
        seen.add(code)
        labels = [f"x{i}" for i in range(n)]
        rels = [(labels[i], labels[j]) for i in range(n) for j in _bits(up[i]) if i != j]
        out.append(Poset(labels, rels))
    return out


def monotone_maps(x: Poset, y: Poset) -> list[MonotoneMap]:
    """All monotone maps x -> y."""
    n = len(x)
    out = []
    img = [0] * n
    # assign in an order compatible with the covers
    def rec(i):
        if i == n:
            out.append(MonotoneMap._from_indices(x, y, img))
            return
        for k in range(len(y)):
            good = True
            for j in range(i):
                if x.up_mask(j) >> i & 1 and not (y.up_mask(img[j]) >> k & 1):
                    good = False
                    break
                if x.up_mask(i) >> j & 1 and not (y.up_mask(k) >> img[j] & 1):
                    good = False
                    break
            if good:
                img[i] = k
                rec(i + 1)

    rec(0)
    return out


def automorphisms(x: Poset) -> list[tuple[int, ...]]:
    n = len(x)
    out = []
    for perm in permutations(range(n)):
        if all((x.up_mask(perm[i]) >> perm[j] & 1) == (x.up_mask(i) >> j & 1)
               for i in range(n) for j in range(n)):
            out.append(perm)
    return out


def maps_up_to_iso(x: Poset, y: Poset) -> list[MonotoneMap]:
    """Monotone maps x -> y modulo automorphisms of x and of y."""
    ax, ay = automorphisms(x), automorphisms(y)
    seen = set()
    out = []
    for f in monotone_maps(x, y):
        img = f._img
        if img in seen:
            continue
        out.append(f)
        for s in ax:
            # f o s^-1 relabels the source; t o f relabels the target
            inv = [0] * len(s)
            for i, k in enumerate(s):
                inv[k] = i
            for t in ay:
                seen.add(tuple(t[img[inv[i]]] for i in range(len(x))))
    return out


def random_poset(n: int, rng, density: float = 0.35, prefix: str = "p") -> Poset:
    """Random poset: random relations between labelled points i < j, then closure."""
    labels = [f"{prefix}{i}" for i in range(n)]
    rels = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset(labels, rels)
