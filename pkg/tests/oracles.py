"""Independent reference computations used by the tests.

Everything here avoids the package's own linear algebra: simplicial
(co)homology of order complexes goes through sympy's Smith normal form, and
chains are enumerated directly from the order relation.
"""

from itertools import combinations

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors


def leq_table(x):
    n = len(x)
    return [[x.leq(x.elements[i], x.elements[j]) for j in range(n)] for i in range(n)]


def simplices(x, keep=None):
    """Chains of the order complex as sorted index tuples, grouped by dimension."""
    n = len(x)
    le = leq_table(x)
    pts = [i for i in range(n) if keep is None or i in keep]
    # order points so every chain is listed bottom to top
    pts.sort(key=lambda i: sum(le[j][i] for j in range(n)))
    out = {}
    for k in range(1, len(pts) + 1):
        layer = [c for c in combinations(pts, k)
                 if all(le[c[a]][c[a + 1]] for a in range(k - 1))]
        if not layer:
            break
        out[k - 1] = layer
    return out


def _boundary(big, small):
    pos = {s: i for i, s in enumerate(small)}
    rows = [[0] * len(big) for _ in small]
    for j, s in enumerate(big):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            if face in pos:
                rows[pos[face]][j] += (-1) ** i
    return rows


def _rank_and_torsion(rows, nrows, ncols):
    if nrows == 0 or ncols == 0:
        return 0, ()
    facs = invariant_factors(Matrix(rows), domain=ZZ)
    facs = [abs(int(f)) for f in facs if f != 0]
    return len(facs), tuple(f for f in facs if f > 1)


def relative_homology(x, sub=None):
    """{i: (rank, torsion)} of H_i(K(X), K(A)) where A is the set of points `sub`."""
    full = simplices(x)
    inner = simplices(x, set(sub)) if sub else {}
    cells = {k: [s for s in v if s not in set(inner.get(k, []))] for k, v in full.items()}
    top = max(cells) if cells else -1
    ranks, tors = {}, {}
    for k in range(1, top + 1):
        m = _boundary(cells[k], cells[k - 1])
        ranks[k], tors[k] = _rank_and_torsion(m, len(cells[k - 1]), len(cells[k]))
    out = {}
    for k in range(0, top + 1):
        free = len(cells[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        t = tors.get(k + 1, ())
        if free or t:
            out[k] = (free, t)
    return out


def cohomology_from_homology(h):
    """Universal coefficients: H^i has the rank of H_i and the torsion of H_(i-1)."""
    out = {}
    for i in set(h) | {i + 1 for i in h}:
        r = h.get(i, (0, ()))[0]
        t = h.get(i - 1, (0, ()))[1]
        if r or t:
            out[i] = (r, t)
    return out


def _tensor_cyclic(h, n):
    """Invariants of H_*(-; Z/n) from integral homology (n prime)."""
    out = {}
    for i in set(h) | {i + 1 for i in h}:
        r, t = h.get(i, (0, ()))
        count = r + sum(1 for d in t if d % n == 0)
        count += sum(1 for d in h.get(i - 1, (0, ()))[1] if d % n == 0)
        if count:
            out[i] = (0, (n,) * count)
    return out


def homology_mod_p(h, p):
    return _tensor_cyclic(h, p)


def sheaf_cohomology_constant(x):
    """H^i(X, Z) as the simplicial cohomology of the order complex."""
    return cohomology_from_homology(relative_homology(x))


def cohomology_open_support(x, open_set):
    """H^i(X, Z_U) for an open U: relative cohomology of (K(X), K(X - U))."""
    rest = [i for i in range(len(x)) if x.elements[i] not in set(open_set)]
    return cohomology_from_homology(relative_homology(x, rest))


def euler_characteristic(x):
    return sum((-1) ** k * len(v) for k, v in simplices(x).items())
