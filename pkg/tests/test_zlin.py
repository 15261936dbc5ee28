import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from finspace.zlin import (ChainMap, FgAbGroup, GroupComplex, GroupHom, IntMatrix, cone,
                           determinant, dual_group_complex, free_model, hom_space, induced_map_on_homology,
                           kernel_basis, smith_normal_form, solve, tensor_groups)


@st.composite
def matrices(draw, max_dim=6, bound=20):
    m = draw(st.integers(0, max_dim))
    n = draw(st.integers(0, max_dim))
    rows = [[draw(st.integers(-bound, bound)) for _ in range(n)] for _ in range(m)]
    return IntMatrix(rows, ncols=n)


def _check_smith(a):
    sf = smith_normal_form(a)
    m, n = a.shape
    assert sf.u @ a @ sf.v == sf.s
    assert sf.u @ sf.u_inv == IntMatrix.identity(m)
    assert sf.v @ sf.v_inv == IntMatrix.identity(n)
    if m:
        assert abs(determinant(sf.u)) == 1
    if n:
        assert abs(determinant(sf.v)) == 1
    d = sf.diagonal
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    for i in range(m):
        for j in range(n):
            if i != j or i >= len(d):
                assert sf.s[i, j] == 0
    return sf


@given(matrices())
def test_smith_identities(a):
    _check_smith(a)


@given(matrices(max_dim=5))
def test_smith_diagonal_matches_sympy(a):
    sf = smith_normal_form(a)
    if a.nrows and a.ncols:
        ref = [abs(int(x)) for x in invariant_factors(Matrix(a.tolist()), domain=ZZ) if x != 0]
    else:
        ref = []
    assert list(sf.diagonal) == ref


def test_smith_known_example():
    a = IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert smith_normal_form(a).diagonal == (2, 6, 12)


def test_smith_is_deterministic():
    a = IntMatrix([[0, 3, 6], [4, 0, 2], [1, 1, 1]])
    s1, s2 = smith_normal_form(a), smith_normal_form(a)
    assert s1.u == s2.u and s1.v == s2.v


@given(matrices(max_dim=5, bound=9), st.integers(0, 3))
def test_solve_recovers_solutions(a, k):
    rng = random.Random(a.nrows * 31 + a.ncols + k)
    x = IntMatrix([[rng.randint(-4, 4) for _ in range(k)] for _ in range(a.ncols)], ncols=k)
    b = a @ x
    y = solve(a, b)
    assert y is not None and a @ y == b


def test_solve_detects_no_solution():
    assert solve(IntMatrix([[2]]), IntMatrix([[1]])) is None


@given(matrices(max_dim=5))
def test_kernel_basis_spans_saturated_kernel(a):
    k = kernel_basis(a)
    assert (a @ k).is_zero()
    sf = smith_normal_form(a)
    assert k.ncols == a.ncols - sf.rank
    # saturation: the kernel basis extends to a unimodular matrix
    if k.ncols:
        assert smith_normal_form(k).diagonal == (1,) * k.ncols


def test_group_invariants_from_presentation():
    g = FgAbGroup(3, IntMatrix([[2, 0], [0, 3], [0, 0]]))
    assert g.invariants == (1, (6,))
    assert str(g) == "Z/6 + Z"
    assert FgAbGroup.from_invariants(2, (2, 4)).invariants == (2, (2, 4))
    assert FgAbGroup.cyclic(1).is_zero()


def test_group_membership_and_order():
    g = FgAbGroup.from_orders((2, 0))
    assert g.contains(IntMatrix([[4], [0]]))
    assert not g.contains(IntMatrix([[1], [0]]))
    assert FgAbGroup.from_orders((2, 3)).order() == 6
    assert FgAbGroup.free(1).order() == 0


def test_hom_space_sizes():
    z, z2, z4, z6 = FgAbGroup.free(1), FgAbGroup.cyclic(2), FgAbGroup.cyclic(4), FgAbGroup.cyclic(6)
    assert hom_space(z, z2).group.invariants == (0, (2,))
    assert hom_space(z2, z).group.is_zero()
    assert hom_space(z4, z6).group.invariants == (0, (2,))
    assert hom_space(FgAbGroup.free(2), FgAbGroup.free(3)).group.invariants == (6, ())


def test_tensor_of_cyclic_groups():
    assert tensor_groups(FgAbGroup.cyclic(4), FgAbGroup.cyclic(6)).invariants == (0, (2,))
    assert tensor_groups(FgAbGroup.free(2), FgAbGroup.cyclic(3)).invariants == (0, (3, 3))


def test_homomorphism_kernel_cokernel():
    h = GroupHom(FgAbGroup.free(1), FgAbGroup.free(1), IntMatrix([[2]]))
    assert h.is_injective() and not h.is_surjective()
    assert h.cokernel()[0].invariants == (0, (2,))
    with pytest.raises(ValueError):
        GroupHom(FgAbGroup.cyclic(2), FgAbGroup.free(1), IntMatrix([[1]]))


def _random_complex(rng, length=4, width=4):
    """A random cochain complex of free groups; each d is built from the left kernel of the previous one."""
    dims = [rng.randint(0, width) for _ in range(length)]
    diffs = []
    prev = None
    for k in range(length - 1):
        m, n = dims[k + 1], dims[k]
        if prev is None or n == 0:
            d = IntMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)], ncols=n)
        else:
            # choose d with d @ prev = 0 by building it from the left kernel of prev
            k_rows = kernel_basis(prev.T)
            coeffs = IntMatrix([[rng.randint(-2, 2) for _ in range(k_rows.ncols)] for _ in range(m)],
                               ncols=k_rows.ncols)
            d = coeffs @ k_rows.T if k_rows.ncols else IntMatrix.zeros(m, n)
        diffs.append(d)
        prev = d
    return GroupComplex(0, [FgAbGroup.free(d) for d in dims], diffs)


@given(st.integers(0, 10 ** 6))
def test_fast_invariants_match_explicit_homology(seed):
    c = _random_complex(random.Random(seed))
    assert c.invariants() == c.invariants_by_subquotient()


@given(st.integers(0, 10 ** 6))
def test_fast_invariants_with_torsion_terms(seed):
    rng = random.Random(seed)
    orders = [rng.choice([0, 2, 3, 4, 6]) for _ in range(3)]
    g = FgAbGroup.from_orders(orders)
    m = 12
    # d1: g -> Z/12 is well defined when a_i * o_i = 0 mod 12
    a = [rng.randint(-2, 2) * (m // gcd(o, m) if o else 1) for o in orders]
    cols = []
    while len(cols) < 2:
        v = [rng.randint(-3, 3) for _ in orders]
        if sum(x * y for x, y in zip(a, v)) % m == 0:
            cols.append(v)
    d0 = IntMatrix.from_columns(cols, 3)
    c = GroupComplex(0, [FgAbGroup.free(2), g, FgAbGroup.cyclic(m)], [d0, IntMatrix([a])])
    assert c.invariants() == c.invariants_by_subquotient()


def test_fast_invariants_non_diagonal_presentation():
    g = FgAbGroup(2, IntMatrix([[2, 4], [2, 6]]))
    c = GroupComplex(0, [FgAbGroup.free(2), g], [IntMatrix([[1, 0], [0, 1]])])
    # the kernel of Z^2 -> g is the relation lattice
    assert c.invariants() == c.invariants_by_subquotient() == {0: (2, ())}
    c2 = GroupComplex(0, [g, FgAbGroup.zero()], [IntMatrix.zeros(0, 2)])
    assert c2.invariants() == {0: (0, (2, 2))}


def test_cone_of_identity_is_acyclic():
    c = GroupComplex(0, [FgAbGroup.free(2), FgAbGroup.free(1)], [IntMatrix([[1, 1]])])
    ident = ChainMap(c, c, {0: IntMatrix.identity(2), 1: IntMatrix.identity(1)})
    assert cone(ident).is_exact()


def test_map_from_acyclic_complex_is_zero_on_homology():
    a = GroupComplex(0, [FgAbGroup.free(1), FgAbGroup.free(1)], [IntMatrix([[1]])])
    b = GroupComplex(0, [FgAbGroup.free(1), FgAbGroup.free(1)], [IntMatrix([[0]])])
    f = ChainMap(a, b, {0: IntMatrix([[1]]), 1: IntMatrix([[0]])})
    assert induced_map_on_homology(f, 1).is_zero()
    assert induced_map_on_homology(f, 0).is_zero()


@given(st.integers(0, 10 ** 6))
def test_free_model_is_quasi_isomorphic(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3, 4])
    g = FgAbGroup.cyclic(n)
    c = GroupComplex(0, [FgAbGroup.free(1), g, FgAbGroup.zero()],
                     [IntMatrix([[rng.randint(0, n - 1)]]), IntMatrix.zeros(0, 1)])
    model, proj = free_model(c)
    assert all(t.is_free() for t in model.terms)
    assert cone(proj).is_exact()


def test_dual_complex_universal_coefficients():
    c = GroupComplex(0, [FgAbGroup.cyclic(2)])
    assert dual_group_complex(c).invariants() == {1: (0, (2,))}
    z = GroupComplex(-1, [FgAbGroup.free(1), FgAbGroup.free(1)], [IntMatrix([[3]])])
    assert dual_group_complex(z).invariants() == {1: (0, (3,))}
