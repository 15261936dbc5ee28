import random

import pytest
from conftest import posets
from hypothesis import given
from hypothesis import strategies as st

from finspace.poset import interval, pseudocircle, sphere_model
from finspace.sheafdata import (AbelianData, Z, constant_data, cosections, direct_image,
                                hom_group, inverse_image, random_basis_change, random_data,
                                sections, shriek_image, support_constant, tensor)
from finspace.poset import to_point
from finspace.zlin import FgAbGroup, IntMatrix


def test_constant_sections_count_components():
    s = pseudocircle()
    f = constant_data(s)
    assert sections(s.elements, f).invariants == (1, ())
    assert sections(["a", "b"], f).invariants == (2, ())
    assert cosections(s.elements, f).invariants == (1, ())


def test_open_support_sections():
    s = interval()
    f = support_constant(s, ["1"])
    # sections over X of Z supported on the open point vanish, cosections do not
    assert sections(s.elements, f).is_zero()
    assert cosections(s.elements, f).invariants == (1, ())


def test_hom_between_open_supports():
    x = sphere_model(1)
    for p in x.elements:
        for q in x.elements:
            h = hom_group(support_constant(x, x.up_set(p)), support_constant(x, x.up_set(q)))
            expected = (1, ()) if x.leq(q, p) else (0, ())
            assert h.invariants == expected


def test_functoriality_is_checked():
    x = interval()
    g = FgAbGroup.free(1)
    with pytest.raises(ValueError):
        AbelianData(x, [g, FgAbGroup.cyclic(2)], {})
    AbelianData(x, [g, g], {("0", "1"): IntMatrix([[3]])})
    with pytest.raises(ValueError):
        AbelianData(x, [FgAbGroup.cyclic(2), g], {("0", "1"): IntMatrix([[1]])})


def test_path_independence_is_checked():
    s = pseudocircle()
    from finspace.poset import cone_over
    c = cone_over(s, "m")
    one = IntMatrix([[1]])
    res = {(a, b): one for a, b in c.cover_relations()}
    res[("c", "m")] = IntMatrix([[-1]])
    with pytest.raises(ValueError, match="path"):
        AbelianData(c, [Z] * 5, res)


@given(posets(max_size=5), st.integers(0, 10 ** 6))
def test_random_data_is_functorial(x, seed):
    f = random_data(x, random.Random(seed))
    assert f.is_functorial()
    g, to, frm = f.simplify()
    assert g.is_functorial()
    assert all(to.comp(i).shape == (g.stalk_at(i).ngens, f.stalk_at(i).ngens) for i in range(len(x)))


@given(posets(max_size=5), st.integers(0, 10 ** 6))
def test_basis_change_preserves_sections(x, seed):
    rng = random.Random(seed)
    f = random_data(x, rng)
    g = random_basis_change(f, rng)
    for m in x.opens()[:4]:
        assert sections(m, f) == sections(m, g)


def test_direct_images_to_a_point():
    s = pseudocircle()
    f = constant_data(s)
    p = to_point(s)
    assert direct_image(p, f).stalk("p").invariants == (1, ())
    assert shriek_image(p, f).stalk("p").invariants == (1, ())
    assert inverse_image(p, constant_data(p.target)) == f


def test_tensor_of_constants():
    x = interval()
    t = tensor(constant_data(x, FgAbGroup.cyclic(4)), constant_data(x, FgAbGroup.cyclic(6)))
    assert all(g.invariants == (0, (2,)) for g in t.stalks)
