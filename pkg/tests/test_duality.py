import random

from conftest import posets
from hypothesis import given
from hypothesis import strategies as st
from oracles import cohomology_from_homology, cohomology_open_support, relative_homology

from finspace.complexes import godement_cochain_complex, sheaf_hom_complex
from finspace.derived import cohomology_table, local_cohomology_complex
from finspace.duality import (codualizing_complex, codualizing_stalk_oracle, dhom,
                              dhom_adjunction_groups, dualizing_complex, dualizing_stalk_oracle,
                              gorenstein_check, hat, stalk_invariants, universal_coefficient_dual,
                              verify_dualizing_pairing, verify_homology_cohomology_duality,
                              verify_support_duality, verify_topological_duality)
from finspace.poset import Poset, antichain, interval, projective_plane, pseudocircle, sphere_model
from finspace.sheafdata import constant_data, random_data, sections, support_constant
from finspace.zlin import FgAbGroup, GroupComplex


@given(posets(max_size=5))
def test_dualizing_stalks_match_relative_cohomology(x):
    dx = dualizing_complex(x)
    for p in x.elements:
        expected = universal_coefficient_dual(cohomology_open_support(x, x.up_set(p)))
        assert stalk_invariants(dx, p) == expected == dualizing_stalk_oracle(x, p)


@given(posets(max_size=5))
def test_codualizing_stalks_match_local_cohomology(x):
    ux = codualizing_complex(x)
    for p in x.elements:
        assert stalk_invariants(ux, p) == codualizing_stalk_oracle(x, p)


@given(posets(max_size=5))
def test_codualizing_stalk_is_relative_homology_of_star(x):
    # (D^X)_p = H^*_{C_p}(X, Z) = relative cohomology of (K(X), K(X - C_p))
    ux = codualizing_complex(x)
    for p in x.elements:
        rest = [i for i, q in enumerate(x.elements) if q not in x.down_set(p)]
        rel = relative_homology(x, rest)
        assert stalk_invariants(ux, p) == cohomology_from_homology(rel)


def test_dualizing_complex_degrees():
    s = sphere_model(2)
    assert dualizing_complex(s).lo == -2
    assert codualizing_complex(s).hi == 2


@given(posets(max_size=4), st.integers(0, 10 ** 6))
def test_topological_duality(x, seed):
    f = random_data(x, random.Random(seed))
    assert verify_topological_duality(x, f).holds


@given(posets(max_size=4), st.integers(0, 10 ** 6))
def test_homology_cohomology_duality(x, seed):
    f = random_data(x, random.Random(seed))
    g = GroupComplex(0, [FgAbGroup.cyclic(2)])
    assert verify_homology_cohomology_duality(x, f).holds
    assert verify_homology_cohomology_duality(x, f, g).holds


@given(posets(max_size=5), st.data())
def test_support_duality(x, data):
    y = data.draw(st.sampled_from(x.closeds()))
    assert verify_support_duality(x, y).holds
    assert verify_homology_cohomology_duality(x, closed=y).holds


@given(posets(max_size=4), st.integers(0, 10 ** 6))
def test_dualizing_pairing(x, seed):
    assert verify_dualizing_pairing(x, random_data(x, random.Random(seed))).holds


def test_dual_space_has_the_same_cohomology():
    x = projective_plane()
    assert cohomology_table(constant_data(x.dual())) == cohomology_table(constant_data(x))


def test_hat_of_constant_is_constant_on_the_dual():
    s = pseudocircle()
    h = hat(constant_data(s))
    assert h.base == s.dual()
    assert h.cohomology_invariants() == {0: {p: (1, ()) for p in s.elements}}


def test_dhom_of_open_support_is_closed_support_on_the_dual():
    s = interval()
    d = dhom(support_constant(s, ["1"]), constant_data(s)).terms[0]
    # stalk at q of DHom(F, Z) is Hom(F_q, Z), restrictions dualized
    assert [g.invariants for g in d.stalks] == [(0, ()), (1, ())]


@given(posets(max_size=4), st.integers(0, 10 ** 6))
def test_dhom_adjunction(x, seed):
    rng = random.Random(seed)
    t = random_data(x.dual(), rng)
    f = random_data(x, rng)
    lhs, rhs = dhom_adjunction_groups(t, f, constant_data(x))
    assert lhs == rhs


def test_spheres_are_gorenstein():
    for n in range(4):
        rep = gorenstein_check(sphere_model(n))
        assert rep.homological and rep.degree == n
        assert rep.dual_matches


def test_dual_of_codualizing_is_dualizing_on_small_spheres():
    for n in range(3):
        s = sphere_model(n)
        ux = codualizing_complex(s)
        d = sheaf_hom_complex(ux, godement_cochain_complex(constant_data(s)))
        assert d.cohomology_invariants() == dualizing_complex(s).cohomology_invariants()


def test_projective_plane_is_not_orientable_gorenstein():
    rep = gorenstein_check(projective_plane())
    # the orientation data exists but is not constant
    assert rep.homological and rep.degree == 2
    assert rep.orientation.stalk_at(0).invariants == (1, ())
    assert sections(projective_plane().elements, rep.orientation).is_zero()
    assert rep.dual_matches


def test_non_gorenstein_spaces():
    assert gorenstein_check(antichain(1)).homological
    tri = Poset("abcm", [("a", "m"), ("b", "m"), ("c", "m")])
    assert gorenstein_check(tri).verdict == "neither"


def test_local_cohomology_of_a_point_in_a_sphere():
    s = sphere_model(2)
    p = s.minimal_elements()[0]
    assert local_cohomology_complex(constant_data(s), s.down_set(p)).invariants() == {2: (1, ())}
