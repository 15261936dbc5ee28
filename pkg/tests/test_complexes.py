import random

import pytest
from conftest import posets
from hypothesis import given
from hypothesis import strategies as st

from finspace.complexes import (DataComplex, cosection_complex, flat_resolution, godement_chain,
                                godement_cochain, godement_cochain_complex, has_free_stalks,
                                projective_replacement, projective_resolution, section_complex)
from finspace.derived import lgamma, rgamma
from finspace.poset import pseudocircle, sphere_model
from finspace.sheafdata import constant_data, random_data, support_constant
from finspace.zlin import FgAbGroup


def _augmented_right(f, c, eps):
    """0 -> F -> C^0 -> C^1 -> ... as one complex starting in degree -1."""
    return DataComplex(f.base, c.lo - 1, [f] + list(c.terms), [eps] + list(c.diffs))


def _augmented_left(f, c, eps):
    """... -> C_1 -> C_0 -> F -> 0 as one complex ending in degree 1."""
    return DataComplex(f.base, c.lo, list(c.terms) + [f], list(c.diffs) + [eps])


@given(posets(max_size=5), st.integers(0, 10 ** 6))
def test_godement_cochain_resolution_is_exact(x, seed):
    f = random_data(x, random.Random(seed))
    c, eps = godement_cochain(f)
    assert _augmented_right(f, c, eps).is_exact()


@given(posets(max_size=5), st.integers(0, 10 ** 6))
def test_godement_chain_resolution_is_exact(x, seed):
    f = random_data(x, random.Random(seed))
    c, eps = godement_chain(f)
    assert _augmented_left(f, c, eps).is_exact()


@given(posets(max_size=5), st.integers(0, 10 ** 6))
def test_projective_resolution_is_exact(x, seed):
    f = random_data(x, random.Random(seed))
    p, eps = projective_resolution(f)
    assert _augmented_left(f, p, eps).is_exact()


@given(posets(max_size=5), st.integers(0, 10 ** 6))
def test_flat_resolution_has_free_stalks(x, seed):
    f = random_data(x, random.Random(seed))
    p, eps = flat_resolution(f)
    assert has_free_stalks(p)
    assert _augmented_left(f, p, eps).is_exact()


@given(posets(max_size=4), st.integers(0, 10 ** 6))
def test_flasque_terms_are_acyclic(x, seed):
    f = random_data(x, random.Random(seed))
    c, _ = godement_cochain(f)
    for t in c.terms:
        for m in x.opens():
            assert set(rgamma(t, m).invariants()) <= {0}


@given(posets(max_size=4), st.integers(0, 10 ** 6))
def test_coflasque_terms_are_acyclic(x, seed):
    f = random_data(x, random.Random(seed))
    c, _ = godement_chain(f)
    for t in c.terms:
        for m in x.closeds():
            assert set(lgamma(t, m).invariants()) <= {0}


def test_godement_length_matches_dimension():
    s = sphere_model(2)
    c, _ = godement_cochain(constant_data(s))
    assert c.hi == 2


def test_section_complex_of_circle():
    s = pseudocircle()
    assert section_complex(DataComplex.from_data(constant_data(s))).complex.invariants() == {
        0: (1, ()), 1: (1, ())}
    assert cosection_complex(DataComplex.from_data(constant_data(s))).complex.invariants() == {
        0: (1, ()), -1: (1, ())}


def test_godement_of_a_complex_is_quasi_isomorphic():
    s = pseudocircle()
    f = support_constant(s, ["c", "d"], FgAbGroup.cyclic(3))
    c, _ = godement_cochain(f)
    total = godement_cochain_complex(c)
    assert rgamma(total).invariants() == rgamma(f).invariants()


def test_projective_replacement_needs_free_stalks():
    s = pseudocircle()
    c, _ = godement_cochain(constant_data(s, FgAbGroup.cyclic(2)))
    with pytest.raises(ValueError, match="free stalks"):
        projective_replacement(c)
