import random

import pytest
from hypothesis import given, settings, strategies as st

from commapres.chains import colimit, colimit_over, mediate
from commapres.endo import (
    CATALOG, IDENTITY, Mode, PolyFunctor, TAElement, apply_map, apply_obj, catalog, decode, decompose,
    elements, encode, is_identity, map_chain,
)
from commapres.randgen import random_chain
from commapres.setkit import FinMap, FinSet, compose, identity, is_iso

from conftest import maps
from oracles import apply_map_naive

functors = st.sampled_from(CATALOG)


def test_catalog_sizes():
    sizes = {T.name: apply_obj(T, FinSet(2)).size for T in CATALOG}
    assert sizes == {"Id": 2, "1": 1, "2": 2, "1+X": 3, "X^2": 4, "2+X^3": 10}
    assert catalog("X^2").summands == ((1, 2),)
    with pytest.raises(KeyError):
        catalog("X^9")


def test_enumeration_is_lexicographic_and_big_endian():
    T = catalog("2+X^3")
    X = FinSet(2)
    els = list(elements(T, X))
    assert els[:3] == [TAElement(0, 0, ()), TAElement(0, 1, ()), TAElement(1, 0, (0, 0, 0))]
    assert els[3] == TAElement(1, 0, (0, 0, 1))
    for n, e in enumerate(els):
        assert encode(T, X, e) == n and decode(T, X, n) == e


def test_swap_under_square():
    T = catalog("X^2")
    swap = FinMap(FinSet(2), FinSet(2), (1, 0))
    # (a, b) -> (swap a, swap b): 00->11, 01->10, 10->01, 11->00
    assert apply_map(T, swap).table == (3, 2, 1, 0)


def test_json_and_names():
    T = PolyFunctor(((3, 0), (1, 2)))
    assert T.name == "3 + X^2"
    assert PolyFunctor.from_json(T.to_json()) == T
    assert T(FinSet(2)).size == 7


@settings(max_examples=300)
@given(functors, maps(max_size=4))
def test_apply_map_matches_elementwise_oracle(T, f):
    assert list(apply_map(T, f).table) == apply_map_naive(T, f)


@settings(max_examples=300)
@given(functors, maps(max_size=3), st.data())
def test_functor_laws(T, f, data):
    g = data.draw(maps(dom_size=f.cod.size, max_size=3))
    assert apply_map(T, identity(f.dom)) == identity(apply_obj(T, f.dom))
    assert apply_map(T, compose(g, f)) == compose(apply_map(T, g), apply_map(T, f))


def accessibility_comparison(T, c):
    col = colimit(c)
    Tc = map_chain(T, c)
    H = c.horizon
    col_T = colimit_over(Tc.index, {n: Tc.obj(n) for n in range(H + 1)}, {(n, n + 1): Tc.step(n) for n in range(H)})
    return mediate(col_T, {n: apply_map(T, col.leg(n)) for n in range(H + 1)})


@settings(max_examples=300)
@given(functors, st.integers(0, 10 ** 6), st.integers(0, 3))
def test_polynomial_functors_preserve_chain_colimits(T, seed, size):
    comparison = accessibility_comparison(T, random_chain(random.Random(seed), size))
    assert is_iso(comparison)
    assert comparison.cod == apply_obj(T, colimit(random_chain(random.Random(seed), size)).apex)


def test_identity_functor():
    f = FinMap(FinSet(2), FinSet(3), (2, 0))
    assert apply_map(IDENTITY, f) == f
    assert is_identity(identity(FinSet(2))) and not is_identity(f)


@pytest.mark.parametrize("size", [0, 1, 4])
def test_decompose_modes(size):
    X = FinSet(size)
    trivial = decompose(X, Mode.TRIVIAL)
    assert trivial.N == 0 and colimit(trivial).apex == X
    filt = decompose(X, "filtration")
    col = colimit(filt)
    assert col.apex == X
    assert [filt.obj(j).size for j in range(size + 1)] == list(range(size + 1)) or size == 0
    for j in range(size + 1):
        assert col.leg(j).table == tuple(range(j))
