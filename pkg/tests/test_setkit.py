import pytest
from hypothesis import given, settings, strategies as st

from commapres.errors import CompositionError, ShapeError, UniversalPropertyError
from commapres.setkit import (
    FinMap, FinSet, Span, UnionFind, all_maps, compose, compose_all, constant, coequalizer, copair,
    coproduct, empty_map, identity, inverse, is_iso, pushout, pushout_mediator, quotient,
)

from conftest import maps, spans
from oracles import mediators, pushout_partition, same_partition


def test_finmap_rejects_out_of_range_entries():
    with pytest.raises(ShapeError):
        FinMap(FinSet(2), FinSet(2), (0, 2))
    with pytest.raises(ShapeError):
        FinMap(FinSet(2), FinSet(3), (0,))


def test_json_round_trip():
    f = FinMap(FinSet(3), FinSet(2), (1, 0, 1))
    assert FinMap.from_json(f.to_json()) == f
    assert f.to_json() == {"dom": {"size": 3, "labels": None}, "cod": {"size": 2, "labels": None}, "table": [1, 0, 1]}
    assert FinSet.from_json(4) == FinSet(4)


def test_compose_checks_types():
    f = FinMap(FinSet(2), FinSet(3), (0, 2))
    with pytest.raises(CompositionError):
        compose(f, f)
    g = FinMap(FinSet(3), FinSet(1), (0, 0, 0))
    assert compose(g, f).table == (0, 0)
    assert (g @ f) == compose(g, f)


@given(maps(), st.data())
def test_category_laws(f, data):
    g = data.draw(maps(dom_size=f.cod.size))
    h = data.draw(maps(dom_size=g.cod.size))
    assert compose(identity(f.cod), f) == f == compose(f, identity(f.dom))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f) == compose_all(h, g, f)


def test_inverse_and_iso():
    f = FinMap(FinSet(3), FinSet(3), (2, 0, 1))
    assert is_iso(f)
    assert compose(inverse(f), f) == identity(FinSet(3))
    assert not is_iso(FinMap(FinSet(2), FinSet(2), (0, 0)))
    with pytest.raises(ShapeError):
        inverse(constant(FinSet(2), FinSet(1), 0))


def test_empty_set_edge_cases():
    e = empty_map(FinSet(3))
    assert e.dom.size == 0 and e.cod.size == 3
    po = pushout(Span(empty_map(FinSet(2)), empty_map(FinSet(1))))
    assert po.apex.size == 3
    assert po.inj_left.table == (0, 1) and po.inj_right.table == (2,)


def test_union_find_numbers_classes_by_least_member():
    uf = UnionFind(5)
    uf.union(4, 1)
    uf.union(3, 0)
    assert uf.canonical_labels() == (3, (0, 1, 2, 0, 1))


def test_quotient_and_coequalizer():
    q = quotient(FinSet(4), [(3, 2)])
    assert q.table == (0, 1, 2, 2)
    f = FinMap(FinSet(1), FinSet(3), (0,))
    g = FinMap(FinSet(1), FinSet(3), (2,))
    Q, e = coequalizer(f, g)
    assert Q.size == 2 and e.table == (0, 1, 0)


def test_coproduct_and_copair():
    S, inl, inr = coproduct(FinSet(2), FinSet(1))
    assert S.size == 3 and inr.table == (2,)
    h = copair(FinMap(FinSet(2), FinSet(2), (1, 1)), FinMap(FinSet(1), FinSet(2), (0,)))
    assert compose(h, inl).table == (1, 1) and compose(h, inr).table == (0,)


def test_pushout_of_two_point_gluing():
    # glue two points of a 3-set to a single point
    left = FinMap(FinSet(2), FinSet(3), (0, 2))
    right = FinMap(FinSet(2), FinSet(1), (0, 0))
    po = pushout(Span(left, right))
    assert po.apex.size == 2
    assert po.inj_left.table == (0, 1, 0)
    assert po.inj_right.table == (0,)


@settings(max_examples=200)
@given(spans())
def test_pushout_matches_component_oracle(s):
    po = pushout(s)
    labels = po.inj_left.table + po.inj_right.table
    assert same_partition(labels, pushout_partition(s.left, s.right))
    assert compose(po.inj_left, s.left) == compose(po.inj_right, s.right)


@settings(max_examples=100)
@given(spans(max_size=4), st.integers(1, 3), st.data())
def test_pushout_mediator_is_the_unique_solution(s, z, data):
    po = pushout(s)
    Z = FinSet(z)
    a = data.draw(maps(dom_size=s.left.cod.size, cod_size=z))
    b = data.draw(maps(dom_size=s.right.cod.size, cod_size=z))
    solutions = mediators(po.apex, Z, [(po.inj_left, a), (po.inj_right, b)])
    if compose(a, s.left) == compose(b, s.right):
        assert [pushout_mediator(po, a, b).table] == solutions
    else:
        assert solutions == []
        with pytest.raises(UniversalPropertyError):
            pushout_mediator(po, a, b)


def test_pushout_mediator_rejects_mistyped_cocone():
    po = pushout(Span(identity(FinSet(1)), identity(FinSet(1))))
    with pytest.raises(ShapeError):
        pushout_mediator(po, identity(FinSet(2)), identity(FinSet(1)))


def test_all_maps_is_lexicographic():
    tables = [f.table for f in all_maps(FinSet(2), FinSet(2))]
    assert tables == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [f.table for f in all_maps(FinSet(0), FinSet(0))] == [()]
