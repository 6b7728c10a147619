import json
import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from commapres.chains import NatChain
from commapres.comma import CommaDiagram, CommaMap, CommaObj, comma_colimit, identity_map
from commapres.construct import Presentation, Witness, build_generator, enum_D
from commapres.endo import IDENTITY, Mode, apply_map, catalog
from commapres.errors import PreconditionError
from commapres.randgen import random_comma_diagram, random_span_diagram, random_target, random_witness
from commapres.setkit import FinMap, FinSet, Span, compose, empty_map, identity
from commapres.verify import (
    Report, SpanDiagram, check_cofinality, check_lemma_G, check_lemma_H, check_poset, check_presentable,
    check_pushout_commute, generator_homs,
)

from oracles import components

seeds = st.integers(0, 10 ** 6)


def inclusion(n, m):
    return FinMap(FinSet(n), FinSet(m), tuple(range(n)))


def test_report_passes_iff_no_details():
    rep = Report("x", "y")
    assert rep.passed
    rep.expect("same", 1, 1)
    assert rep.passed
    rep.expect("differ", 1, 2)
    assert not rep.passed and rep.details == ["differ: 1 != 2"]
    data = rep.to_json()
    assert list(data) == ["schemaVersion", "check", "instance", "passed", "details", "data"]
    assert data["schemaVersion"] == 1


# -- presentability ------------------------------------------------------


def test_constant_diagram_at_the_generator():
    T = catalog("1+X")
    w = Witness(T, FinSet(1), FinSet(1), FinSet(1), FinMap(FinSet(1), FinSet(2), (1,)), identity(FinSet(1)))
    g = build_generator(w)
    d = CommaDiagram.chain(0, [g.obj] * 3, [identity_map(g.obj)] * 2)
    rep = check_presentable(g, d, morphisms=[identity_map(g.obj)])
    assert rep.passed, rep.details
    assert rep.data["runs"][0]["d0"] == 0


def test_empty_P_against_inclusion_diagram():
    T = IDENTITY
    w = Witness(T, FinSet(1), FinSet(0), FinSet(1), empty_map(FinSet(1)), empty_map(FinSet(1)))
    g = build_generator(w)
    objs = [
        CommaObj.finite(T, FinSet(1), FinSet(1), identity(FinSet(1))),
        CommaObj.finite(T, FinSet(2), FinSet(2), identity(FinSet(2))),
        CommaObj.finite(T, FinSet(2), FinSet(2), identity(FinSet(2))),
        CommaObj.finite(T, FinSet(2), FinSet(2), identity(FinSet(2))),
    ]
    steps = [CommaMap(inclusion(1, 2), inclusion(1, 2))] + [identity_map(objs[1])] * 2
    d = CommaDiagram.chain(1, objs, steps)
    rep = check_presentable(g, d)
    assert rep.passed, rep.details
    # U = T A + Q; beta is forced on T A and free on the single point of Q
    assert rep.data["morphisms"] == 4


def test_presentable_rejects_foreign_morphism():
    T = IDENTITY
    w = Witness(T, FinSet(1), FinSet(0), FinSet(0), empty_map(FinSet(1)), empty_map(FinSet(0)))
    g = build_generator(w)
    X = CommaObj.finite(T, FinSet(1), FinSet(2), FinMap(FinSet(1), FinSet(2), (0,)))
    d = CommaDiagram.chain(0, [X] * 3, [identity_map(X)] * 2)
    bad = CommaMap(identity(FinSet(1)), FinMap(FinSet(1), FinSet(2), (1,)))
    with pytest.raises(PreconditionError):
        check_presentable(g, d, morphisms=[bad])


def stage_factorizations(g, d, n, m, star, legs):
    """Brute force: every comma map g -> D_n whose composite with the leg is m."""
    obj = d.objects[min(n, max(d.objects))]
    out = []
    for at in product(range(obj.a.size), repeat=g.A.size):
        alpha = FinMap(g.A, obj.a, at)
        for bt in product(range(obj.b.size), repeat=g.U.size):
            beta = FinMap(g.U, obj.b, bt)
            x = CommaMap(alpha, beta)
            if compose(obj.f, apply_map(g.witness.T, alpha)) != compose(beta, g.fU):
                continue
            if x.then(legs[min(n, max(legs))]) == m:
                out.append(x)
    return out


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_presentable_agrees_with_exhaustive_factorization_search(seed):
    rng = random.Random(seed)
    w = random_witness(rng, 2)
    g = build_generator(w)
    d = random_comma_diagram(rng, 2, w.T)
    star, legs = comma_colimit(d)
    homs = list(generator_homs(g, star))
    # the hom enumeration agrees with brute force over all pairs of maps
    brute = [
        (at, bt)
        for at in product(range(star.a.size), repeat=g.A.size)
        for bt in product(range(star.b.size), repeat=g.U.size)
        if compose(star.f, apply_map(w.T, FinMap(g.A, star.a, at))) == compose(FinMap(g.U, star.b, bt), g.fU)
    ]
    assert sorted((m.alpha.table, m.beta.table) for m in homs) == sorted(brute)
    rep = check_presentable(g, d, morphisms=homs[:3])
    assert rep.passed, rep.details
    for m, run in zip(homs, rep.data["runs"]):
        assert stage_factorizations(g, d, run["d0"], m, star, legs), "the reported stage admits no factorization"


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_any_two_factorizations_meet_later(seed):
    rng = random.Random(seed)
    w = random_witness(rng, 2)
    g = build_generator(w)
    d = random_comma_diagram(rng, 2, w.T)
    star, legs = comma_colimit(d)
    H = max(d.objects)
    A, B = d.component_chain("A"), d.component_chain("B")
    # past the stabilization bound the steps are bijections, so factorizations that
    # meet at any later stage already agree at the last stored one
    for m in list(generator_homs(g, star))[:2]:
        assert check_presentable(g, d, morphisms=[m]).passed
        moved = set()
        for n in range(H + 1):
            for x in stage_factorizations(g, d, n, m, star, legs):
                moved.add((compose(A.transition(n, H), x.alpha).table, compose(B.transition(n, H), x.beta).table))
        assert len(moved) == 1


# -- the lemmas --------------------------------------------------------------


def test_lemma_G_trivial_mode():
    target = random_target(random.Random(1), 2)
    rep = check_lemma_G(target, 0, Mode.TRIVIAL)
    assert rep.passed and rep.data["jCount"] == 1


def test_lemma_G_filtration_with_four_elements():
    T = catalog("X^2")
    target = CommaObj.finite(T, FinSet(2), FinSet(3), FinMap(FinSet(4), FinSet(3), (2, 0, 1, 0)))
    rep = check_lemma_G(target, 0, Mode.FILTRATION)
    assert rep.passed, rep.details
    assert rep.data["size"] == 4 and rep.data["jCount"] == 5
    assert rep.data["comparisonsAreIdentities"]


def test_lemma_G_empty():
    T = catalog("X^2")
    target = CommaObj.finite(T, FinSet(0), FinSet(0), empty_map(FinSet(0)))
    assert check_lemma_G(target, 0).passed


def test_lemma_H_examples():
    T = IDENTITY
    constant = CommaObj.finite(T, FinSet(2), FinSet(2), identity(FinSet(2)))
    assert check_lemma_H(constant, 0, 1).passed
    from commapres.chains import StabChain
    B = StabChain.from_steps(2, [inclusion(1, 2), FinMap(FinSet(2), FinSet(1), (0, 0))])
    A = StabChain.constant(FinSet(1))
    target = CommaObj(T, A, B, FinMap(FinSet(1), FinSet(1), (0,)))
    rep = check_lemma_H(target, 0, 1)
    assert rep.passed, rep.details
    assert rep.data["kij"] == 0
    rep = check_lemma_H(target, 0, 0)  # P is empty
    assert rep.passed


@settings(max_examples=80, deadline=None)
@given(seeds, st.sampled_from(list(Mode)))
def test_lemmas_on_random_targets(seed, mode):
    rng = random.Random(seed)
    pres = Presentation(random_target(rng, 3), mode)
    i = rng.randint(0, pres.default_bounds[0])
    j = rng.randint(0, pres.j_bound(i))
    assert check_lemma_G(pres, i).passed
    assert check_lemma_H(pres, i, j).passed


# -- the poset checks ----------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from(list(Mode)))
def test_poset_and_cofinality_reports(seed, mode):
    rng = random.Random(seed)
    pres = Presentation(random_target(rng, 2), mode)
    elems = enum_D(pres)
    rep = check_poset(pres, elems, rng, pairs=50, chains=10, subsets=5)
    assert rep.passed, rep.details[:3]
    assert check_cofinality(pres, elems).passed


# -- pushouts against colimits ----------------------------------------------------


def constant_span_diagram(span, H=2):
    X0, V, X1 = span.left.cod, span.apex, span.right.cod
    return SpanDiagram(
        NatChain(0),
        {n: span for n in range(H + 1)},
        {(n, n + 1): (identity(X0), identity(V), identity(X1)) for n in range(H)},
    )


def test_commute_constant_diagram():
    span = Span(FinMap(FinSet(2), FinSet(2), (0, 0)), FinMap(FinSet(2), FinSet(3), (0, 2)))
    rep = check_pushout_commute(constant_span_diagram(span))
    assert rep.passed and rep.data["lhsSize"] == rep.data["rhsSize"] == 3


def test_commute_empty_domains_give_coproducts():
    span = Span(empty_map(FinSet(2)), empty_map(FinSet(1)))
    rep = check_pushout_commute(constant_span_diagram(span))
    assert rep.passed and rep.data["rhsSize"] == 3


def test_span_diagram_rejects_unnatural_steps():
    span = Span(identity(FinSet(2)), identity(FinSet(2)))
    swap = FinMap(FinSet(2), FinSet(2), (1, 0))
    with pytest.raises(Exception):
        SpanDiagram(NatChain(0), {0: span, 1: span}, {(0, 1): (swap, identity(FinSet(2)), identity(FinSet(2)))})


def lhs_size_oracle(sd):
    """Glue every stage's two feet along its apex and along the steps, then count components."""
    offset, total = {}, 0
    for n, s in sd.spans.items():
        offset[n] = (total, total + s.left.cod.size)
        total += s.left.cod.size + s.right.cod.size
    edges = []
    for n, s in sd.spans.items():
        o0, o1 = offset[n]
        edges += [(o0 + s.left.table[v], o1 + s.right.table[v]) for v in range(s.apex.size)]
    for (a, b), (m0, mv, m1) in sd.arrows.items():
        edges += [(offset[a][0] + x, offset[b][0] + y) for x, y in enumerate(m0.table)]
        edges += [(offset[a][1] + x, offset[b][1] + y) for x, y in enumerate(m1.table)]
    return len(set(components(total, edges)))


@settings(max_examples=150, deadline=None)
@given(seeds, st.integers(0, 5))
def test_commute_random_against_brute_force(seed, size):
    sd = random_span_diagram(random.Random(seed), size)
    rep = check_pushout_commute(sd)
    assert rep.passed, rep.details
    assert rep.data["lhsSize"] == lhs_size_oracle(sd)
    json.dumps(sd.to_json())
