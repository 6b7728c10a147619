"""Executable checks for the presentability argument and the colimit lemmas.

Every check returns a :class:`Report`; a report passes exactly when its
discrepancy log is empty.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .chains import Factorization, colimit, colimit_over, diagram_colimit, equalize_factorizations, factor_through, mediate
from .comma import CommaDiagram, CommaMap, CommaObj, comma_colimit, is_comma_map
from .construct import (
    DElem, GenObj, Presentation, compose_evidence, cofinal_lift, d_leq, d_upper_bound, in_D, in_D_prime,
    transitivity_case, verify_evidence,
)
from .endo import Mode, apply_map
from .errors import PreconditionError, ShapeError
from .setkit import FinMap, Span, compose, compose_all, identity, is_iso, pushout, pushout_mediator

SCHEMA_VERSION = 1


@dataclass
class Report:
    check: str
    instance: str
    details: List[str] = field(default_factory=list)
    data: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.details

    def expect(self, label: str, lhs, rhs) -> bool:
        if lhs != rhs:
            self.details.append(f"{label}: {_show(lhs)} != {_show(rhs)}")
            return False
        return True

    def require(self, label: str, ok: bool) -> bool:
        if not ok:
            self.details.append(label)
        return ok

    def to_json(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "check": self.check,
            "instance": self.instance,
            "passed": self.passed,
            "details": list(self.details),
            "data": self.data,
        }


def _show(x) -> str:
    if isinstance(x, FinMap):
        return str(list(x.table))
    return repr(x)


# -- presentability of generators -------------------------------------------


def generator_homs(g: GenObj, dst: CommaObj, over: Optional[Tuple[CommaMap, CommaMap]] = None) -> Iterator[CommaMap]:
    """Every comma map ``g -> dst``, in lexicographic order of ``(alpha, beta . g_U)``.

    A map out of a pushout is a pair of maps agreeing on ``P``; the ``T A``
    half is forced to be ``dst.f . T alpha``.  With ``over = (leg, m)`` only
    maps ``x`` with ``leg . x == m`` are produced.
    """
    w = g.witness
    T = w.T
    a_dom, a_cod = g.A, dst.a
    if over is None:
        alpha_choices = [range(a_cod.size)] * a_dom.size
    else:
        leg, m = over
        fib = _fibres(leg.alpha)
        alpha_choices = [fib.get(y, ()) for y in m.alpha.table]
        bfib = _fibres(leg.beta)
        target_q = compose(m.beta, g.gU).table
    q_pre: Dict[int, List[int]] = {}
    for x, y in enumerate(w.q.table):
        q_pre.setdefault(y, []).append(x)
    for at in product(*alpha_choices):
        alpha = FinMap(a_dom, a_cod, at)
        left = compose(dst.f, apply_map(T, alpha))
        forced = {}
        ok = True
        for y, xs in q_pre.items():
            vals = {left.table[w.p.table[x]] for x in xs}
            if len(vals) > 1:
                ok = False
                break
            forced[y] = vals.pop()
        if not ok:
            continue
        choices = []
        for y in range(w.Q.size):
            allowed = range(dst.b.size) if over is None else bfib.get(target_q[y], ())
            if y in forced:
                allowed = [forced[y]] if forced[y] in allowed else []
            choices.append(allowed)
        for bt in product(*choices):
            right = FinMap(w.Q, dst.b, bt)
            yield CommaMap(alpha, pushout_mediator(g.pushout, left, right))


def _fibres(f: FinMap) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = {}
    for x, y in enumerate(f.table):
        out.setdefault(y, []).append(x)
    return out


def _spread(items: Sequence, limit: int) -> list:
    if len(items) <= limit:
        return list(items)
    step = len(items) / limit
    return [items[int(n * step)] for n in range(limit)]


class _ChainDiagram:
    """Stage access for a chain-shaped comma diagram."""

    def __init__(self, diagram: CommaDiagram):
        self.d = diagram
        self.T = diagram.T
        self.A = diagram.component_chain("A")
        self.B = diagram.component_chain("B")
        self.last = max(diagram.objects)

    def f(self, n: int) -> FinMap:
        return self.d.objects[min(n, self.last)].f

    def obj(self, n: int) -> CommaObj:
        return self.d.objects[min(n, self.last)]

    def a(self, n, m) -> FinMap:
        return self.A.transition(n, m)

    def Ta(self, n, m) -> FinMap:
        return apply_map(self.T, self.A.transition(n, m))

    def b(self, n, m) -> FinMap:
        return self.B.transition(n, m)


def check_presentable(g: GenObj, diagram: CommaDiagram, morphisms: Optional[Sequence[CommaMap]] = None,
                      max_morphisms: int = 6, max_alternatives: int = 6, instance: str = "") -> Report:
    """Factor maps ``g -> colim D`` through a stage, and check the factorization is essentially unique."""
    rep = Report("presentable", instance)
    star, legs = comma_colimit(diagram)
    st = _ChainDiagram(diagram)
    colA, colB = colimit(st.A), colimit(st.B)
    if colA.apex != star.a or colB.apex != star.b:
        raise PreconditionError("diagram colimit does not match its component chains")
    if morphisms is None:
        homs = []
        for m in generator_homs(g, star):
            homs.append(m)
            if len(homs) >= 4096:
                break
        morphisms = _spread(homs, max_morphisms)
    else:
        for m in morphisms:
            if not is_comma_map(g.obj, star, m):
                raise PreconditionError("supplied morphism is not a comma map into the colimit")
    rep.data["morphisms"] = len(morphisms)
    rep.data["notes"] = [
        "beta' on the Q leg is built from the transition out of the stage where beta.g factors "
        "(d' >= d); a transition out of d only typechecks when d' = d"
    ]
    runs = []
    for n, m in enumerate(morphisms):
        runs.append(_factor_one(rep, f"m{n}", g, st, colA, colB, star, m, max_alternatives))
    rep.data["runs"] = runs
    return rep


def _factor_one(rep, tag, g, st, colA, colB, star, m, max_alternatives):
    w = g.witness
    T = w.T
    alpha, beta = m.alpha, m.beta
    f, gq, p, q = g.fU, g.gU, w.p, w.q

    fa = factor_through(alpha, st.A)
    d, alpha0 = fa.stage, fa.factor
    fg = factor_through(compose(beta, gq), st.B)
    d1, g1 = fg.stage, fg.factor
    if d1 < d:
        g1, d1 = compose(st.b(d1, d), g1), d
    run = {"d": d, "d1": d1}
    rep.expect(f"{tag} alpha factors", compose(colA.leg(d), alpha0), alpha)
    rep.expect(f"{tag} beta.g factors", compose(colB.leg(d1), g1), compose(beta, gq))

    Ta0 = apply_map(T, alpha0)
    h1 = compose_all(st.f(d1), st.Ta(d, d1), Ta0, p)
    h2 = compose(g1, q)
    chain = [
        compose(colB.leg(d1), h1),
        compose_all(star.f, apply_map(T, colA.leg(d1)), st.Ta(d, d1), Ta0, p),
        compose_all(star.f, apply_map(T, colA.leg(d)), Ta0, p),
        compose_all(star.f, apply_map(T, alpha), p),
        compose_all(beta, f, p),
        compose_all(beta, gq, q),
        compose(colB.leg(d1), h2),
    ]
    for n in range(len(chain) - 1):
        rep.expect(f"{tag} two factorizations through B*, step {n + 1}", chain[n], chain[n + 1])

    d0 = equalize_factorizations(Factorization(d1, h1), Factorization(d1, h2), st.B)
    run["d0"] = d0
    bf = [
        compose_all(st.b(d1, d0), st.f(d1), st.Ta(d, d1), Ta0),
        compose_all(st.f(d0), st.Ta(d1, d0), st.Ta(d, d1), Ta0),
        compose_all(st.f(d0), st.Ta(d, d0), Ta0),
    ]
    rep.expect(f"{tag} beta'.f via naturality", bf[0], bf[1])
    rep.expect(f"{tag} beta'.f via functoriality", bf[1], bf[2])
    # beta' . g is transported from the stage where beta . g was factored
    beta1 = pushout_mediator(g.pushout, bf[2], compose(st.b(d1, d0), g1))
    run["sameStage"] = fa.stage == fg.stage
    alpha1 = compose(st.a(d, d0), alpha0)
    first = CommaMap(alpha1, beta1)
    rep.require(f"{tag} (alpha', beta') is a comma map", is_comma_map(g.obj, st.obj(d0), first))
    rep.expect(f"{tag} alpha_d0 . alpha' = alpha", compose(colA.leg(d0), alpha1), alpha)
    rep.expect(f"{tag} beta_d0 . beta' . f = beta . f", compose_all(colB.leg(d0), beta1, f), compose(beta, f))
    rep.expect(f"{tag} beta_d0 . beta' . g = beta . g", compose_all(colB.leg(d0), beta1, gq), compose(beta, gq))
    rep.expect(f"{tag} beta_d0 . beta' = beta", compose(colB.leg(d0), beta1), beta)

    seconds = []
    for e in (d0 + 1, d0 + 2):
        seconds.append((e, CommaMap(compose(st.a(d0, e), alpha1), compose(st.b(d0, e), beta1))))
    leg0 = CommaMap(colA.leg(d0), colB.leg(d0))
    alts = []
    for alt in generator_homs(g, st.obj(d0), over=(leg0, CommaMap(alpha, beta))):
        alts.append(alt)
        if len(alts) >= 4096:
            break
    for alt in _spread(alts, max_alternatives):
        seconds.append((d0, alt))
    run["alternatives"] = len(alts)
    ls = []
    for n, (e2, second) in enumerate(seconds):
        ls.append(_essentially_unique(rep, f"{tag}/second{n}", g, st, colA, colB, (d0, first), (e2, second), m))
    run["l"] = ls
    return run


def _essentially_unique(rep, tag, g, st, colA, colB, one, two, m) -> int:
    """Run the uniqueness argument on two factorizations of ``m``; returns the stage ``l``."""
    T = g.witness.T
    f, gq = g.fU, g.gU
    (s1, x1), (s2, x2) = one, two
    for s, x in (one, two):
        rep.require(f"{tag} input is a comma map", is_comma_map(g.obj, st.obj(s), x))
        rep.expect(f"{tag} input factors alpha", compose(colA.leg(s), x.alpha), m.alpha)
        rep.expect(f"{tag} input factors beta", compose(colB.leg(s), x.beta), m.beta)
    e = max(s1, s2)
    a1, b1 = compose(st.a(s1, e), x1.alpha), compose(st.b(s1, e), x1.beta)
    a2, b2 = compose(st.a(s2, e), x2.alpha), compose(st.b(s2, e), x2.beta)
    rep.expect(f"{tag} first is a comma map at {e}", compose(b1, f), compose(st.f(e), apply_map(T, a1)))
    rep.expect(f"{tag} second is a comma map at {e}", compose(b2, f), compose(st.f(e), apply_map(T, a2)))

    e1 = equalize_factorizations(Factorization(e, a1), Factorization(e, a2), st.A)
    rep.expect(f"{tag} alphas agree at {e1}", compose(st.a(e, e1), a1), compose(st.a(e, e1), a2))
    gamma = compose_all(st.b(e, e1), b1, gq)
    gamma2 = compose_all(st.b(e, e1), b2, gq)
    rep.expect(f"{tag} gamma and gamma' factor the same map", compose(colB.leg(e1), gamma), compose(colB.leg(e1), gamma2))
    l = equalize_factorizations(Factorization(e1, gamma), Factorization(e1, gamma2), st.B)

    rep.expect(f"{tag} alphas agree at l", compose(st.a(e, l), a1), compose(st.a(e, l), a2))
    via_f = [
        compose_all(st.b(e, l), b1, f),
        compose_all(st.b(e, l), st.f(e), apply_map(T, a1)),
        compose_all(st.f(l), st.Ta(e, l), apply_map(T, a1)),
        compose_all(st.f(l), st.Ta(e, l), apply_map(T, a2)),
        compose_all(st.b(e, l), st.f(e), apply_map(T, a2)),
        compose_all(st.b(e, l), b2, f),
    ]
    for n in range(len(via_f) - 1):
        rep.expect(f"{tag} betas agree on T A, step {n + 1}", via_f[n], via_f[n + 1])
    rep.expect(f"{tag} betas agree on Q", compose_all(st.b(e, l), b1, gq), compose_all(st.b(e, l), b2, gq))
    rep.expect(f"{tag} betas agree at l", compose(st.b(e, l), b1), compose(st.b(e, l), b2))
    return l


# -- the indexing poset -------------------------------------------------------

TRANSITIVITY_CASES = ("i=i',i'=i''", "i=i',i'<i''", "i<i',i'=i''", "i<i',i'<i''")


def _leq(rep, d, d2, pres):
    ev = d_leq(d, d2, pres)
    if ev is not None:
        for bad in verify_evidence(ev, pres):
            rep.details.append(f"{d!r} <= {d2!r}: {bad}")
    return ev


def check_poset(pres: Presentation, elems: Sequence[DElem], rng, pairs: int = 400, chains: int = 60,
                subsets: int = 20, instance: str = "") -> Report:
    """Partial-order laws on an enumerated fragment of ``D`` plus constructed upper bounds.

    Reflexivity is checked on every element; antisymmetry on ``pairs``
    random pairs; transitivity on chains ``d <= d' <= d''`` built by taking
    upper bounds of random elements, which reaches all four case splits.
    """
    rep = Report("poset", instance)
    n = len(elems)
    for d in elems:
        rep.require(f"{d!r} is not in D", in_D(d, pres))
        rep.require(f"{d!r} is not below itself", _leq(rep, d, d, pres) is not None)

    comparable = 0
    for _ in range(pairs if n else 0):
        d, e = elems[rng.randrange(n)], elems[rng.randrange(n)]
        up, down = _leq(rep, d, e, pres), _leq(rep, e, d, pres)
        comparable += up is not None
        if up is not None and down is not None:
            rep.expect("antisymmetry", d.key(), e.key())

    cases = dict.fromkeys(TRANSITIVITY_CASES, 0)
    for _ in range(chains if n else 0):
        d = elems[rng.randrange(n)]
        mid = d_upper_bound([d, elems[rng.randrange(n)]], pres)
        top = d_upper_bound([mid, elems[rng.randrange(n)]], pres)
        for a, b in ((d, mid), (mid, top), (d, d)):
            for c in (top, mid):
                e1, e2 = _leq(rep, a, b, pres), _leq(rep, b, c, pres)
                if e1 is None or e2 is None:
                    continue
                cases[transitivity_case(e1, e2)] += 1
                composite = compose_evidence(e1, e2, pres)
                for bad in verify_evidence(composite, pres):
                    rep.details.append(f"transitivity {transitivity_case(e1, e2)}: {bad}")
                rep.require(f"{a!r} <= {c!r} not detected", _leq(rep, a, c, pres) is not None)

    sizes = []
    for _ in range(subsets if n else 0):
        S = [elems[rng.randrange(n)] for _ in range(rng.randint(1, 5))]
        top = d_upper_bound(S, pres)
        sizes.append(len(S))
        rep.require(f"upper bound {top!r} is not in D", in_D(top, pres))
        for s in S:
            rep.require(f"upper bound does not dominate {s!r}", _leq(rep, s, top, pres) is not None)
    rep.data.update({
        "elements": n, "pairs": pairs if n else 0, "comparablePairs": comparable,
        "transitivityCases": cases, "subsets": len(sizes), "maxSubset": max(sizes, default=0),
    })
    return rep


def check_cofinality(pres: Presentation, elems: Sequence[DElem], instance: str = "") -> Report:
    """Every ``d`` lies below its lift into ``D'``."""
    rep = Report("cofinality", instance)
    for d in elems:
        lifted, ev = cofinal_lift(d, pres)
        rep.require(f"lift of {d!r} is not in D'", in_D_prime(lifted, pres))
        for bad in verify_evidence(ev, pres):
            rep.details.append(f"{d!r} <= lift: {bad}")
        rep.require(f"{d!r} <= lift not detected", d_leq(d, lifted, pres) is not None)
    rep.data["elements"] = len(elems)
    return rep


# -- the two colimit lemmas ---------------------------------------------------


def _pairs(keys):
    keys = list(keys)
    return [(a, b) for n, a in enumerate(keys) for b in keys[n + 1:]]


def _pointwise(keys, objs, maps):
    return diagram_colimit({k: objs(k) for k in keys}, [(a, b, maps(a, b)) for a, b in _pairs(keys)])


def _compare_spans(rep, tag, col0, colV, col1, v0, v1, expect_left, expect_right, c0, cV, c1):
    """Check a pointwise colimit of spans against an expected span via comparison maps."""
    psi = mediate(col0, c0)
    phi = mediate(colV, cV)
    chi = mediate(col1, c1)
    ok = rep.require(f"{tag}: comparison at 0 is a bijection", is_iso(psi))
    ok &= rep.require(f"{tag}: comparison at V is a bijection", is_iso(phi))
    ok &= rep.require(f"{tag}: comparison at 1 is a bijection", is_iso(chi))
    if ok:
        rep.expect(f"{tag}: left leg", compose(psi, v0), compose(expect_left, phi))
        rep.expect(f"{tag}: right leg", compose(chi, v1), compose(expect_right, phi))
    rep.data["comparisonsAreIdentities"] = all(
        m.dom == m.cod and m == identity(m.dom) for m in (psi, phi, chi)
    )


def _presentation(target, mode) -> Presentation:
    return target if isinstance(target, Presentation) else Presentation(target, mode)


def check_lemma_G(target, i: int, mode: Mode = Mode.FILTRATION, instance: str = "") -> Report:
    """``colim_j (B <- P_{i,j} -> T A_i)`` is ``(B <- T A_i = T A_i)`` with left leg ``f . T a_i``.

    ``target`` is a comma object or an existing :class:`Presentation`.
    """
    pres = _presentation(target, mode)
    rep = Report("lemma_G", instance)
    J = range(pres.j_bound(i) + 1)
    B, TA = pres.target.b, pres.TA(i)
    col0 = _pointwise(J, lambda j: B, lambda a, b: identity(B))
    colV = _pointwise(J, lambda j: pres.P(i, j), lambda a, b: pres.p_trans(i, a, b))
    col1 = _pointwise(J, lambda j: TA, lambda a, b: identity(TA))
    v0 = mediate(colV, {j: compose(col0.leg(j), pres.edge(i, j)) for j in J})
    v1 = mediate(colV, {j: compose(col1.leg(j), pres.p(i, j)) for j in J})
    expected_left = compose(pres.target.f, pres.Talpha(i))
    _compare_spans(
        rep, f"G_{i}", col0, colV, col1, v0, v1, expected_left, identity(TA),
        {j: identity(B) for j in J}, {j: pres.p(i, j) for j in J}, {j: identity(TA) for j in J},
    )
    rep.data.update({"i": i, "jCount": len(J), "size": TA.size})
    return rep


def check_lemma_H(target, i: int, j: int, mode: Mode = Mode.FILTRATION, instance: str = "") -> Report:
    """``colim_{k >= k(i,j)} (B_k <- P_{i,j} -> T A_i)`` is ``(B <- P_{i,j} -> T A_i)``."""
    pres = _presentation(target, mode)
    rep = Report("lemma_H", instance)
    c = pres.canonical(i, j)
    K = range(c.stage, pres.cB.horizon + 1)
    P, TA = pres.P(i, j), pres.TA(i)
    left_at = {k: compose(pres.beta_trans(c.stage, k), c.factor) for k in K}
    col0 = _pointwise(K, pres.B, pres.beta_trans)
    colV = _pointwise(K, lambda k: P, lambda a, b: identity(P))
    col1 = _pointwise(K, lambda k: TA, lambda a, b: identity(TA))
    v0 = mediate(colV, {k: compose(col0.leg(k), left_at[k]) for k in K})
    v1 = mediate(colV, {k: compose(col1.leg(k), pres.p(i, j)) for k in K})
    rep.expect(f"H_{i},{j}: b_k(i,j) . q(i,j) = f . T a_i . p_i,j", compose(pres.beta(c.stage), c.factor), pres.edge(i, j))
    _compare_spans(
        rep, f"H_{i},{j}", col0, colV, col1, v0, v1, pres.edge(i, j), pres.p(i, j),
        {k: pres.beta(k) for k in K}, {k: identity(P) for k in K}, {k: identity(TA) for k in K},
    )
    rep.data.update({"i": i, "j": j, "kij": c.stage, "kCount": len(K)})
    return rep


# -- pushouts commute with directed colimits ------------------------------------


@dataclass(frozen=True)
class SpanDiagram:
    """A diagram of spans ``X0 <- V -> X1`` with natural transformations as arrows.

    ``arrows[(a, b)]`` is the triple ``(m0, mV, m1)`` of component maps.
    """

    shape: object
    spans: Mapping[Hashable, Span]
    arrows: Mapping[Tuple[Hashable, Hashable], Tuple[FinMap, FinMap, FinMap]]

    def __post_init__(self):
        for (a, b), (m0, mv, m1) in self.arrows.items():
            s, t = self.spans[a], self.spans[b]
            if compose(m0, s.left) != compose(t.left, mv) or compose(m1, s.right) != compose(t.right, mv):
                raise ShapeError(f"arrow {a!r} -> {b!r} is not natural")

    def component(self, n: int):
        pick = {0: lambda s: s.left.cod, 1: lambda s: s.apex, 2: lambda s: s.right.cod}[n]
        return {d: pick(s) for d, s in self.spans.items()}, {e: t[n] for e, t in self.arrows.items()}

    def to_json(self) -> dict:
        return {
            "stages": [self.spans[d].to_json() for d in sorted(self.spans)],
            "steps": [[m.to_json() for m in self.arrows[e]] for e in sorted(self.arrows)],
        }


def check_pushout_commute(sd: SpanDiagram, instance: str = "") -> Report:
    """``colim_d Pushout(F d)`` against ``Pushout(colim_d F d)``."""
    rep = Report("pushout_commute", instance)
    pos = {d: pushout(s) for d, s in sd.spans.items()}
    lhs_arrows = {
        (a, b): pushout_mediator(pos[a], compose(pos[b].inj_left, m0), compose(pos[b].inj_right, m1))
        for (a, b), (m0, mv, m1) in sd.arrows.items()
    }
    lhs = colimit_over(sd.shape, {d: po.apex for d, po in pos.items()}, lhs_arrows)

    col0 = colimit_over(sd.shape, *sd.component(0))
    colV = colimit_over(sd.shape, *sd.component(1))
    col1 = colimit_over(sd.shape, *sd.component(2))
    left = mediate(colV, {d: compose(col0.leg(d), s.left) for d, s in sd.spans.items()})
    right = mediate(colV, {d: compose(col1.leg(d), s.right) for d, s in sd.spans.items()})
    rhs = pushout(Span(left, right))

    forward = pushout_mediator(
        rhs,
        mediate(col0, {d: compose(lhs.leg(d), po.inj_left) for d, po in pos.items()}),
        mediate(col1, {d: compose(lhs.leg(d), po.inj_right) for d, po in pos.items()}),
    )
    backward = mediate(lhs, {
        d: pushout_mediator(po, compose(rhs.inj_left, col0.leg(d)), compose(rhs.inj_right, col1.leg(d)))
        for d, po in pos.items()
    })
    rep.require("comparison is a bijection", is_iso(forward))
    rep.expect("comparison then inverse", compose(backward, forward), identity(rhs.apex))
    rep.expect("inverse then comparison", compose(forward, backward), identity(lhs.apex))
    rep.data.update({"lhsSize": lhs.apex.size, "rhsSize": rhs.apex.size, "stages": len(sd.spans)})
    return rep
