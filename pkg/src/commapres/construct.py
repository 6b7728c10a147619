"""Generators of ``T/A``, the directed poset of a target, and its reconstruction.

Given a target ``(A, B, f)`` whose components are presented as stabilizing
chains ``A = colim A_i`` and ``B = colim B_k``, and a decomposition
``T A_i = colim_j P_{i,j}`` (see :func:`commapres.endo.decompose`), this module
builds

* the generators ``(A, U, f_U)`` obtained by pushing ``P -> T A`` out along
  ``P -> Q`` (:func:`build_generator`);
* the poset ``D`` of tuples ``(i, j, k, q)`` with ``f . T a_i . p_{i,j} == b_k . q``,
  its order evidence and upper bounds;
* the cofinal part ``D'`` where ``q`` is transported from the canonical
  factorization chosen by :func:`commapres.chains.factor_through`;
* the functor ``F: D -> T/A`` and the comparison ``colim F -> (A, B, f)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .chains import Factorization, FiniteDirected, colimit, equalize_factorizations, factor_through
from .comma import CommaDiagram, CommaMap, CommaObj, colimit_mediator, comma_colimit, is_comma_map, is_iso_map
from .endo import Mode, PolyFunctor, apply_map, apply_obj, decompose
from .errors import (
    EnumerationBudgetError,
    InvariantError,
    PreconditionError,
    ShapeError,
    UniversalPropertyError,
)
from .setkit import FinMap, FinSet, PushoutResult, Span, compose, compose_all, identity, pushout, pushout_mediator

DEFAULT_BUDGET = 10 ** 6

AA = "AA"
BB = "BB"


# -- generators -----------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """``(A, P, Q, p: P -> T A, q: P -> Q)``."""

    T: PolyFunctor
    A: FinSet
    P: FinSet
    Q: FinSet
    p: FinMap
    q: FinMap

    def __post_init__(self):
        if self.p.dom != self.P or self.p.cod != apply_obj(self.T, self.A):
            raise ShapeError("p must be a map P -> T A")
        if self.q.dom != self.P or self.q.cod != self.Q:
            raise ShapeError("q must be a map P -> Q")

    def to_json(self) -> dict:
        return {
            "T": self.T.to_json(),
            "A": self.A.to_json(),
            "P": self.P.to_json(),
            "Q": self.Q.to_json(),
            "p": self.p.to_json(),
            "q": self.q.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "Witness":
        return cls(
            PolyFunctor.from_json(data["T"]),
            FinSet.from_json(data["A"]),
            FinSet.from_json(data["P"]),
            FinSet.from_json(data["Q"]),
            FinMap.from_json(data["p"]),
            FinMap.from_json(data["q"]),
        )


@dataclass(frozen=True)
class GenObj:
    A: FinSet
    U: FinSet
    fU: FinMap
    gU: FinMap
    witness: Witness
    pushout: PushoutResult = field(repr=False)

    @property
    def obj(self) -> CommaObj:
        return CommaObj.finite(self.witness.T, self.A, self.U, self.fU)


def build_generator(w: Witness) -> GenObj:
    po = pushout(Span(w.p, w.q))
    return GenObj(w.A, po.apex, po.inj_left, po.inj_right, w, po)


# -- the poset D ----------------------------------------------------------


@dataclass(frozen=True, order=False)
class DElem:
    i: int
    j: int
    k: int
    q: FinMap

    def key(self):
        return (self.i, self.j, self.k, self.q.table)

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "k": self.k, "q": self.q.to_json()}

    @classmethod
    def from_json(cls, data) -> "DElem":
        return cls(data["i"], data["j"], data["k"], FinMap.from_json(data["q"]))

    def __repr__(self):
        return f"DElem({self.i},{self.j},{self.k},{list(self.q.table)})"


@dataclass(frozen=True)
class Evidence:
    """Why ``src <= dst``.  ``r`` is the connecting map ``P_{i,j} -> P_{i',j'}`` for BB."""

    variant: str
    src: DElem
    dst: DElem
    r: Optional[FinMap] = None

    def to_json(self) -> dict:
        return {"variant": self.variant, "r": self.r.to_json() if self.r is not None else None}


class Presentation:
    """A target object together with every chosen presentation datum.

    All the maps the construction needs (``a_i``, ``T a_{i->i'}``, ``p_{i,j}``,
    ``b_{k->k'}``, the canonical ``(k(i,j), q(i,j))``) are computed lazily and
    memoised here.
    """

    def __init__(self, target: CommaObj, mode: Mode = Mode.TRIVIAL):
        self.target = target
        self.T = target.T
        self.mode = Mode(mode)
        self.cA = target.A
        self.cB = target.B
        self.colA = colimit(self.cA)
        self.colB = colimit(self.cB)
        self._memo: Dict[tuple, object] = {}

    def _cached(self, key, make):
        try:
            return self._memo[key]
        except KeyError:
            value = self._memo[key] = make()
            return value

    @property
    def default_bounds(self) -> Tuple[int, int]:
        return (self.cA.N + 2, self.cB.N + 2)

    def check_bounds(self, bounds) -> Tuple[int, int]:
        if bounds is None:
            return self.default_bounds
        i_max, k_max = bounds
        if i_max < self.cA.N or k_max < self.cB.N:
            raise PreconditionError("bounds must reach the stabilization stages")
        return i_max, k_max

    # A side
    def A(self, i: int) -> FinSet:
        return self.cA.obj(i)

    def alpha(self, i: int) -> FinMap:
        return self.colA.leg(i)

    def alpha_trans(self, i: int, i2: int) -> FinMap:
        return self.cA.transition(i, i2)

    def TA(self, i: int) -> FinSet:
        return apply_obj(self.T, self.A(i))

    def Talpha(self, i: int) -> FinMap:
        return self._cached(("Ta", i), lambda: apply_map(self.T, self.alpha(i)))

    def Talpha_trans(self, i: int, i2: int) -> FinMap:
        return self._cached(("Tat", i, i2), lambda: apply_map(self.T, self.alpha_trans(i, i2)))

    # inner decomposition
    def jchain(self, i: int):
        return self._cached(("J", i), lambda: decompose(self.TA(i), self.mode))

    def j_bound(self, i: int) -> int:
        return self.jchain(i).N

    def P(self, i: int, j: int) -> FinSet:
        return self.jchain(i).obj(j)

    def p(self, i: int, j: int) -> FinMap:
        return colimit(self.jchain(i)).leg(j)

    def p_trans(self, i: int, j: int, j2: int) -> FinMap:
        return self.jchain(i).transition(j, j2)

    # B side
    def B(self, k: int) -> FinSet:
        return self.cB.obj(k)

    def beta(self, k: int) -> FinMap:
        return self.colB.leg(k)

    def beta_trans(self, k: int, k2: int) -> FinMap:
        return self.cB.transition(k, k2)

    def edge(self, i: int, j: int) -> FinMap:
        """``f . T a_i . p_{i,j}: P_{i,j} -> B``."""
        return self._cached(("e", i, j), lambda: compose_all(self.target.f, self.Talpha(i), self.p(i, j)))

    def canonical(self, i: int, j: int) -> Factorization:
        """The chosen ``(k(i,j), q(i,j))``."""
        return self._cached(("c", i, j), lambda: factor_through(self.edge(i, j), self.cB))

    def canonical_at(self, i: int, j: int, k: int) -> DElem:
        """The element of ``D'`` over ``(i, j)`` at stage ``k >= k(i,j)``."""
        c = self.canonical(i, j)
        if k < c.stage:
            raise PreconditionError(f"stage {k} is below k({i},{j}) = {c.stage}")
        return DElem(i, j, k, compose(self.beta_trans(c.stage, k), c.factor))

    def connecting(self, ev: Evidence) -> FinMap:
        """The map ``P_{i,j} -> P_{i',j'}`` carried by the evidence."""
        if ev.variant == AA:
            return self.p_trans(ev.src.i, ev.src.j, ev.dst.j)
        return ev.r

    def generator(self, d: DElem) -> GenObj:
        return self._cached(("F", d), lambda: F_obj(d, self))


def in_D(d: DElem, pres: Presentation) -> bool:
    if d.i < 0 or d.j < 0 or d.k < 0 or d.j > pres.j_bound(d.i):
        return False
    if d.q.dom != pres.P(d.i, d.j) or d.q.cod != pres.B(d.k):
        return False
    return compose(pres.beta(d.k), d.q) == pres.edge(d.i, d.j)


def in_D_prime(d: DElem, pres: Presentation) -> bool:
    if not in_D(d, pres):
        return False
    c = pres.canonical(d.i, d.j)
    return d.k >= c.stage and d == pres.canonical_at(d.i, d.j, d.k)


def enum_D(pres: Presentation, bounds=None, budget: int = DEFAULT_BUDGET) -> List[DElem]:
    """Every element of ``D`` with ``i <= i_max`` and ``k <= k_max``.

    ``q`` ranges over the maps ``P_{i,j} -> B_k`` satisfying the defining
    square, enumerated as sections of the fibres of ``b_k``.
    """
    i_max, k_max = pres.check_bounds(bounds)
    out: List[DElem] = []
    for i in range(i_max + 1):
        for j in range(pres.j_bound(i) + 1):
            P = pres.P(i, j)
            wanted = pres.edge(i, j).table
            for k in range(k_max + 1):
                Bk = pres.B(k)
                fibres: Dict[int, List[int]] = {}
                for x, y in enumerate(pres.beta(k).table):
                    fibres.setdefault(y, []).append(x)
                choices = [fibres.get(y, ()) for y in wanted]
                count = 1
                for c in choices:
                    count *= len(c)
                if count > budget or len(out) + count > budget:
                    raise EnumerationBudgetError(len(out) + count, budget)
                for t in product(*choices):
                    out.append(DElem(i, j, k, FinMap(P, Bk, t)))
    return out


def enum_D_prime(pres: Presentation, bounds=None, budget: int = DEFAULT_BUDGET) -> List[DElem]:
    i_max, k_max = pres.check_bounds(bounds)
    out = []
    for i in range(i_max + 1):
        for j in range(pres.j_bound(i) + 1):
            for k in range(pres.canonical(i, j).stage, k_max + 1):
                out.append(pres.canonical_at(i, j, k))
                if len(out) > budget:
                    raise EnumerationBudgetError(len(out), budget)
    return out


def _first_r(pres: Presentation, d: DElem, d2: DElem) -> Optional[FinMap]:
    """Lexicographically least ``r`` with ``T a . p == p' . r`` and ``b . q == q' . r``."""
    P2 = pres.P(d2.i, d2.j)
    p2, q2 = pres.p(d2.i, d2.j).table, d2.q.table
    lookup = {}
    for y in range(P2.size):
        lookup.setdefault((p2[y], q2[y]), y)
    top = compose(pres.Talpha_trans(d.i, d2.i), pres.p(d.i, d.j)).table
    bottom = compose(pres.beta_trans(d.k, d2.k), d.q).table
    table = []
    for a, b in zip(top, bottom):
        y = lookup.get((a, b))
        if y is None:
            return None
        table.append(y)
    return FinMap(pres.P(d.i, d.j), P2, tuple(table))


def d_leq(d: DElem, d2: DElem, pres: Presentation) -> Optional[Evidence]:
    """Evidence that ``d <= d2``, or ``None``."""
    if d.k > d2.k:
        return None
    if d.i == d2.i:
        if d.j > d2.j:
            return None
        lhs = compose(pres.beta_trans(d.k, d2.k), d.q)
        rhs = compose(d2.q, pres.p_trans(d.i, d.j, d2.j))
        return Evidence(AA, d, d2) if lhs == rhs else None
    if d.i < d2.i:
        r = _first_r(pres, d, d2)
        return Evidence(BB, d, d2, r) if r is not None else None
    return None


def verify_evidence(ev: Evidence, pres: Presentation) -> List[str]:
    """Re-check the equations of ``ev`` entrywise; returns the failures."""
    d, d2 = ev.src, ev.dst
    bad = []
    if d.k > d2.k:
        bad.append("k decreases")
    if ev.variant == AA:
        if d.i != d2.i:
            bad.append("AA needs equal i")
        elif d.j > d2.j:
            bad.append("AA needs j <= j'")
        elif compose(pres.beta_trans(d.k, d2.k), d.q) != compose(d2.q, pres.p_trans(d.i, d.j, d2.j)):
            bad.append("AA square fails")
    elif ev.variant == BB:
        r = ev.r
        if d.i >= d2.i:
            bad.append("BB needs i < i'")
        elif r is None or r.dom != pres.P(d.i, d.j) or r.cod != pres.P(d2.i, d2.j):
            bad.append("BB witness has the wrong type")
        else:
            if compose(pres.Talpha_trans(d.i, d2.i), pres.p(d.i, d.j)) != compose(pres.p(d2.i, d2.j), r):
                bad.append("BB top square fails")
            if compose(pres.beta_trans(d.k, d2.k), d.q) != compose(d2.q, r):
                bad.append("BB bottom square fails")
    else:
        bad.append(f"unknown variant {ev.variant!r}")
    return bad


def transitivity_case(e1: Evidence, e2: Evidence) -> str:
    first = "i=i'" if e1.variant == AA else "i<i'"
    second = "i'=i''" if e2.variant == AA else "i'<i''"
    return f"{first},{second}"


def compose_evidence(e1: Evidence, e2: Evidence, pres: Presentation) -> Evidence:
    """Evidence for ``d <= d''`` from ``d <= d'`` and ``d' <= d''``, case by case."""
    if e1.dst != e2.src:
        raise PreconditionError("evidence does not chain")
    d, d1, d2 = e1.src, e1.dst, e2.dst
    if e1.variant == AA and e2.variant == AA:
        return Evidence(AA, d, d2)
    if e1.variant == AA:
        r = compose(e2.r, pres.p_trans(d.i, d.j, d1.j))
    elif e2.variant == AA:
        r = compose(pres.p_trans(d1.i, d1.j, d2.j), e1.r)
    else:
        r = compose(e2.r, e1.r)
    return Evidence(BB, d, d2, r)


@dataclass(frozen=True)
class UpperBound:
    top: DElem
    evidence: Dict[DElem, Evidence]
    i_star: int
    k0_star: int
    j_of: Dict[DElem, int]
    k1_star: int
    k_of: Dict[DElem, int]


def upper_bound_construction(S: Sequence[DElem], pres: Presentation) -> UpperBound:
    """Build an upper bound of ``S`` step by step, with evidence for each member."""
    S = list(dict.fromkeys(S))
    if not S:
        raise PreconditionError("need a non-empty set")
    i_star = max(s.i for s in S)
    k0_star = max(s.k for s in S)
    jchain = pres.jchain(i_star)
    j_of, r_of = {}, {}
    for s in S:
        if s.i == i_star:
            j_of[s], r_of[s] = s.j, identity(pres.P(s.i, s.j))
        else:
            lifted = compose(pres.Talpha_trans(s.i, i_star), pres.p(s.i, s.j))
            fac = factor_through(lifted, jchain)
            j_of[s], r_of[s] = fac.stage, fac.factor
    j_star = max(j_of.values())

    c = factor_through(pres.edge(i_star, j_star), pres.cB)
    k1_star = max(k0_star, c.stage)
    q1_star = compose(pres.beta_trans(c.stage, k1_star), c.factor)

    k_of = {}
    for s in S:
        via_top = compose_all(q1_star, pres.p_trans(i_star, j_of[s], j_star), r_of[s])
        via_s = compose(pres.beta_trans(s.k, k1_star), s.q)
        k_of[s] = equalize_factorizations(Factorization(k1_star, via_top), Factorization(k1_star, via_s), pres.cB)
    k_star = max(k_of.values())
    top = DElem(i_star, j_star, k_star, compose(pres.beta_trans(k1_star, k_star), q1_star))

    evidence = {}
    for s in S:
        if s.i == i_star:
            evidence[s] = Evidence(AA, s, top)
        else:
            evidence[s] = Evidence(BB, s, top, compose(pres.p_trans(i_star, j_of[s], j_star), r_of[s]))
    return UpperBound(top, evidence, i_star, k0_star, j_of, k1_star, k_of)


def d_upper_bound(S: Sequence[DElem], pres: Presentation) -> DElem:
    ub = upper_bound_construction(S, pres)
    if not in_D(ub.top, pres):
        raise InvariantError("constructed upper bound is not in D")
    for ev in ub.evidence.values():
        if verify_evidence(ev, pres):
            raise InvariantError(f"upper bound does not dominate {ev.src!r}")
    return ub.top


def cofinal_lift(d: DElem, pres: Presentation) -> Tuple[DElem, Evidence]:
    """An element of ``D'`` above ``d``, reached through an AA step."""
    c = pres.canonical(d.i, d.j)
    k2 = equalize_factorizations(Factorization(d.k, d.q), c, pres.cB)
    lifted = pres.canonical_at(d.i, d.j, k2)
    return lifted, Evidence(AA, d, lifted)


# -- the functor F --------------------------------------------------------


def witness_of(d: DElem, pres: Presentation) -> Witness:
    return Witness(pres.T, pres.A(d.i), pres.P(d.i, d.j), pres.B(d.k), pres.p(d.i, d.j), d.q)


def F_obj(d: DElem, pres: Presentation) -> GenObj:
    return build_generator(witness_of(d, pres))


def F_map(d: DElem, d2: DElem, ev: Evidence, pres: Presentation) -> CommaMap:
    """``(a_{i->i'}, h)`` with ``h`` the mediator out of the pushout ``U(d)``."""
    if ev.src != d or ev.dst != d2:
        raise PreconditionError("evidence is about a different pair")
    bad = verify_evidence(ev, pres)
    if bad:
        raise UniversalPropertyError("invalid evidence: " + "; ".join(bad))
    src, dst = pres.generator(d), pres.generator(d2)
    h = pushout_mediator(
        src.pushout,
        compose(dst.fU, pres.Talpha_trans(d.i, d2.i)),
        compose(dst.gU, pres.beta_trans(d.k, d2.k)),
    )
    return CommaMap(pres.alpha_trans(d.i, d2.i), h)


def cocone_leg(d: DElem, pres: Presentation) -> CommaMap:
    """The canonical map ``F d -> (A, B, f)``."""
    g = pres.generator(d)
    beta_hat = pushout_mediator(g.pushout, compose(pres.target.f, pres.Talpha(d.i)), pres.beta(d.k))
    return CommaMap(pres.alpha(d.i), beta_hat)


# -- reconstruction -------------------------------------------------------


@dataclass
class Reconstruction:
    target: CommaObj
    d_count: int
    edge_count: int
    top: DElem
    colimit: CommaObj
    comparison: CommaMap
    is_iso: bool

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "dCount": self.d_count,
            "isIso": self.is_iso,
            "comparison": self.comparison.to_json(),
        }


def generating_edges(frag: Sequence[DElem], pres: Presentation, bounds) -> Dict[Tuple[DElem, DElem], Evidence]:
    """Order evidence for a set of relations generating the order on a ``D'`` fragment.

    Each element gets an edge to its successor in ``k``, to the least element
    above it over ``(i, j + 1)`` and over ``(i + 1, j(s))``, and to the
    constructed upper bound of the whole fragment.
    """
    i_max, k_max = bounds
    index = {(d.i, d.j, d.k): d for d in frag}
    edges: Dict[Tuple[DElem, DElem], Evidence] = {}

    def least_above(d, i2, j2):
        for k2 in range(max(d.k, pres.canonical(i2, j2).stage), k_max + 1):
            d2 = index[(i2, j2, k2)]
            ev = d_leq(d, d2, pres)
            if ev is not None:
                return d2, ev
        raise InvariantError(f"nothing above {d!r} over ({i2}, {j2})")

    for d in frag:
        if d.k < k_max:
            d2 = index[(d.i, d.j, d.k + 1)]
            edges[(d, d2)] = Evidence(AA, d, d2)
        if d.j < pres.j_bound(d.i):
            d2, ev = least_above(d, d.i, d.j + 1)
            edges[(d, d2)] = ev
        if d.i < i_max:
            lifted = compose(pres.Talpha_trans(d.i, d.i + 1), pres.p(d.i, d.j))
            j2 = factor_through(lifted, pres.jchain(d.i + 1)).stage
            d2, ev = least_above(d, d.i + 1, j2)
            edges[(d, d2)] = ev
    ub = upper_bound_construction(frag, pres)
    for d, ev in ub.evidence.items():
        if d != ub.top:
            edges.setdefault((d, ub.top), ev)
    return edges


def reconstruct(pres: Presentation, bounds=None, budget: int = DEFAULT_BUDGET,
                edges: Optional[Dict[Tuple[DElem, DElem], Evidence]] = None) -> Reconstruction:
    """Rebuild the target as the colimit of ``F`` over a ``D'`` fragment.

    Returns the comparison map from that colimit into the target and whether
    both its components are bijections.
    """
    bounds = pres.check_bounds(bounds)
    frag = enum_D_prime(pres, bounds, budget)
    if edges is None:
        edges = generating_edges(frag, pres, bounds)
    top = upper_bound_construction(frag, pres).top
    if top not in set(frag):
        raise InvariantError("upper bound of the fragment lies outside it")
    shape = FiniteDirected.from_edges(frag, edges.keys())
    objects = {d: pres.generator(d).obj for d in frag}
    arrows = {(d, d2): F_map(d, d2, ev, pres) for (d, d2), ev in edges.items()}
    star, legs = comma_colimit(CommaDiagram(shape, objects, arrows, pres.T))
    cocone = {d: cocone_leg(d, pres) for d in frag}
    for d, leg in cocone.items():
        if not is_comma_map(objects[d], pres.target, leg):
            raise InvariantError(f"cocone leg at {d!r} is not a comma map")
    try:
        comparison = colimit_mediator(star, legs, cocone)
    except UniversalPropertyError as exc:
        raise InvariantError(f"cocone into the target does not commute: {exc}") from exc
    if not is_comma_map(star, pres.target, comparison):
        raise InvariantError("comparison is not a comma map")
    return Reconstruction(pres.target, len(frag), len(edges), top, star, comparison, is_iso_map(comparison))
