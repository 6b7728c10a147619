"""Directed posets, stabilizing chains of finite sets, and their colimits.

An infinite object is modelled as a chain ``X_0 -> X_1 -> ...`` whose steps
are bijections from a declared bound ``N`` on.  Its colimit is then exactly
``X_N``, and every question about maps out of a finite set into the colimit
(existence and essential uniqueness of factorizations) can be settled by
scanning the stages ``0..N+2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Dict, Hashable, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import (
    MembershipError,
    PreconditionError,
    ShapeError,
    StabilizationError,
    UniversalPropertyError,
)
from .setkit import FinMap, FinSet, UnionFind, compose, identity, inverse, is_iso

SLACK = 2


# -- directed posets --------------------------------------------------------


@dataclass(frozen=True)
class NatChain:
    """The naturals ``start, start+1, ...`` with stabilization bound ``bound``."""

    bound: int = 0
    start: int = 0

    def __contains__(self, s) -> bool:
        return isinstance(s, int) and s >= self.start

    def leq(self, a: int, b: int) -> bool:
        return a <= b

    def elements(self, limit: Optional[int] = None) -> range:
        if limit is None:
            limit = max(self.bound, self.start) + SLACK
        return range(self.start, limit + 1)

    def upper_bound(self, xs: Iterable[int]) -> int:
        return max(xs, default=self.start)

    def is_directed(self) -> bool:
        return True


class FiniteDirected:
    """A finite poset stored as one up-set bitset per element.

    Bit ``b`` of ``up[a]`` is set iff ``elements[a] <= elements[b]``.
    """

    def __init__(self, elements: Sequence[Hashable], up: Sequence[int], check: bool = True):
        self.elements = tuple(elements)
        self.up = tuple(up)
        self.index = {e: n for n, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements) or len(self.up) != len(self.elements):
            raise ShapeError("poset elements must be distinct")
        if check:
            problems = self.violations()
            if problems:
                raise ShapeError("not a directed poset: " + "; ".join(problems[:3]))

    @classmethod
    def from_pairs(cls, elements, pairs: Iterable[Tuple[Hashable, Hashable]], check=True):
        elements = tuple(elements)
        index = {e: n for n, e in enumerate(elements)}
        up = [0] * len(elements)
        for a, b in pairs:
            up[index[a]] |= 1 << index[b]
        return cls(elements, up, check=check)

    @classmethod
    def from_edges(cls, elements, edges: Iterable[Tuple[Hashable, Hashable]], check=True):
        """The reflexive-transitive closure of ``edges``; cycles are rejected."""
        elements = tuple(elements)
        index = {e: n for n, e in enumerate(elements)}
        succ = [set() for _ in elements]
        for a, b in edges:
            ia, ib = index[a], index[b]
            if ia != ib:
                succ[ia].add(ib)
        try:
            # successors are emitted before the nodes that point at them
            order = list(TopologicalSorter(dict(enumerate(succ))).static_order())
        except CycleError as exc:
            raise ShapeError("edges contain a cycle") from exc
        up = [1 << n for n in range(len(elements))]
        for n in order:
            for m in succ[n]:
                up[n] |= up[m]
        # closure of an acyclic relation is already a partial order
        poset = cls(elements, up, check=False)
        if check and not poset.is_directed():
            raise ShapeError("not a directed poset: some pair has no upper bound")
        return poset

    @classmethod
    def chain(cls, n: int):
        """``0 <= 1 <= ... <= n``."""
        up = [((1 << (n + 1)) - 1) & ~((1 << a) - 1) for a in range(n + 1)]
        return cls(range(n + 1), up)

    def __contains__(self, s) -> bool:
        return s in self.index

    def __len__(self):
        return len(self.elements)

    def leq(self, a, b) -> bool:
        return bool(self.up[self.index[a]] >> self.index[b] & 1)

    def above(self, a) -> Tuple[Hashable, ...]:
        bits = self.up[self.index[a]]
        return tuple(e for n, e in enumerate(self.elements) if bits >> n & 1)

    def top(self):
        common = (1 << len(self.elements)) - 1
        for bits in self.up:
            common &= bits
        if not common:
            return None
        return self.elements[(common & -common).bit_length() - 1]

    def upper_bound(self, xs: Iterable[Hashable]):
        common = (1 << len(self.elements)) - 1
        for x in xs:
            common &= self.up[self.index[x]]
        if not common:
            raise ShapeError("no upper bound")
        return self.elements[(common & -common).bit_length() - 1]

    def violations(self):
        out = []
        up = self.up
        n = len(up)
        if n == 0:
            return ["empty poset is not directed"]
        for a in range(n):
            if not up[a] >> a & 1:
                out.append(f"{self.elements[a]!r} not reflexive")
            for b in _bits(up[a]):
                if b != a and up[b] >> a & 1:
                    out.append(f"{self.elements[a]!r} and {self.elements[b]!r} violate antisymmetry")
                if up[b] & ~up[a]:
                    out.append(f"transitivity fails above {self.elements[a]!r}")
        if not out and not self.is_directed():
            out.append("some pair has no upper bound")
        return out

    def is_directed(self) -> bool:
        if not self.up:
            return False
        if self.top() is not None:
            return True
        return all(self.up[a] & self.up[b] for a in range(len(self.up)) for b in range(a))

    def restrict(self, keep: Callable[[Hashable], bool]) -> "FiniteDirected":
        kept = [n for n, e in enumerate(self.elements) if keep(e)]
        pairs = [
            (self.elements[a], self.elements[b]) for a in kept for b in kept if self.up[a] >> b & 1
        ]
        return FiniteDirected.from_pairs([self.elements[a] for a in kept], pairs)


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


DirPoset = (NatChain, FiniteDirected)


def upset(p, s):
    if s not in p:
        raise MembershipError(s)
    if isinstance(p, NatChain):
        return NatChain(p.bound, s)
    return p.restrict(lambda e: p.leq(s, e))


def is_cofinal(pred: Callable[[Hashable], bool], p, sample_bound: int,
               search_bound: Optional[int] = None) -> bool:
    """Whether every sampled element has an upper bound satisfying ``pred``.

    On a :class:`NatChain` the elements up to ``sample_bound`` are sampled and
    upper bounds are sought up to ``search_bound`` (default
    ``2 * sample_bound + 2``).  A finite poset is checked exhaustively.
    """
    if isinstance(p, NatChain):
        if search_bound is None:
            search_bound = 2 * sample_bound + 2
        good = [m for m in range(p.start, search_bound + 1) if pred(m)]
        return all(any(m >= n for m in good) for n in range(p.start, sample_bound + 1))
    good_bits = 0
    for n, e in enumerate(p.elements):
        if pred(e):
            good_bits |= 1 << n
    return all(bits & good_bits for bits in p.up)


# -- stabilizing chains -----------------------------------------------------


@dataclass(frozen=True)
class ColimitResult:
    apex: FinSet
    legs: Mapping[Hashable, FinMap]

    def leg(self, key) -> FinMap:
        try:
            return self.legs[key]
        except KeyError:
            if isinstance(key, int) and self.legs and key > max(self.legs):
                return self.legs[max(self.legs)]
            raise


@dataclass(frozen=True)
class StabChain:
    """``objs[0] -> objs[1] -> ...``; steps from ``N`` on must be bijections.

    Stages past the stored ones repeat the last object with identity steps.
    Storage is padded to at least ``N + 2`` so every scan has two slack steps.
    """

    N: int
    objs: Tuple[FinSet, ...]
    steps: Tuple[FinMap, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        objs, steps = list(self.objs), list(self.steps)
        if self.N < 0 or not objs:
            raise ShapeError("a chain needs at least one object and N >= 0")
        if len(steps) != len(objs) - 1:
            raise ShapeError("need exactly one step between consecutive objects")
        for n, s in enumerate(steps):
            if s.dom != objs[n] or s.cod != objs[n + 1]:
                raise ShapeError(f"step {n} is not a map objs[{n}] -> objs[{n + 1}]")
        while len(objs) < self.N + SLACK + 1:
            steps.append(identity(objs[-1]))
            objs.append(objs[-1])
        object.__setattr__(self, "objs", tuple(objs))
        object.__setattr__(self, "steps", tuple(steps))

    @classmethod
    def constant(cls, X: FinSet, N: int = 0) -> "StabChain":
        return cls(N, (X,), ())

    @classmethod
    def from_steps(cls, N: int, steps: Sequence[FinMap]) -> "StabChain":
        if not steps:
            raise ShapeError("from_steps needs at least one step")
        return cls(N, (steps[0].dom,) + tuple(s.cod for s in steps), tuple(steps))

    @property
    def horizon(self) -> int:
        return self.N + SLACK

    @property
    def index(self) -> NatChain:
        return NatChain(self.N)

    def obj(self, n: int) -> FinSet:
        return self.objs[min(n, len(self.objs) - 1)]

    def step(self, n: int) -> FinMap:
        if n < len(self.steps):
            return self.steps[n]
        return identity(self.obj(n))

    def transition(self, n: int, m: int) -> FinMap:
        """The composite ``obj(n) -> obj(m)`` for ``n <= m``."""
        if n > m:
            raise PreconditionError(f"no transition from stage {n} down to {m}")
        last = len(self.objs) - 1
        n, m = min(n, last), min(m, last)
        key = ("t", n, m)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if n == m:
            t = identity(self.objs[n])
        else:
            t = compose(self.steps[m - 1], self.transition(n, m - 1))
        self._cache[key] = t
        return t

    def is_stabilized(self) -> bool:
        return all(is_iso(s) for s in self.steps[self.N:])

    def shift(self, s: int) -> "StabChain":
        """The tail of the chain starting at stage ``s``, reindexed from 0."""
        last = len(self.objs) - 1
        s = min(s, last)
        return StabChain(max(self.N - s, 0), self.objs[s:], self.steps[s:])

    @property
    def apex(self) -> FinSet:
        return colimit(self).apex

    def to_json(self) -> dict:
        H = self.horizon
        return {
            "N": self.N,
            "objs": [self.obj(n).to_json() for n in range(H + 1)],
            "steps": [self.step(n).to_json() for n in range(H)],
        }

    @classmethod
    def from_json(cls, data) -> "StabChain":
        objs = tuple(FinSet.from_json(o) for o in data["objs"])
        steps = tuple(FinMap.from_json(s) for s in data["steps"])
        return cls(data["N"], objs, steps)


def colimit(c: StabChain) -> ColimitResult:
    cached = c._cache.get("colimit")
    if cached is not None:
        return cached
    if not c.is_stabilized():
        bad = next(n for n in range(c.N, len(c.steps)) if not is_iso(c.steps[n]))
        raise StabilizationError(f"step {bad} is not a bijection but N = {c.N}")
    N = c.N
    apex = c.obj(N)
    legs = {}
    for n in range(c.horizon + 1):
        legs[n] = c.transition(n, N) if n <= N else inverse(c.transition(N, n))
    result = ColimitResult(apex, legs)
    c._cache["colimit"] = result
    return result


@dataclass(frozen=True)
class Factorization:
    stage: int
    factor: FinMap


def _least_preimages(f: FinMap) -> Dict[int, int]:
    pre = {}
    for x, y in enumerate(f.table):
        pre.setdefault(y, x)
    return pre


def factor_through(m: FinMap, c: StabChain) -> Factorization:
    """Least stage ``k`` and a map ``q`` with ``leg(k) . q == m``.

    Each element is sent to the least preimage of its image under ``leg(k)``.
    """
    col = colimit(c)
    if m.cod != col.apex:
        raise PreconditionError("map does not land in the chain's colimit")
    for k in range(c.horizon + 1):
        pre = _least_preimages(col.leg(k))
        if all(y in pre for y in m.table):
            return Factorization(k, FinMap(m.dom, c.obj(k), tuple(pre[y] for y in m.table)))
    raise StabilizationError("no factorization within the horizon")  # unreachable once stabilized


def equalize_factorizations(f1: Factorization, f2: Factorization, c: StabChain) -> int:
    """Least stage past both at which the two factors agree after transport."""
    col = colimit(c)
    if f1.factor.dom != f2.factor.dom:
        raise PreconditionError("factorizations have different sources")
    if compose(col.leg(f1.stage), f1.factor) != compose(col.leg(f2.stage), f2.factor):
        raise PreconditionError("factorizations do not factor the same map")
    start = max(f1.stage, f2.stage)
    for k in range(start, max(start, c.horizon) + 1):
        if compose(c.transition(f1.stage, k), f1.factor) == compose(c.transition(f2.stage, k), f2.factor):
            return k
    raise StabilizationError("factorizations never agree")  # unreachable once stabilized


# -- colimits of finite diagrams -----------------------------------------


def diagram_colimit(objects: Mapping[Hashable, FinSet],
                    arrows: Iterable[Tuple[Hashable, Hashable, FinMap]]) -> ColimitResult:
    """Colimit of finite sets over the given arrows, as a quotient of the disjoint union.

    Classes are numbered by their least member, with the disjoint union laid
    out in the iteration order of ``objects``.
    """
    offset = {}
    total = 0
    for key, X in objects.items():
        offset[key] = total
        total += X.size
    uf = UnionFind(total)
    for src, dst, m in arrows:
        if m.dom != objects[src] or m.cod != objects[dst]:
            raise ShapeError(f"arrow {src!r} -> {dst!r} is mistyped")
        a, b = offset[src], offset[dst]
        for x, y in enumerate(m.table):
            uf.union(a + x, b + y)
    n, labels = uf.canonical_labels()
    apex = FinSet(n)
    legs = {
        key: FinMap(X, apex, labels[offset[key]:offset[key] + X.size]) for key, X in objects.items()
    }
    return ColimitResult(apex, legs)


def colimit_over(shape, objects: Mapping[Hashable, FinSet],
                 arrows: Mapping[Tuple[Hashable, Hashable], FinMap]) -> ColimitResult:
    """Colimit of a diagram over a :class:`NatChain` or :class:`FiniteDirected` shape.

    A chain diagram supplies objects ``0..H`` and the arrows ``(n, n + 1)``.
    """
    if isinstance(shape, NatChain):
        keys = sorted(objects)
        if keys != list(range(shape.start, shape.start + len(keys))):
            raise ShapeError("chain diagram objects must be consecutive stages")
        steps = [arrows[(n, n + 1)] for n in keys[:-1]]
        chain = StabChain(max(shape.bound - shape.start, 0), tuple(objects[n] for n in keys), tuple(steps))
        col = colimit(chain)
        return ColimitResult(col.apex, {n: col.leg(n - shape.start) for n in keys})
    if not shape.is_directed():
        raise ShapeError("colimit shape is not directed")
    return diagram_colimit(objects, ((a, b, m) for (a, b), m in arrows.items()))


def mediate(col: ColimitResult, cocone: Mapping[Hashable, FinMap]) -> FinMap:
    """The unique map out of a colimit restricting to each cocone leg."""
    cods = {m.cod for m in cocone.values()}
    if len(cods) != 1:
        raise ShapeError("cocone legs need one shared codomain")
    cod = cods.pop()
    table = [-1] * col.apex.size
    for key, m in cocone.items():
        leg = col.leg(key)
        for x, y in enumerate(leg.table):
            if table[y] < 0:
                table[y] = m.table[x]
    if -1 in table:
        raise ShapeError("colimit legs are not jointly surjective")
    out = FinMap(col.apex, cod, tuple(table))
    for key, m in cocone.items():
        if compose(out, col.leg(key)) != m:
            raise UniversalPropertyError(f"cocone leg at {key!r} does not commute")
    return out
