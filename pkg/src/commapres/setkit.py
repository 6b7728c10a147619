"""Finite sets, total maps between them, and their finite colimits.

Elements of a :class:`FinSet` of size ``n`` are the integers ``0..n-1``.
Quotients are always renumbered so that equivalence classes appear in
ascending order of their smallest member; two colimits computed from the
same data are therefore equal as values, not merely isomorphic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

from .errors import CompositionError, ShapeError, UniversalPropertyError


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 0:
            raise ShapeError(f"negative size {self.size}")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.size or len(set(labels)) != self.size:
                raise ShapeError("labels must be distinct and match size")
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def to_json(self) -> dict:
        return {"size": self.size, "labels": list(self.labels) if self.labels else None}

    @classmethod
    def from_json(cls, data) -> "FinSet":
        if isinstance(data, int):
            return cls(data)
        labels = data.get("labels")
        return cls(data["size"], tuple(labels) if labels else None)


EMPTY = FinSet(0)


@dataclass(frozen=True)
class FinMap:
    dom: FinSet
    cod: FinSet
    table: Tuple[int, ...]

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.size:
            raise ShapeError(f"table has {len(table)} entries, domain has {self.dom.size}")
        n = self.cod.size
        for y in table:
            if not 0 <= y < n:
                raise ShapeError(f"table entry {y} outside codomain of size {n}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __matmul__(self, other: "FinMap") -> "FinMap":
        # g @ f is g after f
        return compose(self, other)

    def image(self) -> frozenset:
        return frozenset(self.table)

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(), "table": list(self.table)}

    @classmethod
    def from_json(cls, data) -> "FinMap":
        return cls(FinSet.from_json(data["dom"]), FinSet.from_json(data["cod"]), tuple(data["table"]))


def identity(X: FinSet) -> FinMap:
    return FinMap(X, X, tuple(range(X.size)))


def empty_map(Y: FinSet) -> FinMap:
    return FinMap(EMPTY, Y, ())


def constant(X: FinSet, Y: FinSet, y: int) -> FinMap:
    return FinMap(X, Y, (y,) * X.size)


def compose(g: FinMap, f: FinMap) -> FinMap:
    """``g`` after ``f``."""
    if f.cod != g.dom:
        raise CompositionError(f"cannot compose: f lands in {f.cod.size}, g starts at {g.dom.size}")
    gt = g.table
    return FinMap(f.dom, g.cod, tuple(gt[y] for y in f.table))


def compose_all(*maps: FinMap) -> FinMap:
    """Compose right to left: ``compose_all(h, g, f)`` is h after g after f."""
    result = maps[-1]
    for m in reversed(maps[:-1]):
        result = compose(m, result)
    return result


def is_iso(f: FinMap) -> bool:
    return f.dom.size == f.cod.size and len(set(f.table)) == f.dom.size


def inverse(f: FinMap) -> FinMap:
    if not is_iso(f):
        raise ShapeError("map is not a bijection")
    inv = [0] * f.cod.size
    for x, y in enumerate(f.table):
        inv[y] = x
    return FinMap(f.cod, f.dom, tuple(inv))


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.weight = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.weight[rx] < self.weight[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.weight[rx] += self.weight[ry]
        return True

    def canonical_labels(self) -> Tuple[int, Tuple[int, ...]]:
        """Number the classes by ascending least member.

        Returns the class count and, for each element, its class number.
        """
        number = {}
        labels = []
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in number:
                number[r] = len(number)
            labels.append(number[r])
        return len(number), tuple(labels)


def quotient(X: FinSet, pairs: Iterable[Tuple[int, int]]) -> FinMap:
    """The quotient map of ``X`` by the equivalence generated by ``pairs``."""
    uf = UnionFind(X.size)
    for a, b in pairs:
        uf.union(a, b)
    n, labels = uf.canonical_labels()
    return FinMap(X, FinSet(n), labels)


def coproduct(X: FinSet, Y: FinSet) -> Tuple[FinSet, FinMap, FinMap]:
    S = FinSet(X.size + Y.size)
    inl = FinMap(X, S, tuple(range(X.size)))
    inr = FinMap(Y, S, tuple(range(X.size, X.size + Y.size)))
    return S, inl, inr


def copair(left: FinMap, right: FinMap) -> FinMap:
    """The map out of ``left.dom + right.dom`` that restricts to both legs."""
    if left.cod != right.cod:
        raise ShapeError("copairing needs a shared codomain")
    S = FinSet(left.dom.size + right.dom.size)
    return FinMap(S, left.cod, left.table + right.table)


def coequalizer(f: FinMap, g: FinMap) -> Tuple[FinSet, FinMap]:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeError("coequalizer needs parallel maps")
    e = quotient(f.cod, zip(f.table, g.table))
    return e.cod, e


@dataclass(frozen=True)
class Span:
    """``left.cod <- left.dom -> right.cod``."""

    left: FinMap
    right: FinMap

    def __post_init__(self):
        if self.left.dom != self.right.dom:
            raise ShapeError("span legs must share a domain")

    @property
    def apex(self) -> FinSet:
        return self.left.dom

    def to_json(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json()}

    @classmethod
    def from_json(cls, data) -> "Span":
        return cls(FinMap.from_json(data["left"]), FinMap.from_json(data["right"]))


@dataclass(frozen=True)
class PushoutResult:
    span: Span
    apex: FinSet
    inj_left: FinMap
    inj_right: FinMap


def pushout(s: Span) -> PushoutResult:
    S, inl, inr = coproduct(s.left.cod, s.right.cod)
    apex, e = coequalizer(compose(inl, s.left), compose(inr, s.right))
    return PushoutResult(s, apex, compose(e, inl), compose(e, inr))


def pushout_mediator(po: PushoutResult, cocone_left: FinMap, cocone_right: FinMap) -> FinMap:
    """The unique map out of the pushout apex restricting to the two cocone legs."""
    span = po.span
    if cocone_left.dom != span.left.cod or cocone_right.dom != span.right.cod:
        raise ShapeError("cocone legs do not start at the span's feet")
    if cocone_left.cod != cocone_right.cod:
        raise ShapeError("cocone legs need a shared codomain")
    if compose(cocone_left, span.left) != compose(cocone_right, span.right):
        raise UniversalPropertyError("cocone does not commute with the span")
    table = [-1] * po.apex.size
    for x, y in enumerate(po.inj_left.table):
        table[y] = cocone_left.table[x]
    for x, y in enumerate(po.inj_right.table):
        if table[y] < 0:
            table[y] = cocone_right.table[x]
    m = FinMap(po.apex, cocone_left.cod, table)
    if compose(m, po.inj_left) != cocone_left or compose(m, po.inj_right) != cocone_right:
        raise UniversalPropertyError("cocone legs disagree on identified elements")
    return m


def all_maps(X: FinSet, Y: FinSet) -> Iterable[FinMap]:
    """Every map ``X -> Y`` in lexicographic table order."""
    from itertools import product

    for t in product(range(Y.size), repeat=X.size):
        yield FinMap(X, Y, t)


def sections_count(choices: Sequence[Sequence[int]]) -> int:
    n = 1
    for c in choices:
        n *= len(c)
        if n == 0:
            return 0
    return n
