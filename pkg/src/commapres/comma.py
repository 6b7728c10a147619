"""The comma category ``T/A``: triples ``(A, B, f: T A -> B)`` and commuting pairs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Tuple

from . import chains
from .chains import NatChain, StabChain, colimit_over, mediate
from .endo import PolyFunctor, apply_map, apply_obj
from .errors import InvariantError, ShapeError
from .setkit import FinMap, FinSet, compose, identity, inverse, is_iso


@dataclass(frozen=True)
class CommaObj:
    """An object of ``T/A``.

    ``A`` and ``B`` are stabilizing chains presenting the two components;
    ``f`` is stored only at their colimits.
    """

    T: PolyFunctor
    A: StabChain
    B: StabChain
    f: FinMap

    def __post_init__(self):
        if self.f.dom != apply_obj(self.T, self.A.apex) or self.f.cod != self.B.apex:
            raise ShapeError("f must be a map T(colim A) -> colim B")

    @classmethod
    def finite(cls, T: PolyFunctor, A: FinSet, B: FinSet, f: FinMap) -> "CommaObj":
        return cls(T, StabChain.constant(A), StabChain.constant(B), f)

    @property
    def a(self) -> FinSet:
        return self.A.apex

    @property
    def b(self) -> FinSet:
        return self.B.apex

    def to_json(self) -> dict:
        return {"T": self.T.to_json(), "A": self.A.to_json(), "B": self.B.to_json(), "f": self.f.to_json()}

    @classmethod
    def from_json(cls, data, T: PolyFunctor = None) -> "CommaObj":
        if T is None:
            T = PolyFunctor.from_json(data["T"])
        return cls(T, StabChain.from_json(data["A"]), StabChain.from_json(data["B"]), FinMap.from_json(data["f"]))


@dataclass(frozen=True)
class CommaMap:
    alpha: FinMap
    beta: FinMap

    def then(self, other: "CommaMap") -> "CommaMap":
        return CommaMap(compose(other.alpha, self.alpha), compose(other.beta, self.beta))

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_json(), "beta": self.beta.to_json()}

    @classmethod
    def from_json(cls, data) -> "CommaMap":
        return cls(FinMap.from_json(data["alpha"]), FinMap.from_json(data["beta"]))


def compose_maps(second: CommaMap, first: CommaMap) -> CommaMap:
    return first.then(second)


def identity_map(X: CommaObj) -> CommaMap:
    return CommaMap(identity(X.a), identity(X.b))


def is_comma_map(src: CommaObj, dst: CommaObj, m: CommaMap) -> bool:
    """Whether ``dst.f . T(alpha) == beta . src.f``."""
    if src.T != dst.T:
        raise ShapeError("objects live over different functors")
    if m.alpha.dom != src.a or m.alpha.cod != dst.a or m.beta.dom != src.b or m.beta.cod != dst.b:
        raise ShapeError("component maps do not match the objects")
    return compose(dst.f, apply_map(src.T, m.alpha)) == compose(m.beta, src.f)


def is_iso_map(m: CommaMap) -> bool:
    return is_iso(m.alpha) and is_iso(m.beta)


@dataclass(frozen=True)
class CommaDiagram:
    """A diagram in ``T/A`` over a directed shape.

    A :class:`NatChain` shape takes objects at stages ``start..start+H`` and
    arrows ``(n, n + 1)``.  A :class:`FiniteDirected` shape takes an object
    per element and arrows for any set of relations generating the order.
    """

    shape: object
    objects: Mapping[Hashable, CommaObj]
    arrows: Mapping[Tuple[Hashable, Hashable], CommaMap]
    T: PolyFunctor = field(default=None)

    def __post_init__(self):
        if self.T is None:
            first = next(iter(self.objects.values()))
            object.__setattr__(self, "T", first.T)
        for (a, b), m in self.arrows.items():
            if not self.shape.leq(a, b):
                raise ShapeError(f"arrow {a!r} -> {b!r} is not a relation of the shape")

    def validate(self) -> None:
        for (a, b), m in self.arrows.items():
            if not is_comma_map(self.objects[a], self.objects[b], m):
                raise ShapeError(f"arrow {a!r} -> {b!r} is not a comma map")

    def component(self, which: str):
        """Objects and arrows of the ``A`` or ``B`` component diagram."""
        objs = {d: (o.a if which == "A" else o.b) for d, o in self.objects.items()}
        arrs = {e: (m.alpha if which == "A" else m.beta) for e, m in self.arrows.items()}
        return objs, arrs

    def component_chain(self, which: str) -> StabChain:
        if not isinstance(self.shape, NatChain):
            raise ShapeError("only chain-shaped diagrams have component chains")
        objs, arrs = self.component(which)
        keys = sorted(objs)
        return StabChain(
            max(self.shape.bound - self.shape.start, 0),
            tuple(objs[n] for n in keys),
            tuple(arrs[(n, n + 1)] for n in keys[:-1]),
        )

    @classmethod
    def chain(cls, N: int, objects, steps) -> "CommaDiagram":
        """A diagram over the naturals from a list of objects and consecutive steps."""
        return cls(
            NatChain(N),
            {n: o for n, o in enumerate(objects)},
            {(n, n + 1): m for n, m in enumerate(steps)},
        )


def comma_colimit(d: CommaDiagram):
    """Componentwise colimit.  Returns the colimit object and its cocone legs.

    The structure map ``f*`` is induced through the comparison
    ``colim T A_d -> T(colim A_d)``, which is a bijection for directed shapes.
    """
    if not d.shape.is_directed():
        raise ShapeError("colimit shape is not directed")
    T = d.T
    objs_a, arrs_a = d.component("A")
    objs_b, arrs_b = d.component("B")
    col_a = colimit_over(d.shape, objs_a, arrs_a)
    col_b = colimit_over(d.shape, objs_b, arrs_b)
    col_ta = colimit_over(
        d.shape,
        {e: apply_obj(T, X) for e, X in objs_a.items()},
        {e: apply_map(T, m) for e, m in arrs_a.items()},
    )
    comparison = mediate(col_ta, {e: apply_map(T, col_a.leg(e)) for e in objs_a})
    if not is_iso(comparison):
        raise InvariantError("T failed to preserve a directed colimit")
    induced = mediate(col_ta, {e: compose(col_b.leg(e), o.f) for e, o in d.objects.items()})
    f_star = compose(induced, inverse(comparison))
    star = CommaObj.finite(T, col_a.apex, col_b.apex, f_star)
    legs = {e: CommaMap(col_a.leg(e), col_b.leg(e)) for e in d.objects}
    for e, leg in legs.items():
        if not is_comma_map(d.objects[e], star, leg):
            raise InvariantError(f"colimit leg at {e!r} is not a comma map")
    return star, legs


def colimit_mediator(star: CommaObj, legs: Mapping[Hashable, CommaMap], cocone: Mapping[Hashable, CommaMap]) -> CommaMap:
    """The pair of component mediators out of a comma colimit."""
    col_a = chains.ColimitResult(star.a, {e: m.alpha for e, m in legs.items()})
    col_b = chains.ColimitResult(star.b, {e: m.beta for e, m in legs.items()})
    return CommaMap(
        mediate(col_a, {e: m.alpha for e, m in cocone.items()}),
        mediate(col_b, {e: m.beta for e, m in cocone.items()}),
    )
