"""Finitary polynomial endofunctors ``T X = sum_s C_s * X^{n_s}`` on finite sets.

Elements of ``T X`` are triples ``(summand, coeff, args)`` enumerated
lexicographically; ``args`` is a tuple of length ``n_s`` read as a big-endian
numeral in base ``|X|``.  That enumeration is part of the contract, so the
table of ``T f`` is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterator, NamedTuple, Tuple

from .chains import StabChain
from .errors import ShapeError
from .setkit import FinMap, FinSet, identity


class TAElement(NamedTuple):
    summand: int
    coeff: int
    args: Tuple[int, ...]


@dataclass(frozen=True)
class PolyFunctor:
    summands: Tuple[Tuple[int, int], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        summands = tuple((int(c), int(p)) for c, p in self.summands)
        for c, p in summands:
            if c < 0 or p < 0:
                raise ShapeError("coefficients and powers must be non-negative")
        object.__setattr__(self, "summands", summands)
        if not self.name:
            object.__setattr__(self, "name", _render(summands))

    def __call__(self, x):
        if isinstance(x, FinSet):
            return apply_obj(self, x)
        return apply_map(self, x)

    def __str__(self):
        return self.name

    def to_json(self) -> dict:
        return {"summands": [{"coeff": c, "power": p} for c, p in self.summands]}

    @classmethod
    def from_json(cls, data) -> "PolyFunctor":
        T = cls(tuple((s["coeff"], s["power"]) for s in data["summands"]))
        return next((C for C in CATALOG if C == T), T)


def _render(summands) -> str:
    if not summands:
        return "0"
    terms = []
    for c, p in summands:
        if p == 0:
            terms.append(str(c))
        else:
            x = "X" if p == 1 else f"X^{p}"
            terms.append(x if c == 1 else f"{c}*{x}")
    return " + ".join(terms)


IDENTITY = PolyFunctor(((1, 1),), "Id")
CATALOG = (
    IDENTITY,
    PolyFunctor(((1, 0),), "1"),
    PolyFunctor(((2, 0),), "2"),
    PolyFunctor(((1, 0), (1, 1)), "1+X"),
    PolyFunctor(((1, 2),), "X^2"),
    PolyFunctor(((2, 0), (1, 3)), "2+X^3"),
)


def catalog(name: str) -> PolyFunctor:
    for T in CATALOG:
        if T.name == name:
            return T
    raise KeyError(name)


def apply_obj(T: PolyFunctor, X: FinSet) -> FinSet:
    return FinSet(sum(c * X.size ** p for c, p in T.summands))


def elements(T: PolyFunctor, X: FinSet) -> Iterator[TAElement]:
    for s, (c, p) in enumerate(T.summands):
        for k in range(c):
            for args in product(range(X.size), repeat=p):
                yield TAElement(s, k, args)


def encode(T: PolyFunctor, X: FinSet, e: TAElement) -> int:
    n = X.size
    offset = sum(c * n ** p for c, p in T.summands[: e.summand])
    p = T.summands[e.summand][1]
    idx = 0
    for a in e.args:
        idx = idx * n + a
    return offset + e.coeff * n ** p + idx


def decode(T: PolyFunctor, X: FinSet, index: int) -> TAElement:
    n = X.size
    for s, (c, p) in enumerate(T.summands):
        block = c * n ** p
        if index < block:
            k, rest = divmod(index, n ** p)
            args = []
            for _ in range(p):
                rest, a = divmod(rest, n)
                args.append(a)
            return TAElement(s, k, tuple(reversed(args)))
        index -= block
    raise IndexError("index outside T X")


def apply_map(T: PolyFunctor, f: FinMap) -> FinMap:
    """``T f``: coordinatewise on argument tuples, identity on coefficients."""
    m = f.cod.size
    table = []
    out_offset = 0
    for c, p in T.summands:
        block = m ** p
        for k in range(c):
            base = out_offset + k * block
            for args in product(f.table, repeat=p):
                idx = 0
                for a in args:
                    idx = idx * m + a
                table.append(base + idx)
        out_offset += c * block
    return FinMap(apply_obj(T, f.dom), apply_obj(T, f.cod), tuple(table))


def map_chain(T: PolyFunctor, c: StabChain) -> StabChain:
    return StabChain(c.N, tuple(apply_obj(T, X) for X in c.objs), tuple(apply_map(T, s) for s in c.steps))


class Mode(str, Enum):
    """How ``T A_i`` is written as a directed colimit of finite pieces.

    ``TRIVIAL`` uses the one-point poset; ``FILTRATION`` uses the chain of
    lexicographic prefixes ``{0} c {0,1} c ...`` starting from the empty set.
    """

    TRIVIAL = "trivial"
    FILTRATION = "filtration"


def decompose(X: FinSet, mode: Mode = Mode.TRIVIAL) -> StabChain:
    """A stabilizing chain of finite sets whose colimit is ``X`` with inclusion legs."""
    mode = Mode(mode)
    if mode is Mode.TRIVIAL or X.size == 0:
        return StabChain.constant(X)
    steps = tuple(FinMap(FinSet(j), FinSet(j + 1), tuple(range(j))) for j in range(X.size))
    chain = StabChain.from_steps(X.size, steps)
    assert chain.obj(X.size) == X
    return chain


def is_identity(f: FinMap) -> bool:
    return f == identity(f.dom) if f.dom == f.cod else False
