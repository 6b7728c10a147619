"""Seeded random instances: chains, targets, witnesses and diagrams.

Every generator takes a :class:`random.Random`; :func:`rng_for` derives one
from ``(seed, suite, case)`` so each case is reproducible on its own.
"""
from __future__ import annotations

import random
from typing import List, Optional, Sequence

from .chains import NatChain, StabChain
from .comma import CommaDiagram, CommaMap, CommaObj
from .construct import Witness
from .endo import CATALOG, PolyFunctor, apply_obj, map_chain
from .setkit import FinMap, FinSet, Span

MAX_N = 3


def rng_for(seed: int, suite: str, case: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{case}")


def random_map(rng: random.Random, X: FinSet, Y: FinSet) -> FinMap:
    if X.size and not Y.size:
        raise ValueError("no maps into the empty set")
    return FinMap(X, Y, tuple(rng.randrange(Y.size) for _ in range(X.size)))


def random_injection(rng, X: FinSet, Y: FinSet) -> FinMap:
    return FinMap(X, Y, tuple(rng.sample(range(Y.size), X.size)))


def random_surjection(rng, X: FinSet, Y: FinSet) -> FinMap:
    order = list(range(X.size))
    rng.shuffle(order)
    table = [0] * X.size
    for n, x in enumerate(order):
        table[x] = n if n < Y.size else rng.randrange(Y.size)
    return FinMap(X, Y, tuple(table))


def random_chain(rng: random.Random, max_size: int, max_N: int = MAX_N, injective: bool = False,
                 min_size: int = 0) -> StabChain:
    """A chain that grows by injections up to a random peak, then collapses by surjections.

    Steps from ``N`` on are identities, and a nonempty stage never maps to an
    empty one.  Stage sizes stay within ``[min_size, max(max_size, min_size)]``.
    """
    max_size = max(max_size, min_size)
    N = rng.randint(0, max_N)
    peak = N if injective else rng.randint(0, N)
    sizes = [rng.randint(min_size, max_size)]
    for n in range(N):
        s = sizes[-1]
        sizes.append(rng.randint(s, max_size) if n < peak else rng.randint(min(1, s), s))
    objs = [FinSet(s) for s in sizes]
    steps = []
    for n in range(N):
        X, Y = objs[n], objs[n + 1]
        steps.append(random_injection(rng, X, Y) if n < peak else random_surjection(rng, X, Y))
    return StabChain(N, tuple(objs), tuple(steps))


def random_functor(rng: random.Random) -> PolyFunctor:
    return rng.choice(CATALOG)


def random_target(rng: random.Random, max_size: int, T: Optional[PolyFunctor] = None) -> CommaObj:
    """A random ``(A, B, f)``; ``B`` is redrawn with nonempty stages when no map ``T A -> B`` exists."""
    T = T or random_functor(rng)
    A = random_chain(rng, max_size)
    TA = apply_obj(T, A.apex)
    B = random_chain(rng, max_size)
    if TA.size and not B.apex.size:
        B = random_chain(rng, max_size, min_size=1)
    return CommaObj(T, A, B, random_map(rng, TA, B.apex))


def random_witness(rng: random.Random, max_size: int, T: Optional[PolyFunctor] = None) -> Witness:
    T = T or random_functor(rng)
    A = FinSet(rng.randint(0, max_size))
    TA = apply_obj(T, A)
    Q = FinSet(rng.randint(0, max_size))
    P = FinSet(rng.randint(0, max_size) if TA.size and Q.size else 0)
    return Witness(T, A, P, Q, random_map(rng, P, TA), random_map(rng, P, Q))


def random_natural_family(rng: random.Random, src: StabChain, dst: StabChain, H: int) -> Optional[List[FinMap]]:
    """Maps ``src_n -> dst_n`` for ``n <= H`` commuting with the steps, or ``None`` on a dead end.

    Stage ``n + 1`` is forced on the image of the previous step and random elsewhere.
    """
    fam = []
    for n in range(H + 1):
        X, Y = src.obj(n), dst.obj(n)
        if X.size and not Y.size:
            return None
        forced = {}
        if n:
            s, t, prev = src.step(n - 1), dst.step(n - 1), fam[-1]
            for x in range(s.dom.size):
                y, v = s(x), t(prev(x))
                if forced.setdefault(y, v) != v:
                    return None
        fam.append(FinMap(X, Y, tuple(forced[x] if x in forced else rng.randrange(Y.size) for x in range(X.size))))
    return fam


def random_comma_diagram(rng: random.Random, max_size: int, T: Optional[PolyFunctor] = None,
                         tries: int = 20) -> CommaDiagram:
    """A chain-shaped diagram in ``T/A`` that stabilizes.

    Structure maps are sampled as a natural family; after ``tries`` failed
    attempts the ``A`` chain is made injective, where sampling cannot fail
    once the ``B`` stages are nonempty.
    """
    T = T or random_functor(rng)
    attempt = 0
    while True:
        fallback = attempt >= tries
        A = random_chain(rng, max_size, injective=fallback)
        B = random_chain(rng, max_size, min_size=int(fallback))
        N = max(A.N, B.N)
        H = N + 2
        fam = random_natural_family(rng, map_chain(T, A), B, H)
        attempt += 1
        if fam is None:
            continue
        objs = [CommaObj.finite(T, A.obj(n), B.obj(n), fam[n]) for n in range(H + 1)]
        steps = [CommaMap(A.step(n), B.step(n)) for n in range(H)]
        d = CommaDiagram.chain(N, objs, steps)
        d.validate()
        return d


def random_span_diagram(rng: random.Random, max_size: int, tries: int = 20):
    """A chain of spans ``X0 <- V -> X1`` with natural steps."""
    from .verify import SpanDiagram

    attempt = 0
    while True:
        fallback = attempt >= tries
        V = random_chain(rng, max_size, injective=fallback)
        X0 = random_chain(rng, max_size, min_size=int(fallback))
        X1 = random_chain(rng, max_size, min_size=int(fallback))
        attempt += 1
        N = max(V.N, X0.N, X1.N)
        H = N + 2
        left = random_natural_family(rng, V, X0, H)
        right = random_natural_family(rng, V, X1, H)
        if left is None or right is None:
            continue
        spans = {n: Span(left[n], right[n]) for n in range(H + 1)}
        arrows = {(n, n + 1): (X0.step(n), V.step(n), X1.step(n)) for n in range(H)}
        return SpanDiagram(NatChain(N), spans, arrows)


def sample(rng: random.Random, items: Sequence, k: int) -> list:
    """``k`` items without replacement, or all of them in order if there are fewer."""
    if len(items) <= k:
        return list(items)
    return [items[n] for n in sorted(rng.sample(range(len(items)), k))]
