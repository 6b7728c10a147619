"""Finite-set model of the comma category T/A and of its presentation by generators.

Sets are ``{0, ..., n-1}``, infinite objects are stabilizing chains, and the
endofunctors are finitary polynomial functors.
"""
from .setkit import FinMap, FinSet, Span, compose, identity, pushout, pushout_mediator
from .chains import FiniteDirected, NatChain, StabChain, colimit, equalize_factorizations, factor_through
from .endo import CATALOG, Mode, PolyFunctor, apply_map, apply_obj, decompose, map_chain
from .comma import CommaDiagram, CommaMap, CommaObj, comma_colimit, is_comma_map
from .construct import (
    DElem, Presentation, Witness, build_generator, cofinal_lift, d_leq, d_upper_bound, enum_D,
    enum_D_prime, reconstruct,
)
from .verify import (
    Report, SpanDiagram, check_lemma_G, check_lemma_H, check_presentable, check_pushout_commute,
)

__all__ = [
    "FinMap", "FinSet", "Span", "compose", "identity", "pushout", "pushout_mediator",
    "FiniteDirected", "NatChain", "StabChain", "colimit", "equalize_factorizations", "factor_through",
    "CATALOG", "Mode", "PolyFunctor", "apply_map", "apply_obj", "decompose", "map_chain",
    "CommaDiagram", "CommaMap", "CommaObj", "comma_colimit", "is_comma_map",
    "DElem", "Presentation", "Witness", "build_generator", "cofinal_lift", "d_leq", "d_upper_bound",
    "enum_D", "enum_D_prime", "reconstruct",
    "Report", "SpanDiagram", "check_lemma_G", "check_lemma_H", "check_presentable", "check_pushout_commute",
]
