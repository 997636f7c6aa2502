"""Finite index of subgroups of Lyndon's group F^Z[t] via labeled graphs."""

from .zt_poly import Poly, parse_poly, poly_cmp, is_nonstandard, Lattice, Coset, Region
from .words import Tower, Base, Power, parse_tower, parse_word, render_word, normalize, validate_standard, validate_tower
from .graph import LabeledGraph, graph_from_words, make_u_folded, read_word, member, assert_u_folded
from .types import TypeAutomaton, PeriodicType, is_doubled, types_infinite, enumerate_periodic
from .index import IndexVerdict, decide_index, coset_reps, join_and_decide, free_intersection, comm_contains_level0

__all__ = [
    "Poly", "parse_poly", "poly_cmp", "is_nonstandard", "Lattice", "Coset", "Region",
    "Tower", "Base", "Power", "parse_tower", "parse_word", "render_word", "normalize",
    "validate_standard", "validate_tower",
    "LabeledGraph", "graph_from_words", "make_u_folded", "read_word", "member", "assert_u_folded",
    "TypeAutomaton", "PeriodicType", "is_doubled", "types_infinite", "enumerate_periodic",
    "IndexVerdict", "decide_index", "coset_reps", "join_and_decide", "free_intersection",
    "comm_contains_level0",
]
