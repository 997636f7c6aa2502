"""Type letters, the type automaton and periodic types of a small graph."""

import itertools

from lyndon_index import graph_from_words, parse_tower, parse_word
from lyndon_index.words import render_letter
from lyndon_index.types import (
    TypeAutomaton, enumerate_periodic, is_doubled, m_const, n_const, shortest_lasso, type_alphabet,
)

tower = parse_tower("""
alphabet: x y z
D: 2
root u1 = x y x
""")
g = graph_from_words([parse_word(w, tower) for w in ("u1^{t} z", "z y")], tower)
h = graph_from_words([parse_word(w, tower) for w in ("u1^{t} z u1^{t} z", "z y", "u1^{t} z z y z^-1 u1^{-t}")], tower)

print("type alphabet:")
for a in type_alphabet(g):
    if a.kind == "e":
        extra = "reads " + render_letter(a.label, tower)
    elif a.coset.lattice.rank == 0:
        extra = f"exponent {a.coset.rep}, class {a.region}"
    else:
        extra = f"exponents {a.coset}, class {a.region}"
    print(f"  {a.token():14s} {a.origin}->{a.terminus}  {extra}")

A = TypeAutomaton(g)
start = A.start(g.base)
order, _ = A.reachable(start)
print("window M =", m_const(g), "| reachable states:", len(order), "| N =", n_const(g))
print("shortest lasso:", shortest_lasso(A, start).text())
for t in itertools.islice(enumerate_periodic(g, limit=4), 8):
    print(f"  {t.text():40s} doubled in H: {is_doubled(t, h)}")
