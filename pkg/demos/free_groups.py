"""With no roots the machinery is plain Stallings folding plus coset counting.

Subgroups of the free group F(x, y) of finite index n have rank n + 1, and
the decision procedure finds the index together with coset representatives.
"""

from lyndon_index import decide_index, graph_from_words, parse_tower, parse_word
from lyndon_index.index import comm_contains_level0, free_intersection, join_and_decide
from lyndon_index.words import render_word

tower = parse_tower("alphabet: x y\n")


def G(*ws):
    return graph_from_words([parse_word(w, tower) for w in ws], tower)


F = G("x", "y")
cases = {
    "<x^2, y, x y x^-1>": G("x x", "y", "x y x^-1"),
    "<x^3, y, x y x^-1, x^2 y x^-2>": G("x x x", "y", "x y x^-1", "x x y x^-1 x^-1"),
    "<x, y x y^-1>": G("x", "y x y^-1"),
    "<x y x^-1 y^-1>": G("x y x^-1 y^-1"),
}
for name, h in cases.items():
    v = decide_index(F, h)
    if v.finite:
        reps = ", ".join(render_word(r, tower) or "1" for r in v.reps)
        print(f"{name}: index {v.index}, rank {h.cycle_rank()}, cosets {reps}")
    else:
        print(f"{name}: infinite index, witness {v.witness.text()}")

# intersections and joins
A, B = G("x x", "y", "x y x^-1"), G("x", "y y", "y x y^-1")
I = free_intersection(A, B)
print("A meet B has rank", I.cycle_rank(), "and index", decide_index(F, I).index, "in F")
print("join of A and B over A meet B: index", join_and_decide(A, B, I).index)

# every element commensurates a finite index subgroup; x does not for <x^2, y>
print("x commensurates A:", comm_contains_level0(A, parse_word("x", tower)))
print("x commensurates <x^2, y>:", comm_contains_level0(G("x x", "y"), parse_word("x", tower)))
