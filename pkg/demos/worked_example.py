"""Index two inside a group with a root u1 = xyx.

G is generated by a = x u1^t z1 u1^t x y and b = x u1^t z2 u1^t x y, and H by
a^2, b^2 and ab.  Every element of G is a product of a's and b's, and H is
exactly the words of even length, so |G:H| = 2 and a itself is not in H.
"""

from lyndon_index import decide_index, graph_from_words, member, parse_tower, parse_word
from lyndon_index.graph import assert_u_folded, dump_graph
from lyndon_index.words import normalize, render_word

tower = parse_tower("""
alphabet: x y z1 z2
D: 3
root u1 = x y x
""")
a = parse_word("x u1^{t} z1 u1^{t} x y", tower)
b = parse_word("x u1^{t} z2 u1^{t} x y", tower)

gG = graph_from_words([a, b], tower)
gH = graph_from_words([a + a, b + b, a + b], tower)
print("graph of G:")
print(dump_graph(gG))
print("folding certificate for G:", bool(assert_u_folded(gG)), "| for H:", bool(assert_u_folded(gH)))

print("a in H?", member(gH, a))
print("a^2 in H?", member(gH, normalize(a + a, tower)))
print("b a in H?", member(gH, normalize(b + a, tower)))

v = decide_index(gG, gH, gens=[a, b])
print(v.render(tower), end="")

# against <a^2> alone the index is infinite, with a periodic witness
gX = graph_from_words([a + a], tower)
w = decide_index(gG, gX, reps=False)
print("against <a^2>:", "finite" if w.finite else "infinite, witness " + w.witness.text())
print("a^2 normalized:", render_word(normalize(a + a, tower), tower))
