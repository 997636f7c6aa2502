import itertools
import random

import pytest

from lyndon_index.graph import LabeledGraph, NotFolded, graph_from_words
from lyndon_index.types import (
    DoublingStats, PeriodicType, TypeAutomaton, almost_doubled, concat_admissible, enumerate_periodic,
    is_doubled, m_const, n_const, shortest_lasso, type_alphabet, type_of_path, types_infinite,
)
from lyndon_index.words import parse_tower, parse_word

from randgen import discard_sample, random_gens, random_tower, tsr_sample

FREE = parse_tower("alphabet: x y z\n")
EXAMPLE = parse_tower("""
alphabet: x y z1 z2
D: 3
root u1 = x y x
""")
U = parse_tower("alphabet: x y\nD: 2\nroot u1 = x y\n")


def G(tower, *words):
    return graph_from_words([parse_word(w, tower) for w in words], tower)


def _example():
    a = "x u1^{t} z1 u1^{t} x y"
    b = "x u1^{t} z2 u1^{t} x y"
    return G(EXAMPLE, a, b), G(EXAMPLE, f"{a} {a}", f"{b} {b}", f"{a} {b}")


def test_alphabet_free_graph():
    g = G(FREE, "x", "y", "z")
    letters = type_alphabet(g)
    assert len(letters) == 6 and all(a.kind == "e" for a in letters)


def test_alphabet_single_span_loop():
    g = G(U, "u1^{t}")
    spans = [a for a in type_alphabet(g) if a.kind == "s"]
    assert len(spans) == 2
    assert {a.region.sign for a in spans} == {"positive", "negative"}


def test_alphabet_needs_folded_graph():
    with pytest.raises(NotFolded):
        type_alphabet(LabeledGraph(FREE, 0))


def test_m_const():
    gG, _ = _example()
    assert m_const(gG) == 4
    assert m_const(G(FREE, "x")) == 1


def test_x_loop_automaton():
    g = G(FREE, "x")
    A = TypeAutomaton(g)
    s = A.start(g.base)
    ms = A.moves(s)
    # one vertex; the window only remembers the last letter
    assert len(ms) == 2 and {n[0] for _, n in ms} == {g.base}
    order, _ = A.reachable(s)
    assert len(order) == 3
    (x, xi) = sorted((a for a, _ in ms), key=lambda a: a.direction, reverse=True)
    assert A.accepts((x, x, x)) and not A.accepts((x, xi))


def test_type_of_path_merges_runs():
    g = LabeledGraph(U, 0)
    b = g.new_vertex()
    c = g.new_vertex()
    from lyndon_index.words import Power
    from lyndon_index.zt_poly import parse_poly
    e1 = g.add_edge(0, b, Power(0, parse_poly("t")))
    e2 = g.add_edge(b, c, Power(0, parse_poly("t")))
    g.folded = True
    (letter,) = type_of_path(g, [(e1, 1), (e2, 1)])
    assert letter.kind == "s" and letter.origin == 0 and letter.terminus == c
    assert parse_poly("2t") in letter.region


def test_types_infinite_examples():
    assert types_infinite(G(FREE, "x", "y"))
    assert not types_infinite(G(U, "u1^{t}"))
    assert types_infinite(G(FREE, "x"))  # x^n for every n
    assert not types_infinite(graph_from_words([], FREE))
    gG, _ = _example()
    assert types_infinite(gG)


def test_types_infinite_matches_finite_language_check():
    # infinitely many finite types iff some accepted lasso exists
    rng = random.Random(3)
    for _ in range(15):
        tw = random_tower(rng)
        g = graph_from_words(random_gens(rng, tw), tw)
        A = TypeAutomaton(g)
        order, _ = A.reachable(A.start(g.base))
        lasso = next(iter(enumerate_periodic(g, limit=len(order) + 1)), None)
        assert types_infinite(g) == (lasso is not None)


def test_enumerate_periodic_x_loop():
    got = list(enumerate_periodic(G(FREE, "x"), limit=4))
    assert {len(t.cycle) for t in got} == {1}
    assert all(not t.prefix for t in got)


def test_enumerate_periodic_properties():
    gG, _ = _example()
    A = TypeAutomaton(gG)
    got = list(enumerate_periodic(gG, limit=5))
    assert len(got) == len(set(got))
    assert [t.content for t in got] == sorted(t.content for t in got)
    for t in got:
        assert A.accepts(t.prefix + t.cycle + t.cycle, A.start(gG.base))
        assert t.canonical() == t
    first = got[0]
    assert first.content < n_const(gG)
    assert shortest_lasso(A, A.start(gG.base)).content == first.content


def test_lasso_canonical_and_text():
    g = G(FREE, "x", "y")
    x = next(a for a in type_alphabet(g) if a.kind == "e" and a.direction == 1 and a.label.sym == "x")
    y = next(a for a in type_alphabet(g) if a.kind == "e" and a.direction == 1 and a.label.sym == "y")
    t = PeriodicType((x, y), (x, y, x, y)).canonical()
    assert t == PeriodicType((), (x, y))
    assert t.text() == f"| {x.token()} {y.token()}"
    with pytest.raises(ValueError):
        PeriodicType((x,), ())


def test_is_doubled_examples():
    gG, gH = _example()
    for t in enumerate_periodic(gG, limit=5):
        assert is_doubled(t, gG)
        # every periodic type of G is doubled in the index-2 subgroup
        assert is_doubled(t, gH)
    gx = G(FREE, "x", "y")
    gy = G(FREE, "y")
    x = next(a for a in type_alphabet(gx) if a.kind == "e" and a.label.sym == "x")
    assert not is_doubled(PeriodicType((), (x,)), gy)


def test_is_doubled_step_bound_and_strict_mode():
    rng = random.Random(9)
    checked = 0
    for _ in range(12):
        tw = random_tower(rng)
        gG = graph_from_words(random_gens(rng, tw), tw)
        gH = graph_from_words(random_gens(rng, tw), tw)
        for t in itertools.islice(enumerate_periodic(gG, limit=4), 20):
            for d in (gG, gH):
                for split in (True, False):
                    st = DoublingStats()
                    is_doubled(t, d, split=split, stats=st)
                    assert st.max_branch <= len(t.cycle) * len(d.vertices) + len(t.prefix) == st.bound
                    checked += 1
    assert checked > 50


def test_tsr_and_discard_samples():
    rng = random.Random(17)
    n_tsr = n_discard = 0
    for _ in range(6):
        tw = random_tower(rng)
        g = graph_from_words(random_gens(rng, tw), tw)
        A = TypeAutomaton(g)
        start = A.start(g.base)
        for _ in range(60):
            smp = tsr_sample(rng, A, start, A.M)
            if smp:
                t, s, r = smp
                assert concat_admissible(t + s, s + r, len(s), automaton=A)
                n_tsr += 1
            smp = discard_sample(rng, A, start, A.M)
            if smp:
                t1, s, t2, t3 = smp
                lhs = A.accepts(t1 + s + t2 + s + t3, start)
                assert lhs == (A.accepts(t1 + s + t3, start) and A.accepts(s + t2 + s))
                n_discard += 1
    assert n_tsr > 50 and n_discard > 20


def test_concat_admissible_full_overlap():
    gG, _ = _example()
    A = TypeAutomaton(gG)
    t = next(iter(enumerate_periodic(gG, limit=4)))
    w = t.prefix + t.cycle
    assert concat_admissible(w, w, len(w), automaton=A)
    a, b = type_alphabet(gG)[:2]
    with pytest.raises(ValueError):
        concat_admissible((a,), (b,), 1, automaton=A)


def test_almost_doubled():
    gG, gH = _example()
    t = next(iter(enumerate_periodic(gG, limit=4)))
    assert almost_doubled(t.prefix + t.cycle, gG)
    assert almost_doubled(t.prefix + t.cycle, gH, n=len(t.prefix + t.cycle))
