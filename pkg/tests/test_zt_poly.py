import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from lyndon_index.zt_poly import (
    Coset, DegreeOverflow, Poly, Region, coset_intersect, coset_meets_region, coset_region_subset,
    is_nonstandard, lattice_from_generators, lattice_index, lattice_member, parse_poly, poly_cmp,
    region_member,
)

from oracles import brute_lattice

P = parse_poly
coeffs = st.lists(st.integers(-20, 20), min_size=0, max_size=3)
polys = coeffs.map(Poly)


def test_parse_and_render_roundtrip():
    for text in ["0", "1", "-t", "t", "2t^2-3t+1", "-3t^2+100t", "t^3"]:
        assert str(P(text)) == text
    assert P("2t^2-3t+1") == Poly((1, -3, 2))
    with pytest.raises(ValueError):
        P("2x")
    with pytest.raises(ValueError):
        P("t +1")


@given(polys)
def test_render_parse_identity(a):
    assert P(str(a)) == a


def test_poly_cmp_examples():
    assert poly_cmp(P("t"), P("3")) == 1
    assert poly_cmp(P("0"), P("0")) == 0
    # the u-reduced pair (2t, 3t) beats (2t-1, 3t+1) in left lex comparison
    assert poly_cmp(P("2t"), P("2t-1")) == 1
    assert P("-t") < P("-5") < P("0") < P("7") < P("t-100") < P("t")


@given(polys, polys, polys)
def test_poly_cmp_total_order(a, b, c):
    assert (poly_cmp(a, b) > 0) + (poly_cmp(a, b) < 0) + (a == b) == 1
    assert poly_cmp(a, b) == -poly_cmp(b, a)
    if a <= b and b <= c:
        assert a <= c
    # the order is compatible with addition
    assert poly_cmp(a + c, b + c) == poly_cmp(a, b)


def test_is_nonstandard():
    assert is_nonstandard(P("t"))
    assert not is_nonstandard(P("5"))
    assert not is_nonstandard(P("0"))
    assert is_nonstandard(P("-3t^2+100t"))


def test_degree_overflow():
    with pytest.raises(DegreeOverflow):
        lattice_from_generators([P("t^4")], 3)


def test_lattice_examples():
    assert lattice_from_generators([], 3).rank == 0
    L = lattice_from_generators([P("t"), P("t")], 3)
    assert L.rank == 1 and L.basis == (P("t"),)
    assert lattice_from_generators([P("2"), P("3")], 3).basis == (P("1"),)
    L = lattice_from_generators([P("2"), P("t")], 3)
    assert lattice_member(L, P("2t+4"))
    assert not lattice_member(L, P("1"))
    assert lattice_member(lattice_from_generators([], 3), P("0"))


def test_gcd_against_brute_force():
    # {2, 3} generate every small integer: brute force combination search
    reach = brute_lattice([(2, 0, 0), (3, 0, 0)], box=4)
    assert (1, 0, 0) in reach
    assert lattice_member(lattice_from_generators([P("2"), P("3")], 2), P("1"))


gens_strategy = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(gens_strategy, st.randoms(use_true_random=False))
def test_lattice_order_insensitive_and_closed(gens, rnd):
    ps = [Poly(g) for g in gens]
    L = lattice_from_generators(ps, 2)
    shuffled = ps[:]
    rnd.shuffle(shuffled)
    assert lattice_from_generators(shuffled, 2) == L
    for p in ps:
        assert lattice_member(L, p)
    a, b = ps[0], ps[-1]
    assert lattice_member(L, a + b) and lattice_member(L, -a) and lattice_member(L, a * 3 - b)


@settings(max_examples=40, deadline=None)
@given(gens_strategy, st.lists(st.integers(-8, 8), min_size=3, max_size=3))
def test_lattice_membership_matches_brute_force(gens, target):
    ps = [Poly(g) for g in gens]
    L = lattice_from_generators(ps, 2)
    reach = brute_lattice([tuple(g) for g in gens], box=5)
    if tuple(target) in reach:
        assert lattice_member(L, Poly(target))


@settings(max_examples=60, deadline=None)
@given(gens_strategy, polys, polys)
def test_coset_canonical_reps(gens, a, b):
    L = lattice_from_generators([Poly(g) for g in gens], 2)
    a, b = Poly(a.coeffs[:3]), Poly(b.coeffs[:3])
    same = Coset(L, a).rep == Coset(L, b).rep
    assert same == lattice_member(L, a - b)


def test_coset_intersect_examples():
    L2 = lattice_from_generators([P("2")], 3)
    L3 = lattice_from_generators([P("3")], 3)
    L6 = lattice_from_generators([P("6")], 3)
    assert coset_intersect(Coset(L2, P("0")), Coset(L3, P("0"))) == Coset(L6, P("0"))
    assert coset_intersect(Coset(L2, P("1")), Coset(L2, P("0"))) is None
    c = Coset(lattice_from_generators([P("t"), P("4")], 3), P("t+1"))
    assert coset_intersect(c, c) == c


def _elements(c, box):
    rows = [b.vector(c.lattice.D) for b in c.lattice.basis]
    out = set()
    for ks in itertools.product(range(-box, box + 1), repeat=len(rows)):
        v = Poly(c.rep.coeffs)
        for k, b in zip(ks, c.lattice.basis):
            v = v + b * k
        out.add(v)
    return out


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=1, max_size=2),
       st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=1, max_size=2),
       st.lists(st.integers(-4, 4), min_size=2, max_size=2),
       st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_coset_intersect_matches_brute_force(g1, g2, r1, r2):
    c1 = Coset(lattice_from_generators([Poly(g) for g in g1], 2), Poly(r1))
    c2 = Coset(lattice_from_generators([Poly(g) for g in g2], 2), Poly(r2))
    c = coset_intersect(c1, c2)
    bound = 20
    e1 = {p for p in _elements(c1, 8) if all(abs(x) <= bound for x in p.coeffs)}
    both = {p for p in e1 if p in c2}
    if c is None:
        assert not both
    else:
        assert all(p in c for p in both)
        assert all(p in c1 and p in c2 for p in _elements(c, 2))


def test_region_member_examples():
    assert region_member(Region("any", ((">", P("0")),)), P("t"))
    assert region_member(Region("any", ((">", P("0")), ("<", P("t")))), P("t-1"))
    assert not region_member(Region("any", (("=", P("t")),)), P("2t"))
    assert P("5t") in Region("positive", ((">=", P("t")), ("!=", P("2t"))))
    assert P("3") not in Region("positive")


def test_coset_meets_region_examples():
    Lt = lattice_from_generators([P("t")], 3)
    assert coset_meets_region(Coset(Lt, P("0")), Region("positive")) == P("t")
    L2 = lattice_from_generators([P("2")], 3)
    assert coset_meets_region(Coset(L2, P("1")), Region("any", (("=", P("0")),))) is None
    L = lattice_from_generators([P("2t"), P("2")], 3)
    assert coset_meets_region(Coset(L, P("0")), Region("any", ((">", P("t")),))) == P("2t")


RELS = ["<", "<=", ">", ">=", "=", "!="]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=0, max_size=2),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2),
       st.sampled_from(["positive", "negative", "any"]),
       st.lists(st.tuples(st.sampled_from(RELS), st.lists(st.integers(-3, 3), min_size=2, max_size=2)), max_size=2))
def test_coset_meets_region_agrees_with_brute_force(gens, rep, sign, cons):
    c = Coset(lattice_from_generators([Poly(g) for g in gens], 2), Poly(rep))
    r = Region(sign, tuple((rel, Poly(g)) for rel, g in cons))
    w = coset_meets_region(c, r)
    if w is not None:
        assert w in c and w in r
    hit = any(p in r for p in _elements(c, 6))
    if hit:
        assert w is not None


def test_coset_region_subset_examples():
    pos = Region("positive")
    c2t = Coset(lattice_from_generators([P("2t")], 3), P("0"))
    ct = Coset(lattice_from_generators([P("t")], 3), P("0"))
    assert coset_region_subset((ct, pos), (ct, pos))
    assert coset_region_subset((c2t, pos), (ct, pos))
    assert not coset_region_subset((ct, pos), (c2t, pos))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=1), st.lists(st.integers(1, 3), min_size=1, max_size=1),
       st.integers(-2, 2), st.integers(-2, 2))
def test_coset_region_subset_sampled(m1, m2, r1, r2):
    pos = Region("positive")
    a = Coset(lattice_from_generators([Poly((0, m1[0]))], 2), Poly((r1,)))
    b = Coset(lattice_from_generators([Poly((0, m2[0]))], 2), Poly((r2,)))
    sub = coset_region_subset((a, pos), (b, pos))
    sample = [p for p in _elements(a, 6) if p in pos]
    if sub:
        assert all(p in b for p in sample)
    else:
        assert any(p not in b for p in sample)


def test_lattice_index_examples():
    one = lattice_from_generators([P("1")], 3)
    assert lattice_index(one, lattice_from_generators([P("2")], 3)) == 2
    assert lattice_index(lattice_from_generators([P("1"), P("t")], 3),
                         lattice_from_generators([P("2"), P("t")], 3)) == 2
    assert lattice_index(lattice_from_generators([P("1"), P("t")], 3), one) is None
    with pytest.raises(ValueError):
        lattice_index(one, lattice_from_generators([P("t")], 3))


def test_lattice_index_matches_coset_count():
    rng = random.Random(3)
    for _ in range(20):
        a, b, c = rng.randint(1, 4), rng.randint(-3, 3), rng.randint(1, 4)
        L1 = lattice_from_generators([P("1"), P("t")], 2)
        L2 = lattice_from_generators([Poly((a,)), Poly((b, c))], 2)
        # count distinct canonical reps of a box of L1 elements modulo L2
        reps = {Coset(L2, Poly((i, j))).rep for i in range(-12, 13) for j in range(-12, 13)}
        assert lattice_index(L1, L2) == len(reps)
