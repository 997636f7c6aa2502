"""Deciding whether a subgroup has finite index, and related harnesses.

The main entry point is ``decide_index(gG, gH)``.  It walks the type
automaton of the G-graph in lockstep with readings in the H-graph.  As soon
as some live type letter cannot be read, the walk is completed to a periodic
type that is not doubled, which certifies infinite index.  Otherwise the
index is finite and coset representatives are collected with a coset table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import (
    LabeledGraph, canonical, language_generators, make_u_folded, member,
    wedge,
)
from .types import (
    PeriodicType, TypeAutomaton, Uncovered, _path_to, _shortest_cycle, is_doubled, k_const,
    enumerate_periodic, resolve, types_infinite,
)
from .words import invert_word, normalize, render_word
from .zt_poly import lattice_index

DEFAULT_BUDGET = 10 ** 6


class BudgetExceeded(RuntimeError):
    def __init__(self, reached):
        super().__init__(f"budget exceeded at content {reached}")
        self.reached = reached


class NotASubgroup(ValueError):
    pass


@dataclass
class IndexVerdict:
    finite: bool
    index: int = None
    reps: list = field(default_factory=list)
    witness: PeriodicType = None
    note: str = ""

    def render(self, tower) -> str:
        if self.finite:
            lines = [f"FINITE {self.index}"]
            lines += [render_word(w, tower) or "1" for w in self.reps]
        else:
            lines = ["INFINITE", self.witness.text() if self.witness is not None else self.note]
        return "\n".join(lines) + "\n"


def check_subgroup(gG: LabeledGraph, gH: LabeledGraph):
    for h in language_generators(gH):
        if not member(gG, h):
            raise NotASubgroup(f"subgroup generator {render_word(h, gG.tower)} is not in G")


# ---------------------------------------------------------------------------
# abelian case


def _cyclic_length(w):
    w = list(w)
    while len(w) >= 2 and w[0] == w[-1].inverse():
        w = w[1:-1]
    return len(w)


def _abelian_data(g: LabeledGraph):
    """``(root or None, lattice or cycle length)`` for a graph with finitely
    many types, or ``None`` for the trivial group."""
    comps = g.components()
    if comps:
        if len(comps) > 1:
            raise AssertionError("abelian graph with several components")
        return comps[0].root, comps[0].lattice
    gens = language_generators(g)
    if not gens:
        return None
    if len(gens) > 1:
        raise AssertionError("abelian free graph with several cycles")
    return None, _cyclic_length(gens[0])


def _abelian_index(gG, gH):
    a, b = _abelian_data(gG), _abelian_data(gH)
    if a is None:
        return IndexVerdict(True, 1, [()])
    if b is None:
        return IndexVerdict(False, note="abelian: H is trivial")
    if a[0] != b[0]:
        return IndexVerdict(False, note="abelian: H has smaller rank")
    if a[0] is None:
        n = b[1] // a[1]
    else:
        n = lattice_index(a[1], b[1])
        if n is None:
            return IndexVerdict(False, note=f"abelian: rank {b[1].rank} < {a[1].rank}")
    return IndexVerdict(True, n, None)


# ---------------------------------------------------------------------------
# main procedure


def _product_search(gG, gH, budget, split=True):
    """Search the product of the G-type automaton and H-readings for a live
    letter that H cannot read.  Returns a witness lasso or ``None``."""
    A = TypeAutomaton(gG)
    start = A.start(gG.base)
    live = A.live_states(start)
    if start not in live:
        return None
    pstart = (start, gH.base)
    parent = {pstart: None}
    queue = deque([pstart])
    while queue:
        if len(parent) > budget:
            raise BudgetExceeded(len(parent))
        ps = queue.popleft()
        s, v = ps
        for a, n in A.moves(s):
            if n not in live:
                continue
            try:
                targets = resolve(gH, v, a, split)
            except Uncovered:
                pre = []
                q = ps
                while parent[q] is not None:
                    q0, a0 = parent[q]
                    pre.append(a0)
                    q = q0
                pre = tuple(reversed(pre)) + (a,)
                tail = _to_cycle(A, n)
                return PeriodicType(pre + tail[0], tail[1]).canonical()
            for b in targets:
                pn = (n, b)
                if pn not in parent:
                    parent[pn] = (ps, a)
                    queue.append(pn)
    return None


def _to_cycle(A, s):
    order, par = A.reachable(s)
    cyc = A.cyclic_states(s)
    for q in order:  # BFS order: first cyclic state is nearest
        if q in cyc:
            return _path_to(par, q), _shortest_cycle(A, q)
    raise AssertionError("live state without a reachable cycle")


def decide_index(gG: LabeledGraph, gH: LabeledGraph, gens=None, budget=DEFAULT_BUDGET,
                 method="product", split=True, reps=True) -> IndexVerdict:
    """Decide whether ``L(gH)`` has finite index in ``L(gG)``.

    ``gens`` are words generating G used for coset representatives (defaults
    to spanning-tree generators of ``gG``).  ``method="enumerate"`` checks
    periodic types one by one in increasing content up to ``K`` or
    ``budget`` lassos instead of the product search.
    """
    check_subgroup(gG, gH)
    if not types_infinite(gG):
        v = _abelian_index(gG, gH)
        if v.finite and v.reps is None:
            v.reps = coset_reps(gG, gH, gens, bound=v.index) if reps else []
        return v
    if method == "product":
        w = _product_search(gG, gH, budget, split)
    elif method == "enumerate":
        w = None
        K = k_const(gG, gH)
        count = 0
        content = 0
        for t in enumerate_periodic(gG, gG.base, limit=min(K, 64)):
            count += 1
            content = t.content
            if count > budget:
                raise BudgetExceeded(content)
            if not is_doubled(t, gH, gH.base, split):
                w = t
                break
        else:
            if K > 64:
                raise BudgetExceeded(64)
    else:
        raise ValueError(f"unknown method {method!r}")
    if w is not None:
        return IndexVerdict(False, witness=w)
    if not reps:
        return IndexVerdict(True, None, [])
    rs = coset_reps(gG, gH, gens, bound=len(gH.vertices))
    return IndexVerdict(True, len(rs), rs)


def coset_reps(gG: LabeledGraph, gH: LabeledGraph, gens=None, bound=None):
    """Representatives of the right cosets ``H g``, found breadth first over
    products of generators; the first representative is the empty word."""
    tw = gG.tower
    gens = [normalize(g, tw) for g in (gens if gens is not None else language_generators(gG))]
    gens = [g for g in gens if g]
    letters = []
    for g in gens:
        letters += [g, invert_word(g)]
    bound = len(gH.vertices) if bound is None else bound
    reps = [()]
    queue = deque([()])
    while queue:
        r = queue.popleft()
        for g in letters:
            w = normalize(r + g, tw)
            if any(member(gH, w + invert_word(q)) for q in reps):
                continue
            reps.append(w)
            if len(reps) > bound:
                raise AssertionError(f"more than {bound} cosets although the index is finite")
            queue.append(w)
    return reps


# ---------------------------------------------------------------------------
# harnesses


def join_and_decide(g1: LabeledGraph, g2: LabeledGraph, gH: LabeledGraph, **kw) -> IndexVerdict:
    j = canonical(make_u_folded(wedge(g1, g2)))
    return decide_index(j, gH, **kw)


def _require_level0(*gs):
    for g in gs:
        if g.roots_used() or g.tower.roots:
            raise ValueError("only graphs without roots are supported here")


def free_intersection(g1: LabeledGraph, g2: LabeledGraph) -> LabeledGraph:
    """Pullback of two folded free graphs; its language is the intersection."""
    _require_level0(g1, g2)
    start = (g1.base, g2.base)
    ids = {start: 0}
    out = LabeledGraph(g1.tower, 0)
    queue = deque([start])
    while queue:
        p = queue.popleft()
        a, b = p
        for eid, d, w, lab in g1.incident(a):
            if d < 0:
                continue
            w2 = g2.base_step(b, lab)
            if w2 is None:
                continue
            q = (w, w2)
            if q not in ids:
                ids[q] = len(ids)
                out.add_vertex(ids[q])
                queue.append(q)
            out.add_edge(ids[p], ids[q], lab)
        for eid, d, w, lab in g1.incident(a):
            if d > 0:
                continue
            w2 = g2.base_step(b, lab)
            if w2 is None:
                continue
            q = (w, w2)
            if q not in ids:
                ids[q] = len(ids)
                out.add_vertex(ids[q])
                queue.append(q)
    return canonical(make_u_folded(out))


def conjugate_graph(g: LabeledGraph, w) -> LabeledGraph:
    """Folded graph of ``w L(g) w^-1``."""
    h = g.copy()
    old = h.base
    h.base = h.new_vertex()
    h.add_path(h.base, old, tuple(w))  # merge moves the base when w is empty
    return canonical(make_u_folded(h))


def comm_contains_level0(gH: LabeledGraph, g, gG: LabeledGraph = None) -> bool:
    """Whether ``g`` commensurates ``H`` (free groups only)."""
    _require_level0(gH)
    if gG is not None and not member(gG, g):
        raise NotASubgroup("element is not in G")
    gc = conjugate_graph(gH, g)
    inter = free_intersection(gH, gc)
    a = decide_index(gH, inter, reps=False)
    b = decide_index(gc, inter, reps=False)
    return a.finite and b.finite
