"""Types of special paths and their automaton.

A type letter is either a base edge traversed in some direction or a
``span``: a maximal run inside one u-component from ``a`` to ``b`` whose
total exponent lies in a fixed class of the partition from
``words.equiv_classes``.  Whether a word of type letters comes from a path
with standard label only depends on a bounded window of preceding letters, so
the automaton state is (vertex, last M concrete letters).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import LabeledGraph, NotFolded
from .words import Base, Power, equiv_classes, violations
from .zt_poly import Coset, Poly, lattice_from_generators, coset_intersect, coset_meets_region, coset_region_subset, region_outside_cosets


@dataclass(frozen=True)
class TypeLetter:
    kind: str  # "e" or "s"
    origin: int
    terminus: int
    eid: int = -1
    direction: int = 1
    comp: int = -1
    cls: int = -1
    root: int = -1
    label: object = field(default=None, compare=False)   # letter read along an edge
    coset: Coset = field(default=None, compare=False)
    region: object = field(default=None, compare=False)
    sample: object = field(default=None, compare=False)  # concrete letter used for windows

    def token(self):
        if self.kind == "e":
            return f"e{self.eid}" if self.direction > 0 else f"e{self.eid}^-1"
        return f"s{self.comp}:{self.origin}->{self.terminus}:{self.cls}"

    def __str__(self):
        return self.token()


def type_text(word):
    return " ".join(a.token() for a in word)


@dataclass(frozen=True)
class PeriodicType:
    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("a periodic type needs a nonempty cycle")

    @property
    def content(self):
        return len(self.prefix) + len(self.cycle)

    def text(self):
        return f"{type_text(self.prefix)} | {type_text(self.cycle)}".strip()

    def canonical(self):
        """Primitive cycle, then the shortest prefix spelling the same infinite word."""
        c = self.cycle
        n = len(c)
        for d in range(1, n + 1):
            if n % d == 0 and c[:d] * (n // d) == c:
                c = c[:d]
                break
        p = self.prefix
        while p and p[-1] == c[-1]:
            p = p[:-1]
            c = c[-1:] + c[:-1]
        return PeriodicType(p, c)


# ---------------------------------------------------------------------------
# alphabet


_CLASS_CACHE = {}


def _full_lattice(D):
    return lattice_from_generators([Poly.monomial(1, k) for k in range(D + 1)], D)


def classes(tower, u):
    """``[(region, sample exponent)]`` for the classes of root ``u``."""
    key = (id(tower), u)
    hit = _CLASS_CACHE.get(key)
    if hit is None or hit[0] is not tower:
        unit = Coset(_full_lattice(tower.D), Poly())
        W = tuple(range(len(tower.roots)))
        cls = [(r, coset_meets_region(unit, r)) for r in equiv_classes(tower, W, u)]
        hit = _CLASS_CACHE[key] = (tower, cls)
    return hit[1]


def type_alphabet(g: LabeledGraph):
    """All letters of the type alphabet of ``g``, base edges in both directions
    followed by the nonempty spans."""
    if not g.folded:
        raise NotFolded("type alphabet needs a U-folded graph")
    out = []
    for eid in g.level0_edges():
        o, t, lab = g.edges[eid]
        out.append(TypeLetter("e", o, t, eid, 1, label=lab, sample=lab))
        out.append(TypeLetter("e", t, o, eid, -1, label=lab.inverse(), sample=lab.inverse()))
    for ci, c in enumerate(g.components()):
        cls = classes(g.tower, c.root)
        for a in c.vertices:
            for b in c.vertices:
                cs = c.coset(a, b)
                for k, (reg, sample) in enumerate(cls):
                    if coset_meets_region(cs, reg) is not None:
                        out.append(TypeLetter("s", a, b, comp=ci, cls=k, root=c.root, coset=cs,
                                              region=reg, sample=Power(c.root, sample)))
    return out


def type_length(word):
    return len(word)


# ---------------------------------------------------------------------------
# automaton


def m_const(g: LabeledGraph) -> int:
    """1 + the longest type length of a root word used by the graph."""
    tw = g.tower
    used = set(g.roots_used())
    stack = list(used)
    while stack:
        u = stack.pop()
        for a in tw.pi(u):
            if isinstance(a, Power) and a.root not in used:
                used.add(a.root)
                stack.append(a.root)
    return 1 + max((len(tw.pi(u)) for u in used), default=0)


def n_const(g: LabeledGraph) -> int:
    M = m_const(g)
    return M * (1 + len(type_alphabet(g)) ** M)


def k_const(g: LabeledGraph, d: LabeledGraph) -> int:
    M = m_const(g)
    return M * (len(type_alphabet(g)) ** M * (len(d.vertices) - 1) + 1)


class AutomatonTooLarge(RuntimeError):
    pass


class TypeAutomaton:
    """Deterministic automaton over type letters; every state is accepting.

    States are ``(vertex, window)`` where ``window`` holds the concrete letters
    of the last ``M`` type letters.  A letter is allowed when the window plus
    the new letter shows no standard-form violation ending at the new letter.
    """

    def __init__(self, g: LabeledGraph, window=None, max_states=200000):
        if not g.folded:
            raise NotFolded("type automaton needs a U-folded graph")
        self.graph = g
        self.M = m_const(g) if window is None else window
        self.letters = type_alphabet(g)
        self.by_origin = {}
        for a in self.letters:
            self.by_origin.setdefault(a.origin, []).append(a)
        self.max_states = max_states
        self._delta = {}
        self._states = set()

    def start(self, v):
        return (v, ())

    def step(self, state, letter):
        key = (state, letter)
        if key in self._delta:
            return self._delta[key]
        v, win = state
        nxt = None
        if letter.origin == v:
            w2 = win + (letter.sample,)
            if not violations(w2, self.graph.tower, kappa_limit=1, only_end=True):
                nxt = (letter.terminus, w2[-self.M:] if self.M else ())
        self._delta[key] = nxt
        if nxt is not None and nxt not in self._states:
            self._states.add(nxt)
            if len(self._states) > self.max_states:
                raise AutomatonTooLarge(f"more than {self.max_states} automaton states")
        return nxt

    def moves(self, state):
        out = []
        for a in self.by_origin.get(state[0], ()):
            n = self.step(state, a)
            if n is not None:
                out.append((a, n))
        return out

    def run(self, word, state=None):
        if not word:
            return state
        if state is None:
            state = self.start(word[0].origin)
        for a in word:
            state = self.step(state, a)
            if state is None:
                return None
        return state

    def accepts(self, word, state=None) -> bool:
        return not word or self.run(word, state) is not None

    def reachable(self, start):
        seen = {start: None}
        order = [start]
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for a, n in self.moves(s):
                if n not in seen:
                    seen[n] = (s, a)
                    order.append(n)
                    queue.append(n)
        return order, seen

    def cyclic_states(self, start):
        """States of ``start``'s reachable part lying on a cycle."""
        order, _ = self.reachable(start)
        succ = {s: [n for _, n in self.moves(s)] for s in order}
        return _cyclic(order, succ)

    def live_states(self, start):
        """Reachable states from which a cycle is reachable."""
        order, _ = self.reachable(start)
        succ = {s: [n for _, n in self.moves(s)] for s in order}
        live = set(_cyclic(order, succ))
        pred = {s: [] for s in order}
        for s in order:
            for n in succ[s]:
                pred[n].append(s)
        queue = deque(live)
        while queue:
            s = queue.popleft()
            for p in pred[s]:
                if p not in live:
                    live.add(p)
                    queue.append(p)
        return live

    def accepts_lasso(self, t: PeriodicType) -> bool:
        s = self.run(t.prefix, self.start(t.prefix[0].origin if t.prefix else t.cycle[0].origin))
        if t.prefix and s is None:
            return False
        seen = set()
        while s not in seen:
            seen.add(s)
            s = self.run(t.cycle, s)
            if s is None:
                return False
        return True


def _cyclic(order, succ):
    # Tarjan's strongly connected components, iterative
    index, low, on, stack, out = {}, {}, set(), [], set()
    counter = 0
    for root in order:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ[w])))
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    if len(comp) > 1 or v in succ[v]:
                        out.update(comp)
    return out


def build_automaton(g: LabeledGraph, v=None) -> TypeAutomaton:
    """Automaton with all states reachable from ``v`` already explored."""
    A = TypeAutomaton(g)
    A.reachable(A.start(g.base if v is None else v))
    return A


def type_of_path(g: LabeledGraph, path):
    """Type of a path given as ``[(eid, direction), ...]``.  Maximal runs of
    edges inside one component collapse to a span letter."""
    tw = g.tower
    comps = g.components()
    out = []
    run = None  # (component index, start vertex, exponent)
    cur = None

    def flush():
        nonlocal run
        if run is None:
            return
        ci, a, e = run
        c = comps[ci]
        if not e or e.degree < 1:
            raise ValueError("path is not special: a power run has a standard exponent")
        b = c.target(a, e)
        for k, (reg, sample) in enumerate(classes(tw, c.root)):
            if e in reg:
                out.append(TypeLetter("s", a, b, comp=ci, cls=k, root=c.root, coset=c.coset(a, b),
                                      region=reg, sample=Power(c.root, sample)))
                break
        run = None

    for eid, d in path:
        o, t, lab = g.edges[eid]
        a, b = (o, t) if d > 0 else (t, o)
        if cur is not None and a != cur:
            raise ValueError("edges do not form a path")
        cur = b
        if isinstance(lab, Base):
            flush()
            out.append(TypeLetter("e", a, b, eid, d, label=lab if d > 0 else lab.inverse(),
                                  sample=lab if d > 0 else lab.inverse()))
            continue
        ci = next(i for i, c in enumerate(comps) if c.root == lab.root and a in c.reps)
        e = lab.exp if d > 0 else -lab.exp
        if run is not None and run[0] == ci:
            run = (ci, run[1], run[2] + e)
        else:
            flush()
            run = (ci, a, e)
    flush()
    A = TypeAutomaton(g)
    if not A.accepts(tuple(out)):
        raise ValueError("path is not special")
    return tuple(out)


def types_infinite(g: LabeledGraph, v=None) -> bool:
    A = TypeAutomaton(g)
    return bool(A.cyclic_states(A.start(g.base if v is None else v)))


def shortest_lasso(A: TypeAutomaton, start):
    """A lasso of least content among those running through automaton cycles."""
    order, parent = A.reachable(start)
    cyc = A.cyclic_states(start)
    best = None
    for q in order:
        if q not in cyc:
            continue
        pre = _path_to(parent, q)
        if best is not None and len(pre) + 1 >= best.content:
            continue
        loop = _shortest_cycle(A, q)
        if loop is None:
            continue
        cand = PeriodicType(pre, loop)
        if best is None or cand.content < best.content:
            best = cand
    return None if best is None else best.canonical()


def _path_to(parent, q):
    out = []
    while parent[q] is not None:
        s, a = parent[q]
        out.append(a)
        q = s
    return tuple(reversed(out))


def _shortest_cycle(A, q):
    parent = {q: None}
    queue = deque([q])
    while queue:
        s = queue.popleft()
        for a, n in A.moves(s):
            if n == q:
                return _path_to(parent, s) + (a,)
            if n not in parent:
                parent[n] = (s, a)
                queue.append(n)
    return None


def enumerate_periodic(g: LabeledGraph, v=None, limit=6):
    """Yield every periodic type of content at most ``limit`` readable from ``v``,
    each once, by increasing content."""
    A = TypeAutomaton(g)
    start = A.start(g.base if v is None else v)
    seen = set()
    for content in range(1, limit + 1):
        for word in _words(A, start, content):
            for i in range(len(word)):
                t = PeriodicType(word[:i], word[i:]).canonical()
                if t.content != content or t in seen:
                    continue
                if A.accepts_lasso(t):
                    seen.add(t)
                    yield t


def _words(A, start, n):
    stack = [(start, ())]
    while stack:
        s, w = stack.pop()
        if len(w) == n:
            yield w
            continue
        for a, nxt in reversed(A.moves(s)):
            stack.append((nxt, w + (a,)))


# ---------------------------------------------------------------------------
# reading types in another graph


class Uncovered(Exception):
    """Part of a letter's label set cannot be read at a vertex."""


def resolve(d: LabeledGraph, v, letter: TypeLetter, split=True):
    """Vertices of ``d`` reached from ``v`` by labels of ``letter``.

    Returns a list of targets.  Raises ``Uncovered`` when some label of the
    letter is not readable from ``v``.  Without ``split`` a span letter must be
    contained in a single target coset.
    """
    if letter.kind == "e":
        w = d.base_step(v, letter.label)
        if w is None:
            raise Uncovered(letter.label)
        return [w]
    c = d.component_of(v, letter.root)
    if c is None:
        raise Uncovered(letter.sample)
    if not split:
        hits = [b for b in c.vertices
                if coset_region_subset((letter.coset, letter.region), (c.coset(v, b), letter.region))]
        assert len(hits) <= 1, "span letter resolved to several vertices"
        if not hits:
            raise Uncovered(letter.sample)
        return hits
    out = []
    for b in c.vertices:
        piece = coset_intersect(letter.coset, c.coset(v, b))
        if piece is not None and coset_meets_region(piece, letter.region) is not None:
            out.append(b)
    miss = region_outside_cosets(letter.coset, letter.region, [c.coset(v, b) for b in out])
    if miss is not None:
        raise Uncovered(miss)
    return out


@dataclass
class DoublingStats:
    steps: int = 0
    max_branch: int = 0
    bound: int = 0


def is_doubled(t: PeriodicType, d: LabeledGraph, w=None, split=True, stats: DoublingStats = None) -> bool:
    """Read the infinite word ``prefix cycle cycle ...`` in ``d`` from ``w``.

    Every branch of the reading must go on forever; a branch stops as soon as
    it revisits a (position, vertex) state.  The number of steps taken by any
    single branch is at most ``len(cycle) * |V(d)| + len(prefix)``.
    """
    if not d.folded:
        raise NotFolded("doubling is read in a U-folded graph")
    w = d.base if w is None else w
    p, c = t.prefix, t.cycle
    bound = len(c) * len(d.vertices) + len(p)
    stats = stats if stats is not None else DoublingStats()
    stats.bound = bound
    word = p + c

    def nxt(i):
        return i + 1 if i + 1 < len(word) else len(p)

    done = set()
    stack = [(0, w, frozenset(), 0)]
    while stack:
        i, v, trail, depth = stack.pop()
        state = (i, v)
        if state in trail or state in done:
            continue
        stats.steps += 1
        stats.max_branch = max(stats.max_branch, depth + 1)
        assert depth + 1 <= bound, "doubling branch exceeded its step bound"
        try:
            targets = resolve(d, v, word[i], split)
        except Uncovered:
            return False
        done.add(state)
        for b in targets:
            stack.append((nxt(i), b, trail | {state}, depth + 1))
    return True


def concat_admissible(ts, sr, s_len: int, g: LabeledGraph = None, automaton: TypeAutomaton = None) -> bool:
    """Whether the splice of ``ts`` and ``sr`` along their common ``s`` is a type."""
    ts, sr = tuple(ts), tuple(sr)
    if s_len and ts[len(ts) - s_len:] != sr[:s_len]:
        raise ValueError("words do not overlap on the stated segment")
    A = automaton if automaton is not None else TypeAutomaton(g)
    return A.accepts(ts + sr[s_len:])


def almost_doubled(t, d: LabeledGraph, w=None, n=None) -> bool:
    """Finite-type variant: ``t`` splits as ``t1 t2`` with ``len(t2) <= n`` and
    ``t1`` readable in ``d`` from ``w`` (test utility)."""
    w = d.base if w is None else w
    t = tuple(t)
    n = len(t) if n is None else n
    frontier = {w}
    for i, a in enumerate(t):
        if len(t) - i <= n:
            return True
        nxt = set()
        for v in frontier:
            try:
                nxt.update(resolve(d, v, a))
            except Uncovered:
                return False
        frontier = nxt
    return True
