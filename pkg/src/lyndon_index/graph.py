"""(Z[t], X)-labeled graphs and their foldings.

Edges carry positively oriented labels: a base letter with sign +1 or a root
power with exponent > 0.  Traversing an edge backwards reads the inverse.
Each root u splits the vertices touched by u-edges into u-components; a
component stores a potential (the label of a u-path from its base vertex)
per vertex and the lattice of u-loop labels at the base.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .zt_poly import Coset, Lattice, Poly, Region, coset_meets_region, lattice_from_generators
from .words import (
    Base, Power, Tower, free_reduce, invert_word, last_base, normalize, parse_word, render_letter,
)

DEFAULT_CLOSURE_POWER = 16
DEFAULT_MOVE_BUDGET = 20000


class FoldingError(RuntimeError):
    pass


class NotFolded(RuntimeError):
    pass


def _orient(o, t, a):
    if isinstance(a, Base) and a.sign < 0:
        return t, o, a.inverse()
    if isinstance(a, Power) and a.exp.sign() < 0:
        return t, o, a.inverse()
    return o, t, a


@dataclass
class UComponent:
    root: int
    vertices: tuple
    base: int
    lattice: Lattice
    reps: dict  # vertex -> canonical Poly
    spine: list = field(default_factory=list)
    chords: list = field(default_factory=list)

    def __post_init__(self):
        self.by_rep = {}
        for v in self.vertices:
            self.by_rep.setdefault(self.reps[v], v)

    def coset(self, a, b) -> Coset:
        """Labels of u-paths from ``a`` to ``b``."""
        return Coset(self.lattice, self.reps[b] - self.reps[a])

    def target(self, a, alpha):
        c = Coset(self.lattice, self.reps[a] + alpha)
        return self.by_rep.get(c.rep)

    def separated(self):
        return len(self.by_rep) == len(self.vertices)


class LabeledGraph:
    def __init__(self, tower: Tower, base=0):
        self.tower = tower
        self.vertices = {base}
        self.edges = {}
        self.base = base
        self.folded = False
        self._inc = {base: set()}
        self._next_v = base + 1
        self._next_e = 0
        self._comps = None

    # -- mutation -----------------------------------------------------------
    def _touch(self):
        self.folded = False
        self._comps = None

    def new_vertex(self):
        v = self._next_v
        self._next_v += 1
        self.vertices.add(v)
        self._inc[v] = set()
        self._touch()
        return v

    def add_vertex(self, v):
        if v not in self.vertices:
            self.vertices.add(v)
            self._inc[v] = set()
            self._next_v = max(self._next_v, v + 1)
            self._touch()
        return v

    def add_edge(self, o, t, label, eid=None):
        o, t, label = _orient(o, t, label)
        if eid is None:
            eid = self._next_e
        self._next_e = max(self._next_e, eid + 1)
        self.edges[eid] = (o, t, label)
        self._inc[o].add(eid)
        self._inc[t].add(eid)
        self._touch()
        return eid

    def remove_edge(self, eid):
        o, t, _ = self.edges.pop(eid)
        self._inc[o].discard(eid)
        self._inc[t].discard(eid)
        self._touch()

    def add_path(self, o, t, word):
        """Spell ``word`` from ``o`` to ``t`` through fresh inner vertices."""
        word = tuple(word)
        if not word:
            if o != t:
                self.merge(o, t)
            return
        cur = o
        for i, a in enumerate(word):
            nxt = t if i == len(word) - 1 else self.new_vertex()
            self.add_edge(cur, nxt, a)
            cur = nxt

    def merge(self, a, b):
        """Identify two vertices; the smaller id survives."""
        if a == b:
            return a
        keep, gone = min(a, b), max(a, b)
        for eid in list(self._inc[gone]):
            o, t, lab = self.edges[eid]
            self.remove_edge(eid)
            self.add_edge(keep if o == gone else o, keep if t == gone else t, lab, eid)
        del self._inc[gone]
        self.vertices.discard(gone)
        if self.base == gone:
            self.base = keep
        self._touch()
        return keep

    def copy(self):
        g = LabeledGraph(self.tower, self.base)
        g.vertices = set(self.vertices)
        g.edges = dict(self.edges)
        g._inc = {v: set(s) for v, s in self._inc.items()}
        g._next_v, g._next_e = self._next_v, self._next_e
        g.folded = self.folded
        return g

    # -- queries ------------------------------------------------------------
    def incident(self, v):
        """``(eid, direction, other_end, label_read)`` for every way to leave ``v``."""
        out = []
        for eid in sorted(self._inc[v]):
            o, t, lab = self.edges[eid]
            if o == v:
                out.append((eid, 1, t, lab))
            if t == v:
                out.append((eid, -1, o, lab.inverse()))
        return out

    def base_step(self, v, letter: Base):
        for eid, d, w, lab in self.incident(v):
            if lab == letter:
                return w
        return None

    def roots_used(self):
        return sorted({lab.root for _, _, lab in self.edges.values() if isinstance(lab, Power)})

    def components(self, u=None):
        if self._comps is None:
            self._comps = {r: _components(self, r) for r in range(len(self.tower.roots))}
        if u is None:
            return [c for r in sorted(self._comps) for c in self._comps[r]]
        return self._comps[u]

    def component_of(self, v, u):
        for c in self.components(u):
            if v in c.reps:
                return c
        return None

    def level0_edges(self):
        return sorted(e for e, (_, _, lab) in self.edges.items() if isinstance(lab, Base))

    def cycle_rank(self):
        # number of free generators; meaningful in free mode
        return len(self.edges) - len(self.vertices) + 1

    def __repr__(self):
        return f"<LabeledGraph |V|={len(self.vertices)} |E|={len(self.edges)} base={self.base}>"


def _components(g, u):
    adj = {}
    for eid, (o, t, lab) in g.edges.items():
        if isinstance(lab, Power) and lab.root == u:
            adj.setdefault(o, []).append((t, lab.exp, eid))
            adj.setdefault(t, []).append((o, -lab.exp, eid))
    seen = set()
    comps = []
    D = g.tower.D
    for z in sorted(adj):
        if z in seen:
            continue
        pot = {z: Poly()}
        queue = deque([z])
        seen.add(z)
        loops = []
        eids = set()
        while queue:
            a = queue.popleft()
            for b, e, eid in adj[a]:
                eids.add(eid)
                if b not in pot:
                    pot[b] = pot[a] + e
                    seen.add(b)
                    queue.append(b)
                else:
                    d = pot[a] + e - pot[b]
                    if d:
                        loops.append(d)
        L = lattice_from_generators(loops, D)
        reps = {v: Coset(L, p).rep for v, p in pot.items()}
        spine, chords = [], []
        for eid in sorted(eids):
            (spine if g.edges[eid][0] != g.edges[eid][1] else chords).append(eid)
        comps.append(UComponent(u, tuple(sorted(pot)), z, L, reps, spine, chords))
    return comps


# ---------------------------------------------------------------------------
# reading


def _read(g, v, word):
    for a in word:
        if v is None:
            return None
        if isinstance(a, Base):
            v = g.base_step(v, a)
        else:
            c = g.component_of(v, a.root)
            v = None if c is None else c.target(v, a.exp)
    return v


def read_word(g: LabeledGraph, v, w):
    """Terminal vertex of the unique reading of ``w`` from ``v``, or ``None``."""
    if not g.folded:
        raise NotFolded("read_word needs a U-folded graph")
    return _read(g, v, w)


def member(g: LabeledGraph, w, v=None):
    v = g.base if v is None else v
    return read_word(g, v, normalize(w, g.tower)) == v


# ---------------------------------------------------------------------------
# folding moves


def free_fold(g: LabeledGraph) -> bool:
    """Stallings folds of base-letter edges to a fixpoint.  Returns whether
    anything changed."""
    changed = False
    again = True
    while again:
        again = False
        seen = {}
        for eid in sorted(g.edges):
            o, t, lab = g.edges[eid]
            if not isinstance(lab, Base):
                continue
            for key, other in (((o, lab.sym, 1), t), ((t, lab.sym, -1), o)):
                if key in seen:
                    e2 = seen[key]
                    o2, t2, _ = g.edges[e2]
                    other2 = t2 if key[2] == 1 else o2
                    g.merge(other, other2)
                    _drop_duplicates(g)
                    again = changed = True
                    break
                seen[key] = eid
            if again:
                break
    return changed


def _drop_duplicates(g):
    seen = set()
    for eid in sorted(g.edges):
        key = g.edges[eid]
        if key in seen:
            g.remove_edge(eid)
        else:
            seen.add(key)


def enforce_separated(g: LabeledGraph, u=None) -> bool:
    """Merge vertices of a u-component that carry the same coset."""
    changed = False
    roots = range(len(g.tower.roots)) if u is None else [u]
    for r in roots:
        while True:
            merged = False
            for c in g.components(r):
                byrep = {}
                for v in c.vertices:
                    w = byrep.setdefault(c.reps[v], v)
                    if w != v:
                        g.merge(w, v)
                        merged = True
                        break
                if merged:
                    break
            if not merged:
                break
            changed = True
            _drop_duplicates(g)
    return changed


def reduce_u_component(g: LabeledGraph, c: UComponent):
    """Rewrite a separated component as a positively oriented spine through
    its vertices in increasing potential order plus lattice loops at the base."""
    for eid in c.spine + c.chords:
        g.remove_edge(eid)
    order = sorted(c.vertices, key=lambda v: c.reps[v])
    for a, b in zip(order, order[1:]):
        g.add_edge(a, b, Power(c.root, c.reps[b] - c.reps[a]))
    for vec in c.lattice.basis:
        g.add_edge(c.base, c.base, Power(c.root, vec if vec.sign() > 0 else -vec))


def _closure(g, closure_power):
    """Add u^1 edges along paths spelling pi(u), and realize integer steps
    between vertices of one component.  Returns whether anything changed."""
    tw = g.tower
    for u in range(len(tw.roots)):
        pu = tw.pi(u)
        comps = g.components(u)
        if not comps:
            continue
        incomp = {v: c for c in comps for v in c.vertices}
        for c0 in sorted(g.vertices):
            b = _read(g, c0, pu)
            if b is None or (c0 not in incomp and b not in incomp):
                continue
            c = incomp.get(c0)
            if c is not None and b in c.reps and c.target(c0, Poly.const(1)) == b:
                continue
            g.add_edge(c0, b, Power(u, Poly.const(1)))
            return True
        for c in comps:
            for b in c.vertices:
                ks = [k for k in range(1, closure_power + 1) if c.target(b, Poly.const(k)) is not None]
                if not ks:
                    continue
                if ks[0] == 1:
                    d = c.target(b, Poly.const(1))
                    if _read(g, b, pu) != d:
                        g.add_path(b, d, pu)
                        return True
                else:
                    n = g.new_vertex()
                    g.add_edge(b, n, Power(u, Poly.const(1)))
                    return True
    return False


def _beyond_region(gamma):
    if gamma.sign() > 0:
        return Region("positive", ((">", gamma),))
    return Region("negative", (("<", gamma),))


def _partial_boundary(g):
    """When a prefix of pi(u^s) ending in a power w^gamma is readable from a
    u-component vertex and the w-component there reaches beyond gamma, add
    the w^gamma step so that pi(u^s) itself becomes readable."""
    tw = g.tower
    for u in range(len(tw.roots)):
        for c in g.components(u):
            for b in c.vertices:
                for s in (1, -1):
                    q = tw.pi_power(u, s)
                    last = q[-1]
                    if not isinstance(last, Power):
                        continue
                    v = _read(g, b, q[:-1])
                    if v is None:
                        continue
                    d = g.component_of(v, last.root)
                    if d is None or d.target(v, last.exp) is not None:
                        continue
                    reg = _beyond_region(last.exp)
                    if any(coset_meets_region(d.coset(v, x), reg) is not None for x in d.vertices):
                        n = g.new_vertex()
                        g.add_edge(v, n, last)
                        return True
    return False


def _prefix_shift(g):
    """When a proper prefix of pi(u^s) leads from a u-component vertex ``b``
    into a u-component, realize the step ``u^s`` from ``b`` as a spelled path."""
    tw = g.tower
    for u in range(len(tw.roots)):
        comps = g.components(u)
        incomp = {v for c in comps for v in c.vertices}
        for c in comps:
            for b in c.vertices:
                for s in (1, -1):
                    q = tw.pi_power(u, s)
                    if not any(_read(g, b, q[:j]) in incomp for j in range(1, len(q))):
                        continue
                    d = c.target(b, Poly.const(s))
                    if d is not None and _read(g, b, q) == d:
                        continue
                    if d is None:
                        d = g.new_vertex()
                        g.add_edge(b, d, Power(u, Poly.const(s)))
                    g.add_path(b, d, q)
                    return True
    return False


_POS = Region("positive")
_NEG = Region("negative")


def _has_arrivals(c, b, sign):
    """Whether some nonstandard u-path of the given sign ends at ``b``."""
    reg = _POS if sign > 0 else _NEG
    return any(coset_meets_region(Coset(c.lattice, c.reps[b] - c.reps[a]), reg) is not None for a in c.vertices)


def _boundary(g):
    """Realize virtual boundary letters that collide with other edges."""
    tw = g.tower
    for b in sorted(g.vertices):
        sources = {}
        for eid, d, w, lab in g.incident(b):
            if isinstance(lab, Base):
                # reading lab leaves b, so lab^-1 arrives
                sources.setdefault(lab.inverse(), []).append(("real", eid))
        for u in range(len(tw.roots)):
            c = g.component_of(b, u)
            if c is None:
                continue
            for s in (1, -1):
                if not _has_arrivals(c, b, s):
                    continue
                letter = last_base(Power(u, Poly.const(s)), tw)
                prev = c.target(b, Poly.const(-s))
                back = _read(g, b, tw.pi_power(u, -s))
                done = prev is not None and back == prev
                sources.setdefault(letter, []).append(("virtual", (u, s, done)))
        for letter, src in sorted(sources.items(), key=lambda kv: repr(kv[0])):
            if len(src) < 2:
                continue
            todo = [x[1] for x in src if x[0] == "virtual" and not x[1][2]]
            if not todo:
                continue
            u, s, _ = todo[0]
            d = g.new_vertex()
            g.add_edge(d, b, Power(u, Poly.const(s)))
            g.add_path(d, b, tw.pi_power(u, s))
            return True
    return False


def make_u_folded(g: LabeledGraph, closure_power=DEFAULT_CLOSURE_POWER, budget=DEFAULT_MOVE_BUDGET, reduce=True):
    """Apply folding moves until none applies, then canonicalize components."""
    moves = 0
    while True:
        moves += 1
        if moves > budget:
            raise FoldingError(f"folding did not stabilize within {budget} moves ({g!r})")
        if free_fold(g):
            continue
        if enforce_separated(g):
            continue
        if _closure(g, closure_power):
            continue
        if _partial_boundary(g):
            continue
        if _prefix_shift(g):
            continue
        if _boundary(g):
            continue
        break
    _prune(g)
    if reduce:
        for c in g.components():
            reduce_u_component(g, c)
            g._comps = None
    g.folded = True
    return g


def _prune(g):
    """Drop hanging trees that do not reach back to the base (free-group
    style trimming of degree-1 vertices without power edges)."""
    while True:
        victims = [v for v in g.vertices if v != g.base and len(g._inc[v]) <= 1
                   and all(isinstance(g.edges[e][2], Base) for e in g._inc[v])
                   and not any(g.edges[e][0] == g.edges[e][1] for e in g._inc[v])]
        if not victims:
            return
        for v in victims:
            for eid in list(g._inc[v]):
                g.remove_edge(eid)
            del g._inc[v]
            g.vertices.discard(v)
        g._touch()


def graph_from_words(gens, tower: Tower, closure_power=DEFAULT_CLOSURE_POWER, budget=DEFAULT_MOVE_BUDGET):
    """Folded graph whose language at its base vertex is generated by ``gens``."""
    g = LabeledGraph(tower)
    for w in gens:
        w = free_reduce(w)
        if w:
            g.add_path(g.base, g.base, w)
    return canonical(make_u_folded(g, closure_power, budget))


def wedge(g1: LabeledGraph, g2: LabeledGraph):
    """Glue two graphs at their base vertices (unfolded)."""
    g = g1.copy()
    off = max(g.vertices) + 1
    ren = {v: (g.base if v == g2.base else v + off) for v in g2.vertices}
    for v in ren.values():
        g.add_vertex(v)
    for eid in sorted(g2.edges):
        o, t, lab = g2.edges[eid]
        g.add_edge(ren[o], ren[t], lab)
    g._touch()
    return g


# ---------------------------------------------------------------------------
# certification


@dataclass
class FoldCheck:
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def default_max_len(g):
    tw = g.tower
    longest = max((len(w) for _, w in tw.roots), default=0)
    return 2 * len(g.edges) + 2 * longest


def assert_u_folded(g: LabeledGraph, max_len=None, max_paths=3000) -> FoldCheck:
    """Bounded check that every reduced path's label is read back from its
    origin to its terminus.  Paths are explored by increasing length up to
    ``max_len`` edges and at most ``max_paths`` paths overall."""
    for v in g.vertices:
        seen = set()
        for eid, d, w, lab in g.incident(v):
            if isinstance(lab, Base):
                if lab in seen:
                    return FoldCheck(False, ("not deterministic", v, lab))
                seen.add(lab)
    for c in g.components():
        if not c.separated():
            return FoldCheck(False, ("not separated", c.root, c.vertices))
    was = g.folded
    max_len = default_max_len(g) if max_len is None else max_len
    queue = deque((v, (), v, ()) for v in sorted(g.vertices))
    count = 0
    while queue and count < max_paths:
        origin, path, end, label = queue.popleft()
        for eid, d, w, lab in g.incident(end):
            if path and path[-1] == (eid, -d):
                continue
            p2 = path + ((eid, d),)
            l2 = label + (lab,)
            count += 1
            target = _read(g, origin, normalize(l2, g.tower))
            if target != w:
                return FoldCheck(False, (origin, p2, l2))
            if len(p2) < max_len:
                queue.append((origin, p2, w, l2))
            if count >= max_paths:
                break
    g.folded = was
    return FoldCheck(True)


# ---------------------------------------------------------------------------
# generators of the language


def spanning_tree(g: LabeledGraph, v=None):
    """BFS tree from ``v``: map vertex -> word read from ``v``, and tree edge ids."""
    v = g.base if v is None else v
    words = {v: ()}
    tree = set()
    queue = deque([v])
    while queue:
        a = queue.popleft()
        for eid, d, w, lab in g.incident(a):
            if w not in words:
                words[w] = words[a] + (lab,)
                tree.add(eid)
                queue.append(w)
    return words, tree


def language_generators(g: LabeledGraph, v=None):
    v = g.base if v is None else v
    words, tree = spanning_tree(g, v)
    gens = []
    for eid in sorted(g.edges):
        if eid in tree:
            continue
        o, t, lab = g.edges[eid]
        if o not in words:
            continue
        w = normalize(words[o] + (lab,) + invert_word(words[t]), g.tower)
        if w:
            gens.append(w)
    return gens


# ---------------------------------------------------------------------------
# canonical numbering, dump, DOT


def _token(lab, tower):
    return render_letter(lab, tower)


def canonical(g: LabeledGraph) -> LabeledGraph:
    """Renumber vertices in BFS order from the base and edges in sorted order."""
    order = {g.base: 0}
    queue = deque([g.base])
    while queue:
        a = queue.popleft()
        steps = sorted(g.incident(a), key=lambda s: (s[1] < 0, _token(s[3], g.tower), s[0]))
        for eid, d, w, lab in steps:
            if w not in order:
                order[w] = len(order)
                queue.append(w)
    for v in sorted(g.vertices):
        if v not in order:
            order[v] = len(order)
    h = LabeledGraph(g.tower, 0)
    for v in sorted(order.values()):
        h.add_vertex(v)
    rows = sorted((order[o], order[t], _token(lab, g.tower), lab) for o, t, lab in g.edges.values())
    for o, t, _, lab in rows:
        h.add_edge(o, t, lab)
    h.folded = g.folded
    return h


def dump_graph(g: LabeledGraph) -> str:
    lines = [f"vertex {v}" for v in sorted(g.vertices)]
    for eid in sorted(g.edges):
        o, t, lab = g.edges[eid]
        lines.append(f"edge {eid} {o} {t} {_token(lab, g.tower)}")
    lines.append(f"base {g.base}")
    return "\n".join(lines) + "\n"


def load_graph(text: str, tower: Tower, folded=False) -> LabeledGraph:
    g = None
    pending = []
    verts = []
    base = 0
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "vertex":
            verts.append(int(parts[1]))
        elif parts[0] == "edge":
            lab = parse_word(parts[4], tower, reduce=False)
            if len(lab) != 1:
                raise ValueError(f"bad edge label {parts[4]!r}")
            pending.append((int(parts[1]), int(parts[2]), int(parts[3]), lab[0]))
        elif parts[0] == "base":
            base = int(parts[1])
        else:
            raise ValueError(f"cannot parse graph line {line!r}")
    g = LabeledGraph(tower, base)
    for v in verts:
        g.add_vertex(v)
    for eid, o, t, lab in pending:
        g.add_edge(o, t, lab, eid)
    g.folded = folded
    return g


def to_dot(g: LabeledGraph, name="G") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for v in sorted(g.vertices):
        shape = "doublecircle" if v == g.base else "circle"
        lines.append(f'  v{v} [shape={shape}, label="{v}"];')
    for eid in sorted(g.edges):
        o, t, lab = g.edges[eid]
        style = ", style=bold" if isinstance(lab, Power) else ""
        lines.append(f'  v{o} -> v{t} [label="{_token(lab, g.tower)}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
