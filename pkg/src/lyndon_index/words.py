"""Towers of centralizer extensions and standard words over them.

A word is a tuple of letters.  A letter is either a base letter ``x^{+-1}``
or a power ``u^alpha`` of a root declared in the tower.  Roots are listed
in increasing order and each root word may only use base letters and
earlier roots.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .zt_poly import DEFAULT_DEGREE, Poly, as_poly, is_nonstandard, parse_poly, Region, coset_meets_region, Coset, lattice_from_generators

KAPPA_LIMIT = 4


class WordSyntaxError(ValueError):
    def __init__(self, msg, position=None):
        super().__init__(msg if position is None else f"{msg} (at position {position})")
        self.position = position


class UnknownSymbol(WordSyntaxError):
    pass


class NormalizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Base:
    sym: str
    sign: int = 1

    def inverse(self):
        return Base(self.sym, -self.sign)


@dataclass(frozen=True)
class Power:
    root: int
    exp: Poly

    def __post_init__(self):
        object.__setattr__(self, "exp", as_poly(self.exp))
        if not self.exp:
            raise ValueError("power letters carry a nonzero exponent")

    def inverse(self):
        return Power(self.root, -self.exp)


def invert_word(w):
    return tuple(a.inverse() for a in reversed(w))


@dataclass
class Tower:
    alphabet: tuple
    roots: list = field(default_factory=list)  # (name, word)
    D: int = DEFAULT_DEGREE

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        self._index = {name: i for i, (name, _) in enumerate(self.roots)}

    def add_root(self, name, word):
        if name in self._index or name in self.alphabet:
            raise ValueError(f"duplicate symbol {name!r}")
        self.roots.append((name, tuple(word)))
        self._index[name] = len(self.roots) - 1

    def index(self, name):
        return self._index[name]

    def name(self, i):
        return self.roots[i][0]

    def pi(self, i):
        return self.roots[i][1]

    def pi_power(self, i, k: int):
        """Letters of ``pi(u_i)^k`` for an integer ``k``."""
        w = self.pi(i) if k > 0 else invert_word(self.pi(i))
        return w * abs(k)

    def root_length(self, i):
        return len(self.pi(i))


# ---------------------------------------------------------------------------
# parsing and rendering

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(?:(-1)|\{([^{}]*)\}))?$")


def parse_word(text: str, tower: Tower, reduce=True):
    """Parse whitespace separated tokens ``x``, ``x^-1`` and ``u^{poly}``."""
    letters = []
    pos = 0
    for tok in text.split():
        pos = text.index(tok, pos)
        m = _TOKEN.match(tok)
        if not m:
            raise WordSyntaxError(f"bad token {tok!r}", pos)
        name, inv, exp = m.groups()
        if name in tower.alphabet:
            if exp is not None:
                raise WordSyntaxError(f"base letter {name!r} takes only ^-1", pos)
            letters.append(Base(name, -1 if inv else 1))
        elif name in tower._index:
            if exp is None:
                raise WordSyntaxError(f"root {name!r} needs an exponent in braces", pos)
            try:
                e = parse_poly(exp)
            except ValueError as err:
                raise WordSyntaxError(str(err), pos) from None
            if e.degree > tower.D:
                raise WordSyntaxError(f"exponent {e} exceeds degree bound {tower.D}", pos)
            if e:
                letters.append(Power(tower.index(name), e))
        else:
            raise UnknownSymbol(f"unknown symbol {name!r}", pos)
        pos += len(tok)
    return free_reduce(letters) if reduce else tuple(letters)


def render_letter(a, tower: Tower):
    if isinstance(a, Base):
        return a.sym if a.sign > 0 else f"{a.sym}^-1"
    return f"{tower.name(a.root)}^{{{a.exp}}}"


def render_word(w, tower: Tower):
    return " ".join(render_letter(a, tower) for a in w)


def free_reduce(letters):
    """Cancel adjacent inverse base letters and merge adjacent same-root powers."""
    out = []
    for a in letters:
        if out:
            b = out[-1]
            if isinstance(a, Base) and isinstance(b, Base) and a == b.inverse():
                out.pop()
                continue
            if isinstance(a, Power) and isinstance(b, Power) and a.root == b.root:
                out.pop()
                e = a.exp + b.exp
                if e:
                    out.append(Power(a.root, e))
                continue
        out.append(a)
    return tuple(out)


_TOWER_LINE = re.compile(r"^root\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


def parse_tower(text: str) -> Tower:
    alphabet = None
    D = DEFAULT_DEGREE
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            alphabet = tuple(line[len("alphabet:"):].split())
        elif line.startswith("D:"):
            D = int(line[2:].strip())
        else:
            m = _TOWER_LINE.match(line)
            if not m:
                raise WordSyntaxError(f"line {lineno}: cannot parse {raw!r}")
            pending.append((lineno, m.group(1), m.group(2)))
    if alphabet is None:
        raise WordSyntaxError("tower file has no alphabet line")
    tower = Tower(alphabet, [], D)
    for lineno, name, body in pending:
        try:
            word = parse_word(body, tower, reduce=False)
        except WordSyntaxError as err:
            raise WordSyntaxError(f"line {lineno}: {err}") from None
        tower.add_root(name, word)
    return tower


def render_tower(tower: Tower) -> str:
    lines = ["alphabet: " + " ".join(tower.alphabet), f"D: {tower.D}"]
    for name, word in tower.roots:
        lines.append(f"root {name} = {render_word(word, tower)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# standard form checks


def first_base(a, tower):
    while isinstance(a, Power):
        a = tower.pi(a.root)[0] if a.exp.sign() > 0 else tower.pi(a.root)[-1].inverse()
    return a


def last_base(a, tower):
    while isinstance(a, Power):
        a = tower.pi(a.root)[-1] if a.exp.sign() > 0 else tower.pi(a.root)[0].inverse()
    return a


def pair_ok(a, b, tower):
    """Whether ``a b`` concatenates without cancellation or merging."""
    if isinstance(a, Power) and isinstance(b, Power) and a.root == b.root:
        return False
    return last_base(a, tower) != first_base(b, tower).inverse()


def _beyond(beta, gamma):
    # beta >= gamma > 0 or beta <= gamma < 0, strictly past gamma
    return beta != gamma and beta.sign() == gamma.sign() and abs(beta) > abs(gamma)


def _patterns(tower, kappa_limit):
    for v in range(len(tower.roots)):
        for k in range(1, kappa_limit + 1):
            for s in (1, -1):
                yield v, s * k, tower.pi_power(v, s * k)


def _is_vpow(a, v):
    return isinstance(a, Power) and a.root == v


def violations(w, tower: Tower, kappa_limit: int = KAPPA_LIMIT, only_end=False):
    """Itemized obstructions to ``w`` being a standard form.

    Each item is ``(kind, start, stop, data)`` over the slice ``w[start:stop]``.
    With ``only_end`` only obstructions touching the last letter are reported.
    """
    w = tuple(w)
    n = len(w)
    out = []

    def keep(start, stop):
        return not only_end or stop == n

    for i, a in enumerate(w):
        if isinstance(a, Power) and not is_nonstandard(a.exp) and keep(i, i + 1):
            out.append(("integer-power", i, i + 1, None))
    for i in range(n - 1):
        if not pair_ok(w[i], w[i + 1], tower) and keep(i, i + 2):
            kind = "merge" if _is_vpow(w[i + 1], getattr(w[i], "root", None)) else "cancel"
            out.append((kind, i, i + 2, None))
    for v, k, pat in _patterns(tower, kappa_limit):
        m = len(pat)
        for i in range(n - m + 1):
            seg = w[i:i + m]
            left = i > 0 and _is_vpow(w[i - 1], v)
            right = i + m < n and _is_vpow(w[i + m], v)
            if seg == pat:
                if left and keep(i - 1, i + m):
                    out.append(("absorb", i - 1, i + m, (v, k)))
                elif right and keep(i, i + m + 1):
                    out.append(("absorb", i, i + m + 1, (v, k)))
                continue
            if right and isinstance(pat[0], Power) and seg[1:] == pat[1:]:
                a = seg[0]
                if isinstance(a, Power) and a.root == pat[0].root and _beyond(a.exp, pat[0].exp):
                    if keep(i, i + m + 1):
                        out.append(("partial-left", i, i + m + 1, (v, k)))
            if left and isinstance(pat[-1], Power) and seg[:-1] == pat[:-1]:
                a = seg[-1]
                if isinstance(a, Power) and a.root == pat[-1].root and _beyond(a.exp, pat[-1].exp):
                    if keep(i - 1, i + m):
                        out.append(("partial-right", i - 1, i + m, (v, k)))
    for i, a in enumerate(w):
        if not isinstance(a, Power):
            continue
        u = a.root
        lim = tower.root_length(u)
        for j in range(i + 2, min(n, i + lim + 2)):
            b = w[j]
            if _is_vpow(b, u):
                if _shifted(w[i], w[i + 1:j], b, tower) is not None and keep(i, j + 1):
                    out.append(("shift", i, j + 1, None))
                break
    return out


def _shifted(a, g, b, tower):
    """``u^{a+e} g' u^{b-e}`` when that is a valid representation with a larger
    leading exponent, else ``None``."""
    if any(_is_vpow(x, a.root) for x in g):
        return None
    e = a.exp.sign()
    u = a.root
    g2 = free_reduce(tower.pi_power(u, -e) + tuple(g) + tower.pi_power(u, e))
    if not g2 or any(_is_vpow(x, u) for x in g2):
        return None
    na, nb = a.exp + e, b.exp - e
    if not (is_nonstandard(na) and is_nonstandard(nb)):
        return None
    A, B = Power(u, na), Power(u, nb)
    seq = (A,) + g2 + (B,)
    if all(pair_ok(x, y, tower) for x, y in zip(seq, seq[1:])):
        return seq
    return None


def validate_standard(w, tower: Tower, kappa_limit: int = KAPPA_LIMIT) -> bool:
    return not violations(w, tower, kappa_limit)


def _power_or_expand(u, e, tower):
    if not e:
        return ()
    if is_nonstandard(e):
        return (Power(u, e),)
    return tower.pi_power(u, e.coeff(0))


def normalize(w, tower: Tower, max_steps: int = 100000):
    """Rewrite a letter sequence into a standard form of the same element."""
    w = free_reduce(w)
    for _ in range(max_steps):
        vs = violations(w, tower, kappa_limit=1)
        if not vs:
            return w
        kind, i, j, data = vs[0]
        if kind == "integer-power":
            a = w[i]
            rep = tower.pi_power(a.root, a.exp.coeff(0))
        elif kind == "merge":
            a, b = w[i], w[i + 1]
            rep = _power_or_expand(a.root, a.exp + b.exp, tower)
        elif kind == "cancel":
            a, b = w[i], w[i + 1]
            if isinstance(a, Power):
                s = a.exp.sign()
                rep = _power_or_expand(a.root, a.exp - s, tower) + tower.pi_power(a.root, s) + (b,)
            else:
                s = b.exp.sign()
                rep = (a,) + tower.pi_power(b.root, s) + _power_or_expand(b.root, b.exp - s, tower)
        elif kind == "absorb":
            v, k = data
            p = w[i] if _is_vpow(w[i], v) else w[j - 1]
            rep = _power_or_expand(v, p.exp + k, tower)
        elif kind == "partial-left":
            v, k = data
            a = w[i]
            gamma = tower.pi_power(v, k)[0].exp
            rep = _power_or_expand(a.root, a.exp - gamma, tower) + _power_or_expand(v, w[j - 1].exp + k, tower)
        elif kind == "partial-right":
            v, k = data
            a = w[j - 1]
            gamma = tower.pi_power(v, k)[-1].exp
            rep = _power_or_expand(v, w[i].exp + k, tower) + _power_or_expand(a.root, a.exp - gamma, tower)
        else:
            rep = _shifted(w[i], w[i + 1:j - 1], w[j - 1], tower)
        w = free_reduce(w[:i] + tuple(rep) + w[j:])
    raise NormalizationError("normalization did not terminate")


def multiply(*words, tower):
    out = ()
    for w in words:
        out = out + tuple(w)
    return normalize(out, tower)


def validate_tower(tower: Tower):
    """List of violations (empty when the tower is acceptable)."""
    problems = []
    for i, (name, word) in enumerate(tower.roots):
        for a in word:
            if isinstance(a, Base) and a.sym not in tower.alphabet:
                problems.append(f"{name}: unknown base letter {a.sym}")
            if isinstance(a, Power):
                if a.root >= i:
                    problems.append(f"{name}: uses root {tower.name(a.root)} not declared before it")
                if not is_nonstandard(a.exp):
                    problems.append(f"{name}: exponent {a.exp} is not >> 0")
        reduced = free_reduce(word)
        if not reduced:
            problems.append(f"{name}: empty after normalization")
            continue
        if reduced != word:
            problems.append(f"{name}: word is not reduced")
        n = len(word)
        if any(n % d == 0 and word[:d] * (n // d) == word for d in range(1, n)):
            problems.append(f"{name}: word is a proper power")
        sq = word + word
        if free_reduce(sq) != sq or any(not pair_ok(a, b, tower) for a, b in zip(sq, sq[1:])):
            problems.append(f"{name}: pi(u)pi(u) is not a standard concatenation")
    return problems


# ---------------------------------------------------------------------------
# W-equivalence classes of infinite powers


def critical_exponents(tower: Tower, W, u: int):
    """Exponents of ``u``-letters inside root words of higher roots in ``W``, plus 0."""
    out = {Poly()}
    for v in W:
        if v > u:
            for a in tower.pi(v):
                if _is_vpow(a, u):
                    out.add(a.exp)
    return frozenset(out)


def _thresholds(tower, W, u):
    return sorted({abs(g) for g in critical_exponents(tower, W, u) if g})


def equiv_classes(tower: Tower, W, u: int):
    """Cells of the partition of nonstandard exponents of ``u``.

    Positive cells come first in increasing order, then negative cells in
    decreasing order.  Each cell is a ``Region``.
    """
    th = _thresholds(tower, W, u)
    cells = []
    for sign, s in (("positive", 1), ("negative", -1)):
        lo = None
        seq = [s * g for g in th]
        for g in seq:
            cons = [] if lo is None else [(">" if s > 0 else "<", lo)]
            cons.append(("<" if s > 0 else ">", g))
            cells.append(Region(sign, tuple(cons)))
            cells.append(Region(sign, (("=", g),)))
            lo = g
        cells.append(Region(sign, () if lo is None else ((">" if s > 0 else "<", lo),)))
    full = Coset(lattice_from_generators([Poly.monomial(1, k) for k in range(tower.D + 1)], tower.D), Poly())
    return [c for c in cells if coset_meets_region(full, c) is not None]


def class_index(tower: Tower, W, u: int, alpha) -> int:
    alpha = as_poly(alpha)
    if not is_nonstandard(alpha):
        raise ValueError(f"exponent {alpha} is standard; classes cover only nonstandard exponents")
    for i, c in enumerate(equiv_classes(tower, W, u)):
        if alpha in c:
            return i
    raise AssertionError("classes do not cover the exponent")


def class_of(tower: Tower, W, u: int, alpha) -> Region:
    return equiv_classes(tower, W, u)[class_index(tower, W, u, alpha)]
