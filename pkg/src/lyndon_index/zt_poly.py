"""Integer polynomial exponents, their lattices, cosets and lex regions.

Exponents live in the additive group Z[t] ordered lexicographically
(higher degree dominates).  Everything is truncated to degree ``D`` and
handled as integer vectors with the top-degree coordinate first, so that
the lex order on polynomials is the lex order on the vectors.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import reduce

DEFAULT_DEGREE = 3
DEFAULT_BOX = 64

NEG_INF = float("-inf")


class DegreeOverflow(ArithmeticError):
    pass


class Poly:
    """Immutable integer polynomial in ``t``."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))
        object.__setattr__(self, "_hash", hash(self.coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, n: int) -> "Poly":
        return cls((n,))

    @classmethod
    def monomial(cls, c: int, k: int) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def from_vector(cls, vec, D: int) -> "Poly":
        # vec is top-degree first, length D + 1
        return cls(reversed(list(vec)))

    def vector(self, D: int) -> list[int]:
        if self.degree > D:
            raise DegreeOverflow(f"{self} exceeds degree bound {D}")
        c = list(self.coeffs) + [0] * (D + 1 - len(self.coeffs))
        return c[::-1]

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if k < len(self.coeffs) else 0

    def sign(self) -> int:
        return (self.lead > 0) - (self.lead < 0)

    def __bool__(self):
        return bool(self.coeffs)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Poly(c * k for c in self.coeffs)

    __rmul__ = __mul__

    def __lt__(self, other):
        return poly_cmp(self, other) < 0

    def __le__(self, other):
        return poly_cmp(self, other) <= 0

    def __gt__(self, other):
        return poly_cmp(self, other) > 0

    def __ge__(self, other):
        return poly_cmp(self, other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                body = ("" if a == 1 else str(a)) + ("t" if k == 1 else f"t^{k}")
            out.append((sign, body))
        s = "".join(sg + b for sg, b in out)
        return s[1:] if s.startswith("+") else s


def as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(int(x))


T = Poly((0, 1))

_TERM = re.compile(r"([+-]?)(\d*)(t(?:\^(\d+))?)?")


def parse_poly(text: str) -> Poly:
    """Parse ``2t^2-3t+1``, ``-t``, ``0``. No whitespace allowed."""
    if not text or any(ch.isspace() for ch in text):
        raise ValueError(f"bad polynomial {text!r}")
    pos = 0
    acc = {}
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad polynomial {text!r} at position {pos}")
        sign, digits, tpart, power = m.groups()
        if pos > 0 and not sign:
            raise ValueError(f"bad polynomial {text!r} at position {pos}")
        if not digits and not tpart:
            raise ValueError(f"bad polynomial {text!r} at position {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        k = 0 if not tpart else (int(power) if power else 1)
        acc[k] = acc.get(k, 0) + c
        pos = m.end()
    n = max(acc) + 1
    return Poly(acc.get(i, 0) for i in range(n))


def poly_cmp(a: Poly, b: Poly) -> int:
    """Lex comparison: the sign of the leading coefficient of ``a - b``."""
    return (a - b).sign()


def is_nonstandard(a: Poly) -> bool:
    return a.degree >= 1


# ---------------------------------------------------------------------------
# integer row echelon machinery


def _xgcd(a, b):
    x, nx, y, ny = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
    return a, x, y


def hnf(rows, ncols):
    """Row Hermite normal form.

    Returns the nonzero rows in echelon form with positive pivots and the
    entries above each pivot reduced into ``[0, pivot)``.
    """
    work = [list(r) for r in rows if any(r)]
    out = []
    for col in range(ncols):
        hits = [r for r in work if r[col] != 0]
        if not hits:
            continue
        rest = [r for r in work if r[col] == 0]
        piv = hits[0]
        for r in hits[1:]:
            g, x, y = _xgcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            new_piv = [x * p + y * q for p, q in zip(piv, r)]
            other = [b * p - a * q for p, q in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv[col] < 0:
            piv = [-v for v in piv]
        out.append(piv)
        work = rest
    # reduce above pivots
    pivcols = [next(j for j, v in enumerate(r) if v) for r in out]
    for i, r in enumerate(out):
        c = pivcols[i]
        for k in range(i):
            q = out[k][c] // r[c]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], r)]
    return out


def _pivot(row):
    return next(j for j, v in enumerate(row) if v)


def _reduce(vec, rows, limit=None):
    """Reduce ``vec`` against echelon ``rows``; returns (remainder, quotients)."""
    v = list(vec)
    qs = []
    for r in rows:
        c = _pivot(r)
        if limit is not None and c >= limit:
            qs.append(0)
            continue
        q = v[c] // r[c]
        qs.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, r)]
    return v, qs


@dataclass(frozen=True)
class Lattice:
    """Finitely generated subgroup of Z[t] (truncated to degree ``D``)."""

    basis: tuple
    D: int = DEFAULT_DEGREE

    @property
    def rank(self):
        return len(self.basis)

    @property
    def rows(self):
        return [b.vector(self.D) for b in self.basis]

    def pivots(self):
        return [_pivot(r) for r in self.rows]

    def __contains__(self, a):
        return lattice_member(self, a)

    def __str__(self):
        return "{" + ", ".join(map(str, self.basis)) + "}"


def lattice_from_generators(gens, D: int = DEFAULT_DEGREE) -> Lattice:
    rows = [as_poly(g).vector(D) for g in gens]
    basis = hnf(rows, D + 1)
    return Lattice(tuple(Poly.from_vector(r, D) for r in basis), D)


def lattice_from_rows(rows, D) -> Lattice:
    return Lattice(tuple(Poly.from_vector(r, D) for r in hnf(rows, D + 1)), D)


def lattice_member(L: Lattice, a) -> bool:
    rem, _ = _reduce(as_poly(a).vector(L.D), L.rows)
    return not any(rem)


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    return lattice_from_rows(L1.rows + L2.rows, L1.D)


def lattice_contains(L1: Lattice, L2: Lattice) -> bool:
    """Whether ``L2`` is a sublattice of ``L1``."""
    return all(lattice_member(L1, b) for b in L2.basis)


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    n = L1.D + 1
    rows = [r + r for r in L1.rows] + [r + [0] * n for r in L2.rows]
    out = hnf(rows, 2 * n)
    inter = [r[n:] for r in out if _pivot(r) >= n]
    return lattice_from_rows(inter, L1.D)


def lattice_index(L1: Lattice, L2: Lattice):
    """Index of ``L2`` in ``L1``; ``None`` means infinite."""
    if not lattice_contains(L1, L2):
        raise ValueError(f"{L2} is not contained in {L1}")
    if L2.rank < L1.rank:
        return None
    p1 = math.prod(r[_pivot(r)] for r in L1.rows)
    p2 = math.prod(r[_pivot(r)] for r in L2.rows)
    return p2 // p1


@dataclass(frozen=True)
class Coset:
    lattice: Lattice
    rep: Poly

    def __post_init__(self):
        rem, _ = _reduce(as_poly(self.rep).vector(self.lattice.D), self.lattice.rows)
        object.__setattr__(self, "rep", Poly.from_vector(rem, self.lattice.D))

    def __contains__(self, a):
        return lattice_member(self.lattice, as_poly(a) - self.rep)

    def shift(self, a) -> "Coset":
        return Coset(self.lattice, self.rep + as_poly(a))

    def __neg__(self):
        return Coset(self.lattice, -self.rep)

    def __str__(self):
        return f"{self.rep} + {self.lattice}"


def coset_intersect(c1: Coset, c2: Coset):
    """Intersection of two cosets, or ``None`` when empty."""
    D = c1.lattice.D
    n = D + 1
    rows = [r + r for r in c1.lattice.rows] + [r + [0] * n for r in c2.lattice.rows]
    out = hnf(rows, 2 * n)
    sum_rows = [r for r in out if _pivot(r) < n]
    inter = [r[n:] for r in out if _pivot(r) >= n]
    d = (c2.rep - c1.rep).vector(D)
    rem, _ = _reduce(d + [0] * n, sum_rows, limit=n)
    if any(rem[:n]):
        return None
    a = Poly.from_vector([-v for v in rem[n:]], D)
    return Coset(lattice_from_rows(inter, D), c1.rep + a)


# ---------------------------------------------------------------------------
# lex regions

RELATIONS = ("<", "<=", ">", ">=", "=", "!=")


@dataclass(frozen=True)
class Region:
    """Conjunction of lex constraints ``x rel threshold`` plus a sign condition.

    ``sign='positive'`` means ``x >> 0`` and ``x > 0`` (positive and of
    degree at least one); ``'negative'`` symmetric; ``'any'`` no condition.
    """

    sign: str = "any"
    constraints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.sign not in ("positive", "negative", "standard", "any"):
            raise ValueError(self.sign)
        for rel, _ in self.constraints:
            if rel not in RELATIONS:
                raise ValueError(rel)

    def __contains__(self, a):
        return region_member(self, a)

    def __str__(self):
        parts = {"positive": [">>0"], "negative": ["<<0"], "standard": ["in Z"], "any": []}[self.sign]
        parts += [f"{rel}{thr}" for rel, thr in self.constraints]
        return "{" + ", ".join(parts) + "}"


def _rel_holds(rel, c):
    return {
        "<": c < 0, "<=": c <= 0, ">": c > 0, ">=": c >= 0, "=": c == 0, "!=": c != 0,
    }[rel]


def region_member(r: Region, a) -> bool:
    a = as_poly(a)
    if r.sign == "positive" and not (is_nonstandard(a) and a.sign() > 0):
        return False
    if r.sign == "negative" and not (is_nonstandard(a) and a.sign() < 0):
        return False
    if r.sign == "standard" and is_nonstandard(a):
        return False
    return all(_rel_holds(rel, poly_cmp(a, as_poly(thr))) for rel, thr in r.constraints)


def _lex_cases(rel, gamma, n):
    """Interval cases (one (lo, hi) per coordinate) whose union is ``x rel gamma``."""
    free = (None, None)

    def strict(up):
        for k in range(n):
            case = [(g, g) for g in gamma[:k]]
            case.append((gamma[k] + 1, None) if up else (None, gamma[k] - 1))
            case += [free] * (n - k - 1)
            yield case

    eq = [(g, g) for g in gamma]
    if rel == ">":
        return list(strict(True))
    if rel == "<":
        return list(strict(False))
    if rel == ">=":
        return list(strict(True)) + [eq]
    if rel == "<=":
        return list(strict(False)) + [eq]
    if rel == "=":
        return [eq]
    return list(strict(True)) + list(strict(False))


def _sign_cases(sign, n):
    # positive nonstandard: the non-constant part is lex-positive
    if sign == "standard":
        return [[(0, 0)] * (n - 1) + [(None, None)]]
    zero = [0] * n
    cases = _lex_cases(">" if sign == "positive" else "<", zero, n)
    return [c for c in cases if c[n - 1] == (None, None)]


def _meet(a, b):
    lo = a[0] if b[0] is None else (b[0] if a[0] is None else max(a[0], b[0]))
    hi = a[1] if b[1] is None else (b[1] if a[1] is None else min(a[1], b[1]))
    if lo is not None and hi is not None and lo > hi:
        return None
    return (lo, hi)


def region_cases(r: Region, D: int):
    """Expand a region into a list of coordinate-box cases."""
    n = D + 1
    groups = []
    if r.sign != "any":
        groups.append(_sign_cases(r.sign, n))
    for rel, thr in r.constraints:
        groups.append(_lex_cases(rel, as_poly(thr).vector(D), n))
    out = []

    def rec(i, box):
        if i == len(groups):
            out.append(box)
            return
        for case in groups[i]:
            new = []
            for a, b in zip(box, case):
                m = _meet(a, b)
                if m is None:
                    break
                new.append(m)
            else:
                rec(i + 1, new)

    rec(0, [(None, None)] * n)
    return out


def _candidates(lo, hi, window):
    if lo is not None and hi is not None:
        rng = range(lo, min(hi, lo + 2 * window) + 1)
        return sorted(rng, key=abs)
    if lo is not None:
        start = max(lo, 0) if lo <= 0 else lo
        vals = list(range(lo, lo + 2 * window + 1))
        return sorted(vals, key=lambda z: (abs(z - start), z))
    if hi is not None:
        vals = list(range(hi - 2 * window, hi + 1))
        start = min(hi, 0)
        return sorted(vals, key=lambda z: (abs(z - start), -z))
    return sorted(range(-window, window + 1), key=lambda z: (abs(z), -z))


def _solve_box(rep, rows, box, window):
    n = len(rep)
    by_pivot = {_pivot(r): r for r in rows}

    def rec(j, cur):
        if j == n:
            return cur
        lo, hi = box[j]
        r = by_pivot.get(j)
        if r is None:
            v = cur[j]
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return None
            return rec(j + 1, cur)
        p = r[j]
        zlo = None if lo is None else -((cur[j] - lo) // p)
        zhi = None if hi is None else (hi - cur[j]) // p
        if zlo is not None and zhi is not None and zlo > zhi:
            return None
        for z in _candidates(zlo, zhi, window):
            nxt = [a + z * b for a, b in zip(cur, r)]
            got = rec(j + 1, nxt)
            if got is not None:
                return got
        return None

    return rec(0, list(rep))


def _brute_meets(c: Coset, r: Region, box: int):
    rows = c.lattice.rows
    D = c.lattice.D
    base = c.rep.vector(D)
    ks = sorted(range(-box, box + 1), key=abs)
    for combo in itertools.product(ks, repeat=len(rows)):
        v = list(base)
        for k, row in zip(combo, rows):
            if k:
                v = [a + k * b for a, b in zip(v, row)]
        p = Poly.from_vector(v, D)
        if region_member(r, p):
            return p
    return None


def _fallback_box(rank, box):
    if rank == 0:
        return 0
    b = box
    while b > 1 and (2 * b + 1) ** rank > 20000:
        b //= 2
    return b


def coset_meets_region(c: Coset, r: Region, box: int = DEFAULT_BOX):
    """A member of ``c`` lying in ``r``, or ``None``.

    Exact case split over the lex constraints, with a bounded brute-force
    search as a consistency check when the case split finds nothing.
    """
    D = c.lattice.D
    rows = c.lattice.rows
    rep = c.rep.vector(D)
    for case in region_cases(r, D):
        got = _solve_box(rep, rows, case, box)
        if got is not None:
            p = Poly.from_vector(got, D)
            assert region_member(r, p) and p in c
            return p
    hit = _brute_meets(c, r, _fallback_box(c.lattice.rank, box))
    if hit is not None:
        raise AssertionError(f"case split missed witness {hit} of {c} in {r}")
    return None


def _negations(r: Region):
    """Regions whose union is the complement of ``r``."""
    neg = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "=": "!=", "!=": "="}
    out = []
    if r.sign == "positive":
        out += [Region("any", (("<=", Poly.const(0)),)), Region("standard")]
    elif r.sign == "negative":
        out += [Region("any", ((">=", Poly.const(0)),)), Region("standard")]
    for rel, thr in r.constraints:
        out.append(Region("any", ((neg[rel], thr),)))
    return out


def _with(r: Region, extra: Region) -> Region:
    if extra.sign == "any":
        sign = r.sign
    elif r.sign in ("any", extra.sign):
        sign = extra.sign
    else:
        # incompatible sign conditions: the region is empty
        return Region("any", (("<", Poly.const(0)), (">", Poly.const(0))))
    return Region(sign, r.constraints + extra.constraints)


def _quotient_reps(L: Lattice, M: Lattice):
    """Coset representatives of ``M`` in ``L`` (finite index assumed)."""
    rows = L.rows
    coords = []
    for b in M.rows:
        rem, qs = _reduce(b, rows)
        assert not any(rem)
        coords.append(qs)
    h = hnf(coords, len(rows))
    diag = [r[i] for i, r in enumerate(h)]
    for ks in itertools.product(*(range(d) for d in diag)):
        v = [0] * (L.D + 1)
        for k, row in zip(ks, rows):
            v = [a + k * b for a, b in zip(v, row)]
        yield Poly.from_vector(v, L.D)


def region_outside_cosets(c: Coset, r: Region, cosets, box: int = 8):
    """A point of ``c`` in ``r`` that lies in none of ``cosets`` (all sharing
    one lattice), or ``None``.  Exact when the lattice of ``c`` meets the
    common lattice in finite index; otherwise a bounded search.
    """
    cosets = list(cosets)
    if not cosets:
        return coset_meets_region(c, r)
    M = lattice_intersect(c.lattice, cosets[0].lattice)
    idx = lattice_index(c.lattice, M)
    if idx is not None:
        for off in _quotient_reps(c.lattice, M):
            sub = Coset(M, c.rep + off)
            if any(sub.rep in other for other in cosets):
                continue
            w = coset_meets_region(sub, r)
            if w is not None:
                return w
        return None
    w0 = coset_meets_region(c, r)
    if w0 is None:
        return None
    rows = c.lattice.basis
    ks = sorted(range(-box, box + 1), key=abs)
    for combo in itertools.product(ks, repeat=len(rows)):
        p = reduce(lambda acc, kb: acc + kb[1] * kb[0], zip(combo, rows), w0)
        if region_member(r, p) and not any(p in other for other in cosets):
            return p
    return None


def coset_region_subset(a, b) -> bool:
    """Whether ``a[0] & a[1]`` is contained in ``b[0] & b[1]``."""
    (c1, r1), (c2, r2) = a, b
    if coset_meets_region(c1, r1) is None:
        return True
    if region_outside_cosets(c1, r1, [c2]) is not None:
        return False
    return all(coset_meets_region(c1, _with(r1, neg)) is None for neg in _negations(r2))
