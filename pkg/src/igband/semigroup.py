"""Finite semigroups given by Cayley tables.

Elements are the integers ``0..n-1``; ``table[a][b]`` is the product ``a*b``.
Everything here works on the raw table: Green's relations are read off
principal ideals in ``S^1``, and the two-sided ideal order gives the
partial order on D-classes (D = J for finite semigroups).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BaseNotInClass,
    CapExceeded,
    NoIdempotents,
    NotAssociative,
    NotIdempotent,
    NotSquare,
    OutOfRange,
    ParseError,
)

ASSOCIATIVITY_CAP = 1000


@dataclass(eq=False)
class FiniteSemigroup:
    table: np.ndarray
    labels: tuple[str, ...] | None = None
    aliases: dict[str, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.table.shape[0]

    @property
    def is_band(self) -> bool:
        return isinstance(self, FiniteBand)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def product(self, elements) -> int | None:
        """Product of a sequence of elements; ``None`` for the empty product."""
        p = None
        for x in elements:
            p = x if p is None else int(self.table[p, x])
        return p

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def element(self, name) -> int:
        """Resolve a label, alias or decimal index to an element."""
        if isinstance(name, (int, np.integer)):
            if 0 <= name < self.n:
                return int(name)
            raise KeyError(name)
        if self.labels and name in self.labels:
            return self.labels.index(name)
        if name in self.aliases:
            return self.aliases[name]
        if name.isdigit() and int(name) < self.n:
            return int(name)
        raise KeyError(name)

    def idempotents(self) -> list[int]:
        d = self.table[np.arange(self.n), np.arange(self.n)]
        return [int(a) for a in np.flatnonzero(d == np.arange(self.n))]

    def opposite(self) -> "FiniteSemigroup":
        cls = type(self)
        return cls(np.ascontiguousarray(self.table.T), self.labels, dict(self.aliases))

    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    def __eq__(self, other):
        return (
            isinstance(other, FiniteSemigroup)
            and np.array_equal(self.table, other.table)
            and self.labels == other.labels
        )

    def __repr__(self):
        kind = "FiniteBand" if self.is_band else "FiniteSemigroup"
        return f"{kind}(n={self.n})"


class FiniteBand(FiniteSemigroup):
    """A finite semigroup in which every element is idempotent."""


def find_nonassociative(table: np.ndarray, chunk: int = 64):
    """Lexicographically least triple with (ab)c != a(bc), or None."""
    n = table.shape[0]
    for start in range(0, n, chunk):
        a = np.arange(start, min(n, start + chunk))
        lhs = table[table[a, :][:, :, None], np.arange(n)[None, None, :]]
        rhs = table[a[:, None, None], table[None, :, :]]
        bad = lhs != rhs
        if bad.any():
            i, b, c = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return int(a[i]), int(b), int(c)
    return None


def validate(table, labels=None, max_assoc: int = ASSOCIATIVITY_CAP) -> FiniteSemigroup:
    """Check a raw table and wrap it as a semigroup, or a band when idempotent."""
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotSquare(f"table is not a non-empty square grid (n={n})")
    for a, row in enumerate(rows):
        for b, v in enumerate(row):
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise OutOfRange(a, b, v, n)
    t = np.array(rows, dtype=np.int64)
    if n > max_assoc:
        raise CapExceeded(f"associativity check capped at n={max_assoc}, got {n}")
    witness = find_nonassociative(t)
    if witness is not None:
        raise NotAssociative(*witness)
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise ParseError(f"{len(labels)} labels for {n} elements")
    t.setflags(write=False)
    idem = bool(np.all(t[np.arange(n), np.arange(n)] == np.arange(n)))
    return (FiniteBand if idem else FiniteSemigroup)(t, labels)


# --- Green's relations -------------------------------------------------------


@dataclass
class GreensStructure:
    r_class: tuple[int, ...]
    l_class: tuple[int, ...]
    h_class: tuple[int, ...]
    d_class: tuple[int, ...]
    d_leq: np.ndarray  # d_leq[c, d] iff D_c <= D_d

    @staticmethod
    def _members(ids, c):
        return [x for x, k in enumerate(ids) if k == c]

    def r_members(self, c):
        return self._members(self.r_class, c)

    def l_members(self, c):
        return self._members(self.l_class, c)

    def h_members(self, c):
        return self._members(self.h_class, c)

    def d_members(self, c):
        return self._members(self.d_class, c)

    @property
    def num_d(self) -> int:
        return self.d_leq.shape[0]

    def d_name(self, c: int) -> str:
        return f"D{c}"

    def above(self, c: int) -> list[int]:
        """D-class ids d with D_d >= D_c."""
        return [d for d in range(self.num_d) if self.d_leq[c, d]]


def _partition(keys):
    """Class ids numbered in order of each class's smallest element."""
    ids, seen = [], {}
    for k in keys:
        ids.append(seen.setdefault(k, len(seen)))
    return tuple(ids)


def greens(S: FiniteSemigroup) -> GreensStructure:
    t = S.table
    n = S.n
    right = [frozenset(t[x].tolist()) | {x} for x in range(n)]
    left = [frozenset(t[:, x].tolist()) | {x} for x in range(n)]
    two_sided = [
        right[x] | left[x] | frozenset(t[t[:, x], :].ravel().tolist()) for x in range(n)
    ]
    r = _partition(right)
    l = _partition(left)
    h = _partition(zip(r, l))

    ideals = {}
    for x in range(n):
        ideals.setdefault(two_sided[x], []).append(x)
    classes = list(ideals.items())
    below = [
        sum(1 for other, _ in classes if other < ideal) for ideal, _ in classes
    ]
    order = sorted(range(len(classes)), key=lambda c: (below[c], classes[c][1][0]))
    d = [0] * n
    for new_id, c in enumerate(order):
        for x in classes[c][1]:
            d[x] = new_id
    m = len(classes)
    leq = np.zeros((m, m), dtype=bool)
    for a, ca in enumerate(order):
        for b, cb in enumerate(order):
            leq[a, b] = classes[ca][0] <= classes[cb][0]
    return GreensStructure(r, l, h, tuple(d), leq)


# --- egg-box ------------------------------------------------------------------


@dataclass
class EggBox:
    d_class: int
    I: list[int]
    J: list[int]
    cells: dict[tuple[int, int], frozenset]
    K: frozenset
    idem: dict[tuple[int, int], int]
    base: int
    row_of: dict[int, int]
    col_of: dict[int, int]
    greens: GreensStructure | None = field(default=None, repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.I), len(self.J)

    def e(self, i: int, j: int) -> int:
        return self.idem[i, j]

    def elements(self) -> list[int]:
        return sorted(self.row_of)


def eggbox(S: FiniteSemigroup, G: GreensStructure, d: int | None = None, base: int | None = None) -> EggBox:
    """Coordinatize a D-class with ``base`` sitting in cell (0, 0).

    When ``d`` is omitted it is taken from ``base``; when ``base`` is omitted
    the least idempotent of the class is used.
    """
    if base is None:
        if d is None:
            raise BaseNotInClass("need a D-class or a base element")
        idems = [x for x in G.d_members(d) if S.mul(x, x) == x]
        if not idems:
            raise NotIdempotent(f"D-class {d} contains no idempotent")
        base = idems[0]
    if S.mul(base, base) != base:
        raise NotIdempotent(f"base {S.label(base)} is not idempotent")
    if d is None:
        d = G.d_class[base]
    if G.d_class[base] != d:
        raise BaseNotInClass(f"{S.label(base)} does not lie in {G.d_name(d)}")

    members = G.d_members(d)
    rs = sorted({G.r_class[x] for x in members}, key=lambda c: min(G.r_members(c)))
    ls = sorted({G.l_class[x] for x in members}, key=lambda c: min(G.l_members(c)))
    rs.remove(G.r_class[base])
    ls.remove(G.l_class[base])
    I = [G.r_class[base]] + rs
    J = [G.l_class[base]] + ls
    ri = {c: i for i, c in enumerate(I)}
    lj = {c: j for j, c in enumerate(J)}

    cells: dict[tuple[int, int], set] = {}
    row_of, col_of = {}, {}
    for x in members:
        i, j = ri[G.r_class[x]], lj[G.l_class[x]]
        cells.setdefault((i, j), set()).add(x)
        row_of[x], col_of[x] = i, j
    idem = {}
    for key, cell in cells.items():
        for x in sorted(cell):
            if S.mul(x, x) == x:
                idem[key] = x
                break
    frozen = {k: frozenset(v) for k, v in cells.items()}
    return EggBox(d, I, J, frozen, frozenset(idem), idem, base, row_of, col_of, G)


# --- biordered set -----------------------------------------------------------


@dataclass
class Biorder:
    idempotents: list[int]
    basic_pairs: set
    leq_l: set
    leq_r: set
    basic_products: list

    def is_basic(self, e: int, f: int) -> bool:
        return frozenset((e, f)) in self.basic_pairs


def biorder(S: FiniteSemigroup) -> Biorder:
    """Basic pairs and the quasi-orders e <=l f (ef = e), e <=r f (fe = e)."""
    E = S.idempotents()
    if not E:
        raise NoIdempotents("semigroup has no idempotents")
    pairs, leq_l, leq_r, products = set(), set(), set(), []
    for e, f in itertools.product(E, repeat=2):
        ef, fe = S.mul(e, f), S.mul(f, e)
        if ef == e:
            leq_l.add((e, f))
        if fe == e:
            leq_r.add((e, f))
        if {ef, fe} & {e, f}:
            pairs.add(frozenset((e, f)))
    for p in sorted(pairs, key=sorted):
        e, f = (min(p), max(p))
        products.append((e, f, S.mul(e, f)))
        if e != f:
            products.append((f, e, S.mul(f, e)))
    return Biorder(E, pairs, leq_l, leq_r, products)


# --- small constructors --------------------------------------------------------


def from_function(elements, op, labels=None) -> FiniteSemigroup:
    elements = list(elements)
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[op(x, y)] for y in elements] for x in elements]
    return validate(table, labels)


def left_zero(n: int) -> FiniteBand:
    return validate([[a] * n for a in range(n)])


def right_zero(n: int) -> FiniteBand:
    return validate([list(range(n)) for _ in range(n)])


def rectangular_band(m: int, n: int) -> FiniteBand:
    cells = list(itertools.product(range(m), range(n)))
    labels = [f"({i + 1},{j + 1})" for i, j in cells]
    return from_function(cells, lambda x, y: (x[0], y[1]), labels)


def chain(n: int) -> FiniteBand:
    """The n-element chain semilattice under min."""
    return validate([[min(a, b) for b in range(n)] for a in range(n)])


def transformation_semigroup(generators, degree: int | None = None) -> FiniteSemigroup:
    """Semigroup generated by transformations given as image tuples.

    Maps compose left to right, so ``(f*g)(x) = g(f(x))``; this matches the
    convention that right multiplication acts on images.
    """
    gens = [tuple(g) for g in generators]
    elements, frontier = list(dict.fromkeys(gens)), list(dict.fromkeys(gens))
    seen = set(elements)
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = tuple(g[v] for v in f)
                if h not in seen:
                    seen.add(h)
                    elements.append(h)
                    nxt.append(h)
        frontier = nxt
    elements.sort()
    labels = ["".join(str(v + 1) for v in f) for f in elements]
    return from_function(elements, lambda f, g: tuple(g[v] for v in f), labels)


def full_transformation_monoid(degree: int) -> FiniteSemigroup:
    maps = list(itertools.product(range(degree), repeat=degree))
    labels = ["".join(str(v + 1) for v in f) for f in maps]
    return from_function(maps, lambda f, g: tuple(g[v] for v in f), labels)


def adjoin_identity(S: FiniteSemigroup) -> FiniteSemigroup:
    n = S.n
    rows = [list(r) + [a] for a, r in enumerate(S.rows())]
    rows.append(list(range(n + 1)))
    labels = None if S.labels is None else list(S.labels) + ["1"]
    return validate(rows, labels)


# --- .cay files ----------------------------------------------------------------


def format_cay(S: FiniteSemigroup) -> str:
    lines = [str(S.n)]
    lines += [" ".join(str(v) for v in row) for row in S.rows()]
    if S.labels:
        lines += [f"# {a} {lab}" for a, lab in enumerate(S.labels)]
    return "\n".join(lines) + "\n"


def parse_cay(text: str, max_assoc: int = ASSOCIATIVITY_CAP) -> FiniteSemigroup:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty .cay input")
    try:
        n = int(lines[0])
        rows = [[int(v) for v in lines[1 + a].split()] for a in range(n)]
    except (ValueError, IndexError) as exc:
        raise ParseError(f"malformed .cay table: {exc}") from None
    labels = None
    rest = lines[1 + n:]
    if rest:
        labels = [str(a) for a in range(n)]
        for ln in rest:
            if not ln.startswith("#"):
                raise ParseError(f"unexpected line after table: {ln!r}")
            parts = ln[1:].split(None, 1)
            if len(parts) != 2 or not parts[0].isdigit() or int(parts[0]) >= n:
                raise ParseError(f"bad label line: {ln!r}")
            labels[int(parts[0])] = parts[1]
    return validate(rows, labels, max_assoc=max_assoc)


def read_cay(path) -> FiniteSemigroup:
    return parse_cay(Path(path).read_text())


def write_cay(S: FiniteSemigroup, path) -> None:
    Path(path).write_text(format_cay(S))


# --- isomorphism ----------------------------------------------------------------


def _invariants(S: FiniteSemigroup, G: GreensStructure) -> list[tuple]:
    idem = np.diagonal(S.table) == np.arange(S.n)
    below = G.d_leq.sum(axis=0)
    out = []
    for x in range(S.n):
        out.append((
            bool(idem[x]),
            len(G.r_members(G.r_class[x])),
            len(G.l_members(G.l_class[x])),
            len(G.d_members(G.d_class[x])),
            int(below[G.d_class[x]]),
            int((S.table[x] == x).sum()),
            int((S.table[:, x] == x).sum()),
        ))
    return out


def find_isomorphism(S: FiniteSemigroup, T: FiniteSemigroup) -> list[int] | None:
    """An isomorphism S -> T as a list ``phi[a]``, or None.

    Backtracking over elements, pruned by Green's-class sizes and fixed-point
    counts of translations, with every product among already-mapped elements
    checked as soon as both factors are assigned.
    """
    if S.n != T.n:
        return None
    inv_s, inv_t = _invariants(S, greens(S)), _invariants(T, greens(T))
    if sorted(inv_s) != sorted(inv_t):
        return None
    cands = {a: [b for b in range(T.n) if inv_t[b] == inv_s[a]] for a in range(S.n)}
    order = sorted(range(S.n), key=lambda a: len(cands[a]))
    phi = [-1] * S.n
    used = [False] * T.n
    st, tt = S.table, T.table

    def consistent(a):
        for c in range(S.n):
            if phi[c] < 0:
                continue
            for x, y in ((a, c), (c, a)):
                p = phi[st[x, y]]
                if p >= 0 and p != tt[phi[x], phi[y]]:
                    return False
        return True

    def extend(pos):
        if pos == len(order):
            return True
        a = order[pos]
        for b in cands[a]:
            if used[b]:
                continue
            phi[a], used[b] = b, True
            if consistent(a) and extend(pos + 1):
                return True
            phi[a], used[b] = -1, False
        return False

    if not extend(0):
        return None
    for x in range(S.n):
        for y in range(S.n):
            if phi[st[x, y]] != tt[phi[x], phi[y]]:
                return None
    return phi
