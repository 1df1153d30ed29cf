"""Actions of a band on the egg-box of a D-class, and singular squares.

For a band B, a D-class D coordinatized as e_ij and an element eps with
D_eps >= D, left multiplication moves only the row index and right
multiplication only the column index:

    eps * e_ij = e_{s(i), j}        e_ij * eps = e_{i, t(j)}

``s`` and ``t`` are idempotent transformations of the row and column sets.
A rectangle (i, k; j, l) is singular when some eps makes the square of
idempotents at its corners singular; the two ways this can happen are
"left-right" (rows i, k fixed by s, l = t(j) = t(l)) and "up-down"
(k = s(i) = s(k), columns j, l fixed by t).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .errors import ClassNotAbove, InconsistentAction, InvalidSquare, NotIdempotent
from .semigroup import EggBox, FiniteBand, FiniteSemigroup, GreensStructure, greens


@dataclass(frozen=True)
class Transformation:
    map: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.map)

    def __call__(self, x: int) -> int:
        return self.map[x]

    def image(self) -> list[int]:
        return sorted(set(self.map))

    def fixed_points(self) -> list[int]:
        return [x for x, y in enumerate(self.map) if x == y]

    def is_idempotent(self) -> bool:
        return all(self.map[y] == y for y in self.map)

    def is_constant(self) -> bool:
        return len(set(self.map)) == 1

    def preimage(self, y: int) -> list[int]:
        return [x for x, v in enumerate(self.map) if v == y]

    def kernel_pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x, y in itertools.product(range(self.size), repeat=2)
                if self.map[x] == self.map[y]]

    def one_based(self) -> list[int]:
        return [y + 1 for y in self.map]


def _check_above(box: EggBox, eps: int, G: GreensStructure | None):
    G = G or box.greens
    if not G.d_leq[box.d_class, G.d_class[eps]]:
        raise ClassNotAbove(f"element {eps} does not lie above D-class {box.d_class}")


def left_action(B: FiniteBand, box: EggBox, eps: int, G: GreensStructure | None = None) -> Transformation:
    """The row map s with eps * e_ij = e_{s(i), j}, checked against every column."""
    _check_above(box, eps, G)
    m, n = box.shape
    rows = []
    for i in range(m):
        images = set()
        for j in range(n):
            x = B.mul(eps, box.idem[i, j])
            if box.col_of.get(x) != j:
                raise InconsistentAction(f"eps*e_{i + 1}{j + 1} left column {j + 1}")
            images.add(box.row_of[x])
        if len(images) != 1:
            raise InconsistentAction(f"left action of {eps} on row {i + 1} depends on the column")
        rows.append(images.pop())
    t = Transformation(tuple(rows))
    assert t.is_idempotent(), "action of an idempotent must be idempotent"
    return t


def right_action(B: FiniteBand, box: EggBox, eps: int, G: GreensStructure | None = None) -> Transformation:
    """The column map t with e_ij * eps = e_{i, t(j)}."""
    _check_above(box, eps, G)
    m, n = box.shape
    cols = []
    for j in range(n):
        images = set()
        for i in range(m):
            x = B.mul(box.idem[i, j], eps)
            if box.row_of.get(x) != i:
                raise InconsistentAction(f"e_{i + 1}{j + 1}*eps left row {i + 1}")
            images.add(box.col_of[x])
        if len(images) != 1:
            raise InconsistentAction(f"right action of {eps} on column {j + 1} depends on the row")
        cols.append(images.pop())
    t = Transformation(tuple(cols))
    assert t.is_idempotent(), "action of an idempotent must be idempotent"
    return t


class Kind(enum.Enum):
    LEFT_RIGHT = "LR"
    UP_DOWN = "UD"


@dataclass(frozen=True)
class SingularRectangle:
    i: int
    k: int
    j: int
    l: int
    witness: int
    kind: Kind
    witnesses: tuple = field(default=(), compare=False)

    @property
    def proper(self) -> bool:
        return self.i != self.k and self.j != self.l

    @property
    def key(self) -> tuple[int, int, int, int]:
        """Orientation-free form: the relation it yields is symmetric under
        swapping the two rows and under swapping the two columns."""
        return (min(self.i, self.k), max(self.i, self.k), min(self.j, self.l), max(self.j, self.l))

    def one_based(self) -> tuple[int, int, int, int]:
        return (self.i + 1, self.k + 1, self.j + 1, self.l + 1)

    def to_json(self, S: FiniteSemigroup | None = None) -> dict:
        return {
            "rect": list(self.one_based()),
            "kind": self.kind.value,
            "witness": S.label(self.witness) if S is not None else str(self.witness),
        }


def _rectangles_for(s: Transformation, t: Transformation):
    im_s, im_t = s.image(), t.image()
    for i, k in itertools.product(im_s, repeat=2):
        for l in im_t:
            for j in t.preimage(l):
                yield (i, k, j, l), Kind.LEFT_RIGHT
    for k in im_s:
        for i in s.preimage(k):
            for j, l in itertools.product(im_t, repeat=2):
                yield (i, k, j, l), Kind.UP_DOWN


def singular_rectangles(B: FiniteBand, box: EggBox, proper_only: bool = False,
                        G: GreensStructure | None = None) -> list[SingularRectangle]:
    """All singular rectangles of a band D-class, one per orientation-free key.

    Witnesses range over every eps with D_eps >= D, in increasing order; the
    first witness found for a key is kept (left-right before up-down).
    """
    G = G or box.greens or greens(B)
    found: dict[tuple, list] = {}
    for eps in range(B.n):
        if not G.d_leq[box.d_class, G.d_class[eps]]:
            continue
        s, t = left_action(B, box, eps, G), right_action(B, box, eps, G)
        for rect, kind in _rectangles_for(s, t):
            i, k, j, l = rect
            key = (min(i, k), max(i, k), min(j, l), max(j, l))
            entry = found.setdefault(key, [rect, []])
            if (eps, kind) not in entry[1]:
                entry[1].append((eps, kind))
    out = []
    for key in sorted(found):
        (i, k, j, l), wits = found[key]
        eps, kind = wits[0]
        rect = SingularRectangle(i, k, j, l, eps, kind, tuple(wits))
        if proper_only and not rect.proper:
            continue
        out.append(rect)
    return out


# --- general semigroups ----------------------------------------------------------


class Case(enum.Enum):
    A = "a"
    B = "b"
    NONE = "none"


@dataclass(frozen=True)
class Square:
    e: int
    f: int
    g: int
    h: int

    def check(self, S: FiniteSemigroup, G: GreensStructure):
        for x in (self.e, self.f, self.g, self.h):
            if S.mul(x, x) != x:
                raise InvalidSquare(f"corner {S.label(x)} is not idempotent")
        R, L = G.r_class, G.l_class
        if not (R[self.e] == R[self.f] and R[self.g] == R[self.h]
                and L[self.e] == L[self.g] and L[self.f] == L[self.h]):
            raise InvalidSquare("corners do not form an R/L rectangle")


def singularises(S: FiniteSemigroup, eps: int, sq: Square, G: GreensStructure | None = None) -> Case:
    """Which singularisation case, if any, ``eps`` realizes on ``sq``.

    (a): eps e = e, eps g = g and e = f eps.
    (b): e = eps g, e eps = e and f eps = f.
    """
    if S.mul(eps, eps) != eps:
        raise NotIdempotent(f"{S.label(eps)} is not idempotent")
    sq.check(S, G or greens(S))
    m = S.mul
    e, f, g, h = sq.e, sq.f, sq.g, sq.h
    if m(eps, e) == e and m(eps, g) == g and m(f, eps) == e:
        assert m(eps, f) == f and m(eps, h) == h and m(e, eps) == e
        assert m(g, eps) == g == m(h, eps)
        return Case.A
    if m(eps, g) == e and m(e, eps) == e and m(f, eps) == f:
        assert m(eps, e) == e and m(eps, f) == f == m(eps, h)
        assert m(g, eps) == g and m(h, eps) == h
        return Case.B
    return Case.NONE


def singular_squares(S: FiniteSemigroup, box: EggBox, G: GreensStructure | None = None,
                     proper_only: bool = False) -> list[SingularRectangle]:
    """Singular rectangles of any regular D-class, found by brute force over
    all idempotents and all rectangles whose four corners are group cells."""
    G = G or box.greens or greens(S)
    E = S.idempotents()
    m, n = box.shape
    found: dict[tuple, list] = {}
    for i, k in itertools.combinations_with_replacement(range(m), 2):
        for j, l in itertools.combinations_with_replacement(range(n), 2):
            if proper_only and (i == k or j == l):
                continue
            if not all(c in box.K for c in ((i, j), (i, l), (k, j), (k, l))):
                continue
            for rect in {(i, k, j, l), (k, i, j, l), (i, k, l, j), (k, i, l, j)}:
                a, b, c, d = rect
                sq = Square(box.idem[a, c], box.idem[a, d], box.idem[b, c], box.idem[b, d])
                for eps in E:
                    case = singularises(S, eps, sq, G)
                    if case is not Case.NONE:
                        kind = Kind.LEFT_RIGHT if case is Case.A else Kind.UP_DOWN
                        found.setdefault((i, k, j, l), []).append((eps, kind, rect))
    out = []
    for key in sorted(found):
        wits = sorted(found[key], key=lambda w: (w[0], w[1] is Kind.UP_DOWN, w[2]))
        eps, kind, rect = wits[0]
        out.append(SingularRectangle(*rect, eps, kind, tuple((w, k) for w, k, _ in wits)))
    return out
