"""Presentations of maximal subgroups of IG(E).

For a regular D-class with base idempotent e_11 the subgroup of IG(E) at
e_11 is generated by one symbol f_ij per group H-class (i, j), subject to

* f_{i,j(i)} = 1 for the anchor column j(i) of each row;
* f_ij = f_il whenever the Schreier words satisfy r_j . e_il = r_l;
* f_ij^-1 f_il = f_kj^-1 f_kl for each singular rectangle (i, k; j, l).

:func:`present_general` builds this for any finite semigroup from an explicit
Schreier system.  :func:`present_band` is the band specialization (every
cell is a group, anchors and Schreier words collapse so that the first row
and column are killed).  :func:`theta_fast_path` handles right (or, by
duality, left) seminormal bands, where the subgroup is free and its rank can
be read off the images of the right actions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import NotSeminormal, SchreierNotFound
from .groups import GroupPresentation, free_reduce, gen_name
from .semigroup import EggBox, FiniteBand, FiniteSemigroup, GreensStructure, eggbox, greens
from .singularity import (
    Kind,
    left_action,
    right_action,
    singular_rectangles,
    singular_squares,
)
from .variety import LSNB_IDENTITY, RSNB_IDENTITY, satisfies

RELATOR_CONVENTION = "f_ij^-1 f_il f_kl^-1 f_kj with i<=k, j<=l (1-based)"


@dataclass
class SchreierSystem:
    r: dict[int, tuple[int, ...]]
    r_inv: dict[int, tuple[int, ...]]
    anchor: dict[int, int]

    def words(self, S: FiniteSemigroup) -> dict:
        def spell(w):
            return ".".join(S.label(x) for x in w) or "(empty)"

        return {
            "r": {j + 1: spell(w) for j, w in sorted(self.r.items())},
            "r_inv": {j + 1: spell(w) for j, w in sorted(self.r_inv.items())},
            "anchor": {i + 1: j + 1 for i, j in sorted(self.anchor.items())},
        }


def _anchors(box: EggBox) -> dict[int, int]:
    m, n = box.shape
    return {i: min(j for j in range(n) if (i, j) in box.K) for i in range(m)}


def canonical_band_schreier(B: FiniteBand, box: EggBox) -> SchreierSystem:
    """r_1 empty, r_j = e_1j, r'_j = e_11 and every anchor in column 1."""
    m, n = box.shape
    r = {0: ()}
    r.update({j: (box.idem[0, j],) for j in range(1, n)})
    r_inv = {j: (box.idem[0, 0],) for j in range(n)}
    return SchreierSystem(r, r_inv, {i: 0 for i in range(m)})


def _letters(S: FiniteSemigroup, box: EggBox) -> list[int]:
    inside = [box.idem[c] for c in sorted(box.K)]
    return inside + [e for e in S.idempotents() if e not in box.row_of]


def find_schreier(S: FiniteSemigroup, box: EggBox, max_len: int | None = None,
                  G: GreensStructure | None = None) -> SchreierSystem:
    """Breadth-first Schreier system over idempotent letters.

    Words grow one letter at a time along right multiplications that stay in
    the R-class of the base, so every r_j is a prefix-extension of an earlier
    r_j' and the prefix condition holds by construction.  Letters from the
    D-class itself are tried first.
    """
    G = G or box.greens or greens(S)
    max_len = S.n if max_len is None else max_len
    letters = _letters(S, box)
    base = box.base
    R1 = G.r_class[base]
    n = box.shape[1]

    rep = {0: base}
    r = {0: ()}
    queue = deque([0])
    while queue:
        j = queue.popleft()
        if len(r[j]) >= max_len:
            continue
        for e in letters:
            y = S.mul(rep[j], e)
            if G.r_class[y] != R1:
                continue
            l = box.col_of[y]
            if l not in r:
                r[l] = r[j] + (e,)
                rep[l] = y
                queue.append(l)
    missing = set(range(n)) - set(r)
    if missing:
        raise SchreierNotFound(max_len, missing)

    r_inv = {}
    for j in range(n):
        start = rep[j]
        words = {start: ()}
        frontier = deque([start])
        while frontier and base not in words:
            y = frontier.popleft()
            if len(words[y]) >= max_len:
                continue
            for e in S.idempotents():
                z = S.mul(y, e)
                if G.r_class[z] == R1 and z not in words:
                    words[z] = words[y] + (e,)
                    frontier.append(z)
        if base not in words:
            raise SchreierNotFound(max_len, {j})
        r_inv[j] = words[base]
    return SchreierSystem(r, r_inv, _anchors(box))


@dataclass
class SchreierReport:
    bijections: bool
    prefix_closed: bool
    anchors: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bijections and self.prefix_closed and self.anchors


def verify_schreier(S: FiniteSemigroup, box: EggBox, sys: SchreierSystem,
                    G: GreensStructure | None = None) -> SchreierReport:
    G = G or box.greens or greens(S)
    m, n = box.shape
    failures = []

    def act(x, w):
        for e in w:
            x = S.mul(x, e)
        return x

    column = {j: [x for x, c in box.col_of.items() if c == j] for j in range(n)}
    bij = True
    for w in list(sys.r.values()) + list(sys.r_inv.values()):
        for e in w:
            if S.mul(e, e) != e:
                bij = False
                failures.append(f"letter {S.label(e)} is not idempotent")
    for j in range(n):
        if j not in sys.r or j not in sys.r_inv:
            bij = False
            failures.append(f"no words for column {j + 1}")
            continue
        for x in column[0]:
            y = act(x, sys.r[j])
            if box.col_of.get(y) != j or G.r_class[y] != G.r_class[x]:
                bij = False
                failures.append(f"{S.label(x)} . r_{j + 1} = {S.label(y)} is not in L_{j + 1} R {S.label(x)}")
            elif act(y, sys.r_inv[j]) != x:
                bij = False
                failures.append(f"r'_{j + 1} does not undo r_{j + 1} at {S.label(x)}")
        for y in column[j]:
            x = act(y, sys.r_inv[j])
            if box.col_of.get(x) != 0 or G.r_class[x] != G.r_class[y]:
                bij = False
                failures.append(f"{S.label(y)} . r'_{j + 1} = {S.label(x)} is not in L_1 R {S.label(y)}")
            elif act(x, sys.r[j]) != y:
                bij = False
                failures.append(f"r_{j + 1} does not undo r'_{j + 1} at {S.label(y)}")
    words = set(sys.r.values())
    prefix = () in words and sys.r.get(0) == ()
    if not prefix:
        failures.append("r_1 is not the empty word")
    for j, w in sys.r.items():
        for p in range(len(w)):
            if w[:p] not in words:
                prefix = False
                failures.append(f"prefix of length {p} of r_{j + 1} is not a Schreier word")
    anchors = True
    for i in range(m):
        j = sys.anchor.get(i)
        if j is None or (i, j) not in box.K:
            anchors = False
            failures.append(f"row {i + 1} has no valid anchor")
    return SchreierReport(bij, prefix, anchors, failures)


def _square_relator(i, k, j, l):
    return ((gen_name(i, j), -1), (gen_name(i, l), 1), (gen_name(k, l), -1), (gen_name(k, j), 1))


def _tag(kind: Kind) -> str:
    return "LR_SQUARE" if kind is Kind.LEFT_RIGHT else "UD_SQUARE"


def present_general(S: FiniteSemigroup, box: EggBox, sys: SchreierSystem,
                    G: GreensStructure | None = None) -> GroupPresentation:
    G = G or box.greens or greens(S)
    m, n = box.shape
    P = GroupPresentation([gen_name(i, j) for i, j in sorted(box.K)])
    excluded = []
    for i in range(m):
        P.add(((gen_name(i, sys.anchor[i]), 1),), "TYPE_I", row=i + 1)
    for i in range(m):
        for l in range(n):
            if (i, l) not in box.K:
                continue
            for j in range(n):
                if sys.r[j] + (box.idem[i, l],) != sys.r[l]:
                    continue
                if (i, j) not in box.K:
                    excluded.append([i + 1, j + 1, l + 1])
                    continue
                P.add(((gen_name(i, j), 1), (gen_name(i, l), -1)), "TYPE_II",
                      cell=[i + 1, j + 1], other=[i + 1, l + 1])
    for rect in singular_squares(S, box, G):
        i, k, j, l = rect.key
        P.add(_square_relator(i, k, j, l), _tag(rect.kind),
              rect=[i + 1, k + 1, j + 1, l + 1], witness=S.label(rect.witness))
    P.metadata = {
        "builder": "general",
        "relator_convention": RELATOR_CONVENTION,
        "excluded_type_ii": excluded,
        "base": S.label(box.base),
    }
    return P


def present_band(B: FiniteBand, box: EggBox, G: GreensStructure | None = None) -> GroupPresentation:
    G = G or box.greens or greens(B)
    m, n = box.shape
    P = GroupPresentation([gen_name(i, j) for i in range(m) for j in range(n)])
    for i in range(m):
        P.add(((gen_name(i, 0), 1),), "TYPE_I", row=i + 1)
    for j in range(1, n):
        P.add(((gen_name(0, j), 1),), "TYPE_II", column=j + 1)
    for rect in singular_rectangles(B, box, G=G):
        i, k, j, l = rect.key
        P.add(_square_relator(i, k, j, l), _tag(rect.kind),
              rect=[i + 1, k + 1, j + 1, l + 1], witness=B.label(rect.witness))
    P.metadata = {
        "builder": "band",
        "relator_convention": RELATOR_CONVENTION,
        "base": B.label(box.base),
    }
    return P


def trivial_reduction(P: GroupPresentation) -> tuple[frozenset, frozenset]:
    """Kill every generator forced trivial by a length-one relator, repeatedly.

    Returns the killed generators and the remaining freely reduced relators;
    two presentations with equal results differ only in how they state the
    triviality of those generators.
    """
    killed: set[str] = set()
    rels = list(P.relators)
    while True:
        rels = [tuple(x for x in r if x[0] not in killed) for r in rels]
        rels = [w for w in (free_reduce(r) for r in rels) if w]
        new = {r[0][0] for r in rels if len(r) == 1}
        if not new:
            return frozenset(killed), frozenset(rels)
        killed |= new


# --- seminormal bands -------------------------------------------------------------------


@dataclass
class ThetaClosure:
    rho: set[tuple[int, int]]
    theta: list[list[int]]
    cross_section: list[int]
    free_rank: int
    generators: list[str]
    dual: bool = False

    @property
    def m(self) -> int:
        return len(self.theta)


def _theta(B: FiniteBand, box: EggBox, G: GreensStructure) -> ThetaClosure:
    m, n = box.shape
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rho = set()
    for eps in range(B.n):
        if not G.d_leq[box.d_class, G.d_class[eps]]:
            continue
        s = left_action(B, box, eps, G)
        assert s.is_constant(), "left action must be constant on a right seminormal band"
        image = right_action(B, box, eps, G).image()
        for a in image:
            for b in image:
                rho.add((a, b))
                parent[find(a)] = find(b)
    classes: dict[int, list[int]] = {}
    for j in range(n):
        classes.setdefault(find(j), []).append(j)
    theta = sorted(classes.values(), key=lambda c: (0 not in c, c[0]))
    cross = [c[0] for c in theta]
    gens = [gen_name(i, j) for i in range(1, m) for j in cross[1:]]
    return ThetaClosure(rho, theta, cross, (m - 1) * (len(theta) - 1), gens)


def theta_fast_path(B: FiniteBand, box: EggBox, G: GreensStructure | None = None) -> ThetaClosure:
    """Free rank (|I|-1)(m-1) of the subgroup at the base of a seminormal band.

    m counts the classes of the equivalence on columns generated by "both
    lie in the image of the right action of one element above D".  A left
    seminormal band is handled through its opposite band; the reported
    generators are then transposed back to this egg-box's coordinates.
    """
    G = G or box.greens or greens(B)
    if satisfies(B, RSNB_IDENTITY):
        return _theta(B, box, G)
    if satisfies(B, LSNB_IDENTITY):
        op = B.opposite()
        op_box = eggbox(op, greens(op), base=box.base)
        th = _theta(op, op_box, op_box.greens)
        th.dual = True
        th.generators = [gen_name(j, i) for i in range(1, op_box.shape[0]) for j in th.cross_section[1:]]
        return th
    raise NotSeminormal("band satisfies neither tuv=tvtuv nor its dual")
