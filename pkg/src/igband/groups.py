"""Finitely presented groups: words, Tietze simplification, abelianization.

A relator is a tuple of ``(generator, exponent)`` letters with exponent
``+1`` or ``-1``.  Generators are plain strings (``f_2_3`` for the
generator at row 2, column 3 of an egg-box).
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field

Letter = tuple[str, int]
Relator = tuple[Letter, ...]

_INDEXED = re.compile(r"f_(\d+)_(\d+)")


def gen_name(i: int, j: int) -> str:
    """Generator symbol for the 0-based cell (i, j), printed 1-based."""
    return f"f_{i + 1}_{j + 1}"


def gen_index(name: str) -> tuple[int, int] | None:
    m = _INDEXED.fullmatch(name)
    return (int(m.group(1)) - 1, int(m.group(2)) - 1) if m else None


def inverse(w) -> Relator:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w) -> Relator:
    out: list[Letter] = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(w) -> Relator:
    w = free_reduce(w)
    lo, hi = 0, len(w)
    while hi - lo > 1 and w[lo][0] == w[hi - 1][0] and w[lo][1] == -w[hi - 1][1]:
        lo += 1
        hi -= 1
    return w[lo:hi]


def cyclic_canonical(w) -> Relator:
    """Least rotation of the word or its inverse; equal for conjugate relators."""
    w = cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for u in (w, inverse(w)):
        cands += [u[i:] + u[:i] for i in range(len(u))]
    return min(cands)


def word_str(w) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w)


def parse_word(text: str) -> Relator:
    letters = []
    for tok in text.split():
        if tok == "1":
            continue
        if tok.endswith("^-1"):
            letters.append((tok[:-3], -1))
        elif tok.endswith("^1"):
            letters.append((tok[:-2], 1))
        else:
            letters.append((tok, 1))
    return tuple(letters)


def is_commutator(w, x: str, y: str) -> bool:
    target = cyclic_canonical(((x, 1), (y, 1), (x, -1), (y, -1)))
    return cyclic_canonical(w) == target


@dataclass
class GroupPresentation:
    generators: list[str]
    relators: list[Relator] = field(default_factory=list)
    provenance: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    dropped: int = 0

    def add(self, word, tag: str = "GIVEN", **data) -> bool:
        """Append a freely reduced relator; empty results are dropped."""
        w = free_reduce(word)
        unknown = {g for g, _ in w} - set(self.generators)
        if unknown:
            raise ValueError(f"relator uses undeclared generators {sorted(unknown)}")
        if not w:
            self.dropped += 1
            return False
        self.relators.append(w)
        self.provenance.append({"tag": tag, **data})
        return True

    @property
    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def relator_set(self) -> set[Relator]:
        return set(self.relators)

    def exponent_matrix(self) -> list[list[int]]:
        col = {g: c for c, g in enumerate(self.generators)}
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for g, e in r:
                row[col[g]] += e
            rows.append(row)
        return rows

    # text format: one "gens:" line, then one "rel:" line per relator
    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines += ["rel: " + word_str(r) for r in self.relators]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GroupPresentation":
        gens, rels = None, []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, _, rest = line.partition(":")
            if head == "gens":
                gens = rest.split()
            elif head == "rel":
                rels.append(parse_word(rest))
            else:
                raise ValueError(f"unexpected line {line!r}")
        if gens is None:
            raise ValueError("missing 'gens:' line")
        P = cls(gens)
        for r in rels:
            P.add(r)
        return P

    def to_json(self) -> dict:
        gens = []
        for g in self.generators:
            idx = gen_index(g)
            gens.append({"name": g, "index": [idx[0] + 1, idx[1] + 1]} if idx else {"name": g})
        return {
            "generators": gens,
            "relators": [[[g, e] for g, e in r] for r in self.relators],
            "provenance": self.provenance,
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data) -> "GroupPresentation":
        if isinstance(data, str):
            data = json.loads(data)
        P = cls([g["name"] for g in data["generators"]], metadata=dict(data.get("metadata", {})))
        provs = data.get("provenance") or [{"tag": "GIVEN"}] * len(data["relators"])
        for r, prov in zip(data["relators"], provs):
            prov = dict(prov)
            P.add(tuple((g, int(e)) for g, e in r), prov.pop("tag", "GIVEN"), **prov)
        return P

    def __eq__(self, other):
        return (
            isinstance(other, GroupPresentation)
            and self.generators == other.generators
            and self.relators == other.relators
            and self.provenance == other.provenance
        )


# --- Tietze simplification ------------------------------------------------------------


class Status(enum.Enum):
    FREE_CERTIFIED = "FREE_CERTIFIED"
    REDUCED = "REDUCED"
    LIMIT_HIT = "LIMIT_HIT"


@dataclass
class SimplifyResult:
    presentation: GroupPresentation
    log: list[str]
    status: Status

    @property
    def rank(self) -> int:
        return len(self.presentation.generators)


def _substitute(w, g: str, value) -> Relator:
    out = []
    inv = inverse(value)
    for h, e in w:
        if h == g:
            out.extend(value if e == 1 else inv)
        else:
            out.append((h, e))
    return free_reduce(out)


def _normalize(rels):
    seen, out = set(), []
    for r in rels:
        r = cyclic_reduce(r)
        if not r:
            continue
        c = cyclic_canonical(r)
        if c not in seen:
            seen.add(c)
            out.append(r)
    out.sort(key=lambda r: (len(r), r))
    return out


def simplify(P: GroupPresentation, max_total_length: int | None = 100_000) -> SimplifyResult:
    """Deterministic Tietze reduction to a fixpoint.

    Moves, in priority order: drop trivial and duplicate relators, kill a
    generator equal to a length-one relator, merge two generators related by
    a length-two relator, eliminate a generator occurring once in a relator.
    When a choice exists the later generator (in declaration order) is the
    one eliminated, so the survivors are the earliest generators.
    """
    gens = list(P.generators)
    order = {g: i for i, g in enumerate(gens)}
    rels = list(P.relators)
    log: list[str] = []
    limit_hit = False

    def eliminate(g, value, rels):
        gens.remove(g)
        return [_substitute(r, g, value) for r in rels]

    while True:
        rels = _normalize(rels)
        single = next((r for r in rels if len(r) == 1), None)
        if single:
            g = single[0][0]
            log.append(f"kill {g}")
            rels = eliminate(g, (), rels)
            continue
        pair = next((r for r in rels if len(r) == 2 and r[0][0] != r[1][0]), None)
        if pair:
            (a, ea), (b, eb) = pair
            keep, drop = (a, b) if order[a] < order[b] else (b, a)
            value = ((keep, -ea * eb),)
            log.append(f"merge {drop} := {word_str(value)}")
            rels = eliminate(drop, value, rels)
            continue
        moved = False
        for idx, r in enumerate(rels):
            counts: dict[str, int] = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            for g in sorted((g for g, c in counts.items() if c == 1), key=order.get, reverse=True):
                pos = next(p for p, (h, _) in enumerate(r) if h == g)
                rot = r[pos:] + r[:pos]
                e, rest = rot[0][1], rot[1:]
                value = inverse(rest) if e == 1 else rest
                new = [_substitute(s, g, value) for t, s in enumerate(rels) if t != idx]
                if max_total_length is not None and sum(map(len, new)) > max_total_length:
                    limit_hit = True
                    continue
                log.append(f"eliminate {g} := {word_str(value)}")
                gens.remove(g)
                rels = new
                moved = True
                break
            if moved:
                break
        if not moved:
            break

    rels = _normalize(rels)
    out = GroupPresentation(gens, metadata=dict(P.metadata))
    for r in rels:
        out.add(r, "SIMPLIFIED")
    if not rels:
        status = Status.FREE_CERTIFIED
    else:
        status = Status.LIMIT_HIT if limit_hit else Status.REDUCED
    return SimplifyResult(out, log, status)


# --- abelianization ---------------------------------------------------------------------


def smith_normal_form(rows) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    A = [[int(v) for v in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, pi, pj = min(rest)
                A[t], A[pi] = A[pi], A[t]
                for row in A:
                    row[t], row[pj] = row[pj], row[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        return f"free_rank={self.free_rank} torsion={list(self.torsion)}"


def abelian_invariants(P: GroupPresentation) -> AbelianInvariants:
    diag = smith_normal_form(P.exponent_matrix()) if P.relators else []
    return AbelianInvariants(len(P.generators) - len(diag), tuple(d for d in diag if d > 1))
