"""Band identities, exhaustive satisfaction checks and variety classification."""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError, TooManyVariables

MAX_VARIABLES = 4
SUBSTITUTION_CAP = 10**8


@dataclass(frozen=True)
class BandIdentity:
    lhs: str
    rhs: str
    name: str = ""

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise ParseError("identity sides must be non-empty")

    @classmethod
    def parse(cls, text: str, name: str = "") -> "BandIdentity":
        try:
            lhs, rhs = (s.strip() for s in text.split("="))
        except ValueError:
            raise ParseError(f"identity must look like 'lhs=rhs': {text!r}") from None
        if not (lhs.isalpha() and rhs.isalpha()):
            raise ParseError(f"identity sides must be words over letters: {text!r}")
        return cls(lhs, rhs, name or text)

    @property
    def variables(self) -> list[str]:
        return sorted(set(self.lhs) | set(self.rhs))

    def dual(self) -> "BandIdentity":
        return BandIdentity(self.lhs[::-1], self.rhs[::-1], f"dual({self.name})")

    def __str__(self):
        return f"{self.lhs}={self.rhs}"


RSNB_IDENTITY = BandIdentity.parse("tuv=tvtuv", "RSNB")
LSNB_IDENTITY = RSNB_IDENTITY.dual()


def _evaluate(table: np.ndarray, word, grids, shape):
    acc = grids[word[0]]
    for v in word[1:]:
        acc = table[acc, grids[v]]
    return np.broadcast_to(acc, shape)


def evaluate_sides(table: np.ndarray, identity: BandIdentity, chunk: int | None = None):
    """Yield (substitution_block, lhs_values, rhs_values) over all substitutions.

    Substitutions run in lexicographic order of the alphabetically sorted
    variables; each block fixes a range of values of the first variable.
    """
    names = identity.variables
    k = len(names)
    if k > MAX_VARIABLES:
        raise TooManyVariables(f"{identity} uses {k} variables (max {MAX_VARIABLES})")
    n = table.shape[0]
    if n**k > SUBSTITUTION_CAP:
        raise TooManyVariables(f"{n}^{k} substitutions exceed the cap {SUBSTITUTION_CAP}")
    pos = {v: i for i, v in enumerate(names)}
    lhs = [pos[c] for c in identity.lhs]
    rhs = [pos[c] for c in identity.rhs]
    if chunk is None:
        chunk = max(1, 4_000_000 // max(1, n ** (k - 1)))
    for start in range(0, n, chunk):
        first = np.arange(start, min(n, start + chunk))
        shape = (len(first),) + (n,) * (k - 1)
        grids = []
        for i in range(k):
            view = [1] * k
            view[i] = -1
            grids.append((first if i == 0 else np.arange(n)).reshape(view))
        yield start, _evaluate(table, lhs, grids, shape), _evaluate(table, rhs, grids, shape)


@dataclass
class Satisfaction:
    holds: bool
    witness: dict | None = None

    def __bool__(self):
        return self.holds


def satisfies(B, identity: BandIdentity) -> Satisfaction:
    """Exhaustive check; on failure the witness is the least bad substitution."""
    names = identity.variables
    for start, lv, rv in evaluate_sides(B.table, identity):
        bad = lv != rv
        if bad.any():
            idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
            values = [int(idx[0]) + start] + [int(v) for v in idx[1:]]
            return Satisfaction(False, dict(zip(names, values)))
    return Satisfaction(True)


# --- variety table ---------------------------------------------------------------


@dataclass
class VarietyTable:
    entries: dict[str, list[BandIdentity]]
    edges: list[tuple[str, str]]
    source: str = "builtin"
    _leq: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        labels = list(self.entries)
        for a, b in self.edges:
            if a not in self.entries or b not in self.entries:
                raise ParseError(f"order edge {a}<{b} mentions an unknown label")
        leq = {(a, a) for a in labels} | set(self.edges)
        for mid in labels:
            for a in labels:
                if (a, mid) in leq:
                    for b in labels:
                        if (mid, b) in leq:
                            leq.add((a, b))
        self._leq = leq

    @property
    def labels(self) -> list[str]:
        return list(self.entries)

    def leq(self, a: str, b: str) -> bool:
        """True when variety ``a`` is contained in variety ``b``."""
        return (a, b) in self._leq

    def up_set(self, a: str) -> set[str]:
        return {b for b in self.entries if self.leq(a, b)}


def parse_varieties(text: str, source: str = "<text>") -> VarietyTable:
    assignments, buf = [], ""
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        buf = f"{buf} {line}" if buf else line
        if buf.count("[") == buf.count("]"):
            assignments.append(buf)
            buf = ""
    if buf:
        raise ParseError(f"unterminated list in {source}: {buf!r}")
    entries, edges = {}, []
    for a in assignments:
        m = re.fullmatch(r"(\w+)\s*=\s*(\[.*\])", a)
        if not m:
            raise ParseError(f"cannot parse {a!r} in {source}")
        key, value = m.group(1), ast.literal_eval(m.group(2))
        if key == "order":
            for item in value:
                lo, _, hi = item.partition("<")
                edges.append((lo.strip(), hi.strip()))
        else:
            entries[key] = [BandIdentity.parse(s, name=f"{key}: {s}") for s in value]
    return VarietyTable(entries, edges, source)


def load_varieties(path=None) -> VarietyTable:
    if path is None:
        text = resources.files("igband").joinpath("data/varieties.toml").read_text()
        return parse_varieties(text, "builtin")
    return parse_varieties(Path(path).read_text(), str(path))


_DEFAULT = None


def default_table() -> VarietyTable:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_varieties()
    return _DEFAULT


def identities_for(label: str, table: VarietyTable | None = None) -> tuple[BandIdentity, ...]:
    table = table or default_table()
    return tuple(table.entries[label])


@dataclass
class Classification:
    satisfied: set[str]
    minimal: set[str]
    failures: dict[str, tuple[BandIdentity, dict]]

    def as_dict(self) -> dict:
        return {
            "satisfied": sorted(self.satisfied),
            "minimal": sorted(self.minimal),
            "failures": {
                k: {"identity": str(ident), "witness": w}
                for k, (ident, w) in sorted(self.failures.items())
            },
        }


def classify(B, table: VarietyTable | None = None) -> Classification:
    table = table or default_table()
    satisfied, failures = set(), {}
    for label, ids in table.entries.items():
        for ident in ids:
            res = satisfies(B, ident)
            if not res:
                failures[label] = (ident, res.witness)
                break
        else:
            satisfied.add(label)
    minimal = {
        a for a in satisfied
        if not any(b != a and table.leq(b, a) for b in satisfied)
    }
    return Classification(satisfied, minimal, failures)
