"""Free bands, their finite subbands, and relatively free bands.

Equality in the free band is decided by the Green-Rees invariants: two words
are equal iff they have the same content, equal (recursively) longest
prefixes missing one letter, the same letter completing that prefix, and
dually on the right.  :func:`fb_canonical` packages those invariants as a
nested key.
"""

from __future__ import annotations

import enum
import string
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapExceeded, EmptyWord, ParseError
from .semigroup import FiniteBand, validate
from .variety import BandIdentity, evaluate_sides, identities_for

ALPHABET = string.ascii_lowercase
FB_ALPHABET_CAP = 4
QUOTIENT_GENERATOR_CAP = 3
ELEMENT_CAP = 10**6


class CanonicalKey(NamedTuple):
    content: int  # bitmask of letters
    prefix: "CanonicalKey | None"
    prefix_letter: int
    suffix: "CanonicalKey | None"
    suffix_letter: int


def as_word(w) -> tuple[int, ...]:
    if isinstance(w, str):
        if not w:
            raise EmptyWord("empty word")
        if not all(c in ALPHABET for c in w):
            raise ParseError(f"words use lowercase letters, got {w!r}")
        return tuple(ALPHABET.index(c) for c in w)
    w = tuple(int(a) for a in w)
    if not w:
        raise EmptyWord("empty word")
    return w


def word_str(w: Sequence[int]) -> str:
    return "".join(ALPHABET[a] for a in w)


def content(w: Sequence[int]) -> int:
    m = 0
    for a in w:
        m |= 1 << a
    return m


def _split(w, total):
    """Longest prefix whose content misses one letter, plus the next letter."""
    seen, count = 0, 0
    for pos, a in enumerate(w):
        bit = 1 << a
        if not seen & bit:
            count += 1
            if count == total:
                return w[:pos], a
            seen |= bit
    raise AssertionError("unreachable")


@lru_cache(maxsize=1 << 18)
def _key(w: tuple[int, ...]) -> CanonicalKey:
    c = content(w)
    total = bin(c).count("1")
    if total == 1:
        return CanonicalKey(c, None, w[0], None, w[0])
    p, a = _split(w, total)
    s, b = _split(w[::-1], total)
    return CanonicalKey(c, _key(p), a, _key(s[::-1]), b)


def fb_canonical(w) -> CanonicalKey:
    return _key(as_word(w))


def fb_equal(u, v) -> bool:
    return fb_canonical(u) == fb_canonical(v)


def fb_short_word(key: CanonicalKey) -> tuple[int, ...]:
    """A short word for ``key``: rebuild from the invariants, fusing overlaps."""
    if key.prefix is None:
        return (key.prefix_letter,)
    left = fb_short_word(key.prefix) + (key.prefix_letter,)
    right = (key.suffix_letter,) + fb_short_word(key.suffix)
    for t in range(min(len(left), len(right)), 0, -1):
        if left[-t:] == right[:t]:
            w = left + right[t:]
            if _key(w) == key:
                return w
    return left + right


def _shortlex(w):
    return (len(w), w)


# --- closures ---------------------------------------------------------------------


def _closure(gens: list[tuple[int, ...]], key, cap: int):
    """Breadth-first right-multiplication closure of ``gens`` under ``key``.

    Returns representatives in discovery order keyed by their canonical key.
    """
    reps: dict = {}
    queue = deque()
    for g in gens:
        k = key(g)
        if k not in reps:
            reps[k] = g
            queue.append(k)
    while queue:
        k = queue.popleft()
        w = reps[k]
        for g in gens:
            prod = w + g
            pk = key(prod)
            if pk not in reps:
                if len(reps) >= cap:
                    raise CapExceeded(f"closure exceeds {cap} elements")
                reps[pk] = prod
                queue.append(pk)
    return reps


def fb_elements(k: int, cap: int = ELEMENT_CAP) -> dict[CanonicalKey, tuple[int, ...]]:
    """All elements of the free band on ``k`` letters with shortlex-least words."""
    if not 1 <= k <= FB_ALPHABET_CAP:
        raise CapExceeded(f"alphabet size must be in 1..{FB_ALPHABET_CAP}, got {k}")
    return _closure([(a,) for a in range(k)], _key, cap)


def band_from_words(words, key=_key, labels=None) -> FiniteBand:
    """Band on the given (pairwise distinct) elements, which must be closed."""
    words = [as_word(w) for w in words]
    keys = [key(w) for w in words]
    index = {k: i for i, k in enumerate(keys)}
    if len(index) != len(keys):
        raise ValueError("words are not pairwise distinct")
    table = []
    for u in words:
        row = []
        for v in words:
            k = key(u + v)
            if k not in index:
                raise ValueError(f"{word_str(u)}*{word_str(v)} leaves the set")
            row.append(index[k])
        table.append(row)
    if labels is None:
        labels = [word_str(w) for w in words]
    return validate(table, labels)


def subband_closure(words, cap: int = ELEMENT_CAP) -> FiniteBand:
    gens = [as_word(w) for w in words]
    if not gens:
        raise EmptyWord("need at least one generating word")
    reps = _closure(gens, _key, cap)
    inputs = {_key(g): g for g in gens}
    labelled = []
    for k, w in reps.items():
        cands = [fb_short_word(k), w] + ([inputs[k]] if k in inputs else [])
        labelled.append(min(cands, key=_shortlex))
    labelled.sort(key=_shortlex)
    return band_from_words(labelled)


@lru_cache(maxsize=None)
def fb_band(k: int) -> FiniteBand:
    """The free band on ``k`` letters, elements in shortlex order."""
    reps = sorted(fb_elements(k).values(), key=_shortlex)
    return band_from_words(reps)


# --- the 20-element band ---------------------------------------------------------------


class Realization(enum.Enum):
    FREE_REGULAR_4 = "prop2-frb4"
    FREE_BAND_3 = "prop2-fb3"


# Row and column names of the 4x4 class as initial / final parts of its words.
PROP2_ROWS = ("abcd", "abdc", "badc", "bacd")
PROP2_COLS = ("cdba", "cdab", "dcab", "dcba")
PROP2_TOP = ("ab", "aba", "ba", "bab")

# In FB_3 the initial part u and final part v of u c v take these values.
_FB3_ROWS = {"abcd": "ab", "abdc": "aba", "badc": "ba", "bacd": "bab"}
_FB3_COLS = {"cdba": "aba", "cdab": "ab", "dcab": "bab", "dcba": "ba"}


def _occurrence_orders(w):
    first = tuple(dict.fromkeys(w))
    last = tuple(dict.fromkeys(reversed(w)))[::-1]
    return first, last


def regular_key(w):
    """Equality key in the free regular band.

    Regular bands form the join of left regular and right regular bands, so
    two words agree there iff their first-occurrence orders agree and their
    last-occurrence orders agree.
    """
    return _occurrence_orders(as_word(w))


def _frb4_word(row: str, col: str) -> str:
    u1, first = row[:2], row[2:]
    last, u2 = col[:2], col[2:]
    middle = {("cd", "cd"): "cd", ("cd", "dc"): "cdc", ("dc", "dc"): "dc", ("dc", "cd"): "dcd"}
    return u1 + middle[first, last] + u2


def prop2_words(realization: Realization) -> list[str]:
    words = list(PROP2_TOP)
    for row in PROP2_ROWS:
        for col in PROP2_COLS:
            if realization is Realization.FREE_REGULAR_4:
                words.append(_frb4_word(row, col))
            else:
                words.append(_FB3_ROWS[row] + "c" + _FB3_COLS[col])
    return words


def build_prop2_band(realization: Realization = Realization.FREE_REGULAR_4) -> FiniteBand:
    """The 20-element regular band with a 2x2 class above a 4x4 class.

    Elements are ordered: the top class (ab, aba, ba, bab), then the bottom
    class row by row in the order of :data:`PROP2_ROWS` / :data:`PROP2_COLS`,
    so the egg-box at ``abcdba`` numbers its rows and columns in that order.
    Both realizations accept the free regular band
    words (``abcdba`` etc.) as aliases.
    """
    realization = Realization(realization)
    words = prop2_words(realization)
    key = regular_key if realization is Realization.FREE_REGULAR_4 else _key
    band = band_from_words(words, key=key)
    regular_words = prop2_words(Realization.FREE_REGULAR_4)
    band.aliases.update({name: i for i, name in enumerate(regular_words)})
    return band


# --- relatively free bands ------------------------------------------------------


@dataclass
class QuotientBand:
    base: FiniteBand  # FB_n
    base_keys: list[CanonicalKey]
    classes: np.ndarray  # class id per base element
    result: FiniteBand

    def image(self, x: int) -> int:
        return int(self.classes[x])


def congruence_closure(table: np.ndarray, edges_a, edges_b) -> np.ndarray:
    """Least congruence containing the given pairs, as class ids by least element."""
    n = table.shape[0]
    ea = np.asarray(edges_a, dtype=np.int64)
    eb = np.asarray(edges_b, dtype=np.int64)
    while True:
        graph = coo_matrix((np.ones(len(ea)), (ea, eb)), shape=(n, n))
        m, comp = connected_components(graph, directed=False)
        rep = np.full(m, n)
        np.minimum.at(rep, comp, np.arange(n))
        r = rep[comp]
        # x ~ rep(x) must imply xy ~ rep(x)y and yx ~ y rep(x)
        left_bad = comp[table] != comp[table[r, :]]
        right_bad = comp[table] != comp[table[:, r]]
        if not (left_bad.any() or right_bad.any()):
            break
        ea = np.concatenate([ea, table[left_bad], table[right_bad]])
        eb = np.concatenate([eb, table[r, :][left_bad], table[:, r][right_bad]])
    renumber = np.empty(m, dtype=np.int64)
    renumber[np.argsort(rep)] = np.arange(m)
    return renumber[comp]


def quotient(band: FiniteBand, classes: np.ndarray) -> FiniteBand:
    m = int(classes.max()) + 1
    reps = np.full(m, band.n)
    np.minimum.at(reps, classes, np.arange(band.n))
    table = classes[band.table[np.ix_(reps, reps)]]
    labels = [band.label(int(x)) for x in reps]
    return validate(table.tolist(), labels)


def v_free_band(n: int, ids) -> QuotientBand:
    """Relatively free band on ``n`` generators of the variety defined by ``ids``.

    ``ids`` is a variety label from the default table or an iterable of
    :class:`BandIdentity`.
    """
    if isinstance(ids, str):
        ids = identities_for(ids)
    return _v_free_band(n, tuple(ids))


@lru_cache(maxsize=64)
def _v_free_band(n: int, ids: tuple[BandIdentity, ...]) -> QuotientBand:
    if not 1 <= n <= QUOTIENT_GENERATOR_CAP:
        raise CapExceeded(f"generator count must be in 1..{QUOTIENT_GENERATOR_CAP}")
    base = fb_band(n)
    ea, eb = [np.zeros(0, dtype=np.int64)], [np.zeros(0, dtype=np.int64)]
    for ident in ids:
        for _, lv, rv in evaluate_sides(base.table, ident):
            bad = lv != rv
            codes = np.unique(lv[bad] * base.n + rv[bad])
            ea.append(codes // base.n)
            eb.append(codes % base.n)
    classes = congruence_closure(base.table, np.concatenate(ea), np.concatenate(eb))
    keys = [fb_canonical(w) for w in base.labels]
    return QuotientBand(base, keys, classes, quotient(base, classes))
