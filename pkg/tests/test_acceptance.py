"""Acceptance criteria, one PASS/FAIL line each.

Every criterion is exact: set equality, integer equality or isomorphism
existence.  Run with ``pytest tests/test_acceptance.py -v`` (the lines are
printed even when output is captured) or directly as a script.
"""

import itertools
import time

import numpy as np
import pytest

from corpus import LEFT_SEMINORMAL_ONLY, SEMINORMAL, band_corpus, prop2, semigroup_corpus
from igband.free_band import Realization, v_free_band
from igband.groups import (
    AbelianInvariants,
    Status,
    abelian_invariants,
    is_commutator,
    simplify,
    smith_normal_form,
)
from igband.presentation import (
    canonical_band_schreier,
    find_schreier,
    present_band,
    present_general,
    theta_fast_path,
    trivial_reduction,
    verify_schreier,
)
from igband.semigroup import eggbox, find_isomorphism, greens, rectangular_band
from igband.singularity import Kind, left_action, right_action, singular_rectangles
from igband.variety import LSNB_IDENTITY, RSNB_IDENTITY, classify, default_table, satisfies

TOLERANCE = "exact"
SEMINORMAL_BUDGET_S = 60.0

SIGMA = {
    "ab": ([1, 2, 2, 1], [2, 2, 3, 3]),
    "aba": ([1, 2, 2, 1], [1, 1, 4, 4]),
    "ba": ([4, 3, 3, 4], [1, 1, 4, 4]),
    "bab": ([4, 3, 3, 4], [2, 2, 3, 3]),
}
RECTANGLES = {
    (1, 2, 1, 2), (1, 2, 3, 4), (3, 4, 1, 2), (3, 4, 3, 4),
    (1, 4, 2, 3), (1, 4, 1, 4), (2, 3, 2, 3), (2, 3, 1, 4),
}


def _report(capsys, number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({TOLERANCE}) {detail}"
    with capsys.disabled():
        print("\n" + line)
    return line


def _prop2_box(r):
    B = prop2(r)
    G = greens(B)
    return B, G, eggbox(B, G, base=B.element("abcdba"))


def sigma_outcome(r):
    B, G, box = _prop2_box(r)
    return {eps: (left_action(B, box, B.element(eps), G).one_based(),
                  right_action(B, box, B.element(eps), G).one_based()) for eps in SIGMA}


def rectangle_outcome(r):
    B, G, box = _prop2_box(r)
    return {tuple(x + 1 for x in rc.key) for rc in singular_rectangles(B, box, proper_only=True, G=G)}


def group_outcome(r):
    B, G, box = _prop2_box(r)
    Q = simplify(present_band(B, box, G)).presentation
    commutator = len(Q.relators) == 1 and len(Q.generators) == 2 and is_commutator(Q.relators[0], *Q.generators)
    return tuple(Q.generators), len(Q.relators), commutator, abelian_invariants(Q)


def test_criterion_1_sigma_tables(capsys):
    got = {r: sigma_outcome(r) for r in Realization}
    want = {eps: (tuple(l), tuple(rr)) for eps, (l, rr) in SIGMA.items()}
    ok = all({e: (tuple(a), tuple(b)) for e, (a, b) in g.items()} == want for g in got.values())
    _report(capsys, 1, ok, "left/right actions of ab, aba, ba, bab on the 4x4 class")
    assert ok


def test_criterion_2_singular_rectangles(capsys):
    got = {r: rectangle_outcome(r) for r in Realization}
    ok = all(g == RECTANGLES for g in got.values())
    _report(capsys, 2, ok, f"{len(got[Realization.FREE_REGULAR_4])} proper rectangles, orientation-free")
    assert ok


def test_criterion_3_prop2_group(capsys):
    gens, nrel, commutator, inv = group_outcome(Realization.FREE_REGULAR_4)
    ok = len(gens) == 2 and nrel == 1 and commutator and inv == AbelianInvariants(2, ())
    _report(capsys, 3, ok, f"gens={list(gens)} relators={nrel} commutator={commutator} {inv}")
    assert ok


def test_criterion_4_realizations_agree(capsys):
    A, B = prop2(Realization.FREE_REGULAR_4), prop2(Realization.FREE_BAND_3)
    iso = find_isomorphism(A, B) is not None
    outcomes = [(sigma_outcome(r), rectangle_outcome(r), group_outcome(r)) for r in Realization]
    ok = iso and outcomes[0] == outcomes[1]
    _report(capsys, 4, ok, f"isomorphic={iso} identical outcomes={outcomes[0] == outcomes[1]}")
    assert ok


def seminormal_suite():
    failures, checked = [], 0
    for label in SEMINORMAL:
        for n in (2, 3):
            B = v_free_band(n, label).result
            G = greens(B)
            in_rsnb = label not in LEFT_SEMINORMAL_ONLY
            assert satisfies(B, RSNB_IDENTITY if in_rsnb else LSNB_IDENTITY)
            for d in range(G.num_d):
                for base in G.d_members(d):
                    checked += 1
                    box = eggbox(B, G, base=base)
                    tag = (label, n, G.d_name(d), B.label(base))
                    if in_rsnb:
                        for rc in singular_rectangles(B, box, proper_only=True, G=G):
                            if any(kind is Kind.LEFT_RIGHT for _, kind in rc.witnesses):
                                failures.append((tag, "proper left-right rectangle"))
                    th = theta_fast_path(B, box, G)
                    m_rows = box.shape[1] if th.dual else box.shape[0]
                    if th.free_rank != (m_rows - 1) * (th.m - 1):
                        failures.append((tag, "rank formula"))
                    res = simplify(present_band(B, box, G))
                    if res.status is not Status.FREE_CERTIFIED or res.rank != th.free_rank:
                        failures.append((tag, f"simplify {res.status.value} rank {res.rank} vs {th.free_rank}"))
                    if abelian_invariants(present_band(B, box, G)) != AbelianInvariants(th.free_rank, ()):
                        failures.append((tag, "abelian invariants"))
    return failures, checked


def test_criterion_5_seminormal_suite(capsys):
    t0 = time.perf_counter()
    failures, checked = seminormal_suite()
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed <= SEMINORMAL_BUDGET_S
    _report(capsys, 5, ok, f"{checked} (band, class, base) cases, {len(failures)} failures, {elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed <= SEMINORMAL_BUDGET_S


def _brute_force_proper(B, box):
    """Proper singular rectangles straight from the definition, no actions."""
    m, n = box.shape
    e = box.idem
    found = set()
    for eps in range(B.n):
        for i, k in itertools.permutations(range(m), 2):
            for j, l in itertools.permutations(range(n), 2):
                a = (B.mul(eps, e[i, j]) == e[i, j] and B.mul(eps, e[k, j]) == e[k, j]
                     and B.mul(e[i, j], eps) == e[i, l] and B.mul(e[i, l], eps) == e[i, l])
                b = (B.mul(eps, e[i, j]) == e[k, j] and B.mul(eps, e[k, j]) == e[k, j]
                     and B.mul(e[i, j], eps) == e[i, j] and B.mul(e[i, l], eps) == e[i, l])
                if a or b:
                    found.add((min(i, k), max(i, k), min(j, l), max(j, l)))
    return found


def test_criterion_6_rectangular_bands(capsys):
    bad = []
    for m, n in itertools.product(range(1, 5), repeat=2):
        B = rectangular_band(m, n)
        G = greens(B)
        box = eggbox(B, G, d=0)
        rank = (m - 1) * (n - 1)
        if _brute_force_proper(B, box) or singular_rectangles(B, box, proper_only=True, G=G):
            bad.append((m, n, "rectangles"))
        P = present_band(B, box, G)
        res = simplify(P)
        if res.status is not Status.FREE_CERTIFIED or res.rank != rank:
            bad.append((m, n, "simplify"))
        if abelian_invariants(P) != AbelianInvariants(rank, ()):
            bad.append((m, n, "abelian"))
    ok = not bad
    _report(capsys, 6, ok, f"16 shapes m,n<=4, failures={bad}")
    assert ok


def test_criterion_7_builder_cross_check(capsys):
    bad, checked = [], 0
    fixtures = dict(band_corpus())
    for label in SEMINORMAL:
        for n in (2, 3):
            fixtures.setdefault(f"vfree:{label}:{n}", v_free_band(n, label).result)
    for name, B in sorted(fixtures.items()):
        G = greens(B)
        for d in range(G.num_d):
            box = eggbox(B, G, d=d)
            checked += 1
            Pb = present_band(B, box, G)
            Pg = present_general(B, box, canonical_band_schreier(B, box), G)
            if trivial_reduction(Pb) != trivial_reduction(Pg):
                bad.append((name, d, "relators"))
            sysm = find_schreier(B, box, G=G)
            if not verify_schreier(B, box, sysm, G).ok:
                bad.append((name, d, "schreier"))
    ok = not bad
    _report(capsys, 7, ok, f"{checked} band D-classes, failures={bad[:3]}")
    assert ok


def test_criterion_8_dichotomy(capsys):
    res = classify(prop2(Realization.FREE_REGULAR_4), default_table())
    fails = {"LSNB", "RSNB"} <= set(res.failures)
    ok = "RB" in res.satisfied and fails
    _report(capsys, 8, ok, f"satisfied={sorted(res.satisfied)} fails LSNB and RSNB={fails}")
    assert ok


def test_criterion_9_property_suites(capsys):
    bad = []
    corpus = semigroup_corpus()
    for name, S in sorted(corpus.items()):
        G = greens(S)
        R = np.equal.outer(G.r_class, G.r_class).astype(int)
        L = np.equal.outer(G.l_class, G.l_class).astype(int)
        D = np.equal.outer(G.d_class, G.d_class)
        if not (((R @ L) > 0) == D).all():
            bad.append((name, "R o L != D"))
        for d in range(G.num_d):
            if not any(S.mul(x, x) == x for x in G.d_members(d)):
                continue
            box = eggbox(S, G, d=d)
            if S.is_band:
                for eps in range(S.n):
                    if G.d_leq[d, G.d_class[eps]]:
                        for t in (left_action(S, box, eps, G), right_action(S, box, eps, G)):
                            if not (t.is_idempotent() and t.image() == t.fixed_points()):
                                bad.append((name, d, "action"))
            if name == "B2^1":
                continue
            sysm = find_schreier(S, box, G=G)
            if not verify_schreier(S, box, sysm, G).ok:
                bad.append((name, d, "schreier"))
            P = present_band(S, box, G) if S.is_band else present_general(S, box, sysm, G)
            Q = simplify(P).presentation
            if abelian_invariants(P) != abelian_invariants(Q):
                bad.append((name, d, "tietze"))
            diag = smith_normal_form(P.exponent_matrix()) if P.relators else []
            if any(b % a for a, b in zip(diag, diag[1:])):
                bad.append((name, d, "snf"))
    ok = not bad
    _report(capsys, 9, ok, f"{len(corpus)} semigroups, failures={bad[:3]}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
