import pytest

from corpus import band_corpus, prop2
from igband.errors import ParseError, TooManyVariables
from igband.free_band import v_free_band
from igband.semigroup import chain, greens, eggbox, left_zero, rectangular_band, right_zero
from igband.singularity import left_action
from igband.variety import (
    LSNB_IDENTITY,
    RSNB_IDENTITY,
    BandIdentity,
    classify,
    default_table,
    load_varieties,
    parse_varieties,
    satisfies,
)


def test_parse_and_dual():
    ident = BandIdentity.parse("tuv = tvtuv")
    assert ident.variables == ["t", "u", "v"]
    assert str(ident.dual()) == "vut=vutvt"
    assert LSNB_IDENTITY.lhs == RSNB_IDENTITY.lhs[::-1]


@pytest.mark.parametrize("text", ["xy", "x=", "x=y=z", "x1=y"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        BandIdentity.parse(text)


def test_too_many_variables():
    with pytest.raises(TooManyVariables):
        satisfies(left_zero(2), BandIdentity.parse("abcde=a"))


def test_left_zero_satisfies():
    assert satisfies(left_zero(2), BandIdentity.parse("xy=x"))


def test_prop2_fails_both_seminormal():
    B = prop2()
    for ident in (RSNB_IDENTITY, LSNB_IDENTITY):
        res = satisfies(B, ident)
        assert not res
        w = res.witness
        env = {v: w[v] for v in ident.variables}
        assert B.product(env[c] for c in ident.lhs) != B.product(env[c] for c in ident.rhs)


def test_witness_is_lexicographically_least():
    B = prop2()
    ident = BandIdentity.parse("xy=yx")
    w = satisfies(B, ident).witness
    names = ident.variables
    target = tuple(w[v] for v in names)
    for x in range(B.n):
        for y in range(B.n):
            if B.mul(x, y) != B.mul(y, x):
                assert (x, y) == target
                return


def test_one_element_band_satisfies_everything():
    from igband.semigroup import validate

    res = classify(validate([[0]]))
    assert res.satisfied == set(default_table().labels)
    assert res.minimal == {"LZ", "RZ", "SL"}


def test_semilattice_classification():
    T = default_table()
    res = classify(chain(3))
    assert res.satisfied == T.up_set("SL")
    assert res.minimal == {"SL"}


def test_prop2_classification():
    res = classify(prop2())
    assert res.satisfied == {"RB"}
    assert {"LSNB", "RSNB"} <= set(res.failures)


def test_vfree_rsnb_classification():
    res = classify(v_free_band(2, "RSNB").result)
    assert "RSNB" in res.satisfied


@pytest.mark.parametrize("B, expected", [
    (left_zero(2), "LZ"), (right_zero(2), "RZ"), (chain(2), "SL"), (rectangular_band(2, 2), "ReB"),
])
def test_spot_checks(B, expected):
    assert classify(B).minimal == {expected}


def test_table_matches_lattice_fragment():
    T = default_table()
    assert set(T.labels) == {"LZ", "RZ", "SL", "ReB", "LNB", "RNB", "NB", "LRB", "RRB",
                             "LQNB", "RQNB", "LSNB", "RSNB", "RB"}
    for a in T.labels:
        assert T.leq(a, a)
        for b in T.labels:
            if a != b and T.leq(a, b):
                assert not T.leq(b, a)
    assert T.leq("LZ", "RB") and T.leq("NB", "RSNB") and T.leq("NB", "LSNB")
    assert not T.leq("LSNB", "RB") and not T.leq("RSNB", "RB")
    assert not T.leq("LSNB", "RSNB")


@pytest.mark.parametrize("label", sorted(default_table().labels))
def test_free_objects_separate_the_order(label):
    # the 3-generated relatively free band of V lies in W exactly when V <= W
    T = default_table()
    F = v_free_band(3, label).result
    assert classify(F, T).satisfied == T.up_set(label)


def _dual_label(label):
    swap = {"L": "R", "R": "L"}
    if label in ("SL", "ReB", "NB", "RB"):
        return label
    return swap[label[0]] + label[1:]


@pytest.mark.parametrize("label", sorted(default_table().labels))
def test_table_is_self_dual(label):
    T = default_table()
    dual = _dual_label(label)
    F = v_free_band(3, label).result
    for ident in T.entries[dual]:
        assert satisfies(F.opposite(), ident)
    for a in T.labels:
        for b in T.labels:
            assert T.leq(a, b) == T.leq(_dual_label(a), _dual_label(b))


@pytest.mark.parametrize("name", sorted(band_corpus()))
def test_duality_and_monotonicity_over_corpus(name):
    B = band_corpus()[name]
    T = default_table()
    res = classify(B, T)
    for a in res.satisfied:
        assert T.up_set(a) <= res.satisfied
    op = B.opposite()
    for ids in T.entries.values():
        for ident in ids:
            assert bool(satisfies(B, ident)) == bool(satisfies(op, ident.dual()))


@pytest.mark.parametrize("name", sorted(band_corpus()))
def test_rsnb_forces_constant_left_action(name):
    B = band_corpus()[name]
    if not satisfies(B, RSNB_IDENTITY):
        return
    G = greens(B)
    for d in range(G.num_d):
        box = eggbox(B, G, d=d)
        for eps in range(B.n):
            if G.d_leq[d, G.d_class[eps]]:
                assert left_action(B, box, eps, G).is_constant()


def test_parse_varieties_file(tmp_path):
    text = '# comment\nA = [ "xy=x" ]\nB = [\n  "xy=yx",\n  "xyx=x",\n]\norder = [ "A<B" ]\n'
    path = tmp_path / "v.toml"
    path.write_text(text)
    T = load_varieties(path)
    assert T.labels == ["A", "B"] and len(T.entries["B"]) == 2
    assert T.leq("A", "B") and not T.leq("B", "A")
    with pytest.raises(ParseError):
        parse_varieties('A = [ "xy=x" ]\norder = [ "A<Z" ]\n')
    with pytest.raises(ParseError):
        parse_varieties('A = [ "xy=x"\n')
