import json
from pathlib import Path

import pytest

from igband.cli import main
from igband.groups import GroupPresentation
from igband.semigroup import parse_cay

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_present_prop2_abelian(capsys):
    code, out, _ = run(capsys, "present", "--builtin", "prop2-fb3", "--dclass", "D0",
                       "--base", "abcdba", "--simplify", "--abelian")
    assert code == 0
    assert out.rstrip().endswith("free_rank=2 torsion=[]")
    assert "gens: f_2_3 f_3_2" in out


def test_present_golden(capsys):
    argv = ["present", "--builtin", "prop2-frb4", "--dclass", "D0", "--simplify", "--abelian"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert first == (GOLDEN / "present_prop2_frb4.txt").read_text()


def test_squares_golden(capsys):
    _, out, _ = run(capsys, "squares", "--builtin", "prop2-fb3", "--dclass", "D0", "--proper", "--diagram")
    assert out == (GOLDEN / "squares_prop2_fb3.txt").read_text()


def test_present_trivial(capsys):
    code, out, _ = run(capsys, "present", "--builtin", "fb:1", "--simplify", "--abelian")
    assert code == 0
    assert "FREE_CERTIFIED" in out and out.rstrip().endswith("free_rank=0 torsion=[]")


def test_squares_proper_count(capsys):
    code, out, _ = run(capsys, "squares", "--builtin", "prop2-fb3", "--dclass", "D0", "--proper")
    assert code == 0
    assert "8 proper singular rectangles" in out
    assert sum(1 for ln in out.splitlines() if ln.startswith("  (")) == 8


def test_squares_json(capsys):
    _, out, _ = run(capsys, "squares", "--builtin", "prop2-frb4", "--dclass", "D0", "--proper",
                    "--actions", "--format", "json")
    data = json.loads(out)
    assert {tuple(r["rect"]) for r in data["rectangles"]} == {
        (1, 2, 1, 2), (1, 2, 3, 4), (3, 4, 1, 2), (3, 4, 3, 4),
        (1, 4, 2, 3), (1, 4, 1, 4), (2, 3, 2, 3), (2, 3, 1, 4)}
    assert data["actions"]["ab"] == {"left": [1, 2, 2, 1], "right": [2, 2, 3, 3]}
    assert json.loads(json.dumps(data)) == data


def test_fast_path(capsys):
    code, out, _ = run(capsys, "present", "--builtin", "vfree:NB:3", "--dclass", "D0", "--fast-path")
    assert code == 0 and "= 4" in out
    code, _, err = run(capsys, "present", "--builtin", "prop2-fb3", "--fast-path")
    assert code == 1 and "NotSeminormal" in err


def test_present_json_round_trip(capsys):
    _, out, _ = run(capsys, "present", "--builtin", "prop2-fb3", "--format", "json", "--simplify", "--abelian")
    data = json.loads(out)
    P = GroupPresentation.from_json(data["presentation"])
    assert P.to_json() == data["presentation"]
    assert data["abelian"] == {"free_rank": 2, "torsion": []}


def test_present_general_on_t3(tmp_path, capsys):
    from igband.semigroup import format_cay, full_transformation_monoid

    path = tmp_path / "t3.cay"
    path.write_text(format_cay(full_transformation_monoid(3)))
    code, out, _ = run(capsys, "present", "--input", str(path), "--dclass", "122", "--abelian")
    assert code == 0 and "Schreier words" in out
    assert out.rstrip().endswith("free_rank=1 torsion=[]")


def test_builtin_tables(tmp_path, capsys):
    code, out, _ = run(capsys, "builtin", "vfree:SL:2")
    assert code == 0 and parse_cay(out).n == 3
    _, out, _ = run(capsys, "builtin", "fb:2")
    assert parse_cay(out).n == 6
    target = tmp_path / "p.cay"
    assert run(capsys, "builtin", "prop2-fb3", "-o", str(target))[0] == 0
    S = parse_cay(target.read_text())
    assert S.n == 20 and S.is_band
    # the written file feeds back into every command
    code, out, _ = run(capsys, "squares", "--input", str(target), "--base", "abcaba", "--proper")
    assert "8 proper singular rectangles" in out


def test_simplify_and_abelian_from_file(tmp_path, capsys):
    pres = tmp_path / "p.txt"
    pres.write_text("gens: a b\nrel: a b a^-1 b^-1\nrel: a a\n")
    code, out, _ = run(capsys, "abelian", "--presentation", str(pres))
    assert code == 0 and out.strip() == "free_rank=1 torsion=[2]"
    code, out, _ = run(capsys, "simplify", "--presentation", str(pres), "--abelian")
    assert code == 0 and out.rstrip().endswith("free_rank=1 torsion=[2]")
    _, out, _ = run(capsys, "present", "--builtin", "prop2-fb3", "--format", "json")
    js = tmp_path / "p.json"
    js.write_text(json.dumps(json.loads(out)["presentation"]))
    code, out, _ = run(capsys, "abelian", "--presentation", str(js))
    assert out.strip() == "free_rank=2 torsion=[]"


def test_greens_and_verify_and_variety(capsys):
    code, out, _ = run(capsys, "greens", "--builtin", "prop2-frb4", "--dclass", "D0")
    assert code == 0 and "D0: 16 elements, 4x4, below D1" in out
    code, out, _ = run(capsys, "verify", "--builtin", "prop2-frb4", "--format", "json")
    assert json.loads(out)["band"] is True
    code, out, _ = run(capsys, "variety", "--builtin", "prop2-fb3", "--format", "json")
    data = json.loads(out)
    assert data["satisfied"] == ["RB"] and {"LSNB", "RSNB"} <= set(data["failures"])


def test_custom_varieties(tmp_path, capsys):
    path = tmp_path / "v.toml"
    path.write_text('Z = [ "xy=yx" ]\norder = []\n')
    code, out, _ = run(capsys, "variety", "--builtin", "fb:2", "--varieties", str(path))
    assert code == 0 and "satisfies none" in out


@pytest.mark.parametrize("argv, code", [
    (["present", "--builtin", "nope"], 1),
    (["present", "--builtin", "fb:9"], 1),
    (["present", "--builtin", "prop2-fb3", "--base", "zzz"], 2),
    (["present", "--builtin", "prop2-fb3", "--dclass", "D7"], 2),
    (["present", "--input", "/nonexistent.cay"], 2),
    (["present", "--builtin", "prop2-fb3", "--base", "ab", "--dclass", "D0"], 1),
])
def test_error_codes(capsys, argv, code):
    assert main(argv) == code
    assert "error:" in capsys.readouterr().err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["present"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["abelian"])
    assert exc.value.code == 2


def test_bad_cay_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.cay"
    path.write_text("2\n0 1\n1 7\n")
    assert main(["verify", "--input", str(path)]) == 1
    path.write_text("2\nfoo\n")
    assert main(["verify", "--input", str(path)]) == 2
