import json
import subprocess
import sys

import pytest

from hurwitz.cli import main
from hurwitz.core import equation_from_json, eval_residual

MARKOFF = '{"kind":"gh","n":3,"a":[1,1,1],"d":3,"k":0}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, [json.loads(line) for line in out.splitlines() if line.startswith("{")], out, err


def test_solve_gh(capsys):
    code, lines, _, _ = run(capsys, "solve", '{"kind":"gh","n":3,"a":[1,1,5],"d":5,"k":0}')
    assert code == 0
    assert [line["x"] for line in lines] == [["1", "2", "1"], ["2", "1", "1"]]
    for line in lines:
        eq = equation_from_json(line["equation"])
        assert eval_residual(eq, [int(v) for v in line["x"]]) == 0


def test_solve_bu(capsys):
    code, lines, _, _ = run(capsys, "solve", '{"kind":"bu","a":1,"b":2,"c":2,"d":2,"e":1}')
    assert code == 0
    assert [line["x"] for line in lines] == [["3", "2", "2"]]


def test_solve_sorted_and_k(capsys):
    code, lines, _, _ = run(capsys, "solve", '{"kind":"gh","n":14,"a":[1,1,1,1,1,1,1,1,1,1,1,1,1,1],"d":1}', "--sorted")
    assert code == 0 and len(lines) == 2
    code, lines, _, err = run(capsys, "solve", '{"kind":"gh","n":3,"a":[1,1,1],"d":4,"k":1}')
    assert code == 0 and "eliminated" in err
    assert lines == [{"equation": {"kind": "gh", "n": 4, "a": [1, 1, 1, 1], "d": 4, "k": 0},
                      "x": ["1", "1", "1", "1"]}]


@pytest.mark.parametrize("argv, code", [
    (["solve", "{bad"], 2),
    (["solve", "[1, 2]"], 2),
    (["solve", '{"kind":"gh","a":[1,1,3],"d":4}'], 1),
    (["solve", '{"kind":"gh","a":[1,2,2],"d":4}'], 1),
    (["reduce", MARKOFF, "1,x,3"], 2),
    (["reduce", '{"kind":"bu","a":1,"b":2,"c":2,"d":2,"e":1}', "3,2,2"], 2),
    (["classify"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 2


def test_reduce(capsys):
    code, lines, _, _ = run(capsys, "reduce", MARKOFF, "1,2,5")
    assert code == 0
    assert lines[0]["fundamental"] == ["1", "1", "1"] and lines[0]["word"] == [3, 2]
    code, lines, _, _ = run(capsys, "reduce", MARKOFF, '{"x":["1","1","1"]}', "--trace")
    assert lines[0]["word"] == [] and len(lines[0]["trace"]) == 1
    code, lines, _, err = run(capsys, "reduce", MARKOFF, "1,2,6")
    assert code == 1 and lines[0]["residual"] == "5" and "residual 5" in err


def test_big_integers_are_strings(capsys):
    big = (1, 2, 5)
    eq = equation_from_json(json.loads(MARKOFF))
    from hurwitz.vieta import apply_word
    x = apply_word(eq, big, [1, 2] * 40)
    code, lines, _, _ = run(capsys, "reduce", MARKOFF, ",".join(map(str, x)), "--trace")
    assert code == 0
    assert lines[0]["trace"][0]["tuple"] == [str(v) for v in x]
    assert max(x) > 2**64


def test_classify(capsys):
    code, lines, _, _ = run(capsys, "classify", "3")
    assert code == 0 and len(lines) == 6
    assert lines[4]["equation"]["a"] == [1, 1, 5]
    assert lines[4]["solutions"] == [["1", "2", "1"], ["2", "1", "1"]]
    code, _, out, _ = run(capsys, "classify", "3", "--pretty")
    assert "a=(1, 1, 5) d=5: (1, 2, 1)  (2, 1, 1)" in out


def test_classify_bu(capsys):
    code, lines, _, _ = run(capsys, "classify", "--bu", "3")
    assert code == 0
    assert sorted((l["equation"]["a"], l["equation"]["b"], l["equation"]["c"]) for l in lines) == [(1, 6, 6), (2, 5, 10)]
    code, lines, _, _ = run(capsys, "bu", "classify", "--e", "2", "--table1")
    diff = lines[-1]["table1_diff"]
    assert diff["missing"] == diff["extra"] == diff["mismatched"] == []


def test_tree(capsys):
    code, lines, _, _ = run(capsys, "tree", MARKOFF, "1,1,1", "--max-height", "10")
    assert code == 0 and len(lines) == 10
    assert lines[0]["parent"] is None
    code, _, out, _ = run(capsys, "tree", MARKOFF, "1,1,1", "--max-height", "10", "--dot")
    assert out.startswith("digraph") and out.count("->") == 9
    assert main(["tree", MARKOFF, "1,2,5", "--max-height", "10"]) == 1


def test_bu_solve_family(capsys):
    code, lines, _, _ = run(capsys, "bu", "solve", '{"kind":"bu","a":1,"b":2,"c":2,"d":2,"e":4}', "--height-cap", "12")
    assert code == 0
    assert lines[0]["family"]["pattern"] == "(2, n, n), n >= 2"
    assert [l["x"] for l in lines[1:]] == [["2", str(n), str(n)] for n in range(2, 6)]


def test_share_round_trip(capsys, tmp_path):
    code, lines, _, err = run(capsys, "share", "deal", "--n", "5", "--t", "3", "--p", "1000003",
                              "--seed", "9", "--out", str(tmp_path))
    assert code == 0 and len(lines) == 5
    files = sorted(str(p) for p in tmp_path.glob("share_*.json"))
    code, lines, _, _ = run(capsys, "share", "combine", *files[:3])
    S = lines[0]["S"]
    code, lines, _, _ = run(capsys, "share", "combine", *files[2:])
    assert lines[0]["S"] == S
    code, lines, _, _ = run(capsys, "share", "combine", *files[:2])
    assert code == 1 and lines[0] == {"ok": False, "missing": [1]}
    code, lines, _, _ = run(capsys, "share", "verify", *files)
    assert code == 0 and lines[0]["passed"]
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["share", "combine", str(bad)]) == 2


def test_selfcheck(capsys):
    code, lines, _, _ = run(capsys, "selfcheck")
    assert code == 0 and all(l["ok"] for l in lines)


def test_output_is_byte_stable():
    cmd = [sys.executable, "-m", "hurwitz", "classify", "--bu", "1"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
