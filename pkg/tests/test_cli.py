import io
import json

import pytest

from imgrowth.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv)
    return code, json.loads(out)


def test_order_json_exact():
    code, out, _ = call("order", "--map", "f1", "--element", "b")
    assert code == 0
    assert json.loads(out) == {"status": "finite", "order": 24}


def test_act_text():
    code, out, _ = call("act", "--map", "f1", "--element", "a", "--word", "1", "--format", "text")
    assert (code, out.strip()) == (0, "3")


def test_trivial_exit_codes():
    assert call("trivial", "--map", "f1", "--element", "acb")[0] == 0
    code, data = call_json("trivial", "--map", "f1", "--element", "b^12")
    assert code == 1 and "witness" in data


def test_inconclusive_exit_code():
    code, data = call_json("free-semigroup", "--map", "f1", "--gens", "ab4,ab12,ab20", "--maxlen", "5",
                           "--level-max", "2")
    assert code == 2 and data["status"] == "inconclusive"


def test_free_semigroup_cli():
    code, data = call_json("free-semigroup", "--map", "f1", "--gens", "ab4,ab12,ab20", "--maxlen", "3")
    assert code == 0 and data["words"] == 39 and data["rechecked"]


def test_usage_errors():
    assert call("bogus")[0] == 64
    assert call("order", "--map", "f1")[0] == 64
    assert call("order", "--map", "f1", "--element", "a", "--level", "-1")[0] == 64


def test_data_and_io_errors(tmp_path):
    assert call("order", "--map", "f1", "--element", "q")[0] == 65
    assert call("order", "--recursion-file", str(tmp_path / "missing"), "--element", "a")[0] == 66
    bad = tmp_path / "bad.rec"
    bad.write_text("a = <a, 1> (1 2)\nb = <a, z> ()\n")
    code, _, err = call("order", "--recursion-file", str(bad), "--element", "a")
    assert code == 65 and "line 2" in err


def test_recursion_file(tmp_path):
    src = tmp_path / "add.rec"
    src.write_text("a = <1, a> (1 2)\n")
    code, data = call_json("order", "--recursion-file", str(src), "--element", "a")
    assert code == 0 and data["status"] == "infinite"


def test_criterion_commands():
    code, data = call_json("check-criterion", "--map", "f1")
    assert code == 0 and data["k_p"] == 8 and data["witnesses"][0] == "a*b^4"
    assert data["witness_certificate"]["exponent"] == 2
    code, data = call_json("check-criterion", "--map", "sierpinski-3")
    assert code == 0 and data["witness_certificate"] == "criterion verdict only"
    code, data = call_json("check-criterion", "--map", "sierpinski-4")
    assert code == 1 and "condition (c)" in data["reason"]


def test_alpha_orbifold_obstruction():
    assert call_json("alpha", "--map", "f1")[1]["alpha"] == {"-1": 3, "1": 24, "inf": 2}
    assert call_json("orbifold", "--map", "f1")[1]["chi"] == "-1/8"
    code, data = call_json("obstruction", "--map", "obstructed-3")
    assert code == 0 and data["lambda"] == "1"


def test_portrait_file(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"vertices": [{"name": "0", "post": True}, {"name": "inf", "post": True}],
                             "edges": [{"from": "0", "to": "0", "deg": 2}, {"from": "inf", "to": "inf", "deg": 2}]}))
    code, data = call_json("orbifold", "--portrait-file", str(p))
    assert code == 0 and data["classification"] == "parabolic"


@pytest.mark.parametrize("argv", [
    ("subdivide", "--map", "f1", "--level", "2"),
    ("flowers", "--map", "f1", "--level", "1"),
    ("edge-report", "--map", "f1", "--level", "2"),
    ("tile-action", "--map", "f1", "--level", "1"),
    ("intertwine", "--map", "f1", "--level", "2"),
    ("census", "--map", "f1", "--level", "3", "--radius", "2"),
    ("schreier", "--map", "f1", "--level", "2"),
    ("verify-identities", "--map", "f1"),
    ("section", "--map", "f1", "--element", "b", "--word", "4"),
    ("mul", "--map", "f1", "a", "b"),
    ("inf-order", "--map", "f1", "--element", "ab4"),
    ("catalog", "list"),
    ("catalog", "show", "f1"),
])
def test_commands_emit_one_json_object(argv):
    code, out, _ = call(*argv)
    assert code == 0
    assert isinstance(json.loads(out), dict)
    assert out.count("\n") == 1


def test_deterministic_output():
    args = ("free-semigroup", "--map", "f1", "--gens", "ab4,ab12", "--maxlen", "4", "--seed", "3")
    assert call(*args)[1] == call(*args)[1]


def test_dot_output():
    code, out, _ = call("schreier", "--map", "f1", "--level", "1", "--format", "dot")
    assert code == 0 and out.startswith("digraph")


def test_edge_not_invariant():
    assert call("edge-report", "--map", "f1", "--edge=-1,1")[0] == 1
