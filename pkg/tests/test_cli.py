import json
import subprocess
import sys

import pytest

from rootstrata.cli import load_curve, main
from rootstrata.graph import DualGraph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_limit_roots_on_three_node_curve(capsys):
    data = run_json(capsys, "limit-roots", "--curve", "example-4.2", "--r", "3", "--class", "zero")
    assert len(data["strata"]) == 9
    assert data["total_length"]["coeff"] == 1
    first = data["strata"][0]
    assert first["delta"] == [] and first["root_count"]["coeff"] == 9 and first["multiplicity"] == 1


def test_spin_zero_is_the_zero_class(capsys):
    a = run_json(capsys, "limit-roots", "--curve", "fibra", "--r", "3", "--class", "zero")
    b = run_json(capsys, "limit-roots", "--curve", "fibra", "--r", "3", "--class", "spin:l=0")
    keep = ("delta", "weights", "root_count", "multiplicity", "aut_order")
    assert [{k: s[k] for k in keep} for s in a["strata"]] == [{k: s[k] for k in keep} for s in b["strata"]]


def test_spin_with_markings(capsys):
    data = run_json(capsys, "limit-roots", "--curve", "fibra", "--r", "2", "--class", "spin:l=1,m=0:1,m=1:1")
    assert data["curve"]["vertices"][0]["markings"] == {"m0": 1}
    assert data["class"] == [0, 0]
    code, _, err = run(capsys, "limit-roots", "--curve", "fibra", "--r", "4", "--class", "spin:l=1,m=0:1")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["limit-roots", "--curve", "fibra", "--r", "3", "--class", "1,2,3"],
    ["limit-roots", "--curve", "nowhere", "--r", "3"],
    ["limit-roots", "--curve", "fibra", "--r", "x"],
    ["limit-roots", "--curve", "fibra", "--r", "1"],
    ["limit-roots", "--curve", "fibra", "--r", "3", "--class", "spin:m=0:1"],
    ["limit-roots", "--curve", "fibra", "--r", "3", "--class", "spin:l=0,m=9:1"],
    ["balanced", "--curve", "fibra"],
    ["balanced", "--curve", "fibra", "--multidegree", "1,2,3"],
    ["riass", "--k", "2"],
    ["frobnicate"],
])
def test_malformed_input_exits_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert err


def test_inconsistent_data_exits_2(capsys):
    assert run(capsys, "limit-roots", "--curve", "fibra", "--r", "3", "--class", "1,0")[0] == 2
    assert run(capsys, "shat-fiber", "--curve", "fibra", "--r", "4", "--l", "1")[0] == 2
    assert run(capsys, "riass", "--k", "2", "--r", "3", "--res", "1,0")[0] == 2
    assert run(capsys, "balanced", "--curve", "compact-chain:1", "--degree", "0")[0] == 2


def test_size_gate_exits_3(capsys):
    code, _, err = run(capsys, "balanced", "--curve", "compact-chain:1,1,1,1,1,1,1,1,1", "--degree", "0")
    assert code == 3 and "limit" in err


def test_balanced_inventory_and_degree_shift(capsys):
    zero = run_json(capsys, "balanced", "--curve", "fibra", "--degree", "0")
    by_delta = {tuple(m["delta"]): [e["d"] for e in m["multidegrees"]] for m in zero["models"]}
    assert by_delta[()] == [[-1, 1], [0, 0], [1, -1]]
    assert by_delta[(0, 1, 2)] == []
    assert all(e["status"] == "StablyBalanced" for m in zero["models"] for e in m["multidegrees"])
    shifted = run_json(capsys, "balanced", "--curve", "fibra", "--degree", "6")
    for a, b in zip(zero["models"], shifted["models"]):
        n = len(a["delta"])
        w = [3, 3] + [0] * n
        assert [[x + y for x, y in zip(e["d"], w)] for e in a["multidegrees"]] == [e["d"] for e in b["multidegrees"]]


def test_single_multidegree_check_lists_witness(capsys):
    data = run_json(capsys, "balanced", "--curve", "fibra", "--multidegree", "2,-2")
    assert data["status"] == "NotBalanced"
    assert data["witnesses"][0]["Z"] == [0]
    data = run_json(capsys, "balanced", "--curve", "fibra", "--delta", "0,1", "--multidegree=-1,-1,1,1")
    assert data["status"] == "StablyBalanced"


def test_shat_fiber_summary(capsys):
    data = run_json(capsys, "shat-fiber", "--curve", "fibra", "--r", "3", "--l", "0")
    assert data["isolated_points"]["coeff"] == 15
    assert "families of dimension 2: 2*3^(2g^nu)" in data["summary"]
    assert data["dimension"] == {"exact": 2}
    code, out, _ = run(capsys, "shat-fiber", "--curve", "fibra", "--r", "3", "--l", "0", "--format", "table")
    assert code == 0 and "isolated points: 15*3^(2g^nu)" in out


def test_riass_single_and_table(capsys):
    data = run_json(capsys, "riass", "--k", "2", "--r", "3", "--res", "0,0")
    (case,) = data["cases"]
    assert case["dimension"] == 0 and case["exception"] == "ii" and case["agrees"]
    table = run_json(capsys, "riass", "--table")
    assert len(table["cases"]) == sum(r for r in range(2, 8)) * 5
    assert all(c["agrees"] for c in table["cases"])


def test_chi_summary(capsys):
    code, out, _ = run(capsys, "chi", "--curve", "fibra", "--r", "3", "--l", "0", "--format", "table")
    assert code == 0
    assert out.splitlines()[0] == "unbalanced strata present: X_{1,2,3}"
    data = run_json(capsys, "chi", "--curve", "fibra", "--r", "2", "--l", "1")
    assert data["chi_regular"] is True


def test_output_is_deterministic(capsys):
    argv = ["shat-fiber", "--curve", "fibra", "--r", "3", "--l", "0"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    c = run(capsys, *argv, "--parallel")[1]
    assert a == b == c
    # keys are sorted at every level
    assert a == json.dumps(json.loads(a), sort_keys=True, indent=2) + "\n"


def test_curve_echo_round_trips(tmp_path, capsys):
    g = DualGraph.from_edges([0, 2, 1], [(0, 1), (1, 2), (0, 0), (2, 0)], [{"p": 1}, {}, {"q": -1}])
    path = tmp_path / "curve.json"
    path.write_text(json.dumps(g.to_json()))
    data = run_json(capsys, "limit-roots", "--curve", str(path), "--r", "2")
    assert DualGraph.from_json(data["curve"]) == g
    assert load_curve(str(path)) == g
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [{"id": 0}, {"id": 1}], "edges": []}')
    assert run(capsys, "limit-roots", "--curve", str(bad), "--r", "2")[0] == 1


def test_presets():
    assert load_curve("fibra") == load_curve("example-4.2")
    chain = load_curve("compact-chain:1,2,3")
    assert chain.genera == (1, 2, 3) and chain.edges == ((0, 1), (1, 2))


def test_table_formats(capsys):
    for argv in (["limit-roots", "--curve", "fibra", "--r", "3", "--class", "spin:l=1"],
                 ["balanced", "--curve", "fibra", "--degree", "0", "--stable"],
                 ["riass", "--k", "3", "--r", "4", "--res", "2,2"]):
        code, out, _ = run(capsys, *argv, "--format", "table")
        assert code == 0 and out.strip()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rootstrata", "riass", "--k", "4", "--r", "3", "--res", "0,0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["cases"][0]["exception"] == "iv"
