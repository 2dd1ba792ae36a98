import json

import pytest

from smithcomb.cli import main
from smithcomb.sandpile import MultiGraph


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture
def mat(tmp_path):
    def write(text, name="m.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_snf_text_and_json(capsys, mat):
    f = mat("2 2\n2 4\n6 8\n")
    code, out, _ = run(capsys, "snf", "--file", f)
    assert code == 0 and out.split() == ["2", "4"]
    code, out, _ = run(capsys, "snf", "--file", f, "--json", "--transforms")
    data = json.loads(out)
    assert data["diagonal"] == ["2", "4"] and "P" in data


def test_snf_over_qx(capsys, mat):
    f = mat("2 2\nx 0\n0 x^2-x\n")
    code, out, _ = run(capsys, "snf", "--file", f, "--ring", "q[x]")
    assert code == 0
    assert out.strip() == "x x^2 - x"


def test_counterexample_refutation(capsys, mat):
    f = mat("2 2\n2 0\n0 x\n")
    code, out, _ = run(capsys, "minors", "--file", f, "--ring", "z[x]", "--candidate", "1,2*x", "--at", "2", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["certified"] is False
    assert data["candidate_check"]["refuted"] is True
    assert data["candidate_check"]["specialized"] == ["2", "2"]
    assert data["candidate_check"]["candidate"] == ["1", "4"]


def test_cokernel(capsys, mat):
    code, out, _ = run(capsys, "cokernel", "--file", mat("2 2\n2 0\n0 3\n"))
    assert code == 0 and out.strip() == "Z/6"


def test_sandpile_commands(capsys, mat):
    g = mat(MultiGraph.complete(4).to_text(0), "k4.txt")
    assert run(capsys, "sandpile", "group", "--graph", g)[1].strip() == "4 4"
    assert run(capsys, "sandpile", "trees", "--complete", "5")[1].strip() == "125"
    code, out, _ = run(capsys, "sandpile", "dynamic", "--complete", "4")
    assert code == 0 and "algebraic: 4 4" in out
    code, out, _ = run(capsys, "sandpile", "stabilize", "--complete", "3", "--sink", "0", "--config", "3,0", "--json")
    assert json.loads(out)["stable"] == [0, 1] or code == 0
    code, out, _ = run(capsys, "sandpile", "recurrent", "--complete", "3", "--sink", "0", "--config", "1 1")
    assert out.strip() == "recurrent"


def test_symfunc_commands(capsys):
    code, out, _ = run(capsys, "symfunc", "psi", "--n", "6")
    assert code == 0 and "matches" in out
    code, out, _ = run(capsys, "symfunc", "binomial", "--a", "2", "--n", "4")
    assert out.strip() == "1 2 2 2"


def test_jt_command(capsys):
    code, out, _ = run(capsys, "jt", "--shape", "7,5,5,2")
    assert code == 0
    assert "13716864000" in out
    code, out, _ = run(capsys, "jt", "--shape", "2,1", "--q", "--json")
    assert code == 0 and json.loads(out)["ok"]


def test_grid_command(capsys):
    code, out, _ = run(capsys, "grid", "--shape", "3,2", "--letters")
    assert code == 0 and "det M(1,1) = a*b*c*d*e^2" in out.replace(" ", "").replace("detM(1,1)=", "det M(1,1) = ")
    code, out, _ = run(capsys, "grid", "--shape", "3,2", "--spec", "q", "--json")
    assert json.loads(out)["det"] == "q^6"


def test_varchenko_commands(capsys, mat):
    code, out, _ = run(capsys, "varchenko", "--fig3", "--check", "gz")
    assert code == 0 and out.startswith("6 regions")
    code, out, _ = run(capsys, "varchenko", "--fig3", "--check", "dh", "--json")
    data = json.loads(out)
    assert data["N1"] == data["N2"] == data["c"] == [1, 3, 2]
    f = mat("2\n1 0 0 x\n0 1 0 y\n1 1 0 z\n", "conc.txt")
    code, _, err = run(capsys, "varchenko", "--file", f, "--check", "gz")
    assert code == 2 and "wrong codimension" in err


def test_braid_and_jm(capsys):
    code, out, _ = run(capsys, "braid", "--n", "3", "--check", "zagier")
    assert code == 0
    code, out, _ = run(capsys, "braid", "--n", "4", "--check", "isotypic")
    assert code == 1 and "MISMATCH" in out
    code, out, _ = run(capsys, "jm", "--shape", "5,1", "--k", "5", "--json")
    data = json.loads(out)
    assert code == 0 and data["computed"] == [1, 1, 3, 3, 12]
    code, out, _ = run(capsys, "jm", "--shape", "3,1,1", "--k", "3")
    assert code == 1


def test_random_command(capsys):
    argv = ["random", "--m", "2", "--n", "2", "--samples", "20000", "--seed", "3", "--json"]
    code, out, _ = run(capsys, *argv)
    first = json.loads(out)
    assert code == 0 and len(first["events"]) == 5
    _, out2, _ = run(capsys, *argv)
    assert json.loads(out2) == first


def test_usage_errors(capsys, mat, tmp_path):
    code, _, err = run(capsys, "snf", "--file", str(tmp_path / "missing.txt"))
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "jt", "--shape", "2,1,1", "--t", "2")
    assert code == 2
    code, _, err = run(capsys, "snf", "--file", mat("2 2\n1 2\n"))
    assert code == 2


def test_out_file(capsys, mat, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "snf", "--file", mat("1 1\n5\n"), "--json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["diagonal"] == ["5"]
