import json

import pytest

from detlab.cli import bounds_table, main
from detlab.linalg import det_exact
from detlab.matrix import ExactMatrix


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_det(capsys, tmp_path):
    f = write(tmp_path, "m.txt", "2 2\n1/2 1\n3 4\n")
    rc, out, _ = run(capsys, "det", f)
    assert rc == 0
    assert "det=-1" in out.splitlines()
    assert "abs_det=1" in out.splitlines()


def test_det_json_input(capsys, tmp_path):
    f = write(tmp_path, "m.json", json.dumps({"rows": 2, "cols": 2, "data": [[2, 1], [1, 2]]}))
    rc, out, _ = run(capsys, "det", f)
    assert rc == 0 and out.splitlines()[0] == "det=3"


def test_gram_of_graph(capsys, tmp_path):
    f = write(tmp_path, "g.txt", "4\n0 1\n1 2\n2 3\n3 0\n")
    rc, out, _ = run(capsys, "gram", "--graph", f)
    lines = out.splitlines()
    assert rc == 0
    assert "n=4 m=4" in lines
    # even cycle: incidence matrix is singular
    assert "gram_det=0" in lines and "formula=0" in lines


def test_construct_cyclic_round_trip(capsys, tmp_path):
    out_file = tmp_path / "c.txt"
    rc, out, _ = run(capsys, "construct", "cyclic", "--n", "6", "-o", str(out_file))
    assert rc == 0 and "abs_det=4" in out
    M = ExactMatrix.parse(out_file.read_text())
    assert abs(det_exact(M)) == 4


def test_construct_json_to_stdout(capsys):
    rc, out, _ = run(capsys, "construct", "fano", "--n", "7", "--format", "json")
    assert rc == 0
    M = ExactMatrix.from_json(out.splitlines()[0])
    assert abs(det_exact(M)) == 24


def test_construct_bad_parameter_exits_1(capsys):
    rc, _, err = run(capsys, "construct", "cyclic", "--n", "5")
    assert rc == 1 and err.startswith("error:")


def test_missing_option_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["construct", "cyclic"])
    assert exc.value.code == 2


def test_missing_file_exits_2(capsys, tmp_path):
    rc, _, _ = run(capsys, "det", str(tmp_path / "nope.txt"))
    assert rc == 2


def test_cop_check(capsys, tmp_path):
    f = write(tmp_path, "m.txt", "2 3\n1 0 1\n1 1 0\n")
    rc, out, _ = run(capsys, "cop", "check", f, "--k", "1")
    assert rc == 0 and "1-cop=no" in out
    rc, out, _ = run(capsys, "cop", "check", f, "--k", "2")
    assert "2-cop=yes" in out


def test_leafrank(capsys, tmp_path):
    f = write(tmp_path, "c4.txt", "4\n0 1\n1 2\n2 3\n3 0\n")
    rc, out, _ = run(capsys, "leafrank", f)
    assert rc == 0 and json.loads(out) == {"outcome": "infinite"}
    f = write(tmp_path, "k3.json", json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}))
    rc, out, _ = run(capsys, "leafrank", f)
    obj = json.loads(out)
    assert obj["outcome"] == "finite" and obj["k"] == 2


def test_path_extremal_then_matrix(capsys, tmp_path):
    rc, out, _ = run(capsys, "path", "extremal", "--depth", "2")
    assert rc == 0
    tree_text, rest = out.split("# paths\n")
    paths_text = rest.rsplit("abs_det=", 1)[0]
    want = int(out.rsplit("abs_det=", 1)[1])
    t = write(tmp_path, "t.txt", tree_text)
    p = write(tmp_path, "p.txt", paths_text)
    rc, out, _ = run(capsys, "path", "matrix", "--tree", t, "--paths", p, "--reduce")
    assert rc == 0
    assert f"abs_det={want}" in out.splitlines()
    assert any(line.startswith("final_bound=") for line in out.splitlines())


def test_search_csv(capsys):
    rc, out, _ = run(capsys, "search", "--class", "maxones", "--n", "3", "--budget", "6")
    lines = out.splitlines()
    assert rc == 0
    assert lines[0] == "n,class,budget,max_abs_det,nodes,seconds"
    assert lines[1].startswith("3,maxones,6,2,")


def test_search_witness_to_stdout(capsys):
    rc, out, _ = run(capsys, "search", "--class", "maxperrow", "--n", "3", "--budget", "2", "--witness", "-")
    assert rc == 0
    M = ExactMatrix.from_text("\n".join(out.splitlines()[2:]))
    assert abs(det_exact(M)) == 2


def test_bounds_table_rows():
    rows = dict(bounds_table(7, 21))
    assert rows["fano-lower"].value == 24
    assert rows["fano-lower"].value <= rows["hadamard"].value
    assert all(b.value == 1 for _, b in bounds_table(1))


def test_bounds_json(capsys):
    rc, out, _ = run(capsys, "bounds", "--n", "4", "--format", "json")
    names = [r["name"] for r in json.loads(out)]
    assert rc == 0 and "hadamard" in names and "2n-ones" in names


def test_verify_small_suite(capsys):
    rc, out, _ = run(capsys, "verify", "gram-tree", "--max-n", "6", "--samples", "200")
    assert rc == 0 and out.startswith("OK trees=")
    assert "suite=gram-tree" in out
