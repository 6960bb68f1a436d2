import json

import pytest

from repfam import cli
from repfam.errors import UsageError

GRAPH = "p 3 3\ne 1 2 5\ne 2 3 1\ne 1 3 1\nt 1\nt 2\n"
CIRCUIT = ("var x1 weight=5\nvar x2 weight=1\nvar x3 weight=1\n"
           "add a x1 x2\nadd b x1 x3\nmul m a b\noutput m\n")


@pytest.fixture
def files(tmp_path):
    (tmp_path / "g.txt").write_text(GRAPH)
    (tmp_path / "c.txt").write_text(CIRCUIT)
    (tmp_path / "r.json").write_text(json.dumps({
        "matroid": {"kind": "graphic", "vertices": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]},
        "family": [[1, [0]], [2, [1]], [3, [3]], [1, [5]]],
        "left": [[1, [0]], [2, [1]], [3, [3]], [1, [5]]],
        "right": [[0, [2]], [4, [4]]]}))
    return tmp_path


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_parse_args_kpath():
    cfg = cli.parse_args(["kpath", "--graph", "g.txt", "--k", "4"])
    assert cfg.subcommand == "kpath" and cfg.k == 4 and cfg.seed == 0


def test_missing_k():
    with pytest.raises(UsageError):
        cli.parse_args(["kpath", "--graph", "g.txt"])
    with pytest.raises(UsageError):
        cli.parse_args(["kpath", "--graph", "g.txt", "--k", "2", "--bogus"])


def test_steiner_triangle(files, capsys):
    code, out = run(capsys, ["steiner", "--graph", str(files / "g.txt"), "--json"])
    doc = cli.parse_result(out)
    assert code == 0 and doc["problem"] == "steiner" and doc["weight"] == 2
    assert doc["stats"]["seed"] == 0
    assert list(doc) == ["problem", "found", "weight", "witness", "stats"]


def test_infeasible_exit_code(files, capsys):
    code, out = run(capsys, ["kpath", "--graph", str(files / "g.txt"), "--k", "5", "--json"])
    assert code == 1 and cli.parse_result(out)["found"] is False


def test_input_error_exit_code(files, capsys):
    assert cli.main(["kpath", "--graph", str(files / "missing.txt"), "--k", "2"]) == 2
    (files / "bad.txt").write_text("e 1 2\n")
    assert cli.main(["fvs", "--graph", str(files / "bad.txt")]) == 2


def test_budget_exit_code(files, monkeypatch):
    monkeypatch.setenv("REPFAM_BUDGET", "2")
    assert cli.main(["verify", "fvs", "--graph", str(files / "g.txt")]) == 3


def test_round_trip(files, capsys):
    _, out = run(capsys, ["mld", "--circuit", str(files / "c.txt"), "--k", "2", "--json", "--verify"])
    doc = cli.parse_result(out)
    assert doc["witness"] == ["x2", "x3"] and doc["stats"]["verified"]
    assert cli.parse_result(json.dumps(doc)) == doc


def test_timing_is_opt_in(files, capsys):
    _, out = run(capsys, ["fvs", "--graph", str(files / "g.txt"), "--json"])
    assert "elapsed_ms" not in cli.parse_result(out)["stats"]
    _, out = run(capsys, ["fvs", "--graph", str(files / "g.txt"), "--json", "--timing"])
    assert "elapsed_ms" in cli.parse_result(out)["stats"]


def test_out_file_and_sepcol_cycle(files, capsys):
    col = files / "col.json"
    code, _ = run(capsys, ["sepcol", "build", "--n", "6", "--p", "2", "--q", "1", "--out", str(col)])
    assert code == 0
    code, out = run(capsys, ["sepcol", "verify", "--collection", str(col), "--json"])
    assert code == 0 and cli.parse_result(out)["found"]
    code, out = run(capsys, ["sepcol", "dump", "--collection", str(col), "--json"])
    assert all(isinstance(s, list) for s in cli.parse_result(out)["witness"])


@pytest.mark.parametrize("argv", [
    ["repset", "core", "--q", "1", "--verify"],
    ["repset", "core", "--q", "1", "--algo", "uniform", "--verify"],
    ["repset", "product", "--k", "3", "--verify"],
    ["repset", "product", "--k", "3", "--algo", "uniform", "--verify"],
])
def test_repset_commands(files, capsys, argv):
    argv = argv[:2] + ["--input", str(files / "r.json")] + argv[2:] + ["--json"]
    code, out = run(capsys, argv)
    assert code == 0 and cli.parse_result(out)["stats"]["verified"]


def test_verify_subcommands(files, capsys):
    g, c = str(files / "g.txt"), str(files / "c.txt")
    assert cli.parse_result(run(capsys, ["verify", "steiner", "--graph", g, "--json"])[1])["weight"] == 2
    assert cli.parse_result(run(capsys, ["verify", "kpath", "--graph", g, "--k", "2", "--json"])[1])["weight"] == 2
    assert cli.parse_result(run(capsys, ["verify", "mld", "--circuit", c, "--k", "2", "--json"])[1])["weight"] == 2
