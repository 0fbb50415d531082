import json

import pytest

from ordfree.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name in ("example11", "example11-table", "mutated-table", "dirprod-corpus", "shared-instance"):
        p = tmp_path / f"{name}.json"
        assert main(["export", name, "--out", str(p)]) == 0
        paths[name] = str(p)
    capsys.readouterr()
    return paths


def test_eval(capsys, files):
    assert run(capsys, "eval", "--action", files["example11"], "--word", "f", "--at", "2/1")[:2] == (0, "7/2\n")
    assert run(capsys, "eval", "--word", "", "--at", "9/7")[1] == "9/7\n"
    assert run(capsys, "eval", "--word", "f f^-1", "--at", "9/7")[1] == "9/7\n"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "eval", "--word", "h", "--at", "1")[0] == 3
    assert run(capsys, "eval", "--word", "f^2", "--at", "1")[0] == 2
    assert run(capsys, "eval", "--word", "f", "--at", "1/0")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "pingpong", "--table", str(bad))[0] == 2
    assert run(capsys, "nosuchcommand")[0] == 2


def test_pingpong(capsys, files):
    code, out, _ = run(capsys, "pingpong", "--table", files["example11-table"])
    assert code == 0 and json.loads(out)["verdict"] == "certified"
    code, out, _ = run(capsys, "pingpong", "--table", files["mutated-table"])
    rep = json.loads(out)
    assert code == 1 and rep["verdict"] == "refuted" and rep["counterexample"]["point"] == "2/1"


def test_witness(capsys):
    code, out, _ = run(capsys, "witness", "--word", "f g f^-1 g^-1")
    rep = json.loads(out)
    assert code == 0 and rep["results"][0]["verdict"] == "moved"


def test_witness_deterministic(capsys):
    a = run(capsys, "witness", "--random", "20", "--seed", "4", "--max-len", "10")
    b = run(capsys, "witness", "--random", "20", "--max-len", "10", "--seed", "4")
    assert a == b and a[0] == 0
    c = run(capsys, "--seed", "5", "witness", "--random", "20", "--max-len", "10")
    assert c[1] != a[1]


def test_basis_and_cameron(capsys):
    rep = json.loads(run(capsys, "basis", "--count", "3")[1])
    assert rep["basis"] == ["g", "f^-1 g f", "f^-1 f^-1 g f f"]
    rep = json.loads(run(capsys, "cameron", "agree", "--a", "0101(0)", "--b", "0101(1)", "--blocks", "10")[1])
    assert rep["agreement_blocks"] == [0, 1, 2, 3] and rep["common_prefix"] == 4
    code, out, _ = run(capsys, "cameron", "witness", "--word", "a b^-1", "--bind", "a=(0)", "--bind", "b=(1)")
    assert code == 0 and json.loads(out)["witness"]["block"] == 0
    assert run(capsys, "cameron", "witness", "--word", "a c", "--bind", "a=(0)")[0] == 3
    rep = json.loads(run(capsys, "cameron", "gen", "--branch", "(0)", "--blocks", "3")[1])
    assert rep["restriction_indices"] == [2, 4, 8]


def test_transitive(capsys, tmp_path):
    reg = tmp_path / "reg.json"
    code, out, _ = run(capsys, "transitive", "map", "--from", "0,1", "--to", "5,9", "--registry", str(reg))
    rep = json.loads(out)
    assert code == 0 and rep["index"] == 0 and rep["images"] == ["5/1", "9/1"]
    rep = json.loads(run(capsys, "transitive", "map", "--from", "2,3", "--to", "4,7", "--registry", str(reg))[1])
    assert rep["index"] == 1
    rep = json.loads(run(capsys, "transitive", "map", "--from", "0,1", "--to", "5,9", "--registry", str(reg))[1])
    assert rep["index"] == 0
    assert json.loads(reg.read_text())["next_index"] == 2
    assert run(capsys, "transitive", "map", "--from", "1/4,1", "--to", "5,9")[0] == 3


def test_dirprod(capsys, files, tmp_path):
    pair = tmp_path / "pair.json"
    c5 = [1, 2, 3, 4, 0]
    pair.write_text(json.dumps([{"coords": {"0": c5}}, {"coords": {"1": c5}}]))
    rep = json.loads(run(capsys, "dirprod", "relation", "--set", str(pair), "--max-len", "8")[1])
    assert rep["word"] == "a b a^-1 b^-1" and rep["length"] == 4
    single = tmp_path / "one.json"
    single.write_text(json.dumps([{"coords": {"0": c5}}]))
    code, out, _ = run(capsys, "dirprod", "relation", "--set", str(single), "--max-len", "3")
    assert code == 1 and json.loads(out)["verdict"] == "none-found"
    code, out, _ = run(capsys, "dirprod", "probe", "--set", files["shared-instance"])
    assert code == 0 and json.loads(out)["verdict"] == "triple"


def test_import_roundtrip(capsys, files, tmp_path):
    for name, kind in (("example11", "action"), ("example11-table", "pingpong-table"), ("dirprod-corpus", "element-set")):
        code, out, _ = run(capsys, "import", files[name])
        rep = json.loads(out)
        assert code == 0 and rep["kind"] == kind and rep["roundtrip"]
        assert rep["value"] == json.load(open(files[name]))


def test_out_is_written(capsys, tmp_path):
    out = tmp_path / "cert.json"
    assert run(capsys, "pingpong", "--out", str(out))[0] == 0
    assert json.loads(out.read_text())["verdict"] == "certified"
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".ordfree-")]
