import json

import pytest

from gu3gates.cli import EXIT_OK, EXIT_RESOURCE, EXIT_VALIDATION, dispatch
from gu3gates.matrices import SimilitudeMatrix
from gu3gates.navigation import Word, evaluate_word
from gu3gates.gatesets import split_gate_set


def run(args):
    return dispatch(args)


def test_gen_manifest_and_roundtrip(tmp_path):
    out = tmp_path / "gen.json"
    assert run(["gen", "--p", "5", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["schema_version"] == 1
    assert data["count"] == 62 and data["p_prime"] == 5
    assert data["config"]["p"] == 5
    mats = [SimilitudeMatrix.from_json(e) for e in data["elements"]]
    assert len({m.canonicalize() for m in mats}) == 62
    for m in mats[:5]:
        assert m.integer_similitude_factor() == 5


def test_gen_super(tmp_path):
    out = tmp_path / "super.json"
    assert run(["gen", "--p", "3", "--variant", "super", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["count"] == 2


def test_sizes(tmp_path, capsys):
    out = tmp_path / "sizes.json"
    assert run(["sizes", "--p", "5", "--lmax", "3", "--variant", "split", "--out", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "20305" in printed
    rows = json.loads(out.read_text())["rows"]
    assert [r["lambda_triv"] for r in rows] == [31, 806, 20305]


def test_identify_with_cache(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GU3_CACHE_DIR", str(tmp_path / "cache"))
    out = tmp_path / "id.json"
    assert run(["identify", "--p", "5", "--q", "3", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["label"] == "PSU3" and data["bfs_order"] == 6048 and data["agreement"]
    assert (tmp_path / "cache" / "closure_p5_q3_full.npz").exists()
    # second run reads the cache and produces the identical payload
    out2 = tmp_path / "id2.json"
    assert run(["identify", "--p", "5", "--q", "3", "--out", str(out2)]) == EXIT_OK
    d1, d2 = json.loads(out.read_text()), json.loads(out2.read_text())
    d1["config"].pop("out"), d2["config"].pop("out")
    assert d1 == d2


def test_identify_above_cap(tmp_path):
    out = tmp_path / "id.json"
    assert run(["identify", "--p", "5", "--q", "13", "--cap", "1000", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["bfs_order"] is None and data["label"] == "PGL3"


def test_navigate_roundtrip(tmp_path):
    gs = split_gate_set(5)
    word = Word(((2, False), (17, False), (5, False)))
    target = evaluate_word(word, gs)
    inp = tmp_path / "m.json"
    inp.write_text(json.dumps(target.to_json()))
    out = tmp_path / "word.json"
    assert run(["navigate", "--p", "5", "--in", str(inp), "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["length"] == 3
    got = Word.from_json(data["word"])
    assert evaluate_word(got, gs) == target


def test_navigate_rejects_non_lattice(tmp_path):
    sigma = SimilitudeMatrix.from_ints(((0, 1, 0), (0, 0, 1), (1, 0, 0)), 5)
    inp = tmp_path / "m.json"
    inp.write_text(json.dumps(sigma.to_json()))
    assert run(["navigate", "--p", "5", "--in", str(inp)]) == EXIT_VALIDATION


def test_navigate_bad_json(tmp_path):
    inp = tmp_path / "m.json"
    inp.write_text("{\"rows\": 3}")
    assert run(["navigate", "--p", "5", "--in", str(inp)]) == EXIT_VALIDATION


def test_cover_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["cover", "--p", "5", "--variant", "split", "--lmax", "1", "--samples", "60", "--seed", "9"]
    assert run(argv + ["--out", str(a)]) == EXIT_OK
    assert run(argv + ["--out", str(b)]) == EXIT_OK
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    da["config"].pop("out"), db["config"].pop("out")
    assert da == db
    rows = da["report"]["summary"]
    assert rows[0]["net_size"] == 1 and rows[1]["net_size"] == 32


def test_supergates(tmp_path):
    out = tmp_path / "sg.json"
    assert run(["supergates", "--syllables", "5", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["sigma_cubed_scalar"] and data["tau_cubed_scalar"]
    assert data["tau_cubed"] == "-2-2i"
    assert data["free_product"]["ok"]


def test_spectrum_extremal(tmp_path, monkeypatch):
    monkeypatch.setenv("GU3_CACHE_DIR", str(tmp_path / "cache"))
    out = tmp_path / "spec.json"
    edges = tmp_path / "edges.txt"
    verts = tmp_path / "vertices.txt"
    rc = run(
        ["spectrum", "--p", "5", "--q", "3", "--mode", "extremal", "--k", "3",
         "--out", str(out), "--graph-out", str(edges), "--vertex-out", str(verts)]
    )
    assert rc == EXIT_OK
    data = json.loads(out.read_text())
    rep = data["report"]
    assert rep["verdict"] and rep["partial"] and rep["mode"] == "split"
    assert data["group"] == "PSU3(F_3)"
    lines = edges.read_text().splitlines()
    assert lines[0] == "# vertices 6048 generators 62"
    assert len(lines) == 1 + 6048 * 62
    vlines = verts.read_text().splitlines()
    assert len(vlines) == 1 + 6048
    idx, code = vlines[1].split()
    assert idx == "0" and int(code) >= 0
    # gate sets were memoized too
    assert (tmp_path / "cache" / "gateset_p5_full.json").exists()


def test_resource_cap_exit_3():
    rc = dispatch(["cover", "--p", "3", "--lmax", "2", "--samples", "10", "--cap", "50"])
    assert rc == EXIT_RESOURCE


def test_bad_arguments_exit_2():
    with pytest.raises(SystemExit) as exc:
        dispatch(["gen", "--p"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        dispatch(["nosuchcommand"])
    # validation errors inside commands come back as return code 2
    assert dispatch(["gen", "--p", "9"]) == EXIT_VALIDATION
