import json

import pytest

from kempe_lab import cli
from kempe_lab.coloring import format_col4, parse_col4
from kempe_lab.construct import enumerate_mpgs, wernicke_find
from kempe_lab.errors import NoDecycleColoring
from kempe_lab.fixtures import fixture_dir
from kempe_lab.planar import format_mpg, parse_mpg
from kempe_lab.reduction import subcolorings

FIX = fixture_dir()


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok_and_round_trip(capsys):
    code, out, _ = run(capsys, "validate", str(FIX / "b4.mpg"))
    assert code == 0
    rep = json.loads(out)
    assert list(rep) == ["command", "version", "inputs", "results"]
    assert rep["results"]["valid"] and rep["results"]["round_trip"]
    code, out, _ = run(capsys, "validate", str(FIX / "order8_tree_ubcmpg.mpg"))
    assert code == 0 and json.loads(out)["results"]["n"] == 8


def test_validate_failures_exit_2(capsys, tmp_path):
    bad = tmp_path / "k4.mpg"
    bad.write_text("mpg 4\n0: 1 2 3\n1: 0 3 2\n2: 0 1 3\n3: 0 2\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "NotSimple" in err
    bad.write_text("mpg 4\n0: 1 2 3\n1: 0 3 2\n2: zero\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "line 4" in err


def test_census(capsys):
    code, out, _ = run(capsys, "census", "8")
    assert code == 0 and out.splitlines() == ["4\t1", "5\t1", "6\t2", "7\t5", "8\t14"]
    code, out, _ = run(capsys, "census", "8", "--ubcmpg")
    assert out.splitlines()[-1] == "8\t1" and all(r.endswith("\t0") for r in out.splitlines()[:-1])


def test_analyze_order8_fixture(capsys):
    code, out, _ = run(capsys, "analyze", str(FIX / "order8_tree_ubcmpg.mpg"))
    res = json.loads(out)["results"]
    assert res["colorings"] == 3
    assert sorted(res["reconfig"]["components"]) == [1, 2]
    assert res["ubcmpg"] == {"kind": "tree", "ubc": 2, "tree": 1, "cyclic": 0}


def test_decycle_trace_and_output(capsys, tmp_path):
    trc, col = tmp_path / "b4.trc", tmp_path / "b4.col4"
    code, out, _ = run(capsys, "decycle", str(FIX / "b4.mpg"), "--trace", str(trc), "-o", str(col))
    assert code == 0
    res = json.loads(out)["results"]
    assert res["strategy"] == "recursive"
    assert trc.read_text().startswith("# strategy recursive")
    f = parse_col4(col.read_text())
    fr = res["frame"]
    assert f[fr[1]] != f[fr[3]]


def test_reduce_and_checkpoints(capsys, tmp_path):
    G = next(iter(enumerate_mpgs(12, min_degree=5)))
    g = tmp_path / "ico.mpg"
    g.write_text(format_mpg(G))
    v2 = wernicke_find(G)[0]
    sub = next(s for s in subcolorings(G, v2) if len({s[u] for u in G.rotation[v2]}) == 4)
    c = tmp_path / "sub.col4"
    c.write_text(format_col4(sub))
    code, out, _ = run(capsys, "reduce", str(g), "--coloring", str(c), "--checkpoints", str(tmp_path / "cp"))
    assert code == 0
    res = json.loads(out)["results"]
    assert res["pivot"] == v2 and len(res["coloring"]) == G.n
    assert list((tmp_path / "cp").glob("*.dot"))


def test_heawood_missing_fixture_exit_3(capsys):
    code, _, err = run(capsys, "heawood")
    assert code == 3 and "FixtureMissing" in err


def test_alarm_exit_4(capsys, monkeypatch):
    import kempe_lab.decycle as dec

    def boom(*a, **k):
        raise NoDecycleColoring("forced")

    monkeypatch.setattr(dec, "decycle", boom)
    code, _, err = run(capsys, "decycle", str(FIX / "b4.mpg"))
    assert code == 4 and err.startswith("ALARM")


def test_reports_are_reproducible(capsys):
    a = run(capsys, "analyze", str(FIX / "b4.mpg"))[1]
    b = run(capsys, "analyze", str(FIX / "b4.mpg"))[1]
    assert a == b
    code, out, _ = run(capsys, "--timing", "analyze", str(FIX / "b4.mpg"))
    assert "timing" in json.loads(out)


def test_gen_and_export_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "7", "--out", str(tmp_path / "g"))
    assert code == 0 and json.loads(out)["results"]["written"] == {"4": 1, "5": 1, "6": 2, "7": 5}
    files = sorted((tmp_path / "g").glob("*.mpg"))
    assert len(files) == 9 and parse_mpg(files[-1].read_text()).n == 7
    code, out, _ = run(capsys, "export-dot", str(FIX / "b4.mpg"), "--reconfig", "kempe")
    assert code == 0 and out.startswith("graph")


def test_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("KEMPE_LAB_CACHE", str(tmp_path))
    run(capsys, "census", "6")
    assert list(tmp_path.iterdir())
    code, out, _ = run(capsys, "census", "6")
    assert out.splitlines()[-1] == "6\t2"


def test_help_lists_every_subcommand(capsys):
    with pytest.raises(SystemExit):
        cli.main(["--help"])
    out = capsys.readouterr().out
    for name in ("validate", "census", "analyze", "decycle", "reduce", "heawood", "gen", "export-dot"):
        assert name in out
