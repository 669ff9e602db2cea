import json

import pytest

from percolab.cli import main
from percolab.graph_core import read_graph


@pytest.fixture()
def graph_file(tmp_path):
    path = str(tmp_path / "g.graph")
    rc = main([
        "generate", "--family", "random_regular",
        "--n", "300", "--d", "6", "--graph-seed", "4", "--out", path,
    ])
    assert rc == 0
    return path


def test_generate_writes_readable_graph(graph_file, capsys):
    g = read_graph(graph_file)
    assert g.n == 300 and g.d == 6


def test_generate_hypercube(tmp_path, capsys):
    path = str(tmp_path / "q.graph")
    rc = main(["generate", "--family", "hypercube", "--n", "16", "--d", "4", "--out", path])
    assert rc == 0
    out = capsys.readouterr().out
    assert "wrote" in out and "n=16" in out.replace(" ", "")
    assert read_graph(path).d == 4


def test_spectrum_command(graph_file, capsys):
    rc = main(["spectrum", "--graph", graph_file, "--method", "dense"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["lambda1"] == pytest.approx(6.0, abs=1e-8)
    assert "admissible" not in rep
    rc = main(["spectrum", "--graph", graph_file, "--alpha", "0.9"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert isinstance(rep["admissible"], bool)


def test_percolate_command(graph_file, capsys):
    rc = main(["percolate", "--graph", graph_file, "--p", "0.4", "--seed", "3"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["census"]["retained"] == obj["dfs"]["accepted"]
    assert obj["dfs"]["coins"] == 300
    rc = main(["percolate", "--graph", graph_file, "--p", "1.5", "--seed", "3"])
    assert rc == 1  # domain error surfaces as exit 1, not a traceback


def test_theory_command(capsys):
    rc = main(["theory", "--n", "200000", "--d", "20", "--epsilon", "0.2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "L1_pred" in out and "3764.38" in out
    assert "T1_pred" in out and "window" in out


def test_sweep_and_compare_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "family = random_regular\nn = 400\nd = 8\ngraph_seed = 2\n"
        "epsilon = 0.6\nregime = sub\ntrials = 3\nseed = 11\n"
    )
    out = str(tmp_path / "records.jsonl")
    rc = main(["sweep", "--config", str(cfg), "--seed", "11", "--trials", "3", "--out", out])
    text = capsys.readouterr().out
    assert rc == 0, text
    assert "max_component_rate" in text
    rc = main(["compare", "--records", out])
    assert rc == 0
    assert "theorem_1" in capsys.readouterr().out


def test_sweep_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "family = random_regular\nn = 400\nd = 8\ngraph_seed = 2\n"
        "epsilon = 0.6\nregime = sub\ntrials = 9\nseed = 1\n"
    )
    out = str(tmp_path / "r.jsonl")
    rc = main([
        "sweep", "--config", str(cfg), "--seed", "11", "--trials", "2",
        "--out", out, "--tol", "max_component_rate=0.5",
    ])
    assert rc == 0
    recs = [json.loads(x) for x in open(out, encoding="utf-8").read().splitlines()]
    head = recs[0]["config"]
    assert head["trials"] == 2 and head["seed"] == 11
    assert head["tolerances"] == {"max_component_rate": 0.5}
    capsys.readouterr()


def test_sweep_exit_one_on_failed_row(tmp_path, capsys):
    out = str(tmp_path / "f.jsonl")
    rc = main([
        "sweep", "--family", "random_regular", "--n", "400", "--d", "8",
        "--graph-seed", "2", "--epsilon", "0.6", "--regime", "sub",
        "--seed", "11", "--trials", "2", "--out", out,
        "--tol", "max_component_rate=1.5",  # unreachable rate
    ])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out


def _json_stream(text):
    """Parse back-to-back pretty-printed JSON objects."""
    dec = json.JSONDecoder()
    idx, out = 0, []
    while idx < len(text):
        obj, end = dec.raw_decode(text, idx)
        out.append(obj)
        idx = end
        while idx < len(text) and text[idx] in " \n":
            idx += 1
    return out


def test_verify_command(graph_file, capsys):
    rc = main([
        "verify", "--graph", graph_file, "--checker", "stream,mixing",
        "--seed", "5", "--epsilon", "0.5", "--regime", "sub", "--pairs", "50",
    ])
    reports = _json_stream(capsys.readouterr().out)
    assert rc == 0
    assert {r["checker"] for r in reports} == {"stream", "mixing"}
    assert all(r["pass"] for r in reports)


def test_verify_unknown_checker(graph_file, capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--graph", graph_file, "--checker", "psychic", "--seed", "1"])
    capsys.readouterr()


def test_missing_graph_file_is_a_clean_error(tmp_path, capsys):
    rc = main(["spectrum", "--graph", str(tmp_path / "nope.graph")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_cli_requires_subcommand():
    with pytest.raises(SystemExit):
        main([])
    with pytest.raises(SystemExit):
        main(["sweep"])  # missing required flags
