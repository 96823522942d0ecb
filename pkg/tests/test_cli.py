import json
import subprocess
import sys

import jsonschema
import pydot
import pytest

from bansync.cli import main
from bansync.schemas import BY_COMMAND
from conftest import DATA


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_impact_exfree(capsys):
    code, out, _ = run_cli(capsys, "impact", str(DATA / "exfree.ban"), "--from", "11", "--to", "00")
    assert code == 0 and "impact F" in out


def test_impact_contrex_json(capsys):
    code, out, _ = run_cli(capsys, "impact", str(DATA / "contrex.ban"), "--from", "1100", "--to", "0000", "--json")
    d = json.loads(out)
    jsonschema.validate(d, BY_COMMAND["impact"])
    assert code == 0 and d["label"] == "D"


def test_attractors_contrex(capsys):
    code, out, _ = run_cli(capsys, "attractors", str(DATA / "contrex.ban"))
    assert "2 attractor(s)" in out and "stable (1): 0000" in out and "unstable (12)" in out
    code, out, _ = run_cli(capsys, "attractors", str(DATA / "contrex.ban"), "--json")
    d = json.loads(out)
    assert [(a["kind"], len(a["configs"])) for a in d["attractors"]] == [("stable", 1), ("unstable", 12)]


@pytest.mark.parametrize("cmd,extra", [
    ("analyze", []),
    ("attractors", ["--graph", "eig"]),
    ("critical-cycles", []),
    ("normal", ["--all"]),
    ("sensitivity", []),
])
def test_json_schemas_and_numbers_agree(capsys, cmd, extra):
    path = str(DATA / "contrex.ban")
    _, out_json, _ = run_cli(capsys, cmd, path, "--json", *extra)
    d = json.loads(out_json)
    jsonschema.validate(d, BY_COMMAND[cmd])
    _, out_text, _ = run_cli(capsys, cmd, path, *extra)
    if cmd == "attractors":
        assert f"{d['transient_count']} transient" in out_text and f"{d['edges_count']} edge" in out_text
    if cmd == "critical-cycles":
        assert out_text.startswith(f"{len(d)} critical cycle")
    if cmd == "normal":
        assert out_text.startswith(f"{sum(v['verdict'] == 'normal' for v in d)} normal")
    if cmd == "sensitivity":
        assert f"normal transitions: {d['normal_count']}" in out_text


def test_export_dot(capsys, tmp_path):
    out = tmp_path / "g.dot"
    code, _, _ = run_cli(capsys, "export-dot", str(DATA / "exfree.ban"), "--add-transition", "11,00", "-o", str(out))
    assert code == 0
    (g,) = pydot.graph_from_dot_data(out.read_text())
    assert len(g.get_subgraphs()) == 3
    code, text, _ = run_cli(capsys, "export-dot", str(DATA / "contrex.ban"), "--graph", "eig")
    assert pydot.graph_from_dot_data(text)


def test_parse_error_position(capsys, tmp_path):
    bad = tmp_path / "bad.ban"
    bad.write_text("n = 2\n0: x0 &\n1: x1\n")
    code, _, err = run_cli(capsys, "analyze", str(bad))
    assert code == 2 and "bad.ban:2:8:" in err


def test_input_errors(capsys, tmp_path):
    code, _, err = run_cli(capsys, "impact", str(DATA / "exfree.ban"), "--from", "11", "--to", "01")
    assert code == 2
    code, _, err = run_cli(capsys, "impact", str(DATA / "exfree.ban"), "--from", "111", "--to", "000")
    assert code == 2
    code, _, err = run_cli(capsys, "analyze", str(tmp_path / "missing.ban"))
    assert code == 2
    code, _, err = run_cli(capsys, "critical-cycles", str(DATA / "xor.ban"))
    assert code == 2 and "non-monotone" in err


def test_size_ceiling(capsys, tmp_path, restore_limits):
    big = tmp_path / "big.ban"
    big.write_text("".join(f"{i}: x{i}\n" for i in range(11)))  # fixed points only: cheap
    code, _, err = run_cli(capsys, "normal", str(big))
    assert code == 2 and "ceiling" in err
    code, out, _ = run_cli(capsys, "normal", str(big), "--max-n", "11")
    assert code == 0
    code, _, err = run_cli(capsys, "normal", str(big), "--max-n", "21")
    assert code == 2 and "hard ceiling" in err


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as ei:
        main(["analyze", "--bogus", "x"])
    assert ei.value.code == 2


def test_verify_size2(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "verify", "--size", "2", "--json", "--out", str(tmp_path))
    d = json.loads(out)
    jsonschema.validate(d, BY_COMMAND["verify"])
    assert d["claims"]["size2_monotone_not_very_sensitive"]["verdict"] == "confirmed"
    assert d["claims"]["size2_xor_d_sensitive"]["verdict"] == "confirmed"
    # the subset form of the frustration lemma is refuted, so verify exits 1
    assert d["claims"]["lemma2_frustrations"]["verdict"] == "refuted" and code == 1
    files = sorted(p.name for p in tmp_path.glob("lemma2_frustrations_*.ban"))
    assert files
    from bansync.core import Network
    from bansync.search import replay_witness
    net = Network.from_text((tmp_path / files[0]).read_text())
    assert replay_witness("lemma2_frustrations", {"n": net.n, "tables": list(net.tables)})


def test_verify_sample_echoes_seed(capsys):
    code, out, _ = run_cli(capsys, "verify", "--size", "4", "--monotone", "--sample", "20", "--seed", "3")
    assert "seed: 3" in out
    code, out, _ = run_cli(capsys, "verify", "--size", "4")
    assert code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "bansync", "sensitivity", str(DATA / "xor.ban")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "very sensitive" in r.stdout
