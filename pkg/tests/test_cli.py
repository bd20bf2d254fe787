import json

from sl2frob.cli import main, run_command, parse_seed
from sl2frob.exactfield import FieldCtx


def test_twist_command(capsys):
    code = main(["twist", "--p", "3"])
    out = capsys.readouterr().out
    assert code == 0
    rep = json.loads(out)
    assert rep["command"] == "twist" and rep["failures"] == 0
    assert rep["conventions"]["field"]["modulus_c1_c0"] == [0, 1]


def test_center_command_csv(capsys):
    code = main(["center", "--p", "3", "--r", "1", "--format", "csv"])
    out = capsys.readouterr().out
    assert code == 0
    assert "center_dim_block[0][1],dim,3" in out
    assert "center_dim_block[2],dim,1" in out
    assert out.strip().endswith("summary,failures,0")


def test_usage_error():
    assert main(["no-such-command"]) == 2


def test_non_generic_seed_exit_code(capsys):
    code = main(["twist", "--p", "3", "--d-seed", "1,0"])
    capsys.readouterr()
    assert code == 3


def test_bad_seed_format(capsys):
    code = main(["twist", "--p", "3", "--d-seed", "zzz"])
    capsys.readouterr()
    assert code == 2


def test_parse_seed_auto():
    ctx = FieldCtx(3, 2)
    d = parse_seed(ctx, "auto")
    assert not d.in_prime_field()


def test_reports_byte_identical(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["relations", "--p", "3", "--r", "1", "--out", str(p1)]) == 0
    assert main(["relations", "--p", "3", "--r", "1", "--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_out_file(tmp_path):
    path = tmp_path / "r.json"
    assert main(["restriction", "--p", "3", "--r", "2", "--out", str(path)]) == 0
    rep = json.loads(path.read_text())
    assert rep["failures"] == 0


def test_run_command_steinberg():
    rep = run_command("steinberg", 3, 2, 2, "auto", 2, 0)
    assert rep["failures"] == 0
    assert any(c["name"].startswith("steinberg") for c in rep["checks"])
