import json
import subprocess
import sys

import pytest

from fibercone.cli import main, resolve_seed
from fibercone.dsl import parse

CUBE = "ring R = F32003[x,y];\nideal I = x^3, y^3, x^2*y;\nideal K = maxideal;\n"


def write(tmp_path, text, name="doc.fc"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_text_and_json(tmp_path, capsys):
    f = write(tmp_path, CUBE)
    code, out, _ = run(["analyze", f], capsys)
    assert code == 0 and "bounds (lhs <= rhs)" in out
    code, out, _ = run(["analyze", f, "--json", "--seed", "4"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["seed"] == "4" and rep["reduction"]["e0"] == "9"


def test_rednum_j_equal_i_exits_zero(tmp_path, capsys):
    f = write(tmp_path, "ring R = QQ[x,y];\nideal I = x^2, x*y, y^2;\nideal J = x^2, x*y, y^2;\n")
    code, out, _ = run(["rednum", f, "--json"], capsys)
    assert code == 0 and json.loads(out)["reduction"]["r"] == "0"


@pytest.mark.parametrize(
    "text, code, needle",
    [
        ("ring R = QQ[x,y];\nideal I = x^2 + y, y^2;\n", 2, "not homogeneous"),
        ("ring R = QQ[x,y];\nideal I = x^2;\n", 2, "m-primary"),
        ("ring R = QQ[x,y];\nideal I = x^2, y^2;\nideal K = x^3, y;\n", 2, "not contained in K"),
        ("ring R = QQ[x,y];\nideal I = ;\n", 1, "line 2, column 11"),
    ],
)
def test_exit_codes(tmp_path, capsys, text, code, needle):
    f = write(tmp_path, text)
    got, out, err = run(["analyze", f], capsys)
    assert got == code and needle in err and out == ""


def test_resource_cap_exit(tmp_path, capsys):
    f = write(tmp_path, "ring R = QQ[x,y,z];\nideal I = x^3 + y^2*z, y^3 + z^2*x, z^3 + x^2*y;\noption pair_cap = 2;\n")
    code, _, err = run(["gb", f], capsys)
    assert code == 3 and "ResourceCapError" in err


def test_series_trunc_and_rr_flags(tmp_path, capsys):
    f = write(tmp_path, CUBE)
    code, out, _ = run(["series", f, "--json", "--trunc", "12"], capsys)
    assert code == 0 and json.loads(out)["series"]["N"] == "12"
    code, out, _ = run(["rr", f, "--json", "--n", "2"], capsys)
    assert code == 0 and json.loads(out)["rr"]["n"] == "2"


def test_plot_directory(tmp_path, capsys):
    f = write(tmp_path, CUBE, "cube.fc")
    code, _, err = run(["analyze", f, "--plot", str(tmp_path / "figs")], capsys)
    assert code == 0
    made = sorted(p.name for p in (tmp_path / "figs").iterdir())
    assert made == ["cube_hilbert.png", "cube_rr_gap.png", "cube_series.png"]
    assert all((tmp_path / "figs" / n).stat().st_size > 1000 for n in made)


def test_seed_precedence(monkeypatch):
    doc = parse(CUBE + "option seed = 9;\n")
    monkeypatch.delenv("FIBERCONE_SEED", raising=False)
    assert resolve_seed(None, doc) == 9
    assert resolve_seed(None, parse(CUBE)) == 0
    monkeypatch.setenv("FIBERCONE_SEED", "17")
    assert resolve_seed(None, doc) == 17
    assert resolve_seed(3, doc) == 3


def test_corpus_command_deterministic(tmp_path, capsys):
    argv = ["corpus", "--dim", "1", "--count", "4", "--seed", "5", "--json", "--dump", str(tmp_path)]
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv, capsys)
    assert code1 == code2 == 0 and out1 == out2
    agg = json.loads(out1)["aggregate"]
    assert agg["instances"] == "4" and agg["defects"] == "0"


def test_stdin_and_console_script():
    proc = subprocess.run([sys.executable, "-m", "fibercone.cli", "rednum", "--json"], input=CUBE, capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "rednum"
