import csv
import io
import json
import subprocess
import sys

import pytest

from ivapprox import interval as iv
from ivapprox.cli import main
from ivapprox.interval import Interval


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_jackson_tent_succeeds(capsys, tmp_path):
    out_csv = tmp_path / "g.csv"
    code, out, _ = run(capsys, "approximate", "jackson", "--fn", "tent", "--n", "8", "--eps", "0.01",
                       "--csv", str(out_csv))
    assert code == 0
    rep = json.loads(out)
    assert rep["schema_version"] == 1
    for key in ("n", "direction", "delta", "eps_prime", "M", "certified_error", "bound_2omega"):
        assert key in rep
    assert rep["certified_error"] <= 2 * (1 / 8) + 0.01
    table = rows(out_csv)
    assert table[0] == ["x", "f_lo", "f_hi", "g_lo", "g_hi", "dh"]
    assert len(table) == 1002


def test_jackson_neither_class_exits_2(capsys):
    code, out, err = run(capsys, "approximate", "jackson", "--fn", "sinbump", "--n", "8", "--eps", "0.01")
    assert code == 2
    assert "NotMonotone" in err
    assert json.loads(out)["error"]["type"] == "NotMonotone"


def test_sw_constant(capsys):
    code, out, _ = run(capsys, "approximate", "sw", "--fn", "const01", "--eps", "0.5")
    assert code == 0
    rep = json.loads(out)
    assert rep["m"] == 1 and rep["certified_error"] == 0


def test_sw_cover_too_large_exits_2(capsys):
    code, out, _ = run(capsys, "approximate", "sw", "--fn", "tent", "--eps", "0.2", "--max-cover", "3")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "CoverTooLarge"


def test_expression_without_lipschitz_is_uncertified(capsys):
    code, out, _ = run(capsys, "approximate", "sw", "--lower", "x", "--upper", "x+1", "--eps", "0.3")
    assert code == 2
    assert json.loads(out)["status"] == "uncertified"


def test_expression_with_lipschitz(capsys):
    code, out, _ = run(capsys, "approximate", "sw", "--lower", "x", "--upper", "x+1", "--eps", "0.3",
                       "--lipschitz", "1", "--domain", "1,2")
    assert code == 0
    assert json.loads(out)["certified_error"] < 0.3


@pytest.mark.parametrize(
    "argv",
    [
        ["approximate", "sw", "--fn", "tent", "--eps", "-1"],
        ["approximate", "sw", "--fn", "nosuch", "--eps", "0.1"],
        ["approximate", "sw", "--lower", "sin(x", "--upper", "1", "--eps", "0.1"],
        ["approximate", "jackson", "--fn", "tent", "--eps", "0.1"],
        ["approximate", "sw", "--fn", "tent", "--eps", "0.1", "--grid", "5"],
        ["approximate", "sw", "--eps", "0.1"],
        ["approximate", "bogus", "--fn", "tent", "--eps", "0.1"],
        ["synth-bump", "--a", "0.6", "--b", "0.5", "--delta", "0.1"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 1
    assert capsys.readouterr().err


def test_synth_bump(capsys):
    code, out, _ = run(capsys, "synth-bump", "--a", "0.25", "--b", "0.75", "--delta", "0.25")
    assert code == 0
    rep = json.loads(out)
    assert (rep["m"], rep["n"]) == (2, 2) and rep["max_violation"] == 0.0


def test_verify_determinism_and_success(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--seed", "42", "--cases", "300", "--report", str(a)]) == 0
    assert main(["verify", "--seed", "42", "--cases", "300", "--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_mutation_exits_3(capsys, monkeypatch):
    monkeypatch.setattr(iv, "gh_diff", lambda a, b: Interval(a.lo - b.hi, a.hi - b.lo))
    code, _, err = run(capsys, "verify", "--cases", "100")
    assert code == 3
    assert "law failed: A⊖A=0" in err.splitlines()[0]


def test_inn_eval_and_export(capsys, tmp_path):
    model = tmp_path / "net.json"
    code, out, _ = run(capsys, "approximate", "inn", "--lower", "2", "--upper", "3", "--lipschitz", "0",
                       "--eps", "0.1", "--model", str(model))
    assert code == 0
    rep = json.loads(out)
    assert rep["m"] == 1 and rep["fit"]["success"]
    code, out, _ = run(capsys, "eval-inn", "--model", str(model), "--x", "0.5")
    assert code == 0
    lo, hi = (float(v) for v in out.strip().strip("[]").split(","))
    assert abs(lo - 2) < 0.1 and abs(hi - 3) < 0.1

    overlay = tmp_path / "overlay.csv"
    assert main(["export", "--model", str(model), "--kind", "overlay", "--grid", "21", "--out", str(overlay)]) == 0
    table = rows(overlay)
    assert table[0] == ["x", "f_lo", "f_hi", "g_lo", "g_hi"]
    assert len(table) == 22


def test_overlay_of_constant_is_identical(capsys, tmp_path):
    model = tmp_path / "sw.json"
    assert main(["approximate", "sw", "--fn", "const01", "--eps", "0.5", "--model", str(model)]) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, "export", "--model", str(model), "--kind", "overlay", "--grid", "11")
    assert code == 0
    for r in list(csv.reader(io.StringIO(out)))[1:]:
        assert r[1] == r[3] and r[2] == r[4]


def test_sweep_export(capsys, tmp_path):
    model = tmp_path / "jk.json"
    assert main(["approximate", "jackson", "--fn", "tent", "--n", "4", "--eps", "0.01", "--model", str(model)]) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, "export", "--model", str(model), "--kind", "sweep")
    assert code == 0
    table = list(csv.reader(io.StringIO(out)))
    assert table[0] == ["n", "certified_error", "bound_2omega"]
    assert [int(r[0]) for r in table[1:]] == [4, 8, 16, 32]
    for r in table[1:]:
        assert float(r[1]) <= float(r[2])


def test_export_missing_model_exits_1(capsys, tmp_path):
    code, _, err = run(capsys, "export", "--model", str(tmp_path / "none.json"), "--kind", "overlay")
    assert code == 1
    assert "not found" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ivapprox", "synth-bump", "--a", "0", "--b", "1", "--delta", "0.49"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["m"] == 1
