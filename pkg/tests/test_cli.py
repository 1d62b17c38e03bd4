import io
import json

import pytest

from conftest import GOLDEN
from dirac_stab.cli import main
from dirac_stab.documents import BUNDLED

GOLDEN_RUNS = [("verify", name, fmt) for name in BUNDLED for fmt in ("table", "json")] + [
    ("stability", "ctangent.json", fmt) for fmt in ("table", "json")] + [
    ("stability", "cartan_dirac_su2.json", fmt) for fmt in ("table", "json")]


def run(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def golden_name(cmd, name, fmt):
    return "%s_%s.%s" % (cmd, name.rsplit(".", 1)[0], "txt" if fmt == "table" else "json")


def write(tmp_path, obj, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
    return str(p)


@pytest.mark.parametrize("cmd,name,fmt", GOLDEN_RUNS)
def test_golden_reports(cmd, name, fmt):
    code, out, _ = run(cmd, "--input", "examples/" + name, "--format", fmt)
    assert code == 0
    assert out == (GOLDEN / golden_name(cmd, name, fmt)).read_text(encoding="utf-8")


def test_repeat_runs_identical():
    a = run("verify", "--input", "examples/su2_double.json", "--format", "json")
    b = run("verify", "--input", "examples/su2_double.json", "--format", "json")
    assert a == b


def test_golden_content_matches_known_facts():
    data = json.loads((GOLDEN / "stability_ctangent.json").read_text())
    assert data["values"]["verdict"] == "STABLE" and data["values"]["family_dim"] == 0
    data = json.loads((GOLDEN / "stability_cartan_dirac_su2.json").read_text())
    assert data["values"]["h2"] == 0 and data["values"]["verdict"] == "STABLE"


def test_zero_denominator_exit_2(tmp_path):
    p = write(tmp_path, {"kind": "cartan_dirac", "lie_algebra": {"dim": 1, "brackets": []},
                         "metric": [["1/0"]]})
    code, out, err = run("verify", "--input", p)
    assert code == 2 and "zero denominator" in err and out == ""


def test_missing_file_exit_2(tmp_path):
    assert run("verify", "--input", str(tmp_path / "none.json"))[0] == 2


def test_bad_usage_exit_2():
    assert run("frobnicate", "--input", "x")[0] == 2
    assert run("cohomology", "--input", "examples/ctangent.json", "--degree", "7")[0] == 2


def test_not_fixed_point_exit_1():
    code, out, _ = run("stability", "--input", "examples/ctangent.json", "--point", "0,0,0,1")
    assert code == 1 and "NOT_FIXED_POINT" in out


def test_abelian_germ_inconclusive(tmp_path):
    p = write(tmp_path, {"kind": "cartan_dirac", "lie_algebra": {"dim": 2, "brackets": []},
                         "metric": [["1", "0"], ["0", "1"]]})
    code, out, _ = run("stability", "--input", p, "--format", "json")
    vals = json.loads(out)["values"]
    assert code == 0 and vals["verdict"] == "INCONCLUSIVE" and vals["h2"] == 1
    assert run("stability", "--input", p, "--require-stable")[0] == 1


def test_cohomology_commands(tmp_path):
    code, out, _ = run("cohomology", "--input", "examples/cartan_dirac_su2.json", "--format", "json")
    assert json.loads(out)["values"]["dims"] == {"0": 1, "1": 0, "2": 0, "3": 1}
    code, out, _ = run("cohomology", "--input", "examples/ctangent.json", "--degree", "2", "--format", "json")
    assert json.loads(out)["values"]["dims"] == {"2": 0}
    p = write(tmp_path, {"kind": "linfty", "space": {"a": -1, "b": -1, "c": 0, "d": 0, "e": 0}, "brackets": []})
    code, out, _ = run("cohomology", "--input", p, "--format", "json")
    assert json.loads(out)["values"]["dims"] == {"-1": 2, "0": 3}


def test_flow(tmp_path):
    code, out, _ = run("flow", "--input", "examples/su2_double.json", "--mc", "eps", "--xi", "xi",
                       "--format", "json")
    vals = json.loads(out)["values"]
    assert code == 0 and vals["max_deviation"] <= 1e-6
    code, out, _ = run("flow", "--input", "examples/su2_double.json", "--mc", "eps", "--xi", "0,0,0",
                       "--format", "json")
    assert json.loads(out)["values"]["max_deviation"] == 0


def test_rectify_recovers_flow_out():
    code, out, _ = run("rectify", "--input", "examples/su2_double.json", "--subalgebra", "scalars",
                       "--xi", "xi", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["status"] == "ok"
    assert data["values"]["ev_residual"] <= 1e-8
    xi = [0.05, -0.04, 0.03]
    assert data["values"]["v"] == pytest.approx([-x for x in xi], abs=1e-8)


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("DIRAC_STAB_SEED", "17")
    code, out, _ = run("verify", "--input", "examples/ctangent.json", "--format", "json")
    assert json.loads(out)["seed"] == 17
    code, out, _ = run("verify", "--input", "examples/ctangent.json", "--format", "json", "--seed", "3")
    assert json.loads(out)["seed"] == 3
