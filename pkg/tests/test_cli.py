import io
import json
import subprocess
import sys


from localcoeff import models, schema
from localcoeff.cli import main, run
from localcoeff.groupring import FiniteGroup, GroupRingModule


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code, report = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def json_call(*argv):
    code, out, err = call("--format", "json", *argv)
    assert code == 0, err
    return json.loads(out)


def test_homology_and_cohomology():
    r = json_call("homology", "--N", "5", "--q", "5")
    assert r["dims"] == [1, 0, 0, 0, 0, 1]
    r = json_call("cohomology", "--N", "4", "--q", "5", "--coeff", "sign")
    assert r["dims"] == [0, 0, 0, 0, 1]
    r = json_call("eilenberg-ss", "--model", "k-pi-1", "--n", "3", "--L", "5", "--q", "3", "--cohomology")
    assert r["dims"][:5] == [1, 1, 1, 1, 1]


def test_file_inputs(tmp_path):
    x = tmp_path / "x.json"
    x.write_text(schema.dumps(models.sphere_antipodal(3, 7)))
    m = tmp_path / "m.json"
    m.write_text(schema.dumps(GroupRingModule.sign(FiniteGroup.cyclic(2), 7)))
    r = json_call("homology", "--input", str(x), "--module", str(m), "--q", "7")
    # twisted boundaries 2, 0, 2 kill everything
    assert r["dims"] == [0, 0, 0, 0]
    code, _, err = call("homology", "--input", str(m))
    assert code == 2 and "complex" in err


def test_bo2_report():
    r = json_call("bo2", "--p", "3", "--tmax", "12")
    assert r["nonequivariant"]["dims"] == [1 if n % 4 == 0 else 0 for n in range(13)]
    assert r["fixed_matches_sign_rule"] and r["equivariant_collapses"] and r["decomposition_passed"]
    assert set(r["fixed_basis"]) >= {"1", "D2", "D1C"}


def test_other_commands():
    assert json_call("burnside", "--n", "3")["hom_ranks"] == [[3, 1], [1, 2]]
    assert json_call("box", "--n", "3", "--q", "7")["box_dims"] == [1, 2]
    assert json_call("box", "--n", "3", "--q", "7", "--right", "zero")["box_dims"] == [0, 0]
    assert json_call("omega", "--p", "5", "--jmax", "5")["omega_p_is_regular"]
    assert json_call("fixed-basis", "--p", "3", "--max-total", "2")["fixed_basis"] == ["1", "D2", "D1C", "C^2"]
    assert all(d["verified"] for d in json_call("decompose", "--N", "3")["degrees"])
    r = json_call("eq-eilenberg-ss", "--label", "D1C", "D1")
    assert r["dims"][0] == 1
    assert json_call("serre-e2", "--tmax", "8")["total"] == [1, 0, 0, 0, 1, 0, 0, 0, 1]


def test_exit_codes():
    assert call("bo2", "--p", "3", "--q", "3")[0] == 1
    assert call("homology", "--N", "-1")[0] == 1
    assert call("omega", "--p", "4")[0] == 1
    assert call("homology", "--bogus")[0] == 2
    assert call()[0] == 2
    assert call("box", "--right", "representable:9")[0] == 2
    assert call("homology", "--input", "/nonexistent/file.json")[0] == 2


def test_table_output_and_determinism():
    code, a, _ = call("bo2", "--p", "3", "--tmax", "8")
    _, b, _ = call("bo2", "--p", "3", "--tmax", "8")
    assert code == 0 and a == b and "fixed_basis: 1 D2 D1C" in a
    _, ja, _ = call("--format", "json", "omega", "--p", "7")
    _, jb, _ = call("omega", "--p", "7", "--format", "json")
    assert ja == jb


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "localcoeff", "--format", "json", "omega", "--p", "3", "--jmax", "2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["p"] == 3
    assert main(["omega", "--p", "3", "--jmax", "1"]) == 0


def test_json_report_round_trips():
    for argv in (["bo2", "--p", "3", "--tmax", "8"], ["burnside", "--n", "3"], ["omega", "--p", "5"],
                 ["eq-eilenberg-ss", "--coeff", "sign"], ["homology", "--N", "3"]):
        out = io.StringIO()
        code, report = run(["--format", "json"] + argv, out, io.StringIO())
        assert code == 0 and json.loads(out.getvalue()) == report
