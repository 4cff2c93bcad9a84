import json

import pytest

from curvature_locus import cli


@pytest.fixture
def net_file(tmp_path):
    def write(q1, q2, q3, wrap=False):
        data = {"q1": q1, "q2": q2, "q3": q3}
        path = tmp_path / "net.json"
        path.write_text(json.dumps({"net": data} if wrap else data))
        return str(path)

    return write


def _run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_classify(capsys, net_file):
    code, rep = _run(capsys, ["classify", "--net", net_file("2*x*y", "2*x*z", "z^2")])
    assert code == 0
    assert rep["schema"] == "locus-report/1" and rep["kind"] == "Type5"
    assert sorted(l["multiplicity"] for l in rep["lines"]) == [1, 1, 2, 2]
    assert {tuple(l["direction"]) for l in rep["lines"]} >= {("1", "1", "0"), ("0", "0", "1")}


def test_classify_wrapped_coefficients(capsys, net_file):
    path = net_file([0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], wrap=True)
    code, rep = _run(capsys, ["classify", "--net", path])
    assert code == 0 and rep["kind"] == "RomanSteiner"


def test_classify_with_constraint(capsys, net_file):
    code, rep = _run(capsys, ["classify", "--net", net_file("x*y", "x*z", "y*z"), "--constraint", "x^2+4*y^2+(x+z)^2"])
    assert code == 0 and rep["constraint"] == "2*x^2 + 2*x*z + 4*y^2 + z^2"


def test_classify_rejects_indefinite(capsys, net_file):
    code, rep = _run(capsys, ["classify", "--net", net_file("x*y", "x*z", "y*z"), "--constraint", "x^2-y^2+z^2"])
    assert code == 1 and "positive definite" in rep["error"]


def test_complex_lines_marked_approx(capsys, net_file):
    code, rep = _run(capsys, ["classify", "--net", net_file("2*x*z+y^2", "2*y*z", "-x^2-2*z^2")])
    assert rep["kind"] == "CrossCapSurface"
    cplx = [l for l in rep["lines"] if l["reality"] == "complex-pair"]
    assert len(cplx) == 2 and all(l["approx"] for l in cplx)


def test_bad_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    code = cli.main(["classify", "--net", str(path)])
    captured = capsys.readouterr()
    assert code == 1 and "invalid JSON" in json.loads(captured.out)["error"]
    assert captured.err.startswith("error:")


def test_missing_field(capsys, tmp_path):
    path = tmp_path / "n.json"
    path.write_text(json.dumps({"q1": "x^2", "q2": "y^2"}))
    code, rep = _run(capsys, ["classify", "--net", str(path)])
    assert code == 1 and "q3" in rep["error"]


def test_missing_file(capsys, tmp_path):
    code, rep = _run(capsys, ["classify", "--net", str(tmp_path / "none.json")])
    assert code == 1 and "cannot read" in rep["error"]


def test_degenerate_exit(capsys, net_file, monkeypatch):
    from curvature_locus.classifier import LocusClassification

    monkeypatch.setattr(cli, "classify_regular", lambda *a, **k: LocusClassification("Degenerate", None, True, ("x",)))
    code, rep = _run(capsys, ["classify", "--net", net_file("x*y", "x*z", "y*z")])
    assert code == 2 and rep["kind"] == "Degenerate" and rep["decomposition"] is None


def test_project(capsys, net_file):
    code, rep = _run(capsys, ["project", "--net", net_file("x^2/2-y^2/2", "x*z", "y*z"), "--direction", "0,1,0"])
    assert code == 0
    assert rep["asymptotic"] and rep["finite_cc"] == 5 and rep["at_infinity"] == 1
    assert rep["label"] == "5 CC"


def test_project_bad_direction(capsys, net_file):
    code, rep = _run(capsys, ["project", "--net", net_file("x^2", "y^2", "z^2"), "--direction", "1,1,1"])
    assert code == 1 and "unit" in rep["error"]


def test_orbit(capsys):
    code, rep = _run(capsys, ["orbit", "--name", "H"])
    assert code == 0 and rep["kind"] == "Type6" and rep["table_singular_kinds"] == ["2 DTCC"]
    code, rep = _run(capsys, ["orbit", "--name", "F_a", "--form", "CrossCapSurface"])
    assert rep["kind"] == "CrossCapSurface"


def test_orbit_family_region(capsys):
    code, rep = _run(capsys, ["orbit", "--name", "A_c"])
    assert "region" in rep and rep["region"]["orbit"] == "A_c"


def test_orbit_unknown(capsys):
    code, rep = _run(capsys, ["orbit", "--name", "Q"])
    assert code == 1 and "unknown orbit" in rep["error"]


def test_orbit_unknown_form(capsys):
    code, rep = _run(capsys, ["orbit", "--name", "H", "--form", "RomanSteiner"])
    assert code == 1


def test_verify_tables_exit_code(capsys):
    code, rep = _run(capsys, ["verify-tables", "--trials", "0"])
    assert code == 3
    assert any(v.get("orbit") == "D_a" for v in rep["violations"])


def test_mesh(capsys, net_file, tmp_path):
    out = tmp_path / "m.obj"
    code, rep = _run(capsys, ["mesh", "--net", net_file("x*y", "x*z", "y*z"), "--output", str(out), "--samples", "8"])
    assert code == 0 and rep["vertices"] == 81 and rep["faces"] == 128
    assert out.read_text().count("\n") == 81 + 128


def test_mesh_bad_samples(capsys, net_file, tmp_path):
    code, rep = _run(capsys, ["mesh", "--net", net_file("x*y", "x*z", "y*z"), "--output", str(tmp_path / "m"), "--samples", "2"])
    assert code == 1


def test_tolerance_from_env(capsys, net_file, monkeypatch):
    monkeypatch.setenv(cli.TOL_ENV, "1e-7")
    code, rep = _run(capsys, ["classify", "--net", net_file("x*y", "x*z", "y*z")])
    assert rep["tolerance"] == 1e-7
    monkeypatch.setenv(cli.TOL_ENV, "abc")
    code, rep = _run(capsys, ["classify", "--net", net_file("x*y", "x*z", "y*z")])
    assert code == 1


def test_report_file(net_file, tmp_path):
    dest = tmp_path / "r.json"
    assert cli.main(["classify", "--net", net_file("x*y", "x*z", "y*z"), "--report", str(dest)]) == 0
    assert json.loads(dest.read_text())["kind"] == "RomanSteiner"


def test_config_validation():
    with pytest.raises(cli.InputError):
        cli.RunConfig("project", net_path="a.json").validate()
    with pytest.raises(cli.InputError):
        cli.RunConfig("classify", net_path="a.json", tolerance=0).validate()
    rep, code = cli.run(cli.RunConfig("nonsense"))
    assert code == 1


def test_figure(capsys, net_file, tmp_path):
    fig = tmp_path / "f.png"
    code, rep = _run(capsys, ["classify", "--net", net_file("x*y", "x*z", "y*z"), "--figure", str(fig)])
    assert code == 0 and fig.stat().st_size > 0
