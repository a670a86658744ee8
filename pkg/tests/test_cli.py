import json

import numpy as np
import pytest

from gaugekit.cli import main

S3 = np.sqrt(3.0)


@pytest.fixture
def files(tmp_path):
    tri = tmp_path / "triangle.json"
    tri.write_text(json.dumps({"type": "vpolytope", "vertices": [[0, 2], [S3, -1], [-S3, -1]]}))
    ell = tmp_path / "e.json"
    ell.write_text(json.dumps({"type": "ellipsoid", "radii": [1, 2]}))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    return tmp_path, tri, ell, bad


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def test_gauge_eval(files, capsys):
    _, tri, _, _ = files
    code, out = run(capsys, "gauge", "eval", "--body", tri, "--point", "0,-2")
    assert code == 0 and json.loads(out)["value"] == pytest.approx(2.0)


def test_gauge_distance_and_pointline(files, capsys):
    _, tri, _, _ = files
    code, out = run(capsys, "gauge", "distance", "--body", tri, "--x", "0,2", "--y", "0,0")
    assert json.loads(out)["distance"] == pytest.approx(2.0)
    code, out = run(capsys, "gauge", "pointline", "--body", tri, "--point", "0,0",
                    "--line-point", "0,3", "--line-direction", "1,0")
    assert json.loads(out)["distance"] == pytest.approx(1.5)


def test_dual_body_det(files, capsys):
    _, tri, _, _ = files
    code, out = run(capsys, "dual", "body", "--body", tri, "--form", "det")
    data = json.loads(out)
    verts = np.array(data["body"]["vertices"])
    expect = np.array([[-1, 0], [0.5, -S3 / 2], [0.5, S3 / 2]])
    assert np.abs(verts[:, None] - expect[None]).sum(-1).min(1).max() < 1e-9
    assert data["metadata"]["form"] == "det"


def test_polar_and_dual_gauge(files, capsys):
    _, tri, _, _ = files
    code, out = run(capsys, "polar", "--body", tri)
    assert code == 0 and json.loads(out)["body"]["type"] == "hpolytope"
    code, out = run(capsys, "dual", "gauge", "--body", tri, "--form", "det", "--point", "1,0")
    assert json.loads(out)["value"] == pytest.approx(2.0)


def test_ortho_exit_codes(files, capsys):
    _, tri, _, _ = files
    assert run(capsys, "ortho", "check", "--body", tri, "--x", "0,-1", "--y", "1,0")[0] == 0
    assert run(capsys, "ortho", "check", "--body", tri, "--x", "1,0", "--y", "0,1")[0] == 1


def test_isometry_commands(files, capsys):
    tmp, tri, _, _ = files
    m = tmp / "rot.json"
    c, s = np.cos(2 * np.pi / 3), np.sin(2 * np.pi / 3)
    m.write_text(json.dumps({"linear": [[c, -s], [s, c]], "translation": [0, 0]}))
    assert run(capsys, "isometry", "check", "--map", m, "--body1", tri, "--body2", tri)[0] == 0
    shifted = tmp / "shifted.json"
    shifted.write_text(json.dumps({"type": "vpolytope", "vertices": [[0.1, 2], [S3 + 0.1, -1], [0.1 - S3, -1]]}))
    code, out = run(capsys, "isometry", "search", "--body1", tri, "--body2", shifted)
    assert code == 1 and json.loads(out)["map"] is None


def test_char_flow_and_iso(files, capsys):
    tmp, _, ell, _ = files
    csv = tmp / "flow.csv"
    code, out = run(capsys, "char", "flow", "--body", ell, "--start", "1,0,0,0", "--step", "1e-3", "--csv", csv)
    data = json.loads(out)
    assert code == 0 and data["closed"]
    assert data["period"] == pytest.approx(2 * np.pi, abs=1e-5)
    code, out = run(capsys, "char", "iso", "--body", ell, "--curve", csv)
    assert json.loads(out)["ratio"] == pytest.approx(1.0, abs=1e-5)


def test_char_capacity_with_starts(files, capsys):
    tmp, _, ell, _ = files
    starts = tmp / "starts.json"
    starts.write_text(json.dumps([[1, 0, 0, 0], [0, 0, 2, 0]]))
    code, out = run(capsys, "char", "capacity", "--body", ell, "--starts-file", starts)
    assert code == 0 and json.loads(out)["capacity"] == pytest.approx(np.pi, abs=1e-4)


def test_section_commands(files, capsys):
    _, _, ell, _ = files
    code, out = run(capsys, "section", "body", "--body", ell, "--plane", "0,0,1,0;0,0,0,1")
    assert json.loads(out)["body"]["type"] == "quadratic"
    assert run(capsys, "section", "check", "--body", ell, "--plane", "1,0,0,0;0,1,0,0")[0] == 0
    assert run(capsys, "section", "planar", "--body", ell, "--plane", "1,0,0,0;0,1,0,0")[0] == 0
    code, out = run(capsys, "section", "planar", "--body", ell,
                    "--plane", "1,0,0,0;0,0.7071067811865476,0,0.7071067811865476")
    assert code == 1 and json.loads(out)["flow_agrees"]


def test_laws_run(capsys):
    code, out = run(capsys, "laws", "run", "--suite", "bidual", "--seed", "7")
    assert code == 0 and json.loads(out)["passed"]
    assert run(capsys, "laws", "run", "--suite", "nope")[0] == 2


def test_laws_report_byte_stable(capsys):
    a = run(capsys, "laws", "run", "--suite", "triangle", "--seed", "2")[1]
    b = run(capsys, "laws", "run", "--suite", "triangle", "--seed", "2")[1]
    assert a == b


def test_render(files, capsys):
    tmp, tri, ell, _ = files
    out = tmp / "fig.svg"
    assert run(capsys, "render", "--body", tri, "--form", "det", "--polar", "--dual", "--out", out)[0] == 0
    assert out.read_text().count("<polygon") == 3
    assert run(capsys, "render", "--body", ell, "--out", out)[0] == 2


def test_malformed_input(files, capsys):
    _, tri, _, bad = files
    assert run(capsys, "gauge", "eval", "--body", bad, "--point", "1,0")[0] == 2
    assert run(capsys, "gauge", "eval", "--body", tri, "--point", "1,x")[0] == 2
    assert run(capsys, "gauge", "eval", "--body", tri, "--point", "1,0,0")[0] == 2
    assert run(capsys, "dual", "body", "--body", tri, "--form", "{oops")[0] == 2


def test_numerical_failure(files, capsys):
    _, _, ell, _ = files
    assert run(capsys, "char", "flow", "--body", ell, "--start", "1,0,0,0", "--step", "0.5")[0] == 3


def test_eps_env(files, capsys, monkeypatch):
    _, tri, _, _ = files
    monkeypatch.setenv("GAUGEKIT_EPS", "-1")
    assert run(capsys, "gauge", "eval", "--body", tri, "--point", "1,0")[0] == 2
    monkeypatch.setenv("GAUGEKIT_EPS", "1e-6")
    assert run(capsys, "gauge", "eval", "--body", tri, "--point", "1,0")[0] == 0


def test_missing_argument_is_usage_error(files):
    _, tri, _, _ = files
    with pytest.raises(SystemExit) as exc:
        main(["gauge", "eval", "--body", str(tri)])
    assert exc.value.code == 2
