import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from gaugekit.bodies import SmoothBody, disk, triangle
from gaugekit.duality import dual_body, polar_body
from gaugekit.svg import orientation, render_svg
from gaugekit.symplectic import determinant_form

NS = "{http://www.w3.org/2000/svg}"


def test_triangle_figure(tmp_path):
    k = triangle()
    det = determinant_form()
    out = tmp_path / "fig.svg"
    text = render_svg([(k, "K"), (polar_body(k), "K polar"), (dual_body(k, det), "K dual")], out=out)
    root = ET.fromstring(out.read_text())
    assert root.tag == NS + "svg"
    polys = root.findall(f".//{NS}polygon")
    assert len(polys) == 3
    assert "0.000000,2.000000" in polys[0].get("points")
    assert "-0.866025,0.500000" in polys[1].get("points")
    assert "-1.000000,0.000000" in polys[2].get("points") or "-1.000000,-0.000000" in polys[2].get("points")
    assert root.find(f".//{NS}*[@id='unit-marker']") is not None
    legend = [t.text for t in root.findall(f".//{NS}g[@id='legend']/{NS}text")]
    assert legend == ["K", "K polar", "K dual"]
    assert re.search(r"scale\([0-9.]+,-[0-9.]+\)", text)


def test_disk_and_dual_coincide():
    text = render_svg([(disk(), "disk"), (dual_body(disk(), determinant_form()), "dual")])
    polys = ET.fromstring(text).findall(f".//{NS}polygon")
    assert polys[0].get("points") == polys[1].get("points")


def test_curve_overlay_labels_orientation():
    t = np.linspace(0, 2 * np.pi, 100)
    cw = np.column_stack([np.cos(t), -np.sin(t)])
    assert orientation(cw) == "clockwise"
    text = render_svg([(disk(), "K")], [(cw, "flow")])
    assert "flow (clockwise)" in text


def test_rejects_non_planar():
    with pytest.raises(ValueError):
        render_svg([(SmoothBody.ellipsoid([1, 2]), "E")])
    with pytest.raises(ValueError):
        render_svg([], [(np.zeros((5, 4)), "c")])
