"""Static SVG figures of planar bodies and curves."""

from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

from .bodies import ConvexBody, SmoothBody, polygon_vertices

PALETTE = ["black", "red", "green", "blue", "orange", "purple"]
SIZE = 480
MARGIN = 0.15


def body_outline(body: ConvexBody, samples: int = 256) -> np.ndarray:
    """Boundary points in counterclockwise order; exact vertices for polygons."""
    if body.dim != 2:
        raise ValueError("only planar bodies can be drawn; take a section first")
    if isinstance(body, SmoothBody):
        th = 2 * np.pi * np.arange(samples) / samples
        d = np.column_stack([np.cos(th), np.sin(th)])
        return d / body.gauge(d)[:, None]
    return polygon_vertices(body)


def orientation(points) -> str:
    p = np.asarray(points, dtype=float)
    area = 0.5 * np.sum(p[:, 0] * np.roll(p[:, 1], -1) - np.roll(p[:, 0], -1) * p[:, 1])
    return "counterclockwise" if area > 0 else "clockwise"


def _fmt(points) -> str:
    return " ".join(f"{x:.6f},{y:.6f}" for x, y in points)


def render_svg(bodies=(), curves=(), out=None) -> str:
    """Draw (body, label) pairs and (points, label) curves; return the SVG text.

    Drawing units are the coordinates themselves inside a y-flipped group, so
    point lists in the file are the geometric coordinates to 6 decimals.
    Curve labels carry their orientation, since positive parametrization under
    det is clockwise.
    """
    shapes = []
    for i, (body, label) in enumerate(bodies):
        shapes.append(("polygon", body_outline(body), label, PALETTE[i % len(PALETTE)]))
    for j, (pts, label) in enumerate(curves):
        pts = np.asarray(pts, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("curves must be planar; project them onto a plane first")
        color = PALETTE[(len(shapes) + j) % len(PALETTE)]
        shapes.append(("polyline", pts, f"{label} ({orientation(pts)})", color))
    if not shapes:
        raise ValueError("nothing to draw")

    extent = max(float(np.max(np.abs(s[1]))) for s in shapes) * (1 + MARGIN)
    scale = SIZE / (2 * extent)
    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(SIZE),
                      height=str(SIZE + 24 * len(shapes)),
                      viewBox=f"0 0 {SIZE} {SIZE + 24 * len(shapes)}")
    g = ET.SubElement(root, "g", transform=f"translate({SIZE / 2:.6f},{SIZE / 2:.6f}) "
                                          f"scale({scale:.6f},{-scale:.6f})")
    line = {"stroke": "gray", "vector-effect": "non-scaling-stroke", "stroke-width": "0.5"}
    ET.SubElement(g, "line", x1=f"{-extent:.6f}", y1="0", x2=f"{extent:.6f}", y2="0", **line)
    ET.SubElement(g, "line", x1="0", y1=f"{-extent:.6f}", x2="0", y2=f"{extent:.6f}", **line)
    # unit scale marker along the bottom
    y_bar = -0.9 * extent
    ET.SubElement(g, "line", x1=f"{-0.9 * extent:.6f}", y1=f"{y_bar:.6f}",
                  x2=f"{-0.9 * extent + 1:.6f}", y2=f"{y_bar:.6f}", id="unit-marker",
                  stroke="black", **{"stroke-width": "2", "vector-effect": "non-scaling-stroke"})
    for kind, pts, label, color in shapes:
        ET.SubElement(g, kind, points=_fmt(pts), fill="none", stroke=color,
                      **{"stroke-width": "1.5", "vector-effect": "non-scaling-stroke",
                         "data-label": label})
    text_y = (SIZE / 2) - (y_bar * scale) - 6
    ET.SubElement(root, "text", x=f"{SIZE / 2 - 0.9 * extent * scale:.6f}", y=f"{text_y:.6f}",
                  **{"font-size": "12"}).text = "1"
    legend = ET.SubElement(root, "g", id="legend")
    for k, (_, _, label, color) in enumerate(shapes):
        y = SIZE + 16 + 24 * k
        ET.SubElement(legend, "rect", x="10", y=f"{y - 10}", width="12", height="12", fill=color)
        ET.SubElement(legend, "text", x="30", y=f"{y}", **{"font-size": "14"}).text = label
    text = ET.tostring(root, encoding="unicode")
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
