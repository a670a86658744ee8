"""Command-line front end.

Exit codes: 0 success, 1 a check or verdict came out negative, 2 malformed
input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bodies as B
from .characteristics import (
    FlowDriftError,
    capacity_estimate,
    integrate_characteristic,
    isoperimetric_report,
    planar_characteristic_report,
    section_body,
    section_duality_check,
)
from .curves import SampledCurve
from .duality import dual_body, dual_body_result, dual_gauge_eval, polar_body
from .gauge import Line, distance, gauge_eval, point_line_distance
from .isometry import AffineMap, check_gauge_isometry, linear_equivalence_search_2d
from .laws import SUITES, run_suite
from .orthogonality import is_orthogonal
from .svg import render_svg
from .symplectic import PlaneSubspace, SymplecticForm, form_from_json, form_to_json, project_onto_plane, plane_coordinates

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class InputError(Exception):
    pass


def default_eps() -> float:
    raw = os.environ.get("GAUGEKIT_EPS")
    if raw is None:
        return B.DEFAULT_EPS
    try:
        eps = float(raw)
    except ValueError:
        raise InputError(f"GAUGEKIT_EPS is not a number: {raw!r}") from None
    if not eps > 0:
        raise InputError("GAUGEKIT_EPS must be positive")
    return eps


# -- parsing helpers ----------------------------------------------------------

def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None


def load_body(path: str):
    try:
        return B.body_from_json(_load_json(path))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"{path}: not a body description ({exc!r})") from None


def parse_form(text: str, dim: int) -> SymplecticForm:
    """'det', 'standard', a JSON literal or a path to a JSON file."""
    if os.path.exists(text):
        spec = _load_json(text)
    elif text.lstrip().startswith(("{", "[")):
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed form JSON ({exc})") from None
    else:
        spec = text
    if isinstance(spec, list):
        spec = {"matrix": spec}
    omega = form_from_json(spec, dim)
    if omega.dim != dim:
        raise InputError(f"form acts on R^{omega.dim} but the body lives in R^{dim}")
    return omega


def parse_vector(text: str, dim: int | None = None) -> np.ndarray:
    try:
        v = np.array([float(s) for s in text.split(",")])
    except ValueError:
        raise InputError(f"not a comma-separated vector: {text!r}") from None
    if dim is not None and len(v) != dim:
        raise InputError(f"expected {dim} coordinates, got {len(v)}")
    return v


def parse_plane(text: str, dim: int) -> PlaneSubspace:
    parts = text.split(";")
    if len(parts) != 2:
        raise InputError("plane must be given as 'u;v'")
    return PlaneSubspace(parse_vector(parts[0], dim), parse_vector(parts[1], dim))


def load_curve(path: str, dim: int) -> SampledCurve:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            return SampledCurve.from_json(json.loads(text))
        except (json.JSONDecodeError, KeyError) as exc:
            raise InputError(f"{path}: malformed curve JSON ({exc})") from None
    return SampledCurve.from_csv(text, dim=dim)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def emit(obj) -> None:
    # float repr is the shortest string that round-trips, so reports are bit-stable
    print(json.dumps(_plain(obj), indent=2))


# -- commands -------------------------------------------------------------------

def cmd_gauge(args):
    body = load_body(args.body)
    if args.action == "eval":
        emit({"value": gauge_eval(body, parse_vector(args.point, body.dim))})
    elif args.action == "distance":
        emit({"distance": distance(body, parse_vector(args.x, body.dim), parse_vector(args.y, body.dim))})
    else:
        line = Line(parse_vector(args.line_point, body.dim), parse_vector(args.line_direction, body.dim))
        value, foot = point_line_distance(body, parse_vector(args.point, body.dim), line)
        emit({"distance": value, "foot": foot})
    return EXIT_OK


def cmd_polar(args):
    body = load_body(args.body)
    emit({"body": B.body_to_json(polar_body(body)),
          "metadata": {"source": args.body, "kind": "polar", "coordinates": "covector"}})
    return EXIT_OK


def cmd_dual(args):
    body = load_body(args.body)
    omega = parse_form(args.form, body.dim)
    if args.action == "body":
        res = dual_body_result(body, omega, source_id=args.body, form_id=args.form)
        out = B.body_to_json(res.body)
        if body.dim == 2 and not isinstance(res.body, B.SmoothBody):
            out["vertices"] = B.polygon_vertices(res.body)
        emit({"body": out, "metadata": {"kind": "symplectic dual", **res.provenance,
                                        "form_matrix": form_to_json(omega)["matrix"]}})
    else:
        emit({"value": dual_gauge_eval(body, omega, parse_vector(args.point, body.dim))})
    return EXIT_OK


def cmd_ortho(args):
    body = load_body(args.body)
    rep = is_orthogonal(body, parse_vector(args.x, body.dim), parse_vector(args.y, body.dim), args.tol)
    emit(rep.to_json())
    return EXIT_OK if rep.is_orthogonal else EXIT_CHECK


def cmd_isometry(args):
    k1, k2 = load_body(args.body1), load_body(args.body2)
    if args.action == "check":
        try:
            t = AffineMap.from_json(_load_json(args.map))
        except KeyError as exc:
            raise InputError(f"{args.map}: missing field {exc}") from None
        ok, reason = check_gauge_isometry(t, k1, k2, args.tol if args.tol is not None else default_eps())
        emit({"isometry": ok, "reason": reason})
        return EXIT_OK if ok else EXIT_CHECK
    found = linear_equivalence_search_2d(k1, k2)
    emit({"map": None if found is None else found.to_json()})
    return EXIT_OK if found is not None else EXIT_CHECK


def cmd_char(args):
    body = load_body(args.body)
    omega = parse_form(args.form, body.dim)
    if args.action == "flow":
        res = integrate_characteristic(body, omega, parse_vector(args.start, body.dim), step=args.step,
                                       max_time=args.max_time, closure_tol=args.closure_tol)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(res.curve.to_csv())
        emit(res.to_json())
        return EXIT_OK
    if args.action == "capacity":
        starts = None
        if args.starts_file:
            starts = np.atleast_2d(np.array(_load_json(args.starts_file), dtype=float))
        est = capacity_estimate(body, omega, starts, step=args.step, max_time=args.max_time)
        emit(est.to_json())
        return EXIT_OK if est.capacity is not None else EXIT_CHECK
    rep = isoperimetric_report(body, omega, load_curve(args.curve, body.dim))
    emit({"area": rep.area, "dual_length": rep.dual_length, "ratio": rep.ratio})
    return EXIT_OK


def cmd_section(args):
    body = load_body(args.body)
    plane = parse_plane(args.plane, body.dim)
    if args.action == "body":
        emit({"body": B.body_to_json(section_body(body, plane)), "metadata": {"plane": args.plane}})
        return EXIT_OK
    omega = parse_form(args.form, body.dim)
    if args.action == "check":
        lhs, rhs, gap = section_duality_check(body, omega, plane)
        emit({"lhs": B.body_to_json(lhs), "rhs": B.body_to_json(rhs), "hausdorff": gap, "tolerance": args.tol})
        return EXIT_OK if gap <= args.tol else EXIT_CHECK
    rep = planar_characteristic_report(body, omega, plane, args.tol)
    consistent = rep.planar == (rep.flow_out_of_plane <= 1e-6)
    emit({"planar_characteristic": rep.planar, "support_gap": rep.support_gap,
          "flow_out_of_plane": rep.flow_out_of_plane, "flow_agrees": consistent})
    if not consistent:
        return EXIT_NUMERIC
    return EXIT_OK if rep.planar else EXIT_CHECK


def cmd_laws(args):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))} or all")
    reports = [run_suite(n, args.seed) for n in names]
    for rep in reports:
        for c in rep.checks:
            print(c.summary(), file=sys.stderr)
    emit({"seed": args.seed, "passed": all(r.passed for r in reports), "suites": [r.to_json() for r in reports]})
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


def cmd_render(args):
    body = load_body(args.body)
    plane = None
    if body.dim != 2:
        if not args.plane:
            raise InputError("bodies in dimension > 2 need --plane to be sectioned")
        plane = parse_plane(args.plane, body.dim)
    items = [((section_body(body, plane) if plane else body), "K")]
    omega = parse_form(args.form, body.dim) if args.form else None
    if plane is not None and omega is not None:
        omega_y = omega.restricted(plane)
    else:
        omega_y = omega
    if args.polar:
        items.append((polar_body(items[0][0]), "K° (covector coordinates)"))
    if args.dual:
        if omega is None:
            raise InputError("--dual needs --form")
        items.append((dual_body(items[0][0], omega_y), "K^w"))
    curves = []
    if args.curve:
        c = load_curve(args.curve, body.dim)
        pts = c.points if plane is None else plane_coordinates(omega, plane, project_onto_plane(omega, plane, c.points))
        curves.append((pts, "curve"))
    render_svg(items, curves, args.out)
    print(args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaugekit", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gauge", help="evaluate gauges and distances")
    g.add_argument("action", choices=["eval", "distance", "pointline"])
    g.add_argument("--body", required=True)
    g.add_argument("--point")
    g.add_argument("--x")
    g.add_argument("--y")
    g.add_argument("--line-point")
    g.add_argument("--line-direction")
    g.set_defaults(func=cmd_gauge, needs=lambda a: {"eval": ["point"], "distance": ["x", "y"],
                                                   "pointline": ["point", "line_point", "line_direction"]}[a.action])

    q = sub.add_parser("polar", help="polar body")
    q.add_argument("--body", required=True)
    q.set_defaults(func=cmd_polar)

    d = sub.add_parser("dual", help="symplectic dual body or gauge")
    d.add_argument("action", choices=["body", "gauge"])
    d.add_argument("--body", required=True)
    d.add_argument("--form", default="standard")
    d.add_argument("--point")
    d.set_defaults(func=cmd_dual, needs=lambda a: ["point"] if a.action == "gauge" else [])

    o = sub.add_parser("ortho", help="orthogonality x -| y")
    o.add_argument("action", choices=["check"])
    o.add_argument("--body", required=True)
    o.add_argument("--x", required=True)
    o.add_argument("--y", required=True)
    o.add_argument("--tol", type=float, default=1e-8)
    o.set_defaults(func=cmd_ortho)

    i = sub.add_parser("isometry", help="gauge isometries")
    i.add_argument("action", choices=["check", "search"])
    i.add_argument("--map")
    i.add_argument("--body1", required=True)
    i.add_argument("--body2", required=True)
    i.add_argument("--tol", type=float)
    i.set_defaults(func=cmd_isometry, needs=lambda a: ["map"] if a.action == "check" else [])

    c = sub.add_parser("char", help="characteristic flows")
    c.add_argument("action", choices=["flow", "capacity", "iso"])
    c.add_argument("--body", required=True)
    c.add_argument("--form", default="standard")
    c.add_argument("--start")
    c.add_argument("--starts-file")
    c.add_argument("--curve")
    c.add_argument("--step", type=float, default=1e-3)
    c.add_argument("--max-time", type=float, default=100.0)
    c.add_argument("--closure-tol", type=float, default=1e-6)
    c.add_argument("--csv", help="write flow samples to this CSV file")
    c.set_defaults(func=cmd_char, needs=lambda a: {"flow": ["start"], "capacity": [], "iso": ["curve"]}[a.action])

    s = sub.add_parser("section", help="planar sections")
    s.add_argument("action", choices=["body", "check", "planar"])
    s.add_argument("--body", required=True)
    s.add_argument("--plane", required=True, help="'u;v' with comma-separated coordinates")
    s.add_argument("--form", default="standard")
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_section)

    lw = sub.add_parser("laws", help="seeded property suites")
    lw.add_argument("action", choices=["run"])
    lw.add_argument("--suite", default="all")
    lw.add_argument("--seed", type=int, default=0)
    lw.set_defaults(func=cmd_laws)

    r = sub.add_parser("render", help="SVG figure of a body with its polar and dual")
    r.add_argument("--body", required=True)
    r.add_argument("--form")
    r.add_argument("--polar", action="store_true")
    r.add_argument("--dual", action="store_true")
    r.add_argument("--plane")
    r.add_argument("--curve")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    missing = [n for n in getattr(args, "needs", lambda a: [])(args) if getattr(args, n) is None]
    if missing:
        parser.error(f"{args.command} {args.action} needs --{missing[0].replace('_', '-')}")
    try:
        default_eps()
        return args.func(args)
    except (InputError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (FlowDriftError, RuntimeError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
