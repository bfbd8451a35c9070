"""Plain-text scene files.

Format by example::

    # bakery
    [variables]
    x y z

    [surfaces]
    S1 factor   = (x - 1)^2 + (y + 4)^2 + (z - 5)^2 - 4
    P  receiver = 2*(y + 3)^2 - 2*(x - 5)^2 - 25*(z + 7)

    [lights]
    L = [-1, -2, 10]          # affine by default
    D homogeneous = [0, 0, 1, 0]

    [camera]
    d = -6

    [grid]
    box = [-2, 4] [-7, -1] [2, 8]
    resolution = 48

Sections may appear in any order; `camera` and `grid` are optional.
Expressions follow the polynomial grammar (exact decimals, no implicit
multiplication).
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .expr import ExpressionError, parse_expression
from .poly import VariableSpace
from .scene import (GridBox, Hypersurface, LightSource, PerspectiveCamera,
                    SceneDescription)

_SECTIONS = ("variables", "surfaces", "lights", "camera", "grid")


class SceneFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _strip_comment(text: str) -> str:
    return text.split("#", 1)[0].rstrip()


_NUMBER = r"[+-]?(?:\d+(?:\.\d+)?|\.\d+)(?:/\d+)?"


def _rational(tok: str, ln: int) -> Fraction:
    try:
        if "/" in tok:
            num, den = tok.split("/")
            return Fraction(num) / Fraction(den)
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise SceneFileError(f"bad number {tok!r}", ln) from None


def _vector(text: str, ln: int) -> tuple[Fraction, ...]:
    m = re.fullmatch(r"\s*\[(.*)\]\s*", text)
    if not m:
        raise SceneFileError("expected a bracketed coordinate list like [1, -2, 10]", ln)
    parts = [p.strip() for p in m.group(1).split(",")]
    if not all(parts):
        raise SceneFileError("empty coordinate", ln)
    return tuple(_rational(p, ln) for p in parts)


def parse_scene_text(text: str, name: str = "scene") -> SceneDescription:
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            current = m.group(1).lower()
            if current not in _SECTIONS:
                raise SceneFileError(f"unknown section [{current}]", ln)
            sections.setdefault(current, [])
            continue
        if current is None:
            raise SceneFileError("content before the first [section] header", ln)
        sections[current].append((ln, line))

    if "variables" not in sections or not sections["variables"]:
        raise SceneFileError("missing [variables] section")
    names: list[str] = []
    for ln, line in sections["variables"]:
        for tok in line.replace(",", " ").split():
            if not tok.isidentifier():
                raise SceneFileError(f"bad variable name {tok!r}", ln)
            if tok in names:
                raise SceneFileError(f"variable {tok!r} declared twice", ln)
            names.append(tok)
    space = VariableSpace(tuple(names))

    factors: list[Hypersurface] = []
    receivers: list[Hypersurface] = []
    if "surfaces" not in sections or not sections["surfaces"]:
        raise SceneFileError("missing [surfaces] section")
    for ln, line in sections["surfaces"]:
        m = re.fullmatch(r"(\w+)\s+(factor|receiver)\s*=\s*(.+)", line)
        if not m:
            raise SceneFileError(
                "expected `<name> factor|receiver = <expression>`", ln)
        sname, role, expr = m.groups()
        try:
            poly = parse_expression(expr, space, line_offset=ln)
        except ExpressionError as exc:
            raise SceneFileError(f"in surface {sname!r}: {exc}", ln) from None
        surf = Hypersurface(name=sname, poly=poly)
        (factors if role == "factor" else receivers).append(surf)

    lights: list[LightSource] = []
    for ln, line in sections.get("lights", []):
        m = re.fullmatch(r"(\w+)(\s+homogeneous)?\s*=\s*(\[.*\])", line)
        if not m:
            raise SceneFileError("expected `<name> [homogeneous] = [c1, c2, ...]`", ln)
        lname, hom, vec = m.groups()
        coords = _vector(vec, ln)
        want = space.dimension + (1 if hom else 0)
        if len(coords) != want:
            raise SceneFileError(
                f"light {lname!r} needs {want} coordinates, got {len(coords)}", ln)
        lights.append(LightSource.homogeneous(coords, lname) if hom
                      else LightSource.affine(coords, lname))

    camera = None
    for ln, line in sections.get("camera", []):
        m = re.fullmatch(r"d\s*=\s*(%s)" % _NUMBER, line)
        if not m:
            raise SceneFileError("expected `d = <number>`", ln)
        camera = PerspectiveCamera(d=_rational(m.group(1), ln))

    grid = None
    box: tuple[tuple[Fraction, Fraction], ...] | None = None
    res = 96
    for ln, line in sections.get("grid", []):
        if line.startswith("box"):
            m = re.fullmatch(r"box\s*=\s*(.+)", line)
            pairs = re.findall(r"\[([^\]]*)\]", m.group(1)) if m else []
            if not pairs:
                raise SceneFileError("expected `box = [lo, hi] [lo, hi] ...`", ln)
            out = []
            for p in pairs:
                nums = [x.strip() for x in p.split(",")]
                if len(nums) != 2:
                    raise SceneFileError("each box axis needs [lo, hi]", ln)
                lo, hi = _rational(nums[0], ln), _rational(nums[1], ln)
                if not lo < hi:
                    raise SceneFileError("box axis needs lo < hi", ln)
                out.append((lo, hi))
            box = tuple(out)
        elif line.startswith("resolution"):
            m = re.fullmatch(r"resolution\s*=\s*(\d+)", line)
            if not m:
                raise SceneFileError("expected `resolution = <integer>`", ln)
            res = int(m.group(1))
        else:
            raise SceneFileError("unknown grid entry (want box/resolution)", ln)
    if box is not None:
        grid = GridBox(bounds=box, resolution=res)

    try:
        return SceneDescription(factors=tuple(factors), receivers=tuple(receivers),
                                lights=tuple(lights), camera=camera, grid=grid,
                                name=name)
    except ValueError as exc:
        raise SceneFileError(str(exc)) from None


def load_scene(path) -> SceneDescription:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneFileError(f"cannot read scene file {path}: {exc}") from None
    return parse_scene_text(text, name=p.stem)
