"""Triangle meshes and line frames for implicit surfaces in three variables.

Marching cubes runs on double-precision grid evaluations of the exact
polynomial; a deterministic 1% sample of the generated vertices is verified
against exact rational corner signs so silent float sign loss on
high-degree polynomials aborts instead of producing a wrong mesh.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from skimage import measure

from .poly import Polynomial
from .scene import FrameEdge, GridBox, Hypersurface, LightSource, SceneDescription
from .visibility import (IlluminationClass, ShadingContext, SurfaceSample,
                         snap_to_surface)

DEGENERATE_AREA = 1e-12

CLASS_COLORS: dict[IlluminationClass, tuple[int, int, int]] = {
    IlluminationClass.ILLUMINATED: (40, 90, 235),      # blue
    IlluminationClass.POLAR_EXCLUDED: (40, 170, 60),   # green
    IlluminationClass.OCCLUDED: (220, 50, 40),         # red
    IlluminationClass.RECEIVER_SHADOW: (70, 70, 70),   # dark gray
    IlluminationClass.RECEIVER_LIT: (200, 200, 200),   # light gray
}

AXIS_COLORS = (
    (0, 160, 0),     # x: green
    (0, 110, 230),   # y: blue
    (150, 60, 200),  # z: purple
    (220, 40, 40),   # w: red
)


class MeshPrecisionError(RuntimeError):
    """Float grid signs disagreed with exact rational evaluation."""


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Sampling lattice: per-axis closed bounds and sample counts."""

    bounds: tuple[tuple[Fraction, Fraction], ...]
    resolution: tuple[int, int, int]
    max_cells: int = 2**24

    def __post_init__(self):
        bounds = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.bounds)
        if len(bounds) != 3:
            raise GridError("meshing needs three axes")
        res = self.resolution
        if isinstance(res, int):
            res = (res, res, res)
        res = tuple(int(r) for r in res)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "resolution", res)
        for lo, hi in bounds:
            if not lo < hi:
                raise GridError("each axis needs min < max")
        if any(r < 2 for r in res):
            raise GridError("resolution must be at least 2 samples per axis")
        cells = 1
        for r in res:
            cells *= r - 1
        if cells > self.max_cells:
            raise GridError(f"{cells} cells exceed the cap of {self.max_cells}")

    @classmethod
    def cube(cls, lo, hi, resolution: int) -> "GridSpec":
        b = (Fraction(lo), Fraction(hi))
        return cls(bounds=(b, b, b), resolution=(resolution,) * 3)

    @classmethod
    def from_box(cls, box: GridBox) -> "GridSpec":
        return cls(bounds=box.bounds, resolution=(box.resolution,) * 3)

    def spacing(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple((hi - lo) / (r - 1)
                     for (lo, hi), r in zip(self.bounds, self.resolution))

    def axis_points(self, k: int) -> np.ndarray:
        lo, hi = self.bounds[k]
        return np.linspace(float(lo), float(hi), self.resolution[k])


@dataclass
class ColoredMesh:
    vertices: np.ndarray                     # (n, 3) float64
    triangles: np.ndarray                    # (m, 3) int
    classes: list[IlluminationClass] | None = None
    colors: np.ndarray | None = None         # (n, 3) uint8
    warnings: tuple[str, ...] = ()

    @property
    def vertex_count(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def triangle_count(self) -> int:
        return int(self.triangles.shape[0])


def _scaled_float_coeffs(p: Polynomial) -> list[tuple[tuple[int, ...], float]]:
    # scale by the largest |coefficient| so degree-18 integer coefficients
    # cannot overflow a double; the zero set and all signs are unchanged
    cmax = max(abs(c) for c in p.terms.values())
    return [(e, float(Fraction(c) / cmax)) for e, c in p.terms.items()]


def evaluate_grid(p: Polynomial, grid: GridSpec) -> np.ndarray:
    """Sign-faithful float values of ``p`` (rescaled) on the grid lattice."""
    if p.space.dimension != 3:
        raise GridError("grid evaluation expects a polynomial in three variables")
    axes = [grid.axis_points(k) for k in range(3)]
    degs = [max((e[k] for e in p.terms), default=0) for k in range(3)]
    pows = []
    shapes = [(-1, 1, 1), (1, -1, 1), (1, 1, -1)]
    for k in range(3):
        a = axes[k].reshape(shapes[k])
        pows.append([a**e for e in range(degs[k] + 1)])
    vol = np.zeros(grid.resolution, dtype=np.float64)
    for e, c in _scaled_float_coeffs(p):
        vol += c * pows[0][e[0]] * pows[1][e[1]] * pows[2][e[2]]
    return vol


def _exact_corner(grid: GridSpec, idx: Sequence[int]) -> tuple[Fraction, ...]:
    h = grid.spacing()
    return tuple(grid.bounds[k][0] + idx[k] * h[k] for k in range(3))


def _spot_check(p: Polynomial, grid: GridSpec, volume: np.ndarray,
                verts: np.ndarray) -> None:
    """Exact-sign audit of the grid corners that generated ~1% of vertices."""
    n = verts.shape[0]
    if n == 0:
        return
    step = max(1, n // 100)
    h = [float(x) for x in grid.spacing()]
    lo = [float(b[0]) for b in grid.bounds]
    checked: set[tuple[int, int, int]] = set()
    for vi in range(0, n, step):
        corners = []
        frac_axis = None
        base = []
        for k in range(3):
            u = (verts[vi, k] - lo[k]) / h[k]
            r = round(u)
            if abs(u - r) < 1e-9:
                base.append(int(r))
            else:
                frac_axis = k
                base.append(int(math.floor(u)))
        if frac_axis is None:
            corners.append(tuple(base))
        else:
            hi = list(base)
            hi[frac_axis] += 1
            corners = [tuple(base), tuple(hi)]
        for c in corners:
            if c in checked or not all(0 <= c[k] < grid.resolution[k] for k in range(3)):
                continue
            checked.add(c)
            exact = p.evaluate(_exact_corner(grid, c))
            approx = volume[c]
            if exact != 0 and approx != 0.0 and (exact > 0) != (approx > 0):
                raise MeshPrecisionError(
                    f"float sign flipped at grid corner {c}: "
                    f"exact {'+' if exact > 0 else '-'}, float {approx:+.3g}")


def _drop_degenerate(verts: np.ndarray, tris: np.ndarray) -> np.ndarray:
    if tris.shape[0] == 0:
        return tris
    a = verts[tris[:, 0]]
    b = verts[tris[:, 1]]
    c = verts[tris[:, 2]]
    area2 = np.linalg.norm(np.cross(b - a, c - a), axis=1)
    return tris[area2 > 2 * DEGENERATE_AREA]


def marching_cubes(p: Polynomial, grid: GridSpec) -> ColoredMesh:
    """Standard 256-case marching cubes of the zero level set.

    Vertices interpolate linearly along sign-changing lattice edges; with no
    sign change anywhere the result is an empty mesh carrying a warning.
    """
    if p.is_constant():
        raise GridError("cannot mesh a constant polynomial")
    volume = evaluate_grid(p, grid)
    if not (volume.min() <= 0.0 <= volume.max()):
        msg = "no zero crossing inside the grid box; empty mesh"
        warnings.warn(msg)
        return ColoredMesh(vertices=np.zeros((0, 3)),
                           triangles=np.zeros((0, 3), dtype=np.int64),
                           warnings=(msg,))
    spacing = tuple(float(x) for x in grid.spacing())
    try:
        verts, faces, _normals, _vals = measure.marching_cubes(
            volume, level=0.0, spacing=spacing, allow_degenerate=False)
    except (ValueError, RuntimeError) as exc:
        msg = f"no surface extracted: {exc}"
        warnings.warn(msg)
        return ColoredMesh(vertices=np.zeros((0, 3)),
                           triangles=np.zeros((0, 3), dtype=np.int64),
                           warnings=(msg,))
    origin = np.array([float(b[0]) for b in grid.bounds])
    verts = verts + origin
    _spot_check(p, grid, volume, verts)
    faces = _drop_degenerate(verts, faces.astype(np.int64))
    return ColoredMesh(vertices=verts.astype(np.float64), triangles=faces)


def classify_mesh(mesh: ColoredMesh, scene: SceneDescription, surface_index: int,
                  light: LightSource | None = None) -> ColoredMesh:
    """Attach per-vertex illumination classes and their display colors.

    Interpolated vertices sit near, not on, the surface; each one is snapped
    onto the surface exactly before classification so the occlusion epsilon
    can absorb what remains of the offset.
    """
    ctx = ShadingContext(scene, light)
    surface = scene.surfaces()[surface_index]
    classes: list[IlluminationClass] = []
    colors = np.zeros((mesh.vertex_count, 3), dtype=np.uint8)
    for i in range(mesh.vertex_count):
        pt = snap_to_surface(surface, tuple(mesh.vertices[i]))
        c = ctx.classify(SurfaceSample(point=pt, surface_index=surface_index)).cls
        classes.append(c)
        colors[i] = CLASS_COLORS[c]
    return ColoredMesh(vertices=mesh.vertices, triangles=mesh.triangles,
                       classes=classes, colors=colors, warnings=mesh.warnings)


# ---------------------------------------------------------------------------
# quality measures


def mesh_residual(p: Polynomial, mesh: ColoredMesh) -> float:
    """max over vertices of |p(v)| / (1 + |grad p(v)|), in floats.

    Computed on the max-|coefficient|-rescaled polynomial so the measure is
    comparable across fixtures.
    """
    if mesh.vertex_count == 0:
        return 0.0
    coeffs = _scaled_float_coeffs(p)
    grads: list[list[tuple[tuple[int, ...], float]]] = [[], [], []]
    for e, c in coeffs:
        for k in range(3):
            if e[k]:
                ge = list(e)
                ge[k] -= 1
                grads[k].append((tuple(ge), c * e[k]))
    worst = 0.0
    for v in mesh.vertices:
        val = math.fsum(c * v[0]**e[0] * v[1]**e[1] * v[2]**e[2] for e, c in coeffs)
        g2 = 0.0
        for k in range(3):
            gk = math.fsum(c * v[0]**e[0] * v[1]**e[1] * v[2]**e[2] for e, c in grads[k])
            g2 += gk * gk
        worst = max(worst, abs(val) / (1.0 + math.sqrt(g2)))
    return worst


def is_watertight(mesh: ColoredMesh) -> bool:
    """Every undirected edge is shared by exactly two triangles."""
    if mesh.triangle_count == 0:
        return False
    edges: dict[tuple[int, int], int] = {}
    for tri in mesh.triangles:
        a, b, c = int(tri[0]), int(tri[1]), int(tri[2])
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            edges[key] = edges.get(key, 0) + 1
    return all(n == 2 for n in edges.values())


# ---------------------------------------------------------------------------
# file output


def _fmt(x: float) -> str:
    return "%.9g" % float(x)


def export_mesh(mesh: ColoredMesh, fmt: str, path) -> None:
    """Write OBJ (`v x y z [r g b]` + 1-based `f`) or ascii PLY."""
    if fmt not in ("obj", "ply"):
        raise ValueError(f"unsupported mesh format {fmt!r}")
    lines: list[str] = []
    has_color = mesh.colors is not None
    if fmt == "obj":
        lines.append(f"# mesh: {mesh.vertex_count} vertices,"
                     f" {mesh.triangle_count} faces")
        for i in range(mesh.vertex_count):
            v = mesh.vertices[i]
            row = f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}"
            if has_color:
                c = mesh.colors[i]
                row += f" {c[0]/255:.6f} {c[1]/255:.6f} {c[2]/255:.6f}"
            lines.append(row)
        for tri in mesh.triangles:
            lines.append(f"f {int(tri[0]) + 1} {int(tri[1]) + 1} {int(tri[2]) + 1}")
    else:
        lines += ["ply", "format ascii 1.0",
                  f"element vertex {mesh.vertex_count}",
                  "property float x", "property float y", "property float z"]
        if has_color:
            lines += ["property uchar red", "property uchar green", "property uchar blue"]
        lines += [f"element face {mesh.triangle_count}",
                  "property list uchar int vertex_indices", "end_header"]
        for i in range(mesh.vertex_count):
            v = mesh.vertices[i]
            row = f"{_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}"
            if has_color:
                c = mesh.colors[i]
                row += f" {c[0]} {c[1]} {c[2]}"
            lines.append(row)
        for tri in mesh.triangles:
            lines.append(f"3 {int(tri[0])} {int(tri[1])} {int(tri[2])}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines))
        if lines:
            fh.write("\n")


def export_frame(edges: Sequence[FrameEdge], fmt: str, path) -> None:
    """Write projected frame edges as OBJ polylines.

    Shared endpoints are written once; a vertex takes the axis color of the
    first edge that references it (corners belong to several axes anyway).
    """
    if fmt != "obj":
        raise ValueError("frames are exported as OBJ polylines")
    lines: list[str] = ["# frame"]
    index: dict[tuple, int] = {}
    segs: list[tuple[int, int]] = []
    for e in edges:
        color = AXIS_COLORS[e.axis % len(AXIS_COLORS)]
        rgb = f"{color[0]/255:.6f} {color[1]/255:.6f} {color[2]/255:.6f}"
        pair = []
        for pt in (e.start, e.end):
            key = tuple(pt)
            if key not in index:
                index[key] = len(index) + 1
                lines.append(f"v {_fmt(pt[0])} {_fmt(pt[1])} {_fmt(pt[2])} {rgb}")
            pair.append(index[key])
        segs.append((pair[0], pair[1]))
    for a, b in segs:
        lines.append(f"l {a} {b}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def load_obj(path) -> ColoredMesh:
    verts, tris = [], []
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            parts = raw.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(parts[1]), float(parts[2]), float(parts[3])])
            elif parts[0] == "f":
                tris.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return ColoredMesh(vertices=np.array(verts, dtype=np.float64).reshape(-1, 3),
                       triangles=np.array(tris, dtype=np.int64).reshape(-1, 3))


def load_ply(path) -> ColoredMesh:
    with open(path, "r", encoding="ascii") as fh:
        lines = [l.strip() for l in fh]
    nv = nf = 0
    body = 0
    has_color = False
    for i, l in enumerate(lines):
        if l.startswith("element vertex"):
            nv = int(l.split()[-1])
        elif l.startswith("element face"):
            nf = int(l.split()[-1])
        elif l == "property uchar red":
            has_color = True
        elif l == "end_header":
            body = i + 1
            break
    verts = [list(map(float, lines[body + i].split()[:3])) for i in range(nv)]
    colors = None
    if has_color:
        colors = np.array([list(map(int, lines[body + i].split()[3:6]))
                           for i in range(nv)], dtype=np.uint8).reshape(-1, 3)
    tris = [list(map(int, lines[body + nv + i].split()[1:4])) for i in range(nf)]
    return ColoredMesh(vertices=np.array(verts, dtype=np.float64).reshape(-1, 3),
                       triangles=np.array(tris, dtype=np.int64).reshape(-1, 3),
                       colors=colors)
