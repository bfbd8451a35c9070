"""Command line front end.

Subcommands take a scene file and emit equation text files (one
``name: polynomial = 0`` per line), classified meshes, or a backend timing
table.  Independent objects (surfaces, caster/receiver pairs) run
concurrently up to ``--workers``; each output file is written atomically.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bench as benchmod
from .elim import (
    DegenerateSystemError,
    ElimBudget,
    EliminationBudgetError,
    ElimStructureError,
)
from .expr import ExpressionError
from .mesh import (
    GridSpec,
    classify_mesh,
    export_frame,
    export_mesh,
    is_watertight,
    marching_cubes,
    mesh_residual,
)
from .scene import (
    ApexAtInfinityError,
    DegeneratePolarError,
    Hypersurface,
    ImproperPointError,
    SceneDescription,
    TangencyDegeneracyError,
    first_polar,
    hypercube_frame,
    perspective_image,
    perspective_shadow,
    perspective_terminator,
    scene_degree,
    scene_terminator_bound,
    tangent_cone,
    terminator_system,
)
from .scenefile import SceneFileError, load_scene
from .visibility import (
    IlluminationClass,
    OffSurfaceSampleError,
    ShadingContext,
    SurfaceSample,
    exact_point,
)

_DEGENERATE = (DegeneratePolarError, TangencyDegeneracyError,
               ApexAtInfinityError, ImproperPointError, DegenerateSystemError)

BACKEND_NAMES = {"auto": "sylvester-auto", "groebner": "groebner", "dixon": "dixon"}


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _equation(name: str, h: Hypersurface | None = None, poly=None) -> str:
    return f"{name}: {poly if poly is not None else h.poly} = 0"


@dataclass
class JobResult:
    """Lines for stdout plus optional per-object artifact files."""

    lines: list[str] = field(default_factory=list)
    files: list[tuple[str, str]] = field(default_factory=list)  # (name, text)
    ok: bool = True


def _run_jobs(jobs, workers: int) -> list[JobResult]:
    """Run (label, fn) jobs, keeping submission order in the results."""

    def guarded(label, fn):
        try:
            return fn()
        except _DEGENERATE as exc:
            return JobResult(lines=[f"# {label}: degenerate, skipped ({exc})"])
        except EliminationBudgetError as exc:
            return JobResult(lines=[f"# {label}: budget exceeded ({exc})"], ok=False)
        except (ElimStructureError, ValueError, RuntimeError) as exc:
            return JobResult(lines=[f"# {label}: failed ({exc})"], ok=False)

    if workers <= 1:
        return [guarded(label, fn) for label, fn in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(guarded, label, fn) for label, fn in jobs]
        return [f.result() for f in futures]


def _emit(results: list[JobResult], out: str | None) -> int:
    status = 0
    for r in results:
        for line in r.lines:
            print(line)
        if not r.ok:
            status = 1
        if out is not None:
            for name, text in r.files:
                _write_atomic(Path(out) / name, text)
    return status


def _scene(args) -> SceneDescription:
    return load_scene(args.scene)


def _budget(args) -> ElimBudget:
    if args.budget == 0:
        return ElimBudget()
    return ElimBudget(seconds=args.budget)


def _backend(args) -> str:
    return BACKEND_NAMES[args.backend or "auto"]


def _light(scene: SceneDescription, args):
    return scene.light(args.light)


# ---------------------------------------------------------------------------
# subcommands


def cmd_polar(args) -> int:
    scene = _scene(args)
    lights = [scene.light(args.light)] if args.light else list(scene.lights)
    if not lights:
        raise SceneFileError("scene has no light to take polars against")

    def job(s):
        def run():
            res = JobResult()
            for l in lights:
                tag = f"{s.name}_polar" if len(lights) == 1 else f"{s.name}_polar_{l.name}"
                res.lines.append(_equation(tag, first_polar(s, l)))
            res.files.append((f"polar_{s.name}.txt", "\n".join(res.lines) + "\n"))
            return res
        return run

    jobs = [(s.name, job(s)) for s in scene.surfaces()]
    return _emit(_run_jobs(jobs, args.workers), args.out)


def cmd_terminator(args) -> int:
    scene = _scene(args)
    light = _light(scene, args)
    print(f"# scene degree {scene_degree(scene)}: "
          f"terminator degree bound {scene_terminator_bound(scene)}")

    def job(s):
        def run():
            t = terminator_system(s, light)
            lines = [
                f"# terminator of {s.name}: degree bound {t.bezout_bound}",
                _equation(s.name, t.surface),
                _equation(t.polar.name, t.polar),
            ]
            return JobResult(lines=lines,
                             files=[(f"terminator_{s.name}.txt", "\n".join(lines) + "\n")])
        return run

    jobs = [(s.name, job(s)) for s in scene.factors]
    return _emit(_run_jobs(jobs, args.workers), args.out)


def cmd_cone(args) -> int:
    scene = _scene(args)
    light = _light(scene, args)
    backend, budget = _backend(args), _budget(args)

    def job(s):
        def run():
            t0 = time.monotonic()
            cone = tangent_cone(s, light, backend, budget)
            lines = [
                f"# cone of {s.name} from {light.name}: degree {cone.poly.degree()}, "
                f"{cone.poly.term_count()} terms, {time.monotonic() - t0:.2f}s [{backend}]",
                _equation(f"{s.name}_cone", cone),
            ]
            return JobResult(lines=lines,
                             files=[(f"cone_{s.name}.txt", "\n".join(lines) + "\n")])
        return run

    jobs = [(s.name, job(s)) for s in scene.factors]
    return _emit(_run_jobs(jobs, args.workers), args.out)


def cmd_project(args) -> int:
    scene = _scene(args)
    if scene.camera is None:
        raise SceneFileError("project needs a 4-D scene with a [camera] section")
    cam = scene.camera
    light = scene.light(args.light) if (scene.lights or args.light) else None
    backend, budget = _backend(args), _budget(args)

    def job(s):
        def run():
            t0 = time.monotonic()
            lines = []
            try:
                img = perspective_image(s, cam, backend, budget)
                lines.append(_equation(f"{s.name}_contour", img))
            except _DEGENERATE as exc:
                lines.append(f"# {s.name}: contour skipped ({exc})")
            if light is not None:
                try:
                    term = perspective_terminator(s, light, cam, backend, budget)
                    lines.append(_equation(f"{s.name}_terminator", term))
                except _DEGENERATE as exc:
                    lines.append(f"# {s.name}: terminator image skipped ({exc})")
            lines.insert(0, f"# projection of {s.name}: d = {cam.d}, "
                            f"{time.monotonic() - t0:.2f}s [{backend}]")
            return JobResult(lines=lines,
                             files=[(f"project_{s.name}.txt", "\n".join(lines) + "\n")])
        return run

    jobs = [(s.name, job(s)) for s in scene.surfaces()]
    return _emit(_run_jobs(jobs, args.workers), args.out)


def cmd_shadow(args) -> int:
    scene = _scene(args)
    light = _light(scene, args)
    backend, budget = _backend(args), _budget(args)
    # self-pairs only for degree > 2 casters: a quadric's self-shadow
    # boundary is its terminator, already covered elsewhere
    pairs = [(c, r) for c in scene.factors for r in scene.surfaces()
             if r.name != c.name or c.degree() > 2]

    if scene.camera is None:
        # ambient shadow boundary systems {pi, theta}; one cone per caster
        cones: dict[str, Hypersurface] = {}

        def get_cone(c):
            if c.name not in cones:
                cones[c.name] = tangent_cone(c, light, backend, budget)
            return cones[c.name]

        def job(c, r):
            def run():
                cone = get_cone(c)
                lines = [
                    f"# shadow boundary of {c.name} on {r.name}",
                    _equation(r.name, r),
                    _equation(f"{c.name}_cone", cone),
                ]
                return JobResult(lines=lines,
                                 files=[(f"shadow_{c.name}_on_{r.name}.txt",
                                         "\n".join(lines) + "\n")])
            return run

        # cones are cached across pairs: compute them up front when parallel
        if args.workers > 1:
            for c in scene.factors:
                try:
                    get_cone(c)
                except Exception:
                    pass
    else:
        cam = scene.camera

        def job(c, r):
            def run():
                t0 = time.monotonic()
                sh = perspective_shadow(c, r, light, cam, backend, budget)
                lines = [
                    f"# shadow of {c.name} on {r.name}: degree {sh.poly.degree()}, "
                    f"{sh.poly.term_count()} terms, {time.monotonic() - t0:.2f}s [{backend}]",
                    _equation(f"{c.name}_shadow_on_{r.name}", sh),
                ]
                return JobResult(lines=lines,
                                 files=[(f"shadow_{c.name}_on_{r.name}.txt",
                                         "\n".join(lines) + "\n")])
            return run

    jobs = [(f"{c.name}->{r.name}", job(c, r)) for c, r in pairs]
    return _emit(_run_jobs(jobs, args.workers), args.out)


def _parse_points_file(path: str, scene: SceneDescription):
    names = [s.name for s in scene.surfaces()]
    dim = scene.space.dimension
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] not in names:
                raise SceneFileError(f"unknown surface {parts[0]!r}", line=ln)
            if len(parts) != dim + 1:
                raise SceneFileError(
                    f"expected {dim} coordinates after the surface name", line=ln)
            pt = exact_point([Fraction(p) for p in parts[1:]])
            samples.append((names.index(parts[0]), pt))
    return samples


def cmd_classify(args) -> int:
    scene = _scene(args)
    light = _light(scene, args)
    ctx = ShadingContext(scene, light)
    status = 0
    lines = []
    if args.points:
        for idx, pt in _parse_points_file(args.points, scene):
            name = scene.surfaces()[idx].name
            coords = ", ".join(str(c) for c in pt)
            try:
                c = ctx.classify(SurfaceSample(point=pt, surface_index=idx),
                                 checked=True)
                lines.append(f"{name} ({coords}): {c.cls.value}")
            except OffSurfaceSampleError as exc:
                lines.append(f"{name} ({coords}): error {exc}")
                status = 1
    else:
        # no points file: mesh every surface and dump the class histogram
        if scene.space.dimension != 3 or scene.grid is None:
            raise SceneFileError(
                "classify without --points needs a 3-variable scene with a [grid] box")
        grid = GridSpec.from_box(scene.grid)
        if args.grid_res:
            grid = GridSpec(bounds=grid.bounds, resolution=args.grid_res)
        for idx, s in enumerate(scene.surfaces()):
            mesh = classify_mesh(marching_cubes(s.poly, grid), scene, idx, light)
            hist = {c: 0 for c in IlluminationClass}
            for c in mesh.classes:
                hist[c] += 1
            parts = ", ".join(f"{c.value} {n}" for c, n in hist.items() if n)
            lines.append(f"{s.name}: {mesh.vertex_count} samples -> {parts or 'empty'}")
            if args.out:
                body = [f"{p[0]:.9g} {p[1]:.9g} {p[2]:.9g} {c.value}"
                        for p, c in zip(mesh.vertices, mesh.classes)]
                _write_atomic(Path(args.out) / f"classify_{s.name}.txt",
                              "\n".join(body) + "\n" if body else "")
    for line in lines:
        print(line)
    if args.points and args.out:
        _write_atomic(Path(args.out) / "classify.txt", "\n".join(lines) + "\n")
    return status


def cmd_mesh(args) -> int:
    scene = _scene(args)
    if scene.space.dimension != 3:
        raise SceneFileError("mesh works on 3-variable scenes "
                             "(project 4-D scenes first)")
    if scene.grid is None:
        raise SceneFileError("mesh needs a [grid] section with a box")
    light = _light(scene, args)
    grid = GridSpec.from_box(scene.grid)
    if args.grid_res:
        grid = GridSpec(bounds=grid.bounds, resolution=args.grid_res)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)

    def job(idx, s):
        def run():
            mesh = classify_mesh(marching_cubes(s.poly, grid), scene, idx, light)
            res = JobResult()
            for w in mesh.warnings:
                res.lines.append(f"# {s.name}: warning: {w}")
            path = out / f"{scene.name}_{s.name}.{args.format}"
            export_mesh(mesh, args.format, path)
            tight = "watertight" if is_watertight(mesh) else "open boundary"
            res.lines.append(
                f"{s.name}: {mesh.vertex_count} vertices, {mesh.triangle_count} "
                f"triangles, {tight}, residual {mesh_residual(s.poly, mesh):.3g} "
                f"-> {path}")
            return res
        return run

    jobs = [(s.name, job(i, s)) for i, s in enumerate(scene.surfaces())]
    return _emit(_run_jobs(jobs, args.workers), None)


def cmd_frame(args) -> int:
    scene = _scene(args)
    if scene.camera is None:
        raise SceneFileError("frame needs a scene with a [camera] section")
    edges = hypercube_frame(scene.camera, half_extent=Fraction(args.half_extent))
    out = Path(args.out or ".")
    path = out / f"{scene.name}_frame.obj"
    out.mkdir(parents=True, exist_ok=True)
    export_frame(edges, "obj", path)
    verts = {e.start for e in edges} | {e.end for e in edges}
    print(f"frame: {len(verts)} vertices, {len(edges)} edges -> {path}")
    return 0


def cmd_bench(args) -> int:
    scene = _scene(args)
    backends = ([BACKEND_NAMES[args.backend]] if args.backend
                else list(benchmod.BACKENDS))
    budget = None if args.budget == 0 else args.budget

    def report(row, backend):
        cell = row.cells[backend]
        print(f"# {row.label} [{backend}]: {cell.text()}"
              + (f"  ({cell.error})" if cell.error else ""),
              file=sys.stderr)

    rows = benchmod.run_bench(scene, args.light, backends, budget,
                              report=report if args.verbose else None)
    print(benchmod.format_table(rows, backends))
    print(f"# T - budget exceeded ({args.budget:g}s), F - failed, - - degenerate")
    if args.out:
        _write_atomic(Path(args.out) / "bench.tsv",
                      "\n".join(benchmod.tsv_lines(rows, backends)) + "\n")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hypershade",
        description="Exact contours, terminators, tangent cones and shadows "
                    "of algebraic hypersurfaces.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, *, backend=True, grid=False, fmt=False):
        p.add_argument("--scene", required=True, help="scene file to load")
        p.add_argument("--light", default=None, help="light name (default: first)")
        p.add_argument("--out", default=None, help="directory for output files")
        p.add_argument("--workers", type=int, default=1,
                       help="concurrent objects (default 1)")
        if backend:
            p.add_argument("--backend", choices=sorted(BACKEND_NAMES),
                           default=None, help="elimination backend (default auto)")
            p.add_argument("--budget", type=float, default=300.0,
                           help="seconds per elimination; 0 = unlimited (default 300)")
        if grid:
            p.add_argument("--grid-res", type=int, default=0,
                           help="override grid resolution (default: scene value or 96)")
        if fmt:
            p.add_argument("--format", choices=("obj", "ply"), default="obj",
                           help="mesh output format (default obj)")
        return p

    common(sub.add_parser("polar", help="first polar of every surface"),
           backend=False)
    common(sub.add_parser("terminator", help="terminator systems per factor"),
           backend=False)
    common(sub.add_parser("cone", help="tangent cone per factor"))
    common(sub.add_parser("project", help="occluding contours and terminator "
                                          "images of a 4-D scene"))
    common(sub.add_parser("shadow", help="shadow boundaries per caster/receiver pair"))
    p = common(sub.add_parser("classify", help="classify surface samples"),
               backend=False, grid=True)
    p.add_argument("--points", default=None,
                   help="file of samples: <surface> <c1> <c2> ... per line")
    common(sub.add_parser("mesh", help="classified mesh per surface"),
           backend=False, grid=True, fmt=True)
    p = common(sub.add_parser("frame", help="projected hypercube wireframe"),
               backend=False)
    p.add_argument("--half-extent", default="1",
                   help="hypercube half edge length (default 1)")
    p = common(sub.add_parser("bench", help="backend timing table"))
    p.add_argument("--verbose", action="store_true",
                   help="print each cell as it finishes")
    return top


_COMMANDS = {
    "polar": cmd_polar,
    "terminator": cmd_terminator,
    "cone": cmd_cone,
    "project": cmd_project,
    "shadow": cmd_shadow,
    "classify": cmd_classify,
    "mesh": cmd_mesh,
    "frame": cmd_frame,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SceneFileError, ExpressionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EliminationBudgetError, *_DEGENERATE, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
