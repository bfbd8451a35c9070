"""Backend timing table over the derived objects of one scene.

Rows are the eliminations the scene gives rise to: one occluding contour per
surface, one terminator image and one tangent cone per casting factor, and one
projected shadow per ordered caster/receiver pair.  Scenes without a camera
only have cone rows.  Cells hold wall-clock seconds, ``T`` when the budget ran
out, ``F`` on failure and ``-`` where the object degenerates (e.g. the contour
of a hyperplane).  Rows run sequentially so the timings stay comparable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .elim import ElimBudget, EliminationBudgetError
from .scene import (
    ApexAtInfinityError,
    DegeneratePolarError,
    Hypersurface,
    ImproperPointError,
    SceneDescription,
    TangencyDegeneracyError,
    perspective_image,
    perspective_shadow,
    perspective_terminator,
    tangent_cone,
)

BACKENDS = ("sylvester-auto", "groebner", "dixon")

_DEGENERATE = (DegeneratePolarError, TangencyDegeneracyError,
               ApexAtInfinityError, ImproperPointError)


@dataclass
class BenchCell:
    status: str  # ok | budget | failed | skip
    seconds: float | None = None
    error: str = ""

    def text(self) -> str:
        if self.status == "ok":
            return f"{self.seconds:.2f}"
        return {"budget": "T", "failed": "F", "skip": "-"}[self.status]


@dataclass
class BenchRow:
    label: str
    kind: str
    degree: int | None = None
    terms: int | None = None
    cells: dict[str, BenchCell] = field(default_factory=dict)


def _run_cell(row: BenchRow, backend: str,
              fn: Callable[[str], Hypersurface]) -> BenchCell:
    t0 = time.monotonic()
    try:
        h = fn(backend)
    except EliminationBudgetError:
        return BenchCell("budget", time.monotonic() - t0)
    except _DEGENERATE as exc:
        return BenchCell("skip", error=str(exc))
    except Exception as exc:  # backend bug or structural refusal: keep benching
        return BenchCell("failed", time.monotonic() - t0, error=str(exc))
    elapsed = time.monotonic() - t0
    deg, terms = h.poly.degree(), h.poly.term_count()
    if row.degree is None:
        row.degree, row.terms = deg, terms
    elif (row.degree, row.terms) != (deg, terms):
        # backends disagreeing after extraneous stripping is a real failure
        return BenchCell("failed", elapsed,
                         error=f"eliminant mismatch: deg {deg}, {terms} terms")
    return BenchCell("ok", elapsed)


def scene_rows(scene: SceneDescription, light_name: str | None = None,
               budget: ElimBudget | None = None):
    """(BenchRow, callable) pairs for every derived object of the scene."""
    light = scene.light(light_name)
    cam = scene.camera
    pairs: list[tuple[BenchRow, Callable[[str], Hypersurface]]] = []

    if cam is not None:
        for s in scene.surfaces():
            pairs.append((
                BenchRow(f"{s.name} contour", "contour"),
                lambda b, s=s: perspective_image(s, cam, b, budget)))
        for s in scene.surfaces():
            pairs.append((
                BenchRow(f"{s.name} terminator", "terminator"),
                lambda b, s=s: perspective_terminator(s, light, cam, b, budget)))
    for s in scene.factors:
        pairs.append((
            BenchRow(f"{s.name} cone", "cone"),
            lambda b, s=s: tangent_cone(s, light, b, budget)))
    if cam is not None:
        for c in scene.factors:
            for r in scene.surfaces():
                # a quadric's self-shadow boundary is just its terminator;
                # only degree > 2 casters get a self-pair row
                if r.name == c.name and c.degree() <= 2:
                    continue
                pairs.append((
                    BenchRow(f"{c.name} shadow on {r.name}", "shadow"),
                    lambda b, c=c, r=r: perspective_shadow(c, r, light, cam, b, budget)))
    return pairs


def run_bench(scene: SceneDescription, light_name: str | None = None,
              backends=BACKENDS, budget_seconds: float | None = 300.0,
              report=None) -> list[BenchRow]:
    budget = ElimBudget(seconds=budget_seconds) if budget_seconds else ElimBudget()
    rows: list[BenchRow] = []
    for row, fn in scene_rows(scene, light_name, budget):
        for backend in backends:
            row.cells[backend] = _run_cell(row, backend, fn)
            if report is not None:
                report(row, backend)
        rows.append(row)
    return rows


def _cell_header(backend: str) -> str:
    return "auto" if backend == "sylvester-auto" else backend


def format_table(rows: list[BenchRow], backends=BACKENDS) -> str:
    header = ["object", "deg", "terms"] + [f"{_cell_header(b)} [s]" for b in backends]
    body = []
    for r in rows:
        body.append([r.label,
                     "-" if r.degree is None else str(r.degree),
                     "-" if r.terms is None else str(r.terms)]
                    + [r.cells[b].text() for b in backends])
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]

    def fmt(line):
        cells = [line[0].ljust(widths[0])]
        cells += [line[i].rjust(widths[i]) for i in range(1, len(line))]
        return "  ".join(cells).rstrip()

    rule = "  ".join("-" * w for w in widths)
    return "\n".join([fmt(header), rule] + [fmt(line) for line in body])


def tsv_lines(rows: list[BenchRow], backends=BACKENDS) -> list[str]:
    out = ["\t".join(["object", "kind", "degree", "terms"] + list(backends))]
    for r in rows:
        out.append("\t".join(
            [r.label, r.kind,
             "-" if r.degree is None else str(r.degree),
             "-" if r.terms is None else str(r.terms)]
            + [r.cells[b].text() for b in backends]))
    return out
