"""Scene model and geometric constructions on implicit hypersurfaces.

First polars, terminator systems, tangent hypercones, 4-D perspective
images of surfaces/terminators and projected shadow boundaries.  Every
construction is exact; eliminations are delegated to the elim backends.

The camera frame is the normalized one used throughout: the center of
projection sits on the third ambient axis at C = (0, 0, d, 0) and the image
space reuses the remaining coordinates (x, y, w).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .elim import ElimBudget, EliminationResult, EliminationTask, eliminate
from .poly import (
    Coef,
    Polynomial,
    VariableSpace,
    dehomogenize,
    homogenize,
    normalize_primitive,
    substitute,
)


class DegeneratePolarError(ValueError):
    """The polar of the surface with respect to the point vanishes identically."""


class TangencyDegeneracyError(ValueError):
    """Tangent cone apex lies on the surface; every line through it is tangent there."""


class ApexAtInfinityError(ValueError):
    """Cone apex / projection center must be an affine point."""


class ImproperPointError(ValueError):
    """Perspective image of a point on the plane p_z = d is undefined."""


@dataclass(frozen=True)
class Hypersurface:
    """An implicit hypersurface sigma = 0, normalized primitive."""

    name: str
    poly: Polynomial

    def __post_init__(self):
        if self.poly.is_zero:
            raise ValueError(f"surface {self.name!r} has a zero polynomial")
        # canonical form: integer primitive with positive leading coefficient
        # (the zero set is unchanged; all visibility predicates are relative)
        object.__setattr__(self, "poly", normalize_primitive(self.poly))

    @property
    def space(self) -> VariableSpace:
        return self.poly.space

    def degree(self) -> int:
        return self.poly.degree()


@dataclass(frozen=True)
class LightSource:
    """A light in homogeneous coordinates (l_1, ..., l_n, l_0)."""

    coords: tuple[Fraction, ...]
    name: str = "L"

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if not any(coords):
            raise ValueError("homogeneous light coordinates must not all vanish")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def affine(cls, coords: Sequence, name: str = "L") -> "LightSource":
        return cls(tuple(Fraction(c) for c in coords) + (Fraction(1),), name)

    @classmethod
    def homogeneous(cls, coords: Sequence, name: str = "L") -> "LightSource":
        return cls(tuple(Fraction(c) for c in coords), name)

    @property
    def is_affine(self) -> bool:
        return self.coords[-1] != 0

    def affine_coords(self) -> tuple[Fraction, ...]:
        if not self.is_affine:
            raise ApexAtInfinityError(f"light {self.name!r} lies at infinity")
        l0 = self.coords[-1]
        return tuple(c / l0 for c in self.coords[:-1])


@dataclass(frozen=True)
class PerspectiveCamera:
    """Center of projection C = (0, 0, d, 0) with image space (x, y, w)."""

    d: Fraction = Fraction(-6)

    def __post_init__(self):
        object.__setattr__(self, "d", Fraction(self.d))
        if self.d == 0:
            raise ValueError("projection distance d must be nonzero")

    def center(self) -> tuple[Fraction, ...]:
        return (Fraction(0), Fraction(0), self.d, Fraction(0))

    def as_light(self) -> LightSource:
        return LightSource.affine(self.center(), name="C")


@dataclass(frozen=True)
class GridBox:
    """Axis-aligned sampling box for meshing: ((lo, hi) per axis, resolution)."""

    bounds: tuple[tuple[Fraction, Fraction], ...]
    resolution: int = 96


@dataclass(frozen=True)
class SceneDescription:
    factors: tuple[Hypersurface, ...]
    receivers: tuple[Hypersurface, ...] = ()
    lights: tuple[LightSource, ...] = ()
    camera: PerspectiveCamera | None = None
    grid: GridBox | None = None
    name: str = "scene"

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a scene needs at least one factor surface")
        space = self.factors[0].space
        for s in self.factors + self.receivers:
            if s.space != space:
                raise ValueError("scene surfaces live in different variable spaces")

    @property
    def space(self) -> VariableSpace:
        return self.factors[0].space

    def surfaces(self) -> tuple[Hypersurface, ...]:
        return self.factors + self.receivers

    def role(self, index: int) -> str:
        return "factor" if index < len(self.factors) else "receiver"

    def light(self, name: str | None = None) -> LightSource:
        if not self.lights:
            raise ValueError("scene has no light")
        if name is None:
            return self.lights[0]
        for l in self.lights:
            if l.name == name:
                return l
        raise KeyError(f"no light named {name!r}")


# ---------------------------------------------------------------------------
# polars and terminators


def first_polar(s: Hypersurface, p: LightSource) -> Hypersurface:
    """First polar of the surface with respect to a point.

    sigma_P = P~ . grad(sigma~) in homogeneous coordinates, dehomogenized
    and normalized primitive.  Generic degree is deg(sigma) - 1.
    """
    if s.degree() < 1:
        raise ValueError("polar of a constant surface is undefined")
    if len(p.coords) != s.space.dimension + 1:
        raise ValueError(
            f"light has {len(p.coords)} homogeneous coordinates, "
            f"surface is {s.space.dimension}-dimensional")
    hom = homogenize(s.poly, _fresh(s.space, "x0"))
    acc = Polynomial.zero(hom.space)
    for li, g in zip(p.coords, hom.gradient()):
        if li:
            acc = acc + li * g
    polar = dehomogenize(acc, hom.space.names[-1])
    if polar.is_zero:
        raise DegeneratePolarError(
            f"polar of {s.name!r} with respect to {p.name!r} vanishes identically")
    return Hypersurface(name=f"{s.name}_polar", poly=normalize_primitive(polar))


def _fresh(space: VariableSpace, base: str) -> str:
    name = base
    while name in space:
        name = name + "_"
    return name


@dataclass(frozen=True)
class TerminatorSystem:
    """The terminator c: sigma = sigma_L = 0 with its Bezout degree bound."""

    surface: Hypersurface
    polar: Hypersurface
    bezout_bound: int

    @property
    def polys(self) -> tuple[Polynomial, Polynomial]:
        return (self.surface.poly, self.polar.poly)


def terminator_system(s: Hypersurface, l: LightSource) -> TerminatorSystem:
    n = s.degree()
    return TerminatorSystem(surface=s, polar=first_polar(s, l),
                            bezout_bound=n * (n - 1))


def scene_degree(scene: SceneDescription) -> int:
    """Total degree of the composed scene (sum over factors; never expanded)."""
    return sum(f.degree() for f in scene.factors)


def scene_terminator_bound(scene: SceneDescription) -> int:
    n = scene_degree(scene)
    return n * (n - 1)


# ---------------------------------------------------------------------------
# tangent hypercones


def _point_space(space: VariableSpace) -> tuple[VariableSpace, list[str]]:
    qnames = _fresh_many(space, [f"q_{n}" for n in space.names])
    return space.extend(qnames), qnames


def _fresh_many(space: VariableSpace, bases: Sequence[str]) -> list[str]:
    out: list[str] = []
    for b in bases:
        name = b
        while name in space or name in out:
            name = name + "_"
        out.append(name)
    return out


def tangent_cone_task(s: Hypersurface, l: LightSource) -> EliminationTask:
    """System for the cone of tangent lines from the light to the surface.

    Unknown surface point Q and line parameter a are tied to the ambient
    point X by a*L + (1-a)*Q = X; eliminating {Q, a} projects the tangency
    condition {sigma(Q) = 0, sigma_L(Q) = 0} onto X.
    """
    if not l.is_affine:
        raise ApexAtInfinityError(
            "tangent cone apex at infinity is not supported; use an affine light")
    lc = l.affine_coords()
    if s.poly.evaluate(lc) == 0:
        raise TangencyDegeneracyError(
            f"light {l.name!r} lies on {s.name!r}: the tangent cone degenerates")
    sigma_l = _proper_polar(s, l)
    big, qnames = _point_space(s.space)
    anames = _fresh_many(big, ["a"])
    big = big.extend(anames)
    a = Polynomial.variable(big, anames[0])
    qbind = {n: Polynomial.variable(big, q) for n, q in zip(s.space.names, qnames)}
    sigma_q, _ = substitute(s.poly, qbind, into=big)
    polar_q, _ = substitute(sigma_l, qbind, into=big)
    lines = []
    for n, q, li in zip(s.space.names, qnames, lc):
        x = Polynomial.variable(big, n)
        qv = Polynomial.variable(big, q)
        lines.append(a * li + (1 - a) * qv - x)
    return EliminationTask(system=(sigma_q, polar_q, *lines),
                           eliminate=tuple(qnames) + tuple(anames))


def tangent_cone(s: Hypersurface, l: LightSource,
                 backend: str = "sylvester-auto",
                 budget: ElimBudget | None = None) -> Hypersurface:
    """Tangent hypercone theta of the surface as seen from the light."""
    task = tangent_cone_task(s, l)
    result = eliminate(EliminationTask(system=task.system, eliminate=task.eliminate,
                                       backend=backend, cleared=task.cleared),
                       budget)
    if result.eliminant is None or result.eliminant.is_constant():
        raise TangencyDegeneracyError(
            f"tangent cone of {s.name!r} from {l.name!r} degenerated "
            f"({', '.join(result.stats.notes) or 'no relation'})")
    return Hypersurface(name=f"{s.name}_cone", poly=result.eliminant)


@dataclass(frozen=True)
class ShadowBoundarySystem:
    """Shadow boundary on a receiver in the ambient space: {pi, theta}."""

    receiver: Hypersurface
    cone: Hypersurface

    @property
    def polys(self) -> tuple[Polynomial, Polynomial]:
        return (self.receiver.poly, self.cone.poly)


def shadow_boundary_system(caster: Hypersurface, receiver: Hypersurface,
                           l: LightSource,
                           backend: str = "sylvester-auto",
                           budget: ElimBudget | None = None) -> ShadowBoundarySystem:
    return ShadowBoundarySystem(receiver=receiver,
                                cone=tangent_cone(caster, l, backend, budget))


# ---------------------------------------------------------------------------
# 4-D perspective


def perspective_point(p: Sequence, cam: PerspectiveCamera) -> tuple[Fraction, Fraction, Fraction]:
    """Image (d px/(d-pz), d py/(d-pz), d pw/(d-pz)) of an ambient 4-point."""
    if len(p) != 4:
        raise ValueError("perspective projection expects a 4-dimensional point")
    px, py, pz, pw = (Fraction(v) for v in p)
    d = cam.d
    if pz == d:
        raise ImproperPointError(
            f"point with third coordinate {pz} == d has an improper image")
    f = d / (d - pz)
    return (f * px, f * py, f * pw)


def _perspective_space(ambient: VariableSpace) -> tuple[VariableSpace, list[str], list[str]]:
    if ambient.dimension != 4:
        raise ValueError("perspective constructions expect a 4-dimensional ambient space")
    kept = [ambient.names[0], ambient.names[1], ambient.names[3]]
    qbases = [f"q_{n}" for n in ambient.names]
    qnames = _fresh_many(VariableSpace(tuple(kept)), qbases)
    return VariableSpace(tuple(kept) + tuple(qnames)), kept, qnames


def _projection_task(first: Polynomial, second: Polynomial,
                     ambient: VariableSpace, cam: PerspectiveCamera) -> EliminationTask:
    big, kept, qnames = _perspective_space(ambient)
    qbind = {n: Polynomial.variable(big, q) for n, q in zip(ambient.names, qnames)}
    f1, _ = substitute(first, qbind, into=big)
    f2, _ = substitute(second, qbind, into=big)
    d = cam.d
    qz = Polynomial.variable(big, qnames[2])
    lines = []
    for img_name, q in zip(kept, (qnames[0], qnames[1], qnames[3])):
        img = Polynomial.variable(big, img_name)
        qv = Polynomial.variable(big, q)
        lines.append(img * (d - qz) - d * qv)
    return EliminationTask(system=(f1, f2, *lines), eliminate=tuple(qnames))


def _proper_polar(s: Hypersurface, p: LightSource) -> Polynomial:
    """Polar polynomial, rejecting the constant case (empty tangency locus)."""
    polar = first_polar(s, p).poly
    if polar.degree() == 0:
        raise DegeneratePolarError(
            f"polar of {s.name!r} with respect to {p.name!r} is a nonzero "
            f"constant: the tangency locus is empty")
    return polar


def perspective_image_task(s: Hypersurface, cam: PerspectiveCamera) -> EliminationTask:
    """Occluding contour system: surface, camera polar, projection relations."""
    sigma_c = _proper_polar(s, cam.as_light())
    return _projection_task(s.poly, sigma_c, s.space, cam)


def perspective_image(s: Hypersurface, cam: PerspectiveCamera,
                      backend: str = "sylvester-auto",
                      budget: ElimBudget | None = None) -> Hypersurface:
    """Perspective image sigma^nu of the surface: its occluding contour."""
    task = perspective_image_task(s, cam)
    result = eliminate(_with_backend(task, backend), budget)
    return _image_surface(result, f"{s.name}_contour")


def perspective_terminator_task(s: Hypersurface, l: LightSource,
                                cam: PerspectiveCamera) -> EliminationTask:
    """Terminator image system: surface, light polar, projection relations."""
    sigma_l = _proper_polar(s, l)
    return _projection_task(s.poly, sigma_l, s.space, cam)


def perspective_terminator(s: Hypersurface, l: LightSource, cam: PerspectiveCamera,
                           backend: str = "sylvester-auto",
                           budget: ElimBudget | None = None) -> Hypersurface:
    """Image c^nu of the terminator under the perspective projection."""
    task = perspective_terminator_task(s, l, cam)
    result = eliminate(_with_backend(task, backend), budget)
    return _image_surface(result, f"{s.name}_terminator_image")


def perspective_shadow_task(caster: Hypersurface, receiver: Hypersurface,
                            cone: Hypersurface, cam: PerspectiveCamera) -> EliminationTask:
    """Projected shadow boundary system given an already computed cone.

    The receiver's polynomial rides first (the caster's own for self-shadow
    boundaries), then the tangent cone, then the projection relations.
    """
    return _projection_task(receiver.poly, cone.poly, caster.space, cam)


def perspective_shadow(caster: Hypersurface, receiver: Hypersurface,
                       l: LightSource, cam: PerspectiveCamera,
                       backend: str = "sylvester-auto",
                       budget: ElimBudget | None = None) -> Hypersurface:
    """Image of the shadow boundary cast by ``caster`` onto ``receiver``.

    With receiver == caster this is the self-shadow boundary image (the
    terminator seen through the cone)."""
    cone = tangent_cone(caster, l, backend, budget)
    task = perspective_shadow_task(caster, receiver, cone, cam)
    result = eliminate(_with_backend(task, backend), budget)
    return _image_surface(result, f"{caster.name}_shadow_on_{receiver.name}")


def _with_backend(task: EliminationTask, backend: str) -> EliminationTask:
    return EliminationTask(system=task.system, eliminate=task.eliminate,
                           backend=backend, cleared=task.cleared)


def _image_surface(result: EliminationResult, name: str) -> Hypersurface:
    if result.eliminant is None or result.eliminant.is_constant():
        raise DegeneratePolarError(
            f"projection {name!r} has no proper image "
            f"({', '.join(result.stats.notes) or 'no relation'})")
    return Hypersurface(name=name, poly=result.eliminant)


# ---------------------------------------------------------------------------
# reference frames


@dataclass(frozen=True)
class FrameEdge:
    """A projected edge with the ambient axis (0..3) it runs along."""

    start: tuple[Fraction, Fraction, Fraction]
    end: tuple[Fraction, Fraction, Fraction]
    axis: int


def hypercube_frame(cam: PerspectiveCamera, half_extent=1) -> list[FrameEdge]:
    """Project the edges of the origin-centered hypercube [-h, h]^4.

    16 vertices, 32 edges (pairs at Hamming distance one), each edge tagged
    with the ambient axis it is parallel to.
    """
    h = Fraction(half_extent)
    if h <= 0:
        raise ValueError("half extent must be positive")
    verts = []
    for mask in range(16):
        verts.append(tuple((h if mask & (1 << i) else -h) for i in range(4)))
    images = [perspective_point(v, cam) for v in verts]
    edges = []
    for i, v in enumerate(verts):
        for axis in range(4):
            j = i | (1 << axis)
            if j != i:
                edges.append(FrameEdge(start=images[i], end=images[j], axis=axis))
    return edges
