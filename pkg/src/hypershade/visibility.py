"""Exact pointwise illumination classification.

A sample on a factor surface is lit when it faces the light (first-polar
half-space test) and no factor surface crosses the open segment from the
sample to the light.  The crossing test is exact: the segment parametrization
is substituted into each factor polynomial and distinct real roots of the
resulting univariate polynomial are counted with Sturm sequences.

Receivers skip the half-space test and only ask whether any factor blocks
the segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .poly import Polynomial, VariableSpace, substitute
from .scene import Hypersurface, LightSource, SceneDescription, first_polar

# offset in t excluding a float sample's own surface crossing near t = 0,
# and the light's own end of the segment near t = 1
SEGMENT_EPSILON = Fraction(1, 10**6)

# largest plausible own-crossing offset for an interpolated mesh vertex
OWN_CROSSING_CAP = Fraction(1, 100)

# |sigma(x)| / max(1, |grad sigma(x)|) bound accepted as "on the surface"
ON_SURFACE_TOLERANCE = 1e-7


class LightOnPolarError(ValueError):
    """The light lies on its own polar; the half-space test is undefined."""


class DegenerateSegmentError(ValueError):
    """Sample and light coincide."""


class OffSurfaceSampleError(ValueError):
    """Sample point is not on the surface it claims to lie on."""


class IlluminationClass(Enum):
    ILLUMINATED = "Illuminated"
    POLAR_EXCLUDED = "PolarExcluded"
    OCCLUDED = "Occluded"
    RECEIVER_SHADOW = "ReceiverShadow"
    RECEIVER_LIT = "ReceiverLit"


@dataclass(frozen=True)
class SurfaceSample:
    point: tuple
    surface_index: int


@dataclass(frozen=True)
class ClassifiedSample:
    point: tuple
    surface_index: int
    cls: IlluminationClass


@dataclass(frozen=True)
class RaySegment:
    """The segment X + t(L - X), t in (0, 1), from a sample to the light."""

    origin: tuple[Fraction, ...]
    target: tuple[Fraction, ...]

    def __post_init__(self):
        if self.origin == self.target:
            raise DegenerateSegmentError("sample coincides with the light")


def exact_point(coords: Sequence) -> tuple[Fraction, ...]:
    """Rationalize coordinates exactly (floats keep their binary value)."""
    return tuple(Fraction(c) for c in coords)


# ---------------------------------------------------------------------------
# Sturm sequences


def _primitive_int(coeffs: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    return ints


def _trim(coeffs: list) -> list:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _eval_at(coeffs: Sequence[int], a: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * a + c
    return acc


def _deflate_root(coeffs: Sequence[int], a: Fraction) -> list[int]:
    # synthetic division by (t - a); exact because a is a root
    out: list[Fraction] = [Fraction(0)] * (len(coeffs) - 1)
    carry = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        carry = carry * a + coeffs[i]
        out[i - 1] = carry
    assert carry * a + coeffs[0] == 0
    return _primitive_int(out)


def _sturm_chain(coeffs: Sequence[int]) -> list[list[int]]:
    p0 = list(coeffs)
    p1 = _trim([i * c for i, c in enumerate(p0)][1:] + [0])
    chain = [p0]
    if not p1:
        return chain
    chain.append(p1)
    while True:
        f, g = chain[-2], chain[-1]
        if len(g) == 1:
            break
        # pseudo-remainder scaled by a positive power so signs are preserved
        delta = len(f) - len(g) + 1
        scale = abs(g[-1]) ** max(delta, 1)
        r = [c * scale for c in f]
        while len(r) >= len(g):
            if r[-1]:
                q = Fraction(r[-1], g[-1])
                shift = len(r) - len(g)
                for i in range(len(g)):
                    r[i + shift] -= q * g[i]
            r.pop()
        r = _trim(r)
        if not r:
            break
        chain.append(_primitive_int([-Fraction(c) for c in r]))
    return chain


def _variations(chain: Sequence[Sequence[int]], a: Fraction) -> int:
    signs = []
    for p in chain:
        v = _eval_at(p, a)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_count(p, interval: tuple) -> int:
    """Number of distinct real roots of ``p`` in the half-open (a, b].

    ``p`` is a univariate polynomial (or its ascending coefficient list);
    roots exactly at ``a`` are removed by deflation so the left end stays
    open.  Exact over the rationals.
    """
    a, b = Fraction(interval[0]), Fraction(interval[1])
    if a >= b:
        raise ValueError("empty interval")
    if isinstance(p, Polynomial):
        if p.space.dimension != 1:
            raise ValueError("sturm_count expects a univariate polynomial")
        coeffs = segment_coefficients(p)
    else:
        coeffs = _primitive_int([Fraction(c) for c in p])
    coeffs = _trim(list(coeffs))
    if not coeffs:
        raise ValueError("zero polynomial has no root count")
    if len(coeffs) == 1:
        return 0
    while _eval_at(coeffs, a) == 0:
        coeffs = _deflate_root(coeffs, a)
        if len(coeffs) == 1:
            return 0
    chain = _sturm_chain(coeffs)
    return _variations(chain, a) - _variations(chain, b)


def segment_coefficients(p: Polynomial) -> list[int]:
    """Dense ascending integer coefficients of a univariate polynomial."""
    out = [Fraction(0)] * (p.degree() + 1 if not p.is_zero else 1)
    for (e,), c in p.terms.items():
        out[e] += c
    return _primitive_int(out)


# ---------------------------------------------------------------------------
# half-space test


def polar_side(s: Hypersurface, l: LightSource, x: Sequence) -> int:
    """Side of the first polar the point shares with the light.

    +1: same side (candidate-lit), -1: opposite (excluded), 0: on the
    terminator.  The test is relative, so it is invariant under rescaling
    of sigma and handles a light inside the surface without a special case.
    """
    polar = first_polar(s, l).poly
    return _polar_side_cached(polar, l, exact_point(x))


def _polar_side_cached(polar: Polynomial, l: LightSource, x: tuple[Fraction, ...]) -> int:
    at_light = polar.evaluate(l.affine_coords())
    if at_light == 0:
        raise LightOnPolarError(
            f"light {l.name!r} lies on the polar; no lit half-space exists")
    at_x = polar.evaluate(x)
    if at_x == 0:
        return 0
    return 1 if (at_x > 0) == (at_light > 0) else -1


# ---------------------------------------------------------------------------
# ray occlusion


def _segment_polynomial(poly: Polynomial, seg: RaySegment) -> list[int]:
    tspace = VariableSpace(("t",))
    t = Polynomial.variable(tspace, "t")
    bind = {}
    for name, x0, x1 in zip(poly.space.names, seg.origin, seg.target):
        bind[name] = t * (x1 - x0) + x0
    q, _ = substitute(poly, bind, into=tspace)
    if q.is_zero:
        return []
    return segment_coefficients(q)


def segment_occlusion(scene: SceneDescription, x: Sequence, l: LightSource,
                      surface_index: int | None = None) -> bool:
    """True when some factor surface crosses the open segment from x to the light.

    For the sample's own factor the trivial crossing at t = 0 is removed by
    exact deflation when the sample lies exactly on the surface.  Float
    samples sit slightly off the surface (linear interpolation), so their own
    crossing lands at a small positive t instead of 0; it is excluded by
    offsetting the interval start past an exact Newton estimate of that
    crossing (capped, and never less than epsilon).  A factor whose
    polynomial vanishes along the whole segment has no isolated crossing and
    never blocks.
    """
    xe = exact_point(x)
    seg = RaySegment(origin=xe, target=l.affine_coords())
    own = None
    if surface_index is not None and scene.role(surface_index) == "factor":
        own = surface_index
    for j, f in enumerate(scene.factors):
        coeffs = _segment_polynomial(f.poly, seg)
        if not coeffs or len(coeffs) == 1:
            continue
        lo = Fraction(0)
        if j == own:
            if _eval_at(coeffs, Fraction(0)) == 0:
                while _eval_at(coeffs, Fraction(0)) == 0:
                    coeffs = _deflate_root(coeffs, Fraction(0))
                    if len(coeffs) == 1:
                        break
                if len(coeffs) == 1:
                    continue
            else:
                lo = _own_crossing_offset(coeffs)
        if sturm_count(coeffs, (lo, 1 - SEGMENT_EPSILON)) > 0:
            return True
    return False


def _own_crossing_offset(coeffs: Sequence[int]) -> Fraction:
    # p(0) != 0: the sample's own sheet crosses near t = -p(0)/p'(0) when that
    # estimate is small and positive; step past it with a safety factor
    p0 = Fraction(coeffs[0])
    p1 = Fraction(coeffs[1]) if len(coeffs) > 1 else Fraction(0)
    if p1:
        t_hat = -p0 / p1
        if 0 < t_hat <= OWN_CROSSING_CAP:
            return max(SEGMENT_EPSILON, 4 * t_hat)
    return SEGMENT_EPSILON


# ---------------------------------------------------------------------------
# classification


SNAP_QUANTUM = Fraction(1, 2**40)


def snap_to_surface(s: Hypersurface, x: Sequence, steps: int = 5) -> tuple[Fraction, ...]:
    """Move a near-surface point onto the surface by exact Newton steps.

    Each step moves along the gradient by sigma/|grad|^2, then rounds to a
    fixed dyadic quantum so coordinate fractions stay small.  Interpolated
    mesh vertices land within ~1e-12 of the surface, far below the tolerance
    the occlusion epsilon can absorb.  Points with a vanishing gradient are
    returned unchanged.
    """
    xe = list(exact_point(x))
    grads = s.poly.gradient()
    for _ in range(steps):
        v = s.poly.evaluate(xe)
        if v == 0:
            break
        g = [gk.evaluate(xe) for gk in grads]
        g2 = sum(gk * gk for gk in g)
        if g2 == 0:
            break
        scale = Fraction(v) / g2
        xe = [xi - scale * gk for xi, gk in zip(xe, g)]
        xe = [Fraction(round(xi / SNAP_QUANTUM)) * SNAP_QUANTUM for xi in xe]
        if abs(float(s.poly.evaluate(xe))) <= 1e-11 * (1.0 + math.sqrt(float(g2))):
            break
    return tuple(xe)


def on_surface_residual(s: Hypersurface, x: Sequence) -> float:
    xe = exact_point(x)
    val = s.poly.evaluate(xe)
    if val == 0:
        return 0.0
    grad = [g.evaluate(xe) for g in s.poly.gradient()]
    norm = math.sqrt(math.fsum(float(g) * float(g) for g in grad))
    return abs(float(val)) / max(1.0, norm)


def check_on_surface(s: Hypersurface, x: Sequence) -> None:
    res = on_surface_residual(s, x)
    if res > ON_SURFACE_TOLERANCE:
        raise OffSurfaceSampleError(
            f"point is not on {s.name!r}: residual {res:.3g} exceeds "
            f"{ON_SURFACE_TOLERANCE:g}")


def classify_sample(scene: SceneDescription, sample: SurfaceSample,
                    light: LightSource | None = None,
                    *, checked: bool = True) -> ClassifiedSample:
    """Classify one on-surface sample.

    Factor points: PolarExcluded when facing away from the light, Occluded
    when facing it behind a blocker, Illuminated otherwise (points exactly
    on the terminator render as Illuminated).  Receiver points: ReceiverShadow
    when any factor blocks the segment to the light, else ReceiverLit.
    """
    l = light if light is not None else scene.light()
    surfaces = scene.surfaces()
    s = surfaces[sample.surface_index]
    if checked:
        check_on_surface(s, sample.point)
    if scene.role(sample.surface_index) == "factor":
        side = polar_side(s, l, sample.point)
        if side < 0:
            cls = IlluminationClass.POLAR_EXCLUDED
        elif segment_occlusion(scene, sample.point, l, sample.surface_index):
            cls = IlluminationClass.OCCLUDED
        else:
            cls = IlluminationClass.ILLUMINATED
    else:
        blocked = segment_occlusion(scene, sample.point, l, sample.surface_index)
        cls = IlluminationClass.RECEIVER_SHADOW if blocked else IlluminationClass.RECEIVER_LIT
    return ClassifiedSample(point=tuple(sample.point),
                            surface_index=sample.surface_index, cls=cls)


class ShadingContext:
    """Precomputed polars for classifying many samples against one light."""

    def __init__(self, scene: SceneDescription, light: LightSource | None = None):
        self.scene = scene
        self.light = light if light is not None else scene.light()
        self._polars: dict[int, Polynomial] = {}
        for i, s in enumerate(scene.surfaces()):
            if scene.role(i) == "factor":
                self._polars[i] = first_polar(s, self.light).poly

    def classify(self, sample: SurfaceSample, checked: bool = False) -> ClassifiedSample:
        scene, l = self.scene, self.light
        s = scene.surfaces()[sample.surface_index]
        if checked:
            check_on_surface(s, sample.point)
        if sample.surface_index in self._polars:
            side = _polar_side_cached(self._polars[sample.surface_index], l,
                                      exact_point(sample.point))
            if side < 0:
                cls = IlluminationClass.POLAR_EXCLUDED
            elif segment_occlusion(scene, sample.point, l, sample.surface_index):
                cls = IlluminationClass.OCCLUDED
            else:
                cls = IlluminationClass.ILLUMINATED
        else:
            blocked = segment_occlusion(scene, sample.point, l, sample.surface_index)
            cls = (IlluminationClass.RECEIVER_SHADOW if blocked
                   else IlluminationClass.RECEIVER_LIT)
        return ClassifiedSample(point=tuple(sample.point),
                                surface_index=sample.surface_index, cls=cls)
