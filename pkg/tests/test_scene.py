"""Polars, terminators, tangent cones, 4-D projection."""

from fractions import Fraction
import random
import sys

import pytest

sys.path.insert(0, "tests")
from oracles import quadric_cone_oracle

from hypershade.expr import parse_expression
from hypershade.poly import (
    Polynomial,
    VariableSpace,
    normalize_primitive,
    restrict,
    substitute,
    to_text,
)
from hypershade.scene import (
    ApexAtInfinityError,
    DegeneratePolarError,
    Hypersurface,
    ImproperPointError,
    LightSource,
    PerspectiveCamera,
    TangencyDegeneracyError,
    first_polar,
    hypercube_frame,
    perspective_image,
    perspective_image_task,
    perspective_point,
    perspective_terminator,
    scene_degree,
    scene_terminator_bound,
    shadow_boundary_system,
    tangent_cone,
    tangent_cone_task,
    terminator_system,
)
from hypershade.scenefile import load_scene

SP3 = VariableSpace(("x", "y", "z"))
SP4 = VariableSpace(("x", "y", "z", "w"))


def p3(text):
    return parse_expression(text, SP3)


def p4(text):
    return parse_expression(text, SP4)


@pytest.fixture(scope="module")
def bakery():
    return load_scene("scenes/bakery3d.scene")


@pytest.fixture(scope="module")
def torus(bakery):
    return next(s for s in bakery.surfaces() if s.name == "S2")


@pytest.fixture(scope="module")
def torus_cone(bakery, torus):
    return tangent_cone(torus, bakery.light("L"))


# ---------------------------------------------------------------------------
# first polars


def test_unit_sphere_polar_plane():
    s = Hypersurface("S", p3("x^2 + y^2 + z^2 - 1"))
    pol = first_polar(s, LightSource.affine((0, 0, 2)))
    assert pol.poly == p3("2*z - 1")


def test_bakery_polar_goldens(bakery):
    light = bakery.light("L")
    by_name = {s.name: s for s in bakery.surfaces()}
    got = {n: to_text(first_polar(by_name[n], light).poly)
           for n in ("S1", "S3", "P")}
    assert got["S1"] == "2*x - 2*y - 5*z + 19"
    assert got["S3"] == "16*x + y - 48*z - 131"
    assert got["P"] == "24*x + 4*y - 25*z - 708"


def test_torus_polar_cubic_golden(bakery, torus):
    pol = first_polar(torus, bakery.light("L"))
    assert to_text(pol.poly) == (
        "2*x^3 + 3*x^2*y - 8*x^2*z + 12*x^2 + 2*x*y^2 - 10*x*y + 2*x*z^2"
        " + 8*x*z - 30*x + 3*y^3 - 8*y^2*z + 10*y^2 + 3*y*z^2 + 4*y*z"
        " - 29*y - 8*z^3 + 40*z^2 - 104*z + 128")


def test_quartic_ring_polar_golden():
    ring = Hypersurface(
        "S", p4("(x - 1)^2 + ((w - 2)^2 + y^2 - 4)^2 + z^2 - 1"))
    pol = first_polar(ring, LightSource.affine((0, 2, -2, 4)))
    assert pol.poly == normalize_primitive(p4(
        "4*w^3 - 3*x + x^2 + 4*w^2*(-8 + y) - 16*y^2 + 4*y^3"
        " + 4*w*(16 - 4*y + y^2) - 2*z + z^2"))


def test_polar_degree_law():
    rng = random.Random(41)
    names = SP3.names
    for _ in range(10):
        deg = rng.randint(2, 5)
        terms = []
        for _ in range(rng.randint(3, 7)):
            v = rng.choice(names)
            k = rng.randint(1, deg)
            terms.append(f"{rng.randint(1, 6)}*{v}^{k}")
        terms.append(f"{rng.randint(1, 4)}*x^{deg}")
        terms.append(str(rng.randint(1, 9)))
        s = Hypersurface("R", p3(" + ".join(terms)))
        light = LightSource.affine((rng.randint(2, 9), rng.randint(2, 9),
                                    rng.randint(2, 9)))
        if s.poly.evaluate(tuple(light.affine_coords())) == 0:
            continue
        assert first_polar(s, light).poly.degree() == s.poly.degree() - 1


def test_polar_of_apex_vanishes_identically():
    cone = Hypersurface("C", p3("x^2 + y^2 - z^2"))
    with pytest.raises(DegeneratePolarError):
        first_polar(cone, LightSource.affine((0, 0, 0)))


# ---------------------------------------------------------------------------
# terminators


def test_terminator_system_sphere():
    s = Hypersurface("S", p3("x^2 + y^2 + z^2 - 1"))
    sys_ = terminator_system(s, LightSource.affine((0, 0, 2)))
    assert sys_.polys == (s.poly, p3("2*z - 1"))
    assert sys_.bezout_bound == 2


def test_terminator_membership_is_exact():
    # light below the classical height so the circle carries rational points
    s = Hypersurface("S", p3("x^2 + y^2 + z^2 - 1"))
    sys_ = terminator_system(s, LightSource.affine((0, 0, Fraction(5, 3))))
    for k in range(-9, 10):
        t = Fraction(k, 5)
        den = 1 + t * t
        q = (Fraction(4, 5) * (1 - t * t) / den, Fraction(8, 5) * t / den,
             Fraction(3, 5))
        assert sys_.surface.poly.evaluate(q) == 0
        assert sys_.polar.poly.evaluate(q) == 0


def test_terminator_bounds(bakery, torus):
    light = bakery.light("L")
    assert terminator_system(torus, light).bezout_bound == 12
    assert scene_degree(bakery) == 8
    assert scene_terminator_bound(bakery) == 56


# ---------------------------------------------------------------------------
# tangent cones


def test_sphere_tangent_cone_golden():
    s = Hypersurface("S", p3("x^2 + y^2 + z^2 - 1"))
    cone = tangent_cone(s, LightSource.affine((0, 0, 2)))
    assert restrict(cone.poly, SP3) == p3("3*x^2 + 3*y^2 - z^2 + 4*z - 4")


def test_quadric_cones_match_polar_identity():
    rng = random.Random(23)
    for _ in range(5):
        a, b, c = (rng.randint(1, 4) for _ in range(3))
        cx, cy, cz = (rng.randint(-3, 3) for _ in range(3))
        r = rng.randint(1, 5)
        s = Hypersurface("Q", p3(
            f"{a}*(x - {cx})^2 + {b}*(y - {cy})^2 + {c}*(z - {cz})^2 - {r}"))
        light = (cx + r + 2, cy - r - 3, cz + 1)
        assert s.poly.evaluate(light) != 0
        cone = tangent_cone(s, LightSource.affine(light))
        assert restrict(cone.poly, SP3) == quadric_cone_oracle(s.poly, light)


def test_torus_cone_degree_and_apex(bakery, torus, torus_cone):
    theta = restrict(torus_cone.poly, SP3)
    assert theta.degree() == 8
    apex = tuple(bakery.light("L").affine_coords())
    assert theta.evaluate(apex) == 0
    # theta is homogeneous of cone degree about its apex
    v = (Fraction(1), Fraction(2), Fraction(3))
    ref = theta.evaluate(tuple(a + b for a, b in zip(apex, v)))
    for t in (Fraction(3, 2), Fraction(-2), Fraction(1, 7)):
        x = tuple(a + t * b for a, b in zip(apex, v))
        assert theta.evaluate(x) == t ** 8 * ref


def test_cone_rejects_light_on_surface():
    s = Hypersurface("S", p3("x^2 + y^2 + z^2 - 1"))
    with pytest.raises(TangencyDegeneracyError):
        tangent_cone_task(s, LightSource.affine((1, 0, 0)))


def test_cone_rejects_light_at_infinity():
    s = Hypersurface("S", p3("x^2 + y^2 + z^2 - 1"))
    with pytest.raises(ApexAtInfinityError):
        tangent_cone_task(s, LightSource((1, 0, 0, 0)))


# ---------------------------------------------------------------------------
# shadow boundary systems


def test_shadow_system_sphere_on_plane():
    s = Hypersurface("S", p3("x^2 + y^2 + z^2 - 1"))
    floor = Hypersurface("F", p3("z"))
    sys_ = shadow_boundary_system(s, floor, LightSource.affine((0, 0, 2)))
    assert sys_.receiver.poly == p3("z")
    cone = restrict(sys_.cone.poly, SP3)
    assert cone == p3("3*x^2 + 3*y^2 - z^2 + 4*z - 4")
    at_floor, cleared = substitute(cone, {"z": 0}, VariableSpace(("x", "y")))
    assert not cleared
    assert at_floor == parse_expression("3*x^2 + 3*y^2 - 4",
                                        VariableSpace(("x", "y")))


def test_self_shadow_system_pairs_cone_with_surface(bakery, torus, torus_cone):
    sys_ = shadow_boundary_system(torus, torus, bakery.light("L"))
    assert sys_.receiver.poly == torus.poly
    assert restrict(sys_.cone.poly, SP3) == restrict(torus_cone.poly, SP3)


# ---------------------------------------------------------------------------
# 4-D perspective


def test_perspective_point_examples():
    cam = PerspectiveCamera()
    assert perspective_point((1, 2, 3, 4), cam) == \
        (Fraction(2, 3), Fraction(4, 3), Fraction(8, 3))
    assert perspective_point((5, -1, 0, 2), cam) == (5, -1, 2)


def test_perspective_point_identity_on_image_space():
    cam = PerspectiveCamera()
    rng = random.Random(3)
    for _ in range(10):
        q = (Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
             Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(0),
             Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        assert perspective_point(q, cam) == (q[0], q[1], q[3])


def test_perspective_point_rejects_improper():
    with pytest.raises(ImproperPointError):
        perspective_point((1, 1, -6, 1), PerspectiveCamera())


def test_three_sphere_contour_golden():
    s = Hypersurface("B", p4("x^2 + y^2 + z^2 + w^2 - 1"))
    cam = PerspectiveCamera()
    img = perspective_image(s, cam)
    assert img.poly.space.names == ("x", "y", "w")
    assert to_text(img.poly) == "35*x^2 + 35*y^2 + 35*w^2 - 36"


def test_contour_image_contains_projected_contact_points():
    s = Hypersurface("B", p4("x^2 + y^2 + z^2 + w^2 - 1"))
    cam = PerspectiveCamera()
    img = perspective_image(s, cam)
    polar = first_polar(s, LightSource.affine((0, 0, -6, 0)))
    count = 0
    # contact sphere z = -1/6, x^2 + y^2 + w^2 = 35/36
    for (a, b, c) in ((5, 3, 1), (3, 5, 1), (1, 3, 5)):
        for sa in (1, -1):
            for sb in (1, -1):
                for sc in (1, -1):
                    q = (Fraction(sa * a, 6), Fraction(sb * b, 6),
                         Fraction(-1, 6), Fraction(sc * c, 6))
                    assert s.poly.evaluate(q) == 0
                    assert polar.poly.evaluate(q) == 0
                    assert img.poly.evaluate(perspective_point(q, cam)) == 0
                    count += 1
    assert count == 24


def test_terminator_image_with_light_at_camera_is_the_contour():
    s = Hypersurface("B", p4("x^2 + y^2 + z^2 + w^2 - 1"))
    cam = PerspectiveCamera()
    at_cam = LightSource.affine((0, 0, -6, 0))
    assert perspective_terminator(s, at_cam, cam).poly == \
        perspective_image(s, cam).poly


def test_hyperplane_contour_is_degenerate():
    wall = Hypersurface("P", p4("w + 2"))
    with pytest.raises(DegeneratePolarError):
        perspective_image_task(wall, PerspectiveCamera())


# ---------------------------------------------------------------------------
# hypercube frame


def test_hypercube_frame_combinatorics():
    edges = hypercube_frame(PerspectiveCamera())
    assert len(edges) == 32
    vertices = {e.start for e in edges} | {e.end for e in edges}
    assert len(vertices) == 16
    assert {e.axis for e in edges} == {0, 1, 2, 3}
    assert (Fraction(6, 7), Fraction(6, 7), Fraction(6, 7)) in vertices
    assert (Fraction(6, 5), Fraction(6, 5), Fraction(6, 5)) in vertices


def test_hypercube_frame_rejects_vertex_at_camera_depth():
    with pytest.raises(ImproperPointError):
        hypercube_frame(PerspectiveCamera(), half_extent=6)
