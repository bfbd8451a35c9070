"""Elimination backends: Buchberger, Dixon, Sylvester, presubstitution."""

from fractions import Fraction
import random
import sys

import pytest

sys.path.insert(0, "tests")
from oracles import cofactor_determinant, quadric_cone_oracle

from hypershade.elim import (
    ElimBudget,
    EliminationBudgetError,
    EliminationTask,
    ElimStructureError,
    bareiss_determinant,
    buchberger,
    dixon_resultant,
    eliminate,
    eliminate_groebner,
    linear_presubstitution,
    normal_form,
    s_polynomial,
    sylvester_matrix,
    sylvester_resultant,
)
from hypershade.expr import parse_expression
from hypershade.poly import (
    LEX,
    Polynomial,
    VariableSpace,
    block_order,
    divide_exact,
    normalize_primitive,
)
from hypershade.scene import Hypersurface, LightSource, tangent_cone_task

XY = VariableSpace(("x", "y"))


def p(text, space=XY):
    return parse_expression(text, space)


# ---------------------------------------------------------------------------
# normal form and Buchberger


def test_normal_form_examples():
    x = p("x")
    assert normal_form(p("x^2"), [x], LEX).is_zero
    assert normal_form(p("x^2 + y"), [x], LEX) == p("y")
    # one division step: xy + 1 = y*(x + y) + (1 - y^2)
    assert normal_form(p("x*y + 1"), [p("x + y")], LEX) == p("-y^2 + 1")


def test_normal_form_leaves_ideal_member():
    basis = [p("x + y"), p("y^2 - 2")]
    q = p("(x + y)*(x - 3) + 7*(y^2 - 2)")
    assert normal_form(q, basis, LEX).is_zero


def test_buchberger_single_generator():
    basis = buchberger([p("x")], LEX)
    assert basis == [p("x")]


def test_buchberger_circle_line():
    basis = buchberger([p("x^2 + y^2 - 1"), p("x - y")], LEX)
    assert p("2*y^2 - 1") in basis


def test_buchberger_hyperbola_line():
    basis = buchberger([p("x*y - 1"), p("x + y - 2")], LEX)
    assert p("y^2 - 2*y + 1") in basis


def test_buchberger_output_is_groebner_basis():
    rng = random.Random(5)
    systems = [
        [p("x^2 + y^2 - 1"), p("x - y")],
        [p("x*y - 1"), p("x + y - 2")],
        [p("x^2 - y"), p("y^2 - x")],
    ]
    for _ in range(5):
        systems.append([
            p(f"{rng.randint(1, 3)}*x^2 + {rng.randint(-3, 3)}*y - {rng.randint(0, 4)}"),
            p(f"x*y + {rng.randint(-3, 3)}"),
        ])
    for system in systems:
        basis = buchberger(system, LEX)
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                s = s_polynomial(basis[i], basis[j], LEX)
                assert normal_form(s, basis, LEX).is_zero


def test_buchberger_budget_exceeded():
    sys3 = VariableSpace(("x", "y", "z"))
    system = [p("x^3*y - z^2 + 1", sys3), p("y^3*z - x", sys3),
              p("z^3*x - y", sys3)]
    with pytest.raises(EliminationBudgetError):
        buchberger(system, LEX, ElimBudget(max_steps=4))


# ---------------------------------------------------------------------------
# elimination fronts


def _task(polys, elim, space):
    return EliminationTask(system=tuple(p(t, space) for t in polys),
                           eliminate=elim)


def test_groebner_elimination_circle_line():
    res = eliminate_groebner(_task(["x^2 + y^2 - 1", "x - y"], ("x",), XY))
    assert res.eliminant == p("2*y^2 - 1", VariableSpace(("y",)))
    assert res.backend_used == "groebner"


def test_groebner_elimination_no_relation():
    res = eliminate_groebner(_task(["x - y"], ("x",), XY))
    assert res.eliminant is None


def test_sphere_cone_elimination_matches_quadric_identity():
    sp = VariableSpace(("x", "y", "z"))
    sphere = Hypersurface("S", p("x^2 + y^2 + z^2 - 1", sp))
    light = LightSource.affine((0, 0, 2))
    task = tangent_cone_task(sphere, light)
    oracle = quadric_cone_oracle(sphere.poly, (0, 0, 2))
    assert oracle == p("3*x^2 + 3*y^2 - (z - 2)^2", sp)
    for backend in ("groebner", "dixon", "sylvester-auto"):
        if backend == "groebner":
            res = eliminate_groebner(task)
        elif backend == "dixon":
            res = dixon_resultant(task)
        else:
            res = eliminate(task)
        got = res.eliminant
        from hypershade.poly import restrict
        assert restrict(got, sp) == oracle, backend


def test_dixon_direct_substitution():
    sp = VariableSpace(("q", "s", "t"))
    res = dixon_resultant(_task(["q^2 - t", "q - s"], ("q",), sp))
    assert res.eliminant == p("s^2 - t", VariableSpace(("s", "t")))


def test_dixon_divisible_by_groebner_eliminant():
    gb = eliminate_groebner(_task(["x^2 + y^2 - 1", "x - y"], ("x",), XY))
    dx = dixon_resultant(_task(["x^2 + y^2 - 1", "x - y"], ("x",), XY))
    assert divide_exact(dx.eliminant, gb.eliminant) is not None


def test_dixon_wrong_arity_rejected():
    with pytest.raises(ElimStructureError):
        dixon_resultant(_task(["x^2 + y^2 - 1"], ("x",), XY))


# ---------------------------------------------------------------------------
# Sylvester resultant and Bareiss determinants


def test_sylvester_linear_pair():
    sp = VariableSpace(("x", "a", "b"))
    r = sylvester_resultant(p("x - a", sp), p("x - b", sp), "x")
    assert r in (p("b - a", sp), p("a - b", sp))


def test_sylvester_parabola():
    sp = VariableSpace(("x", "s", "t"))
    assert sylvester_resultant(p("x^2 - t", sp), p("x - s", sp), "x") \
        == p("s^2 - t", sp)


def test_sylvester_matches_cofactor_oracle():
    sp = VariableSpace(("x", "s", "t"))
    rng = random.Random(31)

    def cubic():
        return p(" + ".join(
            f"{rng.randint(-5, 5)}*x^{k}*s^{rng.randint(0, 1)}"
            f"*t^{rng.randint(0, 1)}" for k in range(4)) + " + x^3", sp)

    for _ in range(5):
        f, g = cubic(), cubic()
        m = sylvester_matrix(f, g, "x")
        assert bareiss_determinant(m) == cofactor_determinant(m)


def test_sylvester_detects_common_factor():
    sp = VariableSpace(("x", "u"))
    common = p("x - u", sp)
    f = common * p("x^2 + 1", sp)
    g = common * p("x + 3", sp)
    assert sylvester_resultant(f, g, "x").is_zero
    # coprime pair: nonzero resultant
    assert not sylvester_resultant(p("x^2 + 1", sp), p("x + 3", sp), "x").is_zero


def test_sylvester_rejects_degree_zero():
    sp = VariableSpace(("x", "s"))
    with pytest.raises(ElimStructureError):
        sylvester_resultant(p("s", sp), p("x - s", sp), "x")


def test_bareiss_examples():
    sp = XY
    one = Polynomial.constant(sp, 1)
    zero = Polynomial.zero(sp)
    ident = [[one if i == j else zero for j in range(3)] for i in range(3)]
    assert bareiss_determinant(ident) == one
    x = p("x")
    assert bareiss_determinant([[x, one], [one, x]]) == p("x^2 - 1")


def test_bareiss_matches_cofactor_on_random_linear_entries():
    rng = random.Random(12)
    sp = XY
    for _ in range(4):
        m = [[p(f"{rng.randint(-4, 4)}*x + {rng.randint(-4, 4)}*y + {rng.randint(-4, 4)}")
              for _ in range(4)] for _ in range(4)]
        assert bareiss_determinant(m) == cofactor_determinant(m)


# ---------------------------------------------------------------------------
# linear presubstitution


def test_presubstitution_collapses_quadric_cone_task():
    # quadric polars are linear, so back-substitution solves every
    # eliminated variable and the cone drops out with no matrix step
    sp = VariableSpace(("x", "y", "z"))
    sphere = Hypersurface("S", p("x^2 + y^2 + z^2 - 1", sp))
    task = tangent_cone_task(sphere, LightSource.affine((0, 0, 2)))
    pre = linear_presubstitution(task)
    assert not pre.presub_warning
    assert pre.eliminate == ()
    assert len(pre.system) == 1
    from hypershade.poly import restrict
    assert restrict(normalize_primitive(pre.system[0]), sp) \
        == p("3*x^2 + 3*y^2 - z^2 + 4*z - 4", sp)
    assert pre.cleared


def test_presubstitution_reduces_quartic_cone_task_to_sylvester_shape():
    sp = VariableSpace(("x", "y", "z"))
    torus = Hypersurface(
        "T", p("(x^2 + y^2 + z^2 + 3)^2 - 16*x^2 - 16*y^2", sp))
    task = tangent_cone_task(torus, LightSource.affine((8, 0, 2)))
    pre = linear_presubstitution(task)
    assert not pre.presub_warning
    assert len(pre.system) == 2          # surface and its polar, composed
    assert len(pre.eliminate) == 1       # only the line parameter remains
    assert pre.cleared                   # line denominators were cleared


def test_presubstitution_no_linear_occurrence_is_identity():
    task = _task(["x^2 + y^2 - 1"], ("x",), XY)
    pre = linear_presubstitution(task)
    assert pre.system == task.system
    assert not pre.presub_warning


def test_eliminant_vanishes_on_solution_set():
    # lines through the source and a contact point lie on the cone, so the
    # eliminant must vanish along each of them
    sp = VariableSpace(("x", "y", "z"))
    sphere = Hypersurface("S", p("x^2 + y^2 + z^2 - 1", sp))
    light = (Fraction(0), Fraction(0), Fraction(5, 3))
    theta = eliminate(tangent_cone_task(
        sphere, LightSource.affine(light))).eliminant
    rng = random.Random(8)
    from hypershade.poly import restrict
    theta3 = restrict(theta, sp)
    count = 0
    for k in range(-10, 10):
        # contact circle z = 3/5, x^2 + y^2 = 16/25, parametrized rationally
        t = Fraction(k, 7)
        den = 1 + t * t
        q = (Fraction(4, 5) * (1 - t * t) / den,
             Fraction(8, 5) * t / den, Fraction(3, 5))
        assert sphere.poly.evaluate(q) == 0
        for _ in range(2):
            a = Fraction(rng.randint(-7, 7), rng.randint(1, 7))
            x = tuple(a * l + (1 - a) * qi for l, qi in zip(light, q))
            assert theta3.evaluate(x) == 0
            count += 1
    assert count == 40


def test_elimination_invariant_under_system_reordering():
    sp = VariableSpace(("x", "y", "z"))
    sphere = Hypersurface("S", p("x^2 + y^2 + z^2 - 1", sp))
    task = tangent_cone_task(sphere, LightSource.affine((0, 0, 2)))
    rev = EliminationTask(system=tuple(reversed(task.system)),
                          eliminate=task.eliminate)
    a = eliminate(task).eliminant
    b = eliminate(rev).eliminant
    assert normalize_primitive(a) == normalize_primitive(b)


def test_budget_propagates_through_eliminate():
    sp = VariableSpace(("x", "y", "z"))
    sphere = Hypersurface("S", p("x^2 + y^2 + z^2 - 1", sp))
    task = tangent_cone_task(sphere, LightSource.affine((0, 0, 2)))
    with pytest.raises(EliminationBudgetError):
        eliminate_groebner(task, ElimBudget(max_steps=2))
