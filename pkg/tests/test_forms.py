import numpy as np
import pytest

from npk.expr import Const, VectorField, form, parse
from npk.expr import exterior_derivative as d_base
from npk.fields import coordinate_prolongation, prolong
from npk.forms import (
    AForm,
    ArityMismatch,
    DegreeOverflow,
    exterior_derivative,
    palais_eval,
    prolong_form,
    wedge,
)
from npk.functions import AFunction, lifted_function
from npk.points import Chart, lift
from npk.sampling import (
    random_a_element,
    random_base_field,
    random_lifted_function,
    random_near_point,
)

CHART = Chart.cube(2)


def _coords(algebra):
    return [coordinate_prolongation(algebra, CHART, i) for i in range(2)]


def test_area_form_on_coordinates(plane_jet):
    eta = prolong_form(form(2, 2, {(0, 1): Const(1.0)}), plane_jet, CHART)
    d1, d2 = _coords(plane_jet)
    xi = random_near_point(np.random.default_rng(0), plane_jet, CHART)
    assert np.array_equal(eta.evaluate([d1, d2], xi).coeffs, plane_jet.unit().coeffs)
    assert np.array_equal(eta.evaluate([d2, d1], xi).coeffs, (-plane_jet.unit()).coeffs)
    assert eta.evaluate([d1, d1], xi).max_abs() == 0.0


def test_a_linearity_in_fields(dual):
    eta = prolong_form(form(2, 1, {(0,): Const(1.0)}), dual, CHART)
    rng = np.random.default_rng(1)
    a = random_a_element(rng, dual)
    x = _coords(dual)[0].scale(AFunction.constant(a, CHART))
    xi = random_near_point(rng, dual, CHART)
    assert (eta.evaluate([x], xi) - a).max_abs() <= 1e-12


def test_decomposable_evaluation_law(catalog):
    # eta^A(f1^A t1^A, f2^A t2^A) = f1^A f2^A (eta(t1, t2))^A
    from npk.expr import contract_form

    rng = np.random.default_rng(2)
    omega = form(2, 2, {(0, 1): parse("x1 + x2", 2)})
    t1 = VectorField((parse("x2", 2), Const(1.0)))
    t2 = VectorField((Const(1.0), parse("x1", 2)))
    f1, f2 = parse("x1*x2", 2), parse("x1 + 2", 2)
    base_value = contract_form(omega, [t1, t2])
    for algebra in catalog:
        eta = prolong_form(omega, algebra, CHART)
        args = [
            prolong(t1, algebra, CHART).scale(lifted_function(f1, algebra, CHART)),
            prolong(t2, algebra, CHART).scale(lifted_function(f2, algebra, CHART)),
        ]
        for _ in range(5):
            xi = random_near_point(rng, algebra, CHART)
            lhs = eta.evaluate(args, xi)
            rhs = lift(f1, xi) * lift(f2, xi) * lift(base_value, xi)
            assert (lhs - rhs).max_abs() <= 1e-9


def test_wedge_of_coordinate_coframes(plane_jet):
    dx1 = prolong_form(form(2, 1, {(0,): Const(1.0)}), plane_jet, CHART)
    dx2 = prolong_form(form(2, 1, {(1,): Const(1.0)}), plane_jet, CHART)
    area = wedge(dx1, dx2)
    assert len(area.terms) == 1 and area.terms[0][1] == (0, 1)
    assert wedge(dx1, dx1).terms == ()


def test_wedge_graded_commutativity(plane_jet):
    rng = np.random.default_rng(3)
    phi = random_lifted_function(rng, plane_jet, CHART)
    psi = random_lifted_function(rng, plane_jet, CHART)
    e1 = AForm(plane_jet, CHART, 1, ((phi, (0,)),))
    e2 = AForm(plane_jet, CHART, 1, ((psi, (1,)),))
    lhs = wedge(e2, e1)
    rhs = wedge(e1, e2).scale_const(-1.0)
    probes = [prolong(random_base_field(rng, CHART), plane_jet, CHART) for _ in range(2)]
    for _ in range(5):
        xi = random_near_point(rng, plane_jet, CHART)
        assert (lhs.evaluate(probes, xi) - rhs.evaluate(probes, xi)).max_abs() <= 1e-10


def test_wedge_commutativity_even_sign(plane_jet):
    # p = 1, q = 2: the swap sign is +1
    chart3 = Chart.cube(3)
    one = prolong_form(form(3, 1, {(1,): parse("x1", 3)}), plane_jet, chart3)
    two = prolong_form(form(3, 2, {(0, 2): parse("x3", 3)}), plane_jet, chart3)
    rng = np.random.default_rng(32)
    probes = [
        prolong(random_base_field(rng, chart3), plane_jet, chart3) for _ in range(3)
    ]
    for _ in range(5):
        xi = random_near_point(rng, plane_jet, chart3)
        lhs = wedge(two, one).evaluate(probes, xi)
        rhs = wedge(one, two).evaluate(probes, xi)
        assert (lhs - rhs).max_abs() <= 1e-10


def test_wedge_degree_overflow(dual):
    dx1 = prolong_form(form(2, 1, {(0,): Const(1.0)}), dual, CHART)
    area = prolong_form(form(2, 2, {(0, 1): Const(1.0)}), dual, CHART)
    with pytest.raises(DegreeOverflow):
        wedge(dx1, area)


def test_exterior_derivative_product_formula(dual):
    # d of the lift of x1*x2, evaluated on coordinate prolongations
    eta = AForm(dual, CHART, 0, ((lifted_function(parse("x1*x2", 2), dual, CHART), ()),))
    deta = exterior_derivative(eta)
    d1, d2 = _coords(dual)
    rng = np.random.default_rng(4)
    for _ in range(10):
        xi = random_near_point(rng, dual, CHART)
        assert (deta.evaluate([d1], xi) - lift(parse("x2", 2), xi)).max_abs() <= 1e-12
        assert (deta.evaluate([d2], xi) - lift(parse("x1", 2), xi)).max_abs() <= 1e-12


def test_exterior_derivative_constant_is_zero(dual):
    a = dual.element([0.5, 2.0])
    eta = AForm(dual, CHART, 0, ((AFunction.constant(a, CHART), ()),))
    assert exterior_derivative(eta).terms == ()


def test_dd_zero(catalog):
    rng = np.random.default_rng(5)
    for algebra in catalog:
        phi = random_lifted_function(rng, algebra, CHART)
        dd = exterior_derivative(exterior_derivative(AForm(algebra, CHART, 0, ((phi, ()),))))
        probes = [prolong(random_base_field(rng, CHART), algebra, CHART) for _ in range(2)]
        for _ in range(5):
            xi = random_near_point(rng, algebra, CHART)
            assert dd.evaluate(probes, xi).max_abs() <= 1e-10


def test_naturality(catalog):
    rng = np.random.default_rng(6)
    omega = form(2, 1, {(0,): parse("x2^2", 2), (1,): parse("x1*x2", 2)})
    for algebra in catalog:
        lhs = exterior_derivative(prolong_form(omega, algebra, CHART))
        rhs = prolong_form(d_base(omega), algebra, CHART)
        probes = [prolong(random_base_field(rng, CHART), algebra, CHART) for _ in range(2)]
        for _ in range(5):
            xi = random_near_point(rng, algebra, CHART)
            assert (lhs.evaluate(probes, xi) - rhs.evaluate(probes, xi)).max_abs() <= 1e-9


def test_degree_zero_post(catalog):
    # evaluating d(phi) on a field recovers the extension applied to phi
    rng = np.random.default_rng(7)
    for algebra in catalog:
        phi = random_lifted_function(rng, algebra, CHART)
        eta = AForm(algebra, CHART, 0, ((phi, ()),))
        deta = exterior_derivative(eta)
        x = prolong(random_base_field(rng, CHART), algebra, CHART)
        for _ in range(5):
            xi = random_near_point(rng, algebra, CHART)
            lhs = deta.evaluate([x], xi)
            rhs = x.apply_fn(phi).evaluate(xi)
            assert (lhs - rhs).max_abs() <= 1e-9


def test_palais_degree_zero(dual):
    # single-term formula: theta~ applied to the lift of f
    rng = np.random.default_rng(8)
    f = parse("x1^2*x2", 2)
    eta = AForm(dual, CHART, 0, ((lifted_function(f, dual, CHART), ()),))
    theta = VectorField((parse("x2", 2), parse("x1", 2)))
    for _ in range(10):
        xi = random_near_point(rng, dual, CHART)
        out = palais_eval(eta, [theta], xi)
        expected = lift(theta.apply(f), xi)
        assert (out - expected).max_abs() <= 1e-10


def test_palais_matches_coefficient_route(plane_jet):
    rng = np.random.default_rng(9)
    eta = prolong_form(form(2, 1, {(0,): parse("x2", 2)}), plane_jet, CHART)
    deta = exterior_derivative(eta)
    thetas = [
        VectorField((Const(1.0), Const(0.0))),
        VectorField((Const(0.0), Const(1.0))),
    ]
    lifted = [prolong(t, plane_jet, CHART) for t in thetas]
    for _ in range(20):
        xi = random_near_point(rng, plane_jet, CHART)
        assert (palais_eval(eta, thetas, xi) - deta.evaluate(lifted, xi)).max_abs() <= 1e-9


def test_palais_constant_coefficients_on_coordinates(plane_jet):
    # with constant coefficients and coordinate fields the bracket terms vanish
    eta = prolong_form(form(2, 1, {(0,): Const(2.0), (1,): Const(-1.0)}), plane_jet, CHART)
    thetas = [
        VectorField((Const(1.0), Const(0.0))),
        VectorField((Const(0.0), Const(1.0))),
    ]
    xi = random_near_point(np.random.default_rng(10), plane_jet, CHART)
    assert palais_eval(eta, thetas, xi).max_abs() <= 1e-12


def test_exterior_operator_three_dimensional(dual, plane_jet):
    # module invariants run up to n = 3
    from npk.checks import check_identity

    chart3 = Chart.cube(3)
    for algebra in (dual, plane_jet):
        for name in ("da-squared-zero", "da-naturality", "palais-route"):
            record = check_identity(name, algebra, chart3, seed=31, samples=30, tol=1e-9)
            assert record.passed, f"{name}: {record.max_residual:.3e}"


def test_arity_and_degree_errors(dual):
    eta = prolong_form(form(2, 1, {(0,): Const(1.0)}), dual, CHART)
    with pytest.raises(ArityMismatch):
        eta.evaluate([], random_near_point(np.random.default_rng(11), dual, CHART))
    area = prolong_form(form(2, 2, {(0, 1): Const(1.0)}), dual, CHART)
    with pytest.raises(DegreeOverflow):
        exterior_derivative(area)
    with pytest.raises(ArityMismatch):
        palais_eval(eta, [], random_near_point(np.random.default_rng(12), dual, CHART))
