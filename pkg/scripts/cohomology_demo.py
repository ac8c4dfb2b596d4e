"""Walk through the three cohomology models on the dual numbers.

Shows the homotopy operator producing a primitive, the circle class of a
1-form with and without mean, and the degree-0 constant check.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from npk.cohomology import (
    ACombination,
    a_primitive,
    circle_h1_class,
    circle_primitive,
    h0_check,
)
from npk.expr import form, parse, unparse
from npk.functions import AFunction, lifted_function
from npk.points import Chart
from npk.weil import build_algebra, parse_presentation


def main() -> None:
    dual = build_algebra(parse_presentation("R[x]/(x^2)"))
    box = Chart.cube(2)
    eps = dual.basis_element(1)

    print("== box: primitive of a closed 1-form ==")
    omega = form(2, 1, {(0,): parse("x2", 2), (1,): parse("x1", 2)})
    eta = ACombination(dual, 2, 1, ((eps, omega),))
    primitive = a_primitive(eta, box)
    for a, w in primitive.terms:
        print(f"  coefficient {a!r}: primitive 0-form {unparse(w.coefficient(()))}")

    print("== circle: class and primitive split ==")
    eta1 = ACombination(
        dual, 1, 1, ((dual.unit(), form(1, 1, {(0,): parse("3 + cos(x1)", 1)})),)
    )
    print(f"  class of (3 + cos x) dx: {circle_h1_class(eta1)!r}")
    eta2 = ACombination(dual, 1, 1, ((eps, form(1, 1, {(0,): parse("sin(x1)", 1)})),))
    cls, prim = circle_primitive(eta2)
    print(f"  class of eps sin(x) dx: {cls!r}")
    for a, w in prim.terms:
        print(f"  primitive: ({a!r}) * ({unparse(w.coefficient(()))})")

    print("== degree 0: closed means constant ==")
    phi = (
        lifted_function(parse("x1^2 + sin(x1)", 2), dual, box)
        - lifted_function(parse("x1^2", 2), dual, box)
        - lifted_function(parse("sin(x1)", 2), dual, box)
        + AFunction.constant(dual.element([2.0, -1.0]), box)
    )
    print(f"  telescoped lift plus constant: h0 value {h0_check(phi)!r}")


if __name__ == "__main__":
    main()
