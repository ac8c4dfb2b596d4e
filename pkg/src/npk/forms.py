"""A-valued differential forms on the near-point manifold.

A degree-p form is stored against the prolonged coordinate coframe: a
list of A-valued coefficient functions indexed by strictly increasing
p-tuples.  Evaluation against p vector fields contracts with the
A-determinant of their coordinate components, expanded over
permutations (no pivoting makes sense with zero divisors, and degrees
stay tiny).  The exterior-type operator acts on coefficients through
the canonical derivation extensions of the prolonged coordinate fields;
the exact same value can be computed through the global formula with
alternating-sign field applications and bracket corrections, which the
test suite uses as an independent route.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .expr import DifferentialForm, VectorField as BaseField
from .fields import AVectorField, bracket, coordinate_prolongation, prolong
from .functions import AFunction, lifted_function
from .points import Chart, NearPoint
from .weil import AElement, AlgebraMismatch, WeilAlgebra

__all__ = [
    "AForm",
    "ArityMismatch",
    "DegreeOverflow",
    "exterior_derivative",
    "palais_eval",
    "prolong_form",
    "wedge",
]


class ArityMismatch(ValueError):
    """Number of fields differs from the form degree."""


class DegreeOverflow(ValueError):
    """Operation would produce a form of degree above the chart dimension."""


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class AForm:
    """Degree-p A-form: A-valued coefficients against increasing coordinate index tuples."""

    algebra: WeilAlgebra
    chart: Chart
    degree: int
    terms: tuple[tuple[AFunction, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if not 0 <= self.degree <= self.chart.n:
            raise DegreeOverflow(f"degree {self.degree} outside 0..{self.chart.n}")
        merged: dict[tuple[int, ...], AFunction] = {}
        for phi, idx in self.terms:
            if phi.algebra != self.algebra or phi.chart != self.chart:
                raise AlgebraMismatch("coefficient over a different algebra or chart")
            if len(idx) != self.degree:
                raise ValueError(f"index tuple {idx} does not match degree {self.degree}")
            if any(idx[k] >= idx[k + 1] for k in range(len(idx) - 1)):
                raise ValueError(f"index tuple {idx} not strictly increasing")
            if any(not 0 <= i < self.chart.n for i in idx):
                raise ValueError(f"index out of range in {idx}")
            merged[idx] = merged[idx] + phi if idx in merged else phi
        kept = tuple(
            (phi, idx) for idx, phi in sorted(merged.items()) if not phi.is_structurally_zero()
        )
        object.__setattr__(self, "terms", kept)

    def _check(self, other: "AForm") -> None:
        if self.algebra != other.algebra or self.chart != other.chart:
            raise AlgebraMismatch("forms over different algebras or charts")

    def coefficient(self, idx: tuple[int, ...]) -> AFunction:
        for phi, i in self.terms:
            if i == idx:
                return phi
        return AFunction.zero(self.algebra, self.chart)

    def __add__(self, other: "AForm") -> "AForm":
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("forms of different degree")
        return AForm(self.algebra, self.chart, self.degree, self.terms + other.terms)

    def __sub__(self, other: "AForm") -> "AForm":
        return self + other.scale_const(-1.0)

    def scale(self, factor: AFunction) -> "AForm":
        return AForm(
            self.algebra, self.chart, self.degree, tuple((factor * phi, idx) for phi, idx in self.terms)
        )

    def scale_const(self, a: AElement | float) -> "AForm":
        return AForm(
            self.algebra, self.chart, self.degree, tuple((phi.scale(a), idx) for phi, idx in self.terms)
        )

    def contract(self, fields: Sequence[AVectorField]) -> AFunction:
        """Pointfree evaluation: returns the A-valued function xi -> eta(X_1..X_p)(xi)."""
        if len(fields) != self.degree:
            raise ArityMismatch(f"degree {self.degree} form applied to {len(fields)} fields")
        for x in fields:
            if x.algebra != self.algebra or x.chart != self.chart:
                raise AlgebraMismatch("field over a different algebra or chart")
        out = AFunction.zero(self.algebra, self.chart)
        for phi, idx in self.terms:
            det = AFunction.zero(self.algebra, self.chart)
            for perm in itertools.permutations(range(self.degree)):
                prod = AFunction.constant(
                    self.algebra.scalar(float(_perm_sign(perm))), self.chart
                )
                for row, col in enumerate(perm):
                    prod = prod * fields[row].components[idx[col]]
                det = det + prod
            out = out + phi * det
        return out

    def evaluate(self, fields: Sequence[AVectorField], xi: NearPoint) -> AElement:
        """eta(X_1..X_p)(xi): coefficients times the A-determinant of evaluated components."""
        if len(fields) != self.degree:
            raise ArityMismatch(f"degree {self.degree} form applied to {len(fields)} fields")
        values = [[c.evaluate(xi) for c in x.components] for x in fields]
        acc = self.algebra.zero()
        for phi, idx in self.terms:
            det = self.algebra.zero()
            for perm in itertools.permutations(range(self.degree)):
                prod = self.algebra.scalar(float(_perm_sign(perm)))
                for row, col in enumerate(perm):
                    prod = prod * values[row][idx[col]]
                det = det + prod
            acc = acc + phi.evaluate(xi) * det
        return acc

    @staticmethod
    def zero(algebra: WeilAlgebra, chart: Chart, degree: int) -> "AForm":
        return AForm(algebra, chart, degree, ())


def prolong_form(omega: DifferentialForm, algebra: WeilAlgebra, chart: Chart) -> AForm:
    """Prolongation of a base form: lift each coefficient function."""
    if omega.n != chart.n:
        raise ValueError("form dimension differs from chart dimension")
    return AForm(
        algebra,
        chart,
        omega.degree,
        tuple((lifted_function(g, algebra, chart), idx) for g, idx in omega.terms),
    )


def wedge(eta1: AForm, eta2: AForm) -> AForm:
    """Exterior product with shuffle signs on the coordinate index tuples."""
    eta1._check(eta2)
    p, q = eta1.degree, eta2.degree
    if p + q > eta1.chart.n:
        raise DegreeOverflow(f"wedge of degrees {p} and {q} exceeds dimension {eta1.chart.n}")
    terms = []
    for phi1, idx1 in eta1.terms:
        for phi2, idx2 in eta2.terms:
            merged = _merge_indices(idx1, idx2)
            if merged is None:
                continue
            sign, idx = merged
            terms.append(((phi1 * phi2).scale(float(sign)), idx))
    return AForm(eta1.algebra, eta1.chart, p + q, tuple(terms))


def _merge_indices(
    idx1: tuple[int, ...], idx2: tuple[int, ...]
) -> tuple[int, tuple[int, ...]] | None:
    """Sort the concatenation of two increasing tuples; None if they overlap."""
    if set(idx1) & set(idx2):
        return None
    combined = idx1 + idx2
    order = sorted(range(len(combined)), key=lambda k: combined[k])
    return _perm_sign(order), tuple(sorted(combined))


def exterior_derivative(eta: AForm) -> AForm:
    """Coefficientwise operator: d(phi dx_I) = sum_i (extension of d/dx_i^A)(phi) dx_i ^ dx_I."""
    if eta.degree >= eta.chart.n:
        raise DegreeOverflow(f"cannot raise degree {eta.degree} on an {eta.chart.n}-dim chart")
    algebra, chart = eta.algebra, eta.chart
    coords = [coordinate_prolongation(algebra, chart, i) for i in range(chart.n)]
    terms = []
    for phi, idx in eta.terms:
        for i in range(chart.n):
            if i in idx:
                continue
            pos = sum(1 for j in idx if j < i)
            sign = (-1.0) ** pos
            new_idx = idx[:pos] + (i,) + idx[pos:]
            terms.append((coords[i].apply_fn(phi).scale(sign), new_idx))
    return AForm(algebra, chart, eta.degree + 1, tuple(terms))


def palais_eval(eta: AForm, thetas: Sequence[BaseField], xi: NearPoint) -> AElement:
    """Global formula for the derivative of eta on prolonged base fields.

    sum_i (-1)^(i-1) Xi~[eta(.. hat i ..)] + sum_{i<j} (-1)^(i+j) eta([Xi,Xj], .. hats ..)
    evaluated at xi, where Xi is the prolongation of thetas[i].  Independent of
    the coefficientwise route, which it must match.
    """
    if len(thetas) != eta.degree + 1:
        raise ArityMismatch(f"need {eta.degree + 1} fields, got {len(thetas)}")
    algebra, chart = eta.algebra, eta.chart
    lifted = [prolong(t, algebra, chart) for t in thetas]
    acc = algebra.zero()
    for i, x in enumerate(lifted):
        rest = lifted[:i] + lifted[i + 1:]
        inner = eta.contract(rest)
        value = x.apply_fn(inner).evaluate(xi)
        acc = acc + ((-1.0) ** i) * value
    for i in range(len(lifted)):
        for j in range(i + 1, len(lifted)):
            rest = [lifted[k] for k in range(len(lifted)) if k not in (i, j)]
            br = bracket(lifted[i], lifted[j])
            value = eta.evaluate([br] + rest, xi)
            acc = acc + ((-1.0) ** (i + j)) * value
    return acc
