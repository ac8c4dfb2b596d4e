"""Desk-scale cohomology of the A-valued de Rham-type complex.

Two concrete models are implemented.  On a star-shaped box, the radial
homotopy operator K with dK + Kd = id produces primitives of closed
forms in exact rational arithmetic (monomial coefficients pick up a
factor 1/(degree + form degree) under the line integral), certifying
that every closed positive-degree class vanishes.  On the circle, the
function class is trigonometric polynomials; the class of a 1-form is
its A-combination of Fourier means, zero exactly on derivatives, and
the fluctuating part integrates termwise.  Together with the constant
check in degree 0 these realize the isomorphism between the A-tensored
de Rham cohomology of the base and the cohomology upstairs, on the
subcomplex generated by A-combinations of prolonged forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
import numpy as np

from .expr import (
    Add,
    Call,
    Const,
    DifferentialForm,
    Div,
    Expr,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    add,
    call,
    const,
    evaluate,
    form,
    mul,
    power,
    var,
)
from .fields import coordinate_prolongation
from .forms import AForm
from .functions import AFunction, lifted_function
from .points import Chart
from .weil import AElement, WeilAlgebra

__all__ = [
    "ACombination",
    "NonPolynomialCoefficient",
    "NonTrigPolynomial",
    "NotClosed",
    "NotConstant",
    "NotStarShaped",
    "a_primitive",
    "circle_h1_class",
    "circle_primitive",
    "closure_residual",
    "h0_check",
    "inject",
    "poincare_homotopy",
]

DEFAULT_MAX_FREQ = 8
CLOSURE_TOL = 1e-10


class NotStarShaped(ValueError):
    """Box chart does not contain the origin."""


class NonPolynomialCoefficient(ValueError):
    """Coefficient expression is not a polynomial."""


class NonTrigPolynomial(ValueError):
    """Circle-chart function is not a trigonometric polynomial of the allowed frequency."""


class NotClosed(ValueError):
    """Input form has a nonzero differential."""


class NotConstant(ValueError):
    """Closed 0-form evaluated to different values (should not happen on connected charts)."""


# -- exact polynomial layer ---------------------------------------------------

Poly = dict[tuple[int, ...], Fraction]


def expr_to_poly(e: Expr, n: int) -> Poly:
    """Exact polynomial coefficients of an expression; floats convert exactly."""
    if isinstance(e, Const):
        v = Fraction(e.value)
        return {(0,) * n: v} if v else {}
    if isinstance(e, Var):
        exps = [0] * n
        exps[e.index] = 1
        return {tuple(exps): Fraction(1)}
    if isinstance(e, Add):
        return _poly_add(expr_to_poly(e.left, n), expr_to_poly(e.right, n), 1)
    if isinstance(e, Sub):
        return _poly_add(expr_to_poly(e.left, n), expr_to_poly(e.right, n), -1)
    if isinstance(e, Neg):
        return {k: -v for k, v in expr_to_poly(e.arg, n).items()}
    if isinstance(e, Mul):
        return _poly_mul(expr_to_poly(e.left, n), expr_to_poly(e.right, n))
    if isinstance(e, Div):
        if isinstance(e.right, Const) and e.right.value != 0.0:
            inv = Fraction(1) / Fraction(e.right.value)
            return {k: v * inv for k, v in expr_to_poly(e.left, n).items()}
        raise NonPolynomialCoefficient("division by a non-constant")
    if isinstance(e, Pow):
        if isinstance(e.exponent, Const) and float(e.exponent.value).is_integer() and e.exponent.value >= 0:
            out: Poly = {(0,) * n: Fraction(1)}
            base = expr_to_poly(e.base, n)
            for _ in range(int(e.exponent.value)):
                out = _poly_mul(out, base)
            return out
        raise NonPolynomialCoefficient(f"power with exponent {e.exponent!r}")
    if isinstance(e, Call):
        raise NonPolynomialCoefficient(f"transcendental call {e.fn!r}")
    raise NonPolynomialCoefficient(f"unsupported node {e!r}")


def _poly_add(a: Poly, b: Poly, sign: int) -> Poly:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, Fraction(0)) + sign * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, Fraction(0)) + va * vb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def poly_to_expr(p: Poly, n: int) -> Expr:
    out: Expr = const(0.0)
    for exps in sorted(p, key=lambda k: (sum(k), tuple(-e for e in k))):
        c = p[exps]
        term: Expr = const(float(c))
        for i, e in enumerate(exps):
            if e == 1:
                term = mul(term, var(i))
            elif e > 1:
                term = mul(term, power(var(i), const(float(e))))
        out = add(out, term)
    return out


@dataclass(frozen=True)
class PolyForm:
    """Form with exact polynomial coefficients (internal to the homotopy machinery)."""

    n: int
    degree: int
    coeffs: dict[tuple[int, ...], Poly]

    @staticmethod
    def from_form(omega: DifferentialForm) -> "PolyForm":
        return PolyForm(
            omega.n,
            omega.degree,
            {idx: expr_to_poly(g, omega.n) for g, idx in omega.terms},
        )

    def to_form(self) -> DifferentialForm:
        return form(self.n, self.degree, {idx: poly_to_expr(p, self.n) for idx, p in self.coeffs.items() if p})

    def is_zero(self) -> bool:
        return all(not p for p in self.coeffs.values())

    def max_abs(self) -> float:
        vals = [abs(float(v)) for p in self.coeffs.values() for v in p.values()]
        return max(vals, default=0.0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(k, {}) == other.coeffs.get(k, {}) for k in keys)


def d_poly(pf: PolyForm) -> PolyForm:
    out: dict[tuple[int, ...], Poly] = {}
    for idx, p in pf.coeffs.items():
        for i in range(pf.n):
            if i in idx:
                continue
            partial: Poly = {}
            for exps, c in p.items():
                if exps[i]:
                    down = list(exps)
                    down[i] -= 1
                    partial[tuple(down)] = c * exps[i]
            if not partial:
                continue
            pos = sum(1 for j in idx if j < i)
            sign = (-1) ** pos
            new_idx = idx[:pos] + (i,) + idx[pos:]
            signed = {k: sign * v for k, v in partial.items()}
            out[new_idx] = _poly_add(out.get(new_idx, {}), signed, 1)
    return PolyForm(pf.n, pf.degree + 1, out)


def homotopy_poly(pf: PolyForm) -> PolyForm:
    """Radial homotopy: g x^m dx_I -> sum_k (-1)^(k-1) x^(m+e_{i_k})/(|m|+p) dx_(I minus i_k)."""
    p = pf.degree
    if p < 1:
        raise ValueError("homotopy applies to degree >= 1")
    out: dict[tuple[int, ...], Poly] = {}
    for idx, poly in pf.coeffs.items():
        for k, ik in enumerate(idx):
            sign = (-1) ** k
            rest = idx[:k] + idx[k + 1:]
            bumped: Poly = {}
            for exps, c in poly.items():
                up = list(exps)
                up[ik] += 1
                bumped[tuple(up)] = sign * c / (sum(exps) + p)
            out[rest] = _poly_add(out.get(rest, {}), bumped, 1)
    return PolyForm(pf.n, p - 1, out)


def _require_star_shaped(chart: Chart) -> None:
    if chart.kind != "box":
        raise NotStarShaped("homotopy operator needs a box chart")
    if not all(lo < 0.0 < hi for lo, hi in chart.intervals):
        raise NotStarShaped("box must contain the origin")


def poincare_homotopy(omega: DifferentialForm, chart: Chart) -> DifferentialForm:
    """K with dK + Kd = id on positive degrees over a star-shaped box (exact on polynomials)."""
    _require_star_shaped(chart)
    if omega.degree < 1:
        raise ValueError("homotopy applies to degree >= 1")
    return homotopy_poly(PolyForm.from_form(omega)).to_form()


# -- A-combinations of prolonged base forms ----------------------------------


@dataclass(frozen=True)
class ACombination:
    """Finite sum of A-scaled prolonged base forms, all of one degree."""

    algebra: WeilAlgebra
    n: int
    degree: int
    terms: tuple[tuple[AElement, DifferentialForm], ...]

    def __post_init__(self) -> None:
        for a, omega in self.terms:
            if a.algebra != self.algebra:
                raise ValueError("A-coefficient from a different algebra")
            if omega.n != self.n or omega.degree != self.degree:
                raise ValueError("summand of wrong dimension or degree")

    def to_aform(self, chart: Chart) -> AForm:
        out = AForm.zero(self.algebra, chart, self.degree)
        for a, omega in self.terms:
            out = out + inject(a, omega, chart)
        return out

    def differential(self) -> "ACombination":
        from .expr import exterior_derivative as d_base

        return ACombination(
            self.algebra,
            self.n,
            self.degree + 1,
            tuple((a, d_base(omega)) for a, omega in self.terms),
        )

    def slotwise_polys(self) -> list[PolyForm]:
        """Expansion over the algebra basis: one exact polynomial form per slot."""
        slots = []
        for alpha in range(self.algebra.dim):
            acc: dict[tuple[int, ...], Poly] = {}
            for a, omega in self.terms:
                weight = Fraction(float(a.coeffs[alpha]))
                if not weight:
                    continue
                pf = PolyForm.from_form(omega)
                for idx, poly in pf.coeffs.items():
                    scaled = {k: weight * v for k, v in poly.items()}
                    acc[idx] = _poly_add(acc.get(idx, {}), scaled, 1)
            slots.append(PolyForm(self.n, self.degree, acc))
        return slots


def inject(a: AElement, omega: DifferentialForm, chart: Chart) -> AForm:
    """The complex morphism: scale the prolonged form by the constant a."""
    return AForm(
        a.algebra,
        chart,
        omega.degree,
        tuple((lifted_function(g, a.algebra, chart).scale(a), idx) for g, idx in omega.terms),
    )


def closure_residual(eta: ACombination) -> float:
    """Max coefficient of d(eta), expanded slotwise over the algebra basis (exact)."""
    return max((pf.max_abs() for pf in eta.differential().slotwise_polys()), default=0.0)


def a_primitive(eta: ACombination, chart: Chart, tol: float = CLOSURE_TOL) -> ACombination:
    """Primitive of a closed positive-degree combination via the homotopy operator."""
    _require_star_shaped(chart)
    if eta.degree < 1:
        raise ValueError("primitives are defined for degree >= 1")
    residual = closure_residual(eta)
    if residual > tol:
        raise NotClosed(f"closure residual {residual:.3e} exceeds {tol:.1e}")
    terms = tuple((a, poincare_homotopy(omega, chart)) for a, omega in eta.terms)
    return ACombination(eta.algebra, eta.n, eta.degree - 1, terms)


# -- circle model -------------------------------------------------------------


@dataclass(frozen=True)
class TrigCoefficients:
    """mean + sum_k cos_terms[k-1] cos(kx) + sin_terms[k-1] sin(kx)."""

    mean: float
    cos_terms: tuple[float, ...]
    sin_terms: tuple[float, ...]


def trig_coefficients(
    g: Expr, max_freq: int = DEFAULT_MAX_FREQ, tol: float = 1e-8
) -> TrigCoefficients:
    """Fourier coefficients by discrete sampling; exact on trig polynomials.

    Sampling at 2*max_freq+1 equispaced angles recovers every frequency up to
    max_freq; the reconstruction is then validated at off-grid points and a
    mismatch flags a non-trig-polynomial input.
    """
    n_samples = 2 * max_freq + 1
    angles = [2.0 * math.pi * j / n_samples for j in range(n_samples)]
    try:
        values = [evaluate(g, [t]) for t in angles]
    except ArithmeticError as exc:
        raise NonTrigPolynomial(f"evaluation failed on the circle: {exc}") from exc
    mean = sum(values) / n_samples
    cos_terms = []
    sin_terms = []
    for k in range(1, max_freq + 1):
        cos_terms.append(2.0 / n_samples * sum(v * math.cos(k * t) for v, t in zip(values, angles)))
        sin_terms.append(2.0 / n_samples * sum(v * math.sin(k * t) for v, t in zip(values, angles)))
    cutoff = 1e-13 * (1.0 + max(abs(v) for v in values))

    def snap(c: float) -> float:
        return 0.0 if abs(c) <= cutoff else c

    tc = TrigCoefficients(
        snap(mean), tuple(snap(c) for c in cos_terms), tuple(snap(s) for s in sin_terms)
    )
    for j in range(7):
        t = 0.31 + 2.0 * math.pi * j / 7.0  # off-grid probes
        recon = _trig_eval(tc, t)
        if abs(recon - evaluate(g, [t])) > tol * (1.0 + abs(recon)):
            raise NonTrigPolynomial(
                f"not a trigonometric polynomial of frequency <= {max_freq}"
            )
    return tc


def _trig_eval(tc: TrigCoefficients, t: float) -> float:
    out = tc.mean
    for k, (c, s) in enumerate(zip(tc.cos_terms, tc.sin_terms), start=1):
        out += c * math.cos(k * t) + s * math.sin(k * t)
    return out


def trig_primitive_expr(tc: TrigCoefficients) -> Expr:
    """Termwise primitive of the fluctuating part: cos(kx) -> sin(kx)/k, sin(kx) -> -cos(kx)/k."""
    out: Expr = const(0.0)
    for k, (c, s) in enumerate(zip(tc.cos_terms, tc.sin_terms), start=1):
        kx = mul(const(float(k)), var(0))
        out = add(out, mul(const(c / k), call("sin", kx)))
        out = add(out, mul(const(-s / k), call("cos", kx)))
    return out


def circle_h1_class(eta: ACombination, max_freq: int = DEFAULT_MAX_FREQ) -> AElement:
    """Cohomology class of a degree-1 combination on the circle: A-weighted Fourier means."""
    if eta.degree != 1 or eta.n != 1:
        raise ValueError("circle classes live in degree 1 on a 1-dimensional chart")
    acc = eta.algebra.zero()
    for a, omega in eta.terms:
        g = omega.coefficient((0,))
        acc = acc + trig_coefficients(g, max_freq).mean * a
    return acc


def circle_primitive(
    eta: ACombination, max_freq: int = DEFAULT_MAX_FREQ
) -> tuple[AElement, ACombination]:
    """Split eta = class * dx + d(primitive); returns (class, primitive 0-form)."""
    cls = circle_h1_class(eta, max_freq)
    terms = []
    for a, omega in eta.terms:
        g = omega.coefficient((0,))
        primitive = trig_primitive_expr(trig_coefficients(g, max_freq))
        terms.append((a, form(1, 0, {(): primitive})))
    return cls, ACombination(eta.algebra, 1, 0, tuple(terms))


# -- degree zero --------------------------------------------------------------


def h0_check(
    phi: AFunction,
    samples: int = 20,
    seed: int = 0,
    closed_tol: float = 1e-9,
    constant_tol: float = 1e-8,
) -> AElement:
    """Verify phi is closed and constant across the chart; return the constant value."""
    from .sampling import random_near_point

    algebra, chart = phi.algebra, phi.chart
    rng = np.random.default_rng(seed)
    points = [random_near_point(rng, algebra, chart) for _ in range(max(1, samples))]
    partials = [coordinate_prolongation(algebra, chart, i).apply_fn(phi) for i in range(chart.n)]
    residual = 0.0
    for xi in points:
        for dphi in partials:
            residual = max(residual, dphi.evaluate(xi).max_abs())
    if residual > closed_tol:
        raise NotClosed(f"differential residual {residual:.3e} exceeds {closed_tol:.1e}")
    values = [phi.evaluate(xi) for xi in points]
    first = values[0]
    spread = max((v - first).max_abs() for v in values)
    if spread > constant_tol:
        raise NotConstant(f"value spread {spread:.3e} exceeds {constant_tol:.1e}")
    return first
