"""Weil algebras presented as monomial-ideal quotients R[x1..xk]/I.

A Weil algebra is a finite-dimensional commutative local R-algebra
A = R*1 (+) m with nilpotent maximal ideal m.  Restricting to monomial
ideals keeps everything exact: the basis is the set of standard
monomials (those divisible by no ideal generator), the product of two
basis monomials is either a basis monomial or zero, and the structure
constants are 0/1 integers.  Every jet algebra R[x1..xk]/m^(h+1) and
all the small desk examples are of this form.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AlgebraMismatch",
    "AElement",
    "Derivation",
    "DimensionMismatch",
    "EmptyPresentation",
    "InfiniteDimensional",
    "LinearEndo",
    "NotADerivation",
    "NotInvertible",
    "Presentation",
    "PresentationError",
    "WeilAlgebra",
    "build_algebra",
    "derivation_basis",
    "dual_coefficient",
    "is_derivation",
    "parse_presentation",
]

DERIVATION_TOL = 1e-10
INVERT_TOL = 1e-12
NULLSPACE_CUTOFF = 1e-9


class PresentationError(ValueError):
    """Malformed monomial-ideal presentation."""


class EmptyPresentation(PresentationError):
    """Generators supplied for a zero-variable polynomial ring."""


class InfiniteDimensional(PresentationError):
    """Some variable has no pure-power generator, so the quotient is not finite."""


class DimensionMismatch(ValueError):
    """Coefficient vector length differs from dim(A)."""


class AlgebraMismatch(ValueError):
    """Operands belong to different Weil algebras."""


class NotInvertible(ZeroDivisionError):
    """Element has zero augmentation, hence lies in the maximal ideal."""


class NotADerivation(ValueError):
    """Linear endomorphism fails the Leibniz rule."""


def _total_degree(exps: tuple[int, ...]) -> int:
    return sum(exps)


def _divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(ai <= bi for ai, bi in zip(a, b))


def _grlex_key(exps: tuple[int, ...]) -> tuple:
    # graded order, and within a degree x-heavy monomials first (1, x, y, x^2, x*y, y^2)
    return (_total_degree(exps), tuple(-e for e in exps))


@dataclass(frozen=True)
class Presentation:
    """Monomial-ideal presentation: k variables and monomial generators of degree >= 2."""

    num_vars: int
    generators: tuple[tuple[int, ...], ...]
    var_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise PresentationError("negative variable count")
        if self.num_vars == 0 and self.generators:
            raise EmptyPresentation("generators supplied for R[] (zero variables)")
        names = self.var_names or tuple(f"x{i + 1}" for i in range(self.num_vars))
        if len(names) != self.num_vars:
            raise PresentationError("variable name count differs from num_vars")
        object.__setattr__(self, "var_names", names)
        for g in self.generators:
            if len(g) != self.num_vars:
                raise PresentationError(f"generator {g} has wrong arity")
            if any(e < 0 for e in g):
                raise PresentationError(f"generator {g} has a negative exponent")
            if _total_degree(g) < 2:
                raise PresentationError(f"generator {g} has total degree < 2")

    def normalized_generators(self) -> tuple[tuple[int, ...], ...]:
        """Minimal generating set: drop generators divisible by another generator."""
        gens = sorted(set(self.generators), key=_grlex_key)
        kept: list[tuple[int, ...]] = []
        for g in gens:
            if not any(_divides(k, g) for k in kept):
                kept.append(g)
        return tuple(kept)

    def text(self) -> str:
        if self.num_vars == 0:
            return "R"
        vars_part = ",".join(self.var_names)
        gens = ",".join(_monomial_text(g, self.var_names) for g in self.normalized_generators())
        return f"R[{vars_part}]/({gens})"


def _monomial_text(exps: tuple[int, ...], names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


_PRES_RE = re.compile(r"^R\[(?P<vars>[^\]]*)\]/\((?P<gens>.*)\)$")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def parse_presentation(text: str) -> Presentation:
    """Parse ``R[x,y]/(x^2,x*y,y^3)``.  The bare string ``R`` denotes the reals."""
    compact = "".join(text.split())
    if compact == "R":
        return Presentation(0, ())
    m = _PRES_RE.match(compact)
    if m is None:
        raise PresentationError(f"cannot parse presentation {text!r}")
    names = tuple(v for v in m.group("vars").split(",") if v)
    for name in names:
        if not _IDENT_RE.match(name):
            raise PresentationError(f"bad variable name {name!r}")
    if len(set(names)) != len(names):
        raise PresentationError("repeated variable name")
    index = {name: i for i, name in enumerate(names)}
    gens = []
    gens_text = m.group("gens")
    if not gens_text:
        raise PresentationError("empty generator list (quotient would not be finite)")
    for part in gens_text.split(","):
        exps = [0] * len(names)
        if not part:
            raise PresentationError("empty monomial in generator list")
        for factor in part.split("*"):
            fm = re.match(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$", factor)
            if fm is None:
                raise PresentationError(f"bad monomial factor {factor!r}")
            name, power = fm.group(1), fm.group(2)
            if name not in index:
                raise PresentationError(f"unknown variable {name!r} in generator")
            exps[index[name]] += int(power) if power else 1
        gens.append(tuple(exps))
    return Presentation(len(names), tuple(gens), names)


class WeilAlgebra:
    """Quotient R[x1..xk]/I for a monomial ideal I, with precomputed basis and products.

    basis       ordered standard monomials (exponent tuples), constant first,
                graded-lexicographic within each degree
    structure   rank-3 tensor c with e_a * e_b = sum_g c[a, b, g] e_g (entries 0/1)
    height      largest total degree of a standard monomial; m^(height+1) = 0
    """

    def __init__(self, presentation: Presentation):
        pres = presentation
        gens = pres.normalized_generators()
        for i in range(pres.num_vars):
            if not any(all(g[j] == 0 for j in range(pres.num_vars) if j != i) and g[i] > 0 for g in gens):
                raise InfiniteDimensional(
                    f"variable {pres.var_names[i]!r} has no pure-power generator"
                )
        bounds = [
            min(g[i] for g in gens if g[i] > 0 and all(g[j] == 0 for j in range(pres.num_vars) if j != i))
            for i in range(pres.num_vars)
        ]
        basis = [
            exps
            for exps in itertools.product(*(range(b) for b in bounds))
            if not any(_divides(g, exps) for g in gens)
        ]
        basis.sort(key=_grlex_key)
        self.presentation = pres
        self.basis: tuple[tuple[int, ...], ...] = tuple(basis)
        self.dim = len(basis)
        self.num_vars = pres.num_vars
        self.height = max((_total_degree(b) for b in basis), default=0)
        index = {b: i for i, b in enumerate(basis)}
        structure = np.zeros((self.dim, self.dim, self.dim))
        for a, ea in enumerate(basis):
            for b, eb in enumerate(basis):
                prod = tuple(x + y for x, y in zip(ea, eb))
                g = index.get(prod)
                if g is not None:
                    structure[a, b, g] = 1.0
        self.structure = structure
        self._index = index

    def __eq__(self, other: object) -> bool:
        # the basis determines the monomial-quotient structure completely
        return isinstance(other, WeilAlgebra) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        return f"WeilAlgebra({self.presentation.text()!r}, dim={self.dim})"

    @property
    def text(self) -> str:
        return self.presentation.text()

    def monomial_text(self, alpha: int) -> str:
        return _monomial_text(self.basis[alpha], self.presentation.var_names)

    # -- element constructors ------------------------------------------------

    def element(self, coeffs: Iterable[float]) -> "AElement":
        return AElement(self, np.asarray(list(coeffs), dtype=float))

    def zero(self) -> "AElement":
        return AElement(self, np.zeros(self.dim))

    def unit(self) -> "AElement":
        c = np.zeros(self.dim)
        c[0] = 1.0
        return AElement(self, c)

    def scalar(self, value: float) -> "AElement":
        c = np.zeros(self.dim)
        c[0] = float(value)
        return AElement(self, c)

    def basis_element(self, alpha: int) -> "AElement":
        if not 0 <= alpha < self.dim:
            raise IndexError(f"basis index {alpha} out of range for dim {self.dim}")
        c = np.zeros(self.dim)
        c[alpha] = 1.0
        return AElement(self, c)

    # -- products ---------------------------------------------------------

    def mul_coeffs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("abg,a,b->g", self.structure, a, b)

    def left_multiplication(self, a: np.ndarray) -> np.ndarray:
        """Matrix of b -> a*b in the monomial basis."""
        return np.einsum("abg,a->gb", self.structure, a)


class AElement:
    """Element of a Weil algebra, stored as coefficients over the monomial basis."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: WeilAlgebra, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (algebra.dim,):
            raise DimensionMismatch(
                f"expected {algebra.dim} coefficients, got shape {coeffs.shape}"
            )
        self.algebra = algebra
        self.coeffs = coeffs

    def _check(self, other: "AElement") -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatch("elements of different Weil algebras")

    @property
    def augmentation(self) -> float:
        """Image under the canonical homomorphism A -> R (the real part)."""
        return float(self.coeffs[0])

    def coefficient(self, alpha: int) -> float:
        if not 0 <= alpha < self.algebra.dim:
            raise IndexError(f"basis index {alpha} out of range")
        return float(self.coeffs[alpha])

    def nilpotent_part(self) -> "AElement":
        c = self.coeffs.copy()
        c[0] = 0.0
        return AElement(self.algebra, c)

    def __add__(self, other: "AElement") -> "AElement":
        self._check(other)
        return AElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: "AElement") -> "AElement":
        self._check(other)
        return AElement(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self) -> "AElement":
        return AElement(self.algebra, -self.coeffs)

    def __mul__(self, other: "AElement | float") -> "AElement":
        if isinstance(other, AElement):
            self._check(other)
            return AElement(self.algebra, self.algebra.mul_coeffs(self.coeffs, other.coeffs))
        return AElement(self.algebra, self.coeffs * float(other))

    def __rmul__(self, other: float) -> "AElement":
        return AElement(self.algebra, self.coeffs * float(other))

    def __truediv__(self, other: "AElement | float") -> "AElement":
        if isinstance(other, AElement):
            return self * other.invert()
        return AElement(self.algebra, self.coeffs / float(other))

    def invert(self) -> "AElement":
        """Inverse by the terminating geometric series in the nilpotent part."""
        a0 = self.augmentation
        if abs(a0) <= INVERT_TOL:
            raise NotInvertible("augmentation is zero: element lies in the maximal ideal")
        # geometric series 1/(1+n) = sum (-n)^j, truncated by nilpotency
        n = self.nilpotent_part() * (1.0 / a0)
        acc = self.algebra.unit()
        power = self.algebra.unit()
        for _ in range(self.algebra.height):
            power = power * n * (-1.0)
            acc = acc + power
        return acc * (1.0 / a0)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.algebra.dim else 0.0

    def __repr__(self) -> str:
        terms = []
        for alpha, c in enumerate(self.coeffs):
            if c != 0.0:
                mono = self.algebra.monomial_text(alpha)
                terms.append(f"{c:g}" if mono == "1" else f"{c:g}*{mono}")
        return " + ".join(terms) if terms else "0"


def build_algebra(presentation: Presentation) -> WeilAlgebra:
    return WeilAlgebra(presentation)


def dual_coefficient(a: AElement, alpha: int) -> float:
    """Coefficient of the basis monomial e_alpha in a (dual-basis functional)."""
    return a.coefficient(alpha)


@dataclass(frozen=True)
class LinearEndo:
    """Linear map A -> A given by its matrix over the monomial basis."""

    algebra: WeilAlgebra
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.algebra.dim, self.algebra.dim):
            raise DimensionMismatch(f"endomorphism matrix must be {self.algebra.dim} square")
        object.__setattr__(self, "matrix", m)

    def __call__(self, a: AElement) -> AElement:
        if a.algebra != self.algebra:
            raise AlgebraMismatch("element from a different algebra")
        return AElement(self.algebra, self.matrix @ a.coeffs)


def _leibniz_residual(algebra: WeilAlgebra, matrix: np.ndarray) -> float:
    c = algebra.structure
    lhs = np.einsum("abg,sg->abs", c, matrix)
    rhs = np.einsum("ra,rbs->abs", matrix, c) + np.einsum("rb,ars->abs", matrix, c)
    return float(np.max(np.abs(lhs - rhs))) if algebra.dim else 0.0


def is_derivation(algebra: WeilAlgebra, endo: LinearEndo | np.ndarray, tol: float = DERIVATION_TOL) -> bool:
    """Leibniz check d(e_a e_b) = d(e_a) e_b + e_a d(e_b) on all basis pairs."""
    matrix = endo.matrix if isinstance(endo, LinearEndo) else np.asarray(endo, dtype=float)
    return _leibniz_residual(algebra, matrix) <= tol


@dataclass(frozen=True)
class Derivation:
    """Leibniz-satisfying linear endomorphism of A.  Validated at construction."""

    endo: LinearEndo

    def __post_init__(self) -> None:
        if not is_derivation(self.endo.algebra, self.endo):
            raise NotADerivation("endomorphism fails the Leibniz rule")

    @property
    def algebra(self) -> WeilAlgebra:
        return self.endo.algebra

    @property
    def matrix(self) -> np.ndarray:
        return self.endo.matrix

    def __call__(self, a: AElement) -> AElement:
        return self.endo(a)

    def scale(self, a: AElement) -> "Derivation":
        """The derivation b -> a * d(b) (module structure on Der(A))."""
        new = self.algebra.left_multiplication(a.coeffs) @ self.matrix
        return Derivation(LinearEndo(self.algebra, new))

    def commutator(self, other: "Derivation") -> "Derivation":
        if self.algebra != other.algebra:
            raise AlgebraMismatch("derivations of different algebras")
        new = self.matrix @ other.matrix - other.matrix @ self.matrix
        return Derivation(LinearEndo(self.algebra, new))


def derivation_basis(algebra: WeilAlgebra) -> list[Derivation]:
    """Basis of Der(A), from the nullspace of the homogeneous Leibniz system.

    Unknowns are the dim^2 matrix entries D[s, g] (coefficient s of d(e_g));
    one linear equation per triple (a, b, s).  Cached per algebra instance.
    """
    cached = getattr(algebra, "_derivation_basis", None)
    if cached is not None:
        return list(cached)
    dim = algebra.dim
    c = algebra.structure
    n_unknowns = dim * dim
    rows = np.zeros((dim * dim * dim, n_unknowns))
    eq = 0
    for a in range(dim):
        for b in range(dim):
            for s in range(dim):
                row = np.zeros((dim, dim))
                row[s, :] += c[a, b, :]          # d(e_a e_b) coefficient s
                row[:, a] -= c[:, b, s]          # d(e_a) e_b
                row[:, b] -= c[a, :, s]          # e_a d(e_b)
                rows[eq] = row.reshape(-1)
                eq += 1
    _, svals, vt = np.linalg.svd(rows)
    svals = np.concatenate([svals, np.zeros(n_unknowns - len(svals))])
    null = [vt[i].reshape(dim, dim) for i in range(n_unknowns) if svals[i] <= NULLSPACE_CUTOFF]
    basis = [Derivation(LinearEndo(algebra, _tidy(m))) for m in null]
    algebra._derivation_basis = tuple(basis)
    return basis


def _tidy(matrix: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Snap near-integer entries of a nullspace vector for readable output."""
    out = matrix.copy()
    out[np.abs(out) <= tol] = 0.0
    rounded = np.round(out)
    near = np.abs(out - rounded) <= tol
    out[near] = rounded[near]
    return out
