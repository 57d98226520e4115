"""Exact Laurent-polynomial algebra over the integers and the Conway polynomial.

Laurent polynomials live in the variable x. The Conway variable is
z = x - x^-1 and w = z^2; polynomials in z, w or t are ``ZPoly`` values.
"""

import logging
from collections.abc import Sequence
from functools import reduce
from itertools import accumulate
from typing import TYPE_CHECKING, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import ZZ, Poly, Symbol
from sympy.polys.matrices import DomainMatrix

from .errors import ConventionError, InternalAssertionError, PreconditionError

if TYPE_CHECKING:
    from .seifert import SeifertMatrix

logger = logging.getLogger(__name__)

x = Symbol("x")

Variable = Literal["z", "w", "t"]


class LaurentPoly(BaseModel):
    model_config = ConfigDict(frozen=True)

    terms: tuple[tuple[int, int], ...] = Field(
        default=(), description="(exponent, coefficient) pairs by increasing exponent, no zero coefficients"
    )

    @model_validator(mode="after")
    def _normal(self) -> "LaurentPoly":
        exps = [e for e, _ in self.terms]
        if exps != sorted(set(exps)) or any(c == 0 for _, c in self.terms):
            raise InternalAssertionError(f"unnormalized Laurent terms {self.terms}")
        return self

    @classmethod
    def from_dict(cls, coeffs: dict[int, int]) -> "LaurentPoly":
        return cls(terms=tuple(sorted((e, c) for e, c in coeffs.items() if c != 0)))

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPoly":
        return cls.from_dict({exponent: coefficient})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls.monomial(0, c)

    @classmethod
    def from_poly(cls, p: Poly, shift: int = 0) -> "LaurentPoly":
        """x^shift * p for a univariate integer polynomial p."""
        return cls.from_dict({m[0] + shift: int(c) for m, c in p.terms() if c != 0})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def low(self) -> int:
        return self.terms[0][0] if self.terms else 0

    @property
    def high(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def coeff(self, exponent: int) -> int:
        return dict(self.terms).get(exponent, 0)

    def to_poly(self) -> tuple[int, Poly]:
        """(s, p) with self = x^s * p and p an ordinary polynomial."""
        s = self.low
        return s, self.shifted(-s).as_polynomial()

    def as_polynomial(self) -> Poly:
        if self.low < 0:
            raise InternalAssertionError(f"{self} has negative powers of x")
        if self.is_zero:
            return Poly(0, x, domain=ZZ)
        return Poly.from_dict({(e,): c for e, c in self.terms}, x, domain=ZZ)

    def shifted(self, n: int) -> "LaurentPoly":
        return LaurentPoly(terms=tuple((e + n, c) for e, c in self.terms))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms:
            out[e] = out.get(e, 0) + c
        return LaurentPoly.from_dict(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(terms=tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero or other.is_zero:
            return LaurentPoly()
        s1, p1 = self.to_poly()
        s2, p2 = other.to_poly()
        return LaurentPoly.from_poly(p1 * p2, s1 + s2)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise PreconditionError("negative powers of a Laurent polynomial are not Laurent polynomials")
        return reduce(LaurentPoly.__mul__, [self] * n, LaurentPoly.constant(1))

    def scaled(self, c: int) -> "LaurentPoly":
        return LaurentPoly.from_dict({e: c * v for e, v in self.terms})

    def invert_variable(self) -> "LaurentPoly":
        """A(x) -> A(x^-1)."""
        return LaurentPoly.from_dict({-e: c for e, c in self.terms})

    def substitute_square(self) -> "LaurentPoly":
        """A(x) -> A(x^2)."""
        return LaurentPoly.from_dict({2 * e: c for e, c in self.terms})

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"{c}*x^{e}" for e, c in self.terms)


X = LaurentPoly.monomial(1)
X_INV = LaurentPoly.monomial(-1)
Z = X - X_INV


def bar(p: LaurentPoly) -> LaurentPoly:
    """The involution A(x) -> A(-x^-1); it fixes z."""
    return LaurentPoly.from_dict({-e: c if e % 2 == 0 else -c for e, c in p.terms})


class ZPoly(BaseModel):
    model_config = ConfigDict(frozen=True)

    coeffs: tuple[int, ...] = Field(default=(), description="Coefficients from the constant term up, no trailing zeros")
    var: Variable = Field(default="z", description="Name of the variable: z, w = z^2, or t")

    @model_validator(mode="after")
    def _trimmed(self) -> "ZPoly":
        if self.coeffs and self.coeffs[-1] == 0:
            raise InternalAssertionError(f"untrimmed coefficients {self.coeffs}")
        return self

    @classmethod
    def of(cls, coeffs: Sequence[int], var: Variable = "z") -> "ZPoly":
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        return cls(coeffs=tuple(c), var=var)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, n: int) -> int:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else 0

    def to_poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)) or [0], Symbol(self.var), domain=ZZ)

    @classmethod
    def from_poly(cls, p: Poly, var: Variable) -> "ZPoly":
        return cls.of([int(c) for c in reversed(p.all_coeffs())], var)

    def _same(self, other: "ZPoly") -> None:
        if self.var != other.var:
            raise InternalAssertionError(f"mixing polynomials in {self.var} and {other.var}")

    def __add__(self, other: "ZPoly") -> "ZPoly":
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return ZPoly.of([self.coeff(i) + other.coeff(i) for i in range(n)], self.var)

    def __neg__(self) -> "ZPoly":
        return ZPoly(coeffs=tuple(-c for c in self.coeffs), var=self.var)

    def __sub__(self, other: "ZPoly") -> "ZPoly":
        return self + (-other)

    def __mul__(self, other: "ZPoly") -> "ZPoly":
        self._same(other)
        if self.is_zero or other.is_zero:
            return ZPoly(var=self.var)
        return ZPoly.from_poly(self.to_poly() * other.to_poly(), self.var)

    def in_z(self) -> "ZPoly":
        """Rewrite a polynomial in w = z^2 as a polynomial in z."""
        if self.var != "w":
            raise InternalAssertionError(f"expected a polynomial in w, got one in {self.var}")
        out = [0] * (2 * len(self.coeffs))
        out[::2] = self.coeffs
        return ZPoly.of(out, "z")

    def in_w(self) -> "ZPoly":
        """Rewrite an even polynomial in z as a polynomial in w = z^2."""
        if self.var != "z" or any(self.coeffs[1::2]):
            raise InternalAssertionError(f"{self} is not an even polynomial in z")
        return ZPoly.of(self.coeffs[::2], "w")

    def to_laurent(self) -> LaurentPoly:
        """Substitute z = x - x^-1, w = z^2, or t = x^2."""
        base = {"z": Z, "w": Z * Z, "t": LaurentPoly.monomial(2)}[self.var]
        out = LaurentPoly()
        power = LaurentPoly.constant(1)
        for c in self.coeffs:
            out = out + power.scaled(c)
            power = power * base
        return out

    def __str__(self) -> str:
        terms = [f"{c}*{self.var}^{n}" for n, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


def laurent_to_z(p: LaurentPoly) -> ZPoly:
    """Express p as a polynomial in z = x - x^-1, or raise if it is not one."""
    out: dict[int, int] = {}
    rest = p
    while not rest.is_zero:
        n = rest.high
        if n < 0 or rest.low != -n:
            raise InternalAssertionError(f"{p} is not a polynomial in z = x - x^-1")
        c = rest.coeff(n)
        out[n] = c
        rest = rest - (Z**n).scaled(c)
    return ZPoly.of([out.get(n, 0) for n in range(max(out, default=-1) + 1)], "z")


Matrix = Sequence[Sequence[LaurentPoly]]


def _check_square(m: Matrix) -> int:
    n = len(m)
    if any(len(row) != n for row in m):
        raise PreconditionError(f"determinant of a non-square matrix ({n} rows, row lengths {[len(r) for r in m]})")
    return n


def laurent_det(m: Matrix) -> LaurentPoly:
    """Exact determinant over Z[x, x^-1].

    Rows are cleared to Z[x] by powers of x and handed to a fraction-free
    determinant over the polynomial ring.
    """
    n = _check_square(m)
    if n == 0:
        return LaurentPoly.constant(1)
    ring = ZZ[x]
    shifts = [min((e.low for e in row if not e.is_zero), default=0) for row in m]
    rows = [
        [ring.from_sympy(e.shifted(-s).as_polynomial().as_expr()) for e in row]
        for row, s in zip(m, shifts, strict=True)
    ]
    det = ring.to_sympy(DomainMatrix(rows, (n, n), ring).det())
    return LaurentPoly.from_poly(Poly(det, x, domain=ZZ), sum(shifts))


def cofactor_det(m: Matrix) -> LaurentPoly:
    """Determinant by cofactor expansion along the first row."""
    n = _check_square(m)
    if n == 0:
        return LaurentPoly.constant(1)
    total = LaurentPoly()
    for j, entry in enumerate(m[0]):
        if entry.is_zero:
            continue
        minor = [row[:j] + row[j + 1 :] for row in (list(r) for r in m[1:])]
        term = entry * cofactor_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


class ConwayForm(BaseModel):
    """∇(z) = z^(m-1) (a0 + a1 z^2 + ... + aN z^2N)."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1, description="Number of link components")
    coeffs: tuple[int, ...] = Field(description="a0, a1, ..., aN; empty when the polynomial vanishes")
    normalization: Literal["skein"] = Field(
        default="skein", description="∇(unknot) = 1 and ∇(L+) - ∇(L-) = z ∇(L0)"
    )

    @model_validator(mode="after")
    def _trimmed(self) -> "ConwayForm":
        if self.coeffs and self.coeffs[-1] == 0:
            raise InternalAssertionError(f"untrimmed Conway coefficients {self.coeffs}")
        return self

    @classmethod
    def from_z(cls, m: int, p: ZPoly) -> "ConwayForm":
        """Put a polynomial in z into normal form, or raise if it has the wrong shape."""
        if p.var != "z":
            raise InternalAssertionError(f"expected a polynomial in z, got one in {p.var}")
        if any(p.coeffs[: m - 1]):
            raise ConventionError(f"∇ = {p} is not divisible by z^{m - 1}")
        rest = ZPoly.of(p.coeffs[m - 1 :], "z")
        try:
            even = rest.in_w()
        except InternalAssertionError as e:
            raise ConventionError(f"∇ = {p} is not z^{m - 1} times an even polynomial") from e
        return cls(m=m, coeffs=even.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def a(self, k: int) -> int:
        return self.coeffs[k] if k < len(self.coeffs) else 0

    def to_z(self) -> ZPoly:
        return ZPoly.of([0] * (self.m - 1) + list(ZPoly.of(self.coeffs, "w").in_z().coeffs), "z")

    def z_coefficient(self, n: int) -> int:
        return self.to_z().coeff(n)

    def __str__(self) -> str:
        return str(self.to_z())


def conway_from_seifert(s: "SeifertMatrix") -> ConwayForm:
    """∇ from det(xV - x^-1 V^T), signed so that the positive Hopf link gives z."""
    n = len(s.V)
    m = [[X.scaled(s.V[i][j]) - X_INV.scaled(s.V[j][i]) for j in range(n)] for i in range(n)]
    det = laurent_det(m)
    if n % 2:
        det = -det
    form = ConwayForm.from_z(s.m, laurent_to_z(det))
    logger.debug("Conway polynomial of a %dx%d Seifert matrix: %s", n, n, form)
    return form


def power_sum_z2(k: int) -> ZPoly:
    """x^2k + x^-2k as a polynomial in w = z^2."""
    if k < 0:
        raise PreconditionError(f"k must be non-negative, got {k}")
    prev, cur = ZPoly.of([2], "w"), ZPoly.of([2, 1], "w")
    if k == 0:
        return prev
    step = ZPoly.of([2, 1], "w")
    for _ in range(k - 1):
        prev, cur = cur, cur * step - prev
    return cur


def ffbar(f: ZPoly) -> ZPoly:
    """f(x^2) f(x^-2) for f in Z[t], as a polynomial in w = z^2."""
    if f.var != "t":
        raise InternalAssertionError(f"expected a polynomial in t, got one in {f.var}")
    fx = f.to_laurent()
    return laurent_to_z(fx * fx.invert_variable()).in_w()


def poly_from_alpha(alpha: Sequence[int]) -> ZPoly:
    """α_m + α_(m-1) t + ... + α_1 t^(m-1)."""
    return ZPoly.of(list(reversed(alpha)), "t")


def partial_sum_poly(alpha: Sequence[int]) -> ZPoly:
    """β_(m-1) + β_(m-2) t + ... + β_1 t^(m-2) with β_i = α_1 + ... + α_i."""
    betas = list(accumulate(alpha))
    return poly_from_alpha(betas[:-1])


def decompose_ffbar(f: ZPoly) -> tuple[int, int, ZPoly]:
    """(k, a, g) with f(x^2) f(x^-2) = (-1)^k a^2 z^2k + z^2(k+1) g(z^2)."""
    if f.is_zero:
        raise PreconditionError("cannot decompose the zero polynomial")
    alpha = list(reversed(f.coeffs))
    k = 0
    while sum(alpha) == 0:
        alpha = list(accumulate(alpha))[:-1]
        k += 1
    a = abs(sum(alpha))

    full = ffbar(f)
    reduced = ffbar(poly_from_alpha(alpha))
    shifted = ZPoly.of([0] * k + list(reduced.coeffs), "w")
    expected = shifted if k % 2 == 0 else -shifted
    if expected != full:
        raise ConventionError(f"partial-sum reduction of {f} disagrees with direct expansion")
    if any(full.coeffs[:k]) or full.coeff(k) != (-1) ** k * a * a:
        raise ConventionError(f"lowest term of f f̄ for {f} is not (-1)^{k} {a}^2 w^{k}")
    g = ZPoly.of(full.coeffs[k + 1 :], "w")
    return k, a, g
