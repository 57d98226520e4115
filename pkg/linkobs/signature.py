"""Levine-Tristram signatures and nullities with certified breakpoints.

For ω = exp(2πiθ) the form (1-ω)V + (1-ω̄)V^T equals (1 - cos 2πθ) times
S + iκK with S = V + V^T, K = V^T - V and κ = cot(πθ). The characteristic
polynomial of S + iκK has coefficients that are integer polynomials in
u = κ², computed once per matrix. Its inertia at a rational θ follows from
Descartes' rule, the coefficient signs being decided by interval
arithmetic and, when an enclosure straddles zero, an exact test modulo the
cyclotomic polynomial.
"""

import logging
import math
from collections.abc import Iterator
from contextlib import contextmanager
from fractions import Fraction
from typing import Literal

from mpmath import iv
from pydantic import BaseModel, ConfigDict, Field
from sympy import ZZ, Poly, Rational, Symbol, cyclotomic_poly, isprime
from sympy.polys.matrices import DomainMatrix

from .config import DEFAULT_GRID_DEPTH
from .errors import ConventionError, InternalAssertionError, PreconditionError
from .polyring import ConwayForm, conway_from_seifert
from .seifert import SeifertMatrix

logger = logging.getLogger(__name__)

k = Symbol("k")
t = Symbol("t")
u = Symbol("u")
w = Symbol("w")

START_PRECISION = 64
MAX_PRECISION = 1 << 15
GRID_REFINEMENT = 8
HALF = Fraction(1, 2)


def as_theta(theta: Fraction | str | int | float) -> Fraction:
    value = Fraction(theta)
    if not 0 < value < 1:
        raise PreconditionError(f"θ must lie strictly between 0 and 1, got {value}")
    return value


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _sign(x: object) -> int | None:
    """Sign of an interval, or None if it contains zero."""
    if 0 in x:  # type: ignore[operator]
        return None
    return 1 if x.a > 0 else -1  # type: ignore[attr-defined]


def _iv_rational(q: Fraction) -> object:
    return iv.mpf(q.numerator) / q.denominator


def _w_of(theta: Fraction) -> object:
    """-4 sin²(πθ) as an interval at the current precision."""
    s = iv.sin(iv.pi * _iv_rational(theta))
    return -4 * s * s


@contextmanager
def _precision(bits: int) -> Iterator[None]:
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _vanishes_at_root_of_unity(g: Poly, theta: Fraction) -> bool:
    """Whether g(exp(2πiθ)) = 0, for g an integer polynomial in t."""
    if g.is_zero:
        return True
    return g.rem(Poly(cyclotomic_poly(theta.denominator, t), t, domain=ZZ)).is_zero


def _sign_variations(signs: list[int]) -> int:
    nonzero = [s for s in signs if s]
    return sum(1 for a, b in zip(nonzero, nonzero[1:], strict=False) if a != b)


class HermitianPencil:
    """Characteristic polynomial of S + iκK, with coefficient j (of λ^j) a polynomial in u = κ²."""

    def __init__(self, s: SeifertMatrix) -> None:
        v = s.V
        self.n = n = len(v)
        ring = ZZ[k]
        rows = [[ring.convert((v[i][j] + v[j][i]) + (v[j][i] - v[i][j]) * k) for j in range(n)] for i in range(n)]
        self.coeffs: list[Poly] = []
        if n == 0:
            self.coeffs = [Poly(1, u, domain=ZZ)]
            return
        cp = DomainMatrix(rows, (n, n), ring).charpoly()
        for j in range(n + 1):
            in_k = Poly(ring.to_sympy(cp[n - j]), k, domain=ZZ)
            terms: dict[tuple[int], int] = {}
            for (e,), c in in_k.terms():
                if e % 2:
                    raise InternalAssertionError("characteristic polynomial is not even in κ")
                terms[(e // 2,)] = int(c) * (-1) ** (e // 2)
            self.coeffs.append(Poly.from_dict(terms or {(0,): 0}, u, domain=ZZ))

    def _coefficient_sign(self, f: Poly, theta: Fraction) -> int:
        if f.is_zero:
            return 0
        deg = f.degree()
        a = [int(f.coeff_monomial(u**i)) for i in range(deg + 1)]

        # (1 - c)^deg f((1 + c)/(1 - c)) with c = cos 2πθ has the sign of f(cot²πθ).
        def enclosure(bits: int) -> int | None:
            with _precision(bits):
                c = iv.cos(2 * iv.pi * _iv_rational(theta))
                return _sign(sum((a[i] * (1 + c) ** i * (1 - c) ** (deg - i) for i in range(deg + 1)), iv.mpf(0)))

        bits = START_PRECISION
        sign = enclosure(bits)
        if sign is not None:
            return sign
        exact = Poly(0, t, domain=ZZ)
        for i in range(deg + 1):
            exact += a[i] * (-1) ** (deg - i) * Poly((t + 1) ** (2 * i) * (t - 1) ** (2 * (deg - i)), t, domain=ZZ)
        if _vanishes_at_root_of_unity(exact, theta):
            return 0
        while sign is None:
            bits *= 2
            if bits > MAX_PRECISION:
                raise InternalAssertionError(f"could not separate a nonzero coefficient from 0 at θ = {theta}")
            sign = enclosure(bits)
        return sign

    def inertia(self, theta: Fraction) -> tuple[int, int]:
        """(signature, nullity) of the form at θ."""
        theta = as_theta(theta)
        signs = [self._coefficient_sign(f, theta) for f in self.coeffs]
        nullity = next(j for j, s in enumerate(signs) if s)
        positive = _sign_variations(signs[::-1])
        negative = _sign_variations([s * (-1) ** j for j, s in enumerate(signs)][::-1])
        if positive + negative + nullity != self.n:
            counts = f"{positive}+{negative}+{nullity}"
            raise InternalAssertionError(f"eigenvalue count {counts} != {self.n} at θ = {theta}")
        return positive - negative, nullity

    def nullity_at_root(self, f: Poly) -> int:
        """Nullity where u = -(4 + w)/w and w is a root of the irreducible f."""
        fw = Poly(f.as_expr(), w, domain=ZZ)
        for j, g in enumerate(self.coeffs):
            deg = max(g.degree(), 0)
            cleared = Poly(0, w, domain=ZZ)
            for i in range(deg + 1):
                a = int(g.coeff_monomial(u**i))
                cleared += a * Poly((-(4 + w)) ** i * w ** (deg - i), w, domain=ZZ)
            if not cleared.rem(fw).is_zero:
                return j
        return self.n


def signature_at(s: SeifertMatrix, theta: Fraction | str) -> tuple[int, int]:
    return HermitianPencil(s).inertia(as_theta(theta))


class Breakpoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    poly: tuple[int, ...] = Field(
        description="Irreducible integer polynomial in w = z² vanishing here, constant term first; empty on a grid"
    )
    interval: tuple[str, str] = Field(
        description="Rational isolating interval, in w for certified breakpoints and in θ for grid-located ones"
    )
    theta: float = Field(description="Approximate position in (0, 1/2]")
    nullity: int | None = Field(default=None, description="Exact nullity at the breakpoint when known")

    def bounds(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.interval[0]), Fraction(self.interval[1])


class SignatureFunction(BaseModel):
    """σ on (0, 1/2]; the rest of the circle follows from σ(θ) = σ(1 - θ)."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1, description="Number of link components")
    breakpoints: tuple[Breakpoint, ...] = Field(description="Jump candidates in (0, 1/2], by increasing θ")
    arc_values: tuple[int, ...] = Field(description="σ on the open arcs between consecutive breakpoints, from θ = 0")
    point_values: tuple[int, ...] = Field(description="σ at each breakpoint: the average of the two one-sided limits")
    nullity: int = Field(ge=0, description="Nullity away from the breakpoints")
    max_nullity: int = Field(ge=0, description="Largest nullity found, breakpoints included where known")
    certification: Literal["certified", "grid-certified"] = Field(
        description="'grid-certified' when ∇ vanishes and jumps were located by grid search, which may miss some"
    )

    @property
    def ends_at_half(self) -> bool:
        return bool(self.breakpoints) and self.breakpoints[-1].theta == 0.5 and len(self.arc_values) == len(
            self.breakpoints
        )

    def full_arc_values(self) -> tuple[int, ...]:
        """Arc values around the whole circle (0, 1)."""
        arcs = self.arc_values
        return arcs + tuple(reversed(arcs if self.ends_at_half else arcs[:-1]))

    def value(self, theta: Fraction | str) -> int:
        theta = as_theta(theta)
        if theta > HALF:
            theta = 1 - theta
        before = 0
        for i, bp in enumerate(self.breakpoints):
            where = _compare(theta, bp, self.certification)
            if where == 0:
                return self.point_values[i]
            if where > 0:
                before = i + 1
        return self.arc_values[min(before, len(self.arc_values) - 1)]


def _w_to_theta(x: Fraction) -> float:
    return math.asin(min(1.0, math.sqrt(max(0.0, -float(x))) / 2)) / math.pi


def _compare(theta: Fraction, bp: Breakpoint, certification: str) -> int:
    """-1 if θ lies before the breakpoint, 0 at it, 1 after it."""
    lo, hi = bp.bounds()
    if not bp.poly:
        if theta < lo:
            return -1
        return 1 if theta > hi else 0
    f = Poly(list(reversed(bp.poly)), w, domain=ZZ)
    # w(θ) = t + 1/t - 2 = (t - 1)²/t at t = exp(2πiθ)
    deg = f.degree()
    cleared = Poly(0, t, domain=ZZ)
    for i in range(deg + 1):
        cleared += int(f.coeff_monomial(w**i)) * Poly((t - 1) ** (2 * i) * t ** (deg - i), t, domain=ZZ)
    if _vanishes_at_root_of_unity(cleared, theta):
        return 0
    bits = START_PRECISION
    while bits <= MAX_PRECISION:
        with _precision(bits):
            wt = _w_of(theta)
            above = _sign(wt - _iv_rational(hi))
            below = _sign(wt - _iv_rational(lo))
        # w decreases as θ grows.
        if above == 1:
            return -1
        if below == -1:
            return 1
        lo, hi = _refine(f, lo, hi)
        bits *= 2
    raise InternalAssertionError(f"could not place θ = {theta} relative to a breakpoint ({certification})")


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The fraction with the smallest denominator in [lo, hi], for 0 <= lo <= hi."""
    fl = lo.numerator // lo.denominator
    if fl == lo or fl + 1 <= hi:
        return Fraction(fl) if fl == lo else Fraction(fl + 1)
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


def _sample_theta(w_low: Fraction, w_high: Fraction, closed_at_half: bool) -> Fraction:
    """A simple rational θ whose w lies strictly inside (w_low, w_high), or at -4 when allowed."""
    t_lo, t_hi = _w_to_theta(w_high), _w_to_theta(w_low)
    margin = (t_hi - t_lo) / 4
    lo = Fraction(t_lo + margin)
    hi = HALF if closed_at_half else Fraction(t_hi - margin)
    if not 0 < lo <= hi:
        raise InternalAssertionError(f"breakpoints near θ = {t_lo:.6g} are too close to separate")
    theta = _simplest_between(lo, min(hi, HALF))
    with _precision(4 * START_PRECISION):
        wt = _w_of(theta)
        above_low = (theta == HALF and closed_at_half) or _sign(wt - _iv_rational(w_low)) == 1
        below_high = _sign(wt - _iv_rational(w_high)) == -1
    if not (above_low and below_high):
        raise InternalAssertionError(f"sample θ = {theta} is not certified inside its arc")
    return theta


def _average(left: int, right: int) -> int:
    total = left + right
    if total % 2:
        raise ConventionError(f"arc values {left} and {right} differ by an odd amount")
    return total // 2


def _isolated_roots(conway: ConwayForm) -> list[tuple[Poly, Fraction, Fraction]]:
    """Roots of ∇'s even part in [-4, 0), by decreasing w, with disjoint rational isolating intervals."""
    coeffs = list(conway.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    p = Poly(list(reversed(coeffs)), w, domain=ZZ)
    roots: list[tuple[Poly, Fraction, Fraction]] = []
    for f, _ in p.factor_list()[1]:
        if f.degree() < 1:
            continue
        for (a, b), _ in f.intervals(inf=-4, sup=0):
            roots.append((f, Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    roots.sort(key=lambda r: -(r[1] + r[2]))
    separated = False
    while not separated:
        separated = True
        for i in range(len(roots) - 1):
            f1, lo1, hi1 = roots[i]
            f2, lo2, hi2 = roots[i + 1]
            if hi2 >= lo1:
                separated = False
                roots[i] = (f1, *_refine(f1, lo1, hi1))
                roots[i + 1] = (f2, *_refine(f2, lo2, hi2))
    return roots


def _refine(f: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if lo == hi:
        return lo, hi
    eps = (hi - lo) / 4
    a, b = f.refine_root(_rational(lo), _rational(hi), eps=_rational(eps))
    return _fraction(a), _fraction(b)


def _rational(q: Fraction) -> Rational:
    return Rational(q.numerator, q.denominator)


def _fraction(r: Rational) -> Fraction:
    return Fraction(int(r.p), int(r.q))


def signature_function(
    s: SeifertMatrix, m: int | None = None, grid_depth: int = DEFAULT_GRID_DEPTH
) -> SignatureFunction:
    m = s.m if m is None else m
    pencil = HermitianPencil(s)
    conway = conway_from_seifert(s)
    if conway.is_zero:
        return _grid_signature_function(pencil, m, grid_depth)

    roots = _isolated_roots(conway)
    at_half = bool(roots) and roots[-1][0].eval(-4) == 0
    edges = [Fraction(0)] + [x for _, lo, hi in roots for x in (hi, lo)] + [Fraction(-4)]
    arcs: list[int] = []
    nullities: list[int] = []
    n_arcs = len(roots) if at_half else len(roots) + 1
    for i in range(n_arcs):
        w_high, w_low = edges[2 * i], edges[2 * i + 1]
        theta = _sample_theta(w_low, w_high, closed_at_half=i == len(roots))
        sig, nul = pencil.inertia(theta)
        arcs.append(sig)
        nullities.append(nul)

    breakpoints: list[Breakpoint] = []
    points: list[int] = []
    for i, (f, lo, hi) in enumerate(roots):
        right = arcs[i + 1] if i + 1 < len(arcs) else arcs[i]
        points.append(_average(arcs[i], right))
        breakpoints.append(
            Breakpoint(
                poly=tuple(int(f.coeff_monomial(w**j)) for j in range(f.degree() + 1)),
                interval=(fraction_str(lo), fraction_str(hi)),
                theta=0.5 if i == len(roots) - 1 and at_half else _w_to_theta((lo + hi) / 2),
                nullity=pencil.nullity_at_root(f),
            )
        )
    generic = max(nullities)
    result = SignatureFunction(
        m=m,
        breakpoints=tuple(breakpoints),
        arc_values=tuple(arcs),
        point_values=tuple(points),
        nullity=generic,
        max_nullity=max([generic] + [bp.nullity or 0 for bp in breakpoints]),
        certification="certified",
    )
    logger.debug("signature function: %d breakpoints, arcs %s", len(breakpoints), arcs)
    return result


def _grid_signature_function(pencil: HermitianPencil, m: int, depth: int) -> SignatureFunction:
    cells = 1 << depth
    grid = [Fraction(j, 2 * cells) for j in range(1, cells + 1)]
    values = [pencil.inertia(theta) for theta in grid]
    nullities = [n for _, n in values]
    generic = min(nullities)
    arcs = [values[0][0]]
    breakpoints: list[Breakpoint] = []
    points: list[int] = []

    def jump_at(theta: Fraction, value: int, nullity: int) -> None:
        # A jump hit exactly carries its own value, not an average.
        at = fraction_str(theta)
        breakpoints.append(Breakpoint(poly=(), interval=(at, at), theta=float(theta), nullity=nullity))
        points.append(value)

    for i in range(1, len(grid)):
        va, (vb, nb) = arcs[-1], values[i]
        if va == vb:
            continue
        if nb > generic:
            jump_at(grid[i], vb, nb)
            if i + 1 < len(grid):
                arcs.append(values[i + 1][0])
            continue
        lo, hi = grid[i - 1], grid[i]
        exact: tuple[Fraction, int, int] | None = None
        for _ in range(GRID_REFINEMENT):
            mid = (lo + hi) / 2
            v, n = pencil.inertia(mid)
            if v == va:
                lo = mid
            elif v == vb:
                hi = mid
            else:
                exact = (mid, v, n)
                break
        if exact is not None:
            jump_at(*exact)
        else:
            breakpoints.append(
                Breakpoint(poly=(), interval=(fraction_str(lo), fraction_str(hi)), theta=float((lo + hi) / 2))
            )
            points.append(_average(va, vb))
        arcs.append(vb)
    logger.info("∇ vanishes: signature jumps located on a grid of %d cells", cells)
    return SignatureFunction(
        m=m,
        breakpoints=tuple(breakpoints),
        arc_values=tuple(arcs),
        point_values=tuple(points),
        nullity=generic,
        max_nullity=max(nullities + [bp.nullity or 0 for bp in breakpoints]),
        certification="grid-certified",
    )


def prime_power_signatures(s: SeifertMatrix, p: int, r: int = 1) -> list[tuple[int, int]]:
    """(j, σ(j/p^r)) for 0 < j < p^r."""
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime")
    if r < 1:
        raise PreconditionError(f"r must be at least 1, got {r}")
    pencil = HermitianPencil(s)
    q = p**r
    return [(j, pencil.inertia(Fraction(j, q))[0]) for j in range(1, q)]
