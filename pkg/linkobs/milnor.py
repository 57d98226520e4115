"""Milnor μ̄-invariants from the Wirtinger presentation of a diagram.

Arc generators are expressed in the meridians of the components by
repeated substitution of the Wirtinger relations. Longitudes are then
expanded in the truncated Magnus ring x_i -> 1 + X_i. For a single index
only monomials that are contiguous pieces of the index word matter, so the
expansion keeps just those.
"""

import logging
from collections.abc import Callable, Sequence
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import TypeVar

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import DEFAULT_Q_MAX
from .diagram import LinkDiagram, linking_matrix
from .errors import ConventionError, InternalAssertionError, PreconditionError
from .polyring import conway_from_seifert
from .seifert import seifert_matrix

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]
Letter = tuple[int, int]
Word = tuple[Letter, ...]
"""Free-group word as (meridian index, ±1) letters, 0-based."""

T = TypeVar("T")


class WirtingerRelation(BaseModel):
    model_config = ConfigDict(frozen=True)

    over: int = Field(description="Arc passing over the crossing")
    incoming: int = Field(description="Under arc entering the crossing")
    outgoing: int = Field(description="Under arc leaving the crossing")
    sign: int = Field(description="Crossing sign; outgoing = over^-sign * incoming * over^sign")


class WirtingerPresentation(BaseModel):
    model_config = ConfigDict(frozen=True)

    arc_component: tuple[int, ...] = Field(description="Component of each arc generator")
    relations: tuple[WirtingerRelation, ...] = Field(description="One relation per crossing, in crossing order")
    walks: tuple[tuple[tuple[int, int], ...], ...] = Field(
        description="Per component, the (over arc, sign) pairs met when passing under, from its base arc"
    )
    base_arcs: tuple[int | None, ...] = Field(description="Arc carrying the component meridian")
    framing: tuple[int, ...] = Field(description="Own-meridian exponent removed to make each longitude untwisted")

    @model_validator(mode="after")
    def _abelianizes_freely(self) -> "WirtingerPresentation":
        parent = list(range(len(self.arc_component)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for r in self.relations:
            parent[find(r.outgoing)] = find(r.incoming)
        classes: dict[int, set[int]] = {}
        for a, k in enumerate(self.arc_component):
            classes.setdefault(find(a), set()).add(k)
        if any(len(ks) != 1 for ks in classes.values()) or len(classes) != len(self.walks):
            raise InternalAssertionError("Wirtinger relations do not abelianize to one generator per component")
        return self

    @property
    def m(self) -> int:
        return len(self.walks)


def wirtinger_presentation(d: LinkDiagram) -> WirtingerPresentation:
    arc_of: dict[int, int] = {}
    arc_component: list[int] = []
    base: list[int | None] = []
    walks: list[tuple[tuple[int, int], ...]] = []
    starts: list[int] = []
    for k, comp in enumerate(d.components):
        if not comp:
            base.append(len(arc_component))
            arc_component.append(k)
            starts.append(0)
            continue
        n = len(comp)
        start = next((i for i in range(n) if d.heads[comp[i - 1]][1] == 0), 0)
        starts.append(start)
        base.append(len(arc_component))
        arc_component.append(k)
        for j in range(n):
            e = comp[(start + j) % n]
            arc_of[e] = len(arc_component) - 1
            if d.heads[e][1] == 0 and j < n - 1:
                arc_component.append(k)

    relations = []
    for x in d.crossings:
        relations.append(
            WirtingerRelation(
                over=arc_of[x.slots[1]], incoming=arc_of[x.slots[0]], outgoing=arc_of[x.slots[2]], sign=x.sign
            )
        )
    framing = []
    for k, comp in enumerate(d.components):
        walk = []
        n = len(comp)
        for j in range(n):
            c, slot = d.heads[comp[(starts[k] + j) % n]]
            if slot == 0:
                walk.append((arc_of[d.crossings[c].slots[1]], d.crossings[c].sign))
        walks.append(tuple(walk))
        framing.append(sum(s for o, s in walk if arc_component[o] == k))
    return WirtingerPresentation(
        arc_component=tuple(arc_component),
        relations=tuple(relations),
        walks=tuple(walks),
        base_arcs=tuple(base),
        framing=tuple(framing),
    )


def _reduce(word: Sequence[Letter]) -> Word:
    out: list[Letter] = []
    for g, e in word:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def _inverse(word: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def _arc_meridian_expressions(
    p: WirtingerPresentation,
    rounds: int,
    unit: Callable[[], T],
    meridian: Callable[[int], T],
    mul: Callable[[T, T], T],
    inv: Callable[[T], T],
) -> list[T]:
    """Expressions of every arc generator, as conjugates of the meridians, after some substitution rounds.

    Works in any group-like structure given by its unit, meridian, product and inverse.
    """
    current = [meridian(k) for k in p.arc_component]
    for _ in range(rounds):
        nxt = list(current)
        for k, walk in enumerate(p.walks):
            arc = p.base_arcs[k]
            assert arc is not None
            prefix = unit()
            for over, sign in walk[:-1]:
                prefix = mul(prefix, current[over] if sign == 1 else inv(current[over]))
                arc += 1
                nxt[arc] = mul(mul(inv(prefix), meridian(k)), prefix)
        current = nxt
    return current


def chen_milnor_longitudes(d: LinkDiagram, q: int) -> list[Word]:
    """Untwisted longitudes as words in the component meridians, correct modulo weight-q commutators."""
    if q < 2:
        raise PreconditionError(f"truncation degree must be at least 2, got {q}")
    p = wirtinger_presentation(d)
    arcs = _arc_meridian_expressions(
        p,
        q - 1,
        unit=lambda: (),
        meridian=lambda k: ((k, 1),),
        mul=lambda a, b: _reduce(a + b),
        inv=_inverse,
    )
    longitudes = []
    for k, walk in enumerate(p.walks):
        word: list[Letter] = []
        for over, sign in walk:
            word.extend(arcs[over] if sign == 1 else _inverse(arcs[over]))
        word.extend([(k, -1 if p.framing[k] > 0 else 1)] * abs(p.framing[k]))
        longitudes.append(_reduce(word))
    return longitudes


class MagnusSeries(BaseModel):
    """Element of the Magnus ring Z<<X_1..X_m>> truncated above a degree.

    With a window, only monomials that are contiguous pieces of the window
    are kept; coefficients of those are exact.
    """

    model_config = ConfigDict(frozen=True)

    degree: int = Field(ge=0, description="Truncation degree q; monomials longer than q are dropped")
    coeffs: dict[Monomial, int] = Field(default_factory=dict, description="Nonzero coefficients by monomial")
    window: Monomial | None = Field(default=None, description="Word whose contiguous pieces are kept, if any")

    @cached_property
    def pieces(self) -> frozenset[Monomial] | None:
        if self.window is None:
            return None
        w = self.window
        return frozenset(w[i:j] for i in range(len(w) + 1) for j in range(i, min(len(w), i + self.degree) + 1))

    def _new(self, coeffs: dict[Monomial, int]) -> "MagnusSeries":
        return MagnusSeries.model_construct(
            degree=self.degree, coeffs={mono: c for mono, c in coeffs.items() if c}, window=self.window
        )

    def keeps(self, mono: Monomial) -> bool:
        pieces = self.pieces
        return len(mono) <= self.degree if pieces is None else mono in pieces

    @classmethod
    def one(cls, degree: int, window: Monomial | None = None) -> "MagnusSeries":
        return cls.model_construct(degree=degree, coeffs={(): 1}, window=window)

    @classmethod
    def generator(cls, letter: int, power: int, degree: int, window: Monomial | None = None) -> "MagnusSeries":
        """Expansion of x_letter^power: (1 + X)^power, power = ±1."""
        s = cls.one(degree, window)
        if power == 1:
            terms = {(): 1, (letter,): 1}
        else:
            terms = {(letter,) * n: (-1) ** n for n in range(degree + 1)}
        return s._new({mono: c for mono, c in terms.items() if s.keeps(mono)})

    @classmethod
    def of_word(cls, word: Sequence[Letter], degree: int, window: Monomial | None = None) -> "MagnusSeries":
        out = cls.one(degree, window)
        for g, e in word:
            out = out * cls.generator(g, e, degree, window)
        return out

    def coefficient(self, mono: Sequence[int]) -> int:
        return self.coeffs.get(tuple(mono), 0)

    def __add__(self, other: "MagnusSeries") -> "MagnusSeries":
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            out[mono] = out.get(mono, 0) + c
        return self._new(out)

    def __neg__(self) -> "MagnusSeries":
        return self._new({mono: -c for mono, c in self.coeffs.items()})

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        a, b = self.coeffs, other.coeffs
        out: dict[Monomial, int] = {}
        pieces = self.pieces
        if pieces is None:
            for ma, ca in a.items():
                for mb, cb in b.items():
                    if len(ma) + len(mb) <= self.degree:
                        out[ma + mb] = out.get(ma + mb, 0) + ca * cb
        else:
            for mono in pieces:
                total = sum(a.get(mono[:i], 0) * b.get(mono[i:], 0) for i in range(len(mono) + 1))
                if total:
                    out[mono] = total
        return self._new(out)

    def inverse(self) -> "MagnusSeries":
        """Inverse of a series with constant term 1."""
        if self.coeffs.get((), 0) != 1:
            raise InternalAssertionError("only series with constant term 1 are inverted")
        minus_y = self._new({mono: -c for mono, c in self.coeffs.items() if mono})
        out = power = MagnusSeries.one(self.degree, self.window)
        for _ in range(self.degree):
            power = power * minus_y
            out = out + power
        return out


class MilnorValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: tuple[int, ...] = Field(description="Component indices, 1-based; the last names the longitude")
    value: int = Field(description="Invariant, reduced modulo the indeterminacy when that is nonzero")
    indeterminacy: int = Field(ge=0, description="gcd of the lower-order invariants; 0 means a well-defined integer")

    @property
    def is_integer(self) -> bool:
        return self.indeterminacy == 0


def _indeterminacy_set(index: Monomial) -> set[Monomial]:
    """Cyclic permutations of proper subsequences of length at least 2."""
    out: set[Monomial] = set()
    r = len(index)
    for size in range(2, r):
        for keep in combinations(range(r), size):
            sub = tuple(index[i] for i in keep)
            out.update(sub[i:] + sub[:i] for i in range(size))
    return out


class MilnorInvariants:
    """μ̄-invariants of one diagram, with lower-order values cached."""

    def __init__(self, d: LinkDiagram, q_max: int = DEFAULT_Q_MAX) -> None:
        self.d = d
        self.q_max = q_max
        self.presentation = wirtinger_presentation(d)
        self._raw: dict[Monomial, int] = {}

    def _check(self, index: Sequence[int]) -> Monomial:
        index = tuple(index)
        if len(index) < 2:
            raise PreconditionError(f"μ̄ needs at least two indices, got {index}")
        if len(index) > self.q_max:
            raise PreconditionError(f"index {index} is longer than the truncation cap {self.q_max}")
        bad = [i for i in index if not 1 <= i <= self.presentation.m]
        if bad:
            raise PreconditionError(f"component index {bad[0]} out of range 1..{self.presentation.m}")
        return index

    def raw(self, index: Sequence[int]) -> int:
        """Magnus coefficient defining μ̄(index), before reduction (1-based index)."""
        index = tuple(index)
        if index in self._raw:
            return self._raw[index]
        p = self.presentation
        window = tuple(i - 1 for i in index[:-1])
        q = len(window)
        target = index[-1] - 1
        arcs = _arc_meridian_expressions(
            p,
            q,
            unit=lambda: MagnusSeries.one(q, window),
            meridian=lambda k: MagnusSeries.generator(k, 1, q, window),
            mul=lambda a, b: a * b,
            inv=lambda a: a.inverse(),
        )
        longitude = MagnusSeries.one(q, window)
        for over, sign in p.walks[target]:
            longitude = longitude * (arcs[over] if sign == 1 else arcs[over].inverse())
        f = p.framing[target]
        for _ in range(abs(f)):
            longitude = longitude * MagnusSeries.generator(target, -1 if f > 0 else 1, q, window)
        value = longitude.coefficient(window)
        self._raw[index] = value
        return value

    def mu(self, index: Sequence[int]) -> MilnorValue:
        index = self._check(index)
        delta = 0
        for sub in sorted(_indeterminacy_set(index)):
            delta = gcd(delta, self.raw(sub))
            if delta == 1:
                break
        value = self.raw(index)
        if len(index) == 2:
            i, j = index[0] - 1, index[1] - 1
            lk = linking_matrix(self.d)[i][j] if i != j else 0
            if value != lk:
                raise ConventionError(f"μ̄{index} = {value} but the linking number is {lk}")
        return MilnorValue(index=index, value=value % delta if delta else value, indeterminacy=delta)


def mu_bar(d: LinkDiagram, index: Sequence[int], q_max: int = DEFAULT_Q_MAX) -> MilnorValue:
    return MilnorInvariants(d, q_max).mu(index)


def _require_lk_zero_pair(d: LinkDiagram) -> None:
    if d.n_components != 2:
        raise PreconditionError(f"needs a 2-component link, got {d.n_components} components")
    lk = linking_matrix(d)[0][1]
    if lk:
        raise PreconditionError(f"needs linking number 0, got {lk}")


def sato_levine(d: LinkDiagram, milnor: MilnorInvariants | None = None) -> int:
    """β(L), by the Conway coefficient a₁ and checked against μ̄(1122)."""
    _require_lk_zero_pair(d)
    milnor = milnor or MilnorInvariants(d)
    from_conway = -conway_from_seifert(seifert_matrix(d)).a(1)
    from_milnor = -milnor.mu((1, 1, 2, 2)).value
    if from_conway != from_milnor:
        raise ConventionError(f"Sato-Levine invariant: -a1 = {from_conway} but -μ̄(1122) = {from_milnor}")
    logger.debug("β = %d", from_conway)
    return from_conway


class BetaValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Level of the first nonvanishing generalized Sato-Levine invariant")
    value: int = Field(description="βⁿ = (-1)ⁿ μ̄(pattern)")
    pattern: tuple[int, ...] = Field(description="Milnor index actually used, 11 2…2 or 1…1 22")
    indeterminacy: int = Field(ge=0, description="Indeterminacy of that μ̄; 0 in the first-nonvanishing regime")


def beta_patterns(n: int) -> tuple[Monomial, Monomial]:
    return (1, 1) + (2,) * (2 * n), (1,) * (2 * n) + (2, 2)


def beta_first_nonvanishing(
    d: LinkDiagram, n_max: int, q_max: int = DEFAULT_Q_MAX, milnor: MilnorInvariants | None = None
) -> BetaValue | None:
    """First nonzero βⁿ for n = 1..n_max, or None if all vanish."""
    _require_lk_zero_pair(d)
    if n_max > q_max // 2 - 1:
        raise PreconditionError(f"level {n_max} needs indices longer than the truncation cap {q_max}")
    milnor = milnor or MilnorInvariants(d, q_max)
    for n in range(1, n_max + 1):
        for pattern in beta_patterns(n):
            mv = milnor.mu(pattern)
            if mv.value:
                return BetaValue(n=n, value=(-1) ** n * mv.value, pattern=pattern, indeterminacy=mv.indeterminacy)
    return None


class Z5Check(BaseModel):
    model_config = ConfigDict(frozen=True)

    z5: int = Field(description="Coefficient of z^5 in the Conway polynomial")
    alpha: int = Field(description="μ̄(111122)")
    gamma: int = Field(description="μ̄(112222)")
    delta: int = Field(description="μ̄(111222)/2")

    @property
    def holds(self) -> bool:
        return self.z5 == self.alpha + self.gamma - 2 * self.delta


def z5_cross_check(d: LinkDiagram, milnor: MilnorInvariants | None = None) -> Z5Check:
    """Compare the z^5 Conway coefficient with length-6 Milnor invariants, for lk = 0 and β = 0."""
    _require_lk_zero_pair(d)
    milnor = milnor or MilnorInvariants(d)
    conway = conway_from_seifert(seifert_matrix(d))
    if conway.a(1):
        raise PreconditionError(f"needs β = 0, got a1 = {conway.a(1)}")
    alpha, gamma = milnor.raw((1, 1, 1, 1, 2, 2)), milnor.raw((1, 1, 2, 2, 2, 2))
    twice_delta = milnor.raw((1, 1, 1, 2, 2, 2))
    if twice_delta % 2:
        raise ConventionError(f"μ̄(111222) = {twice_delta} is odd")
    return Z5Check(z5=conway.z_coefficient(5), alpha=alpha, gamma=gamma, delta=twice_delta // 2)
